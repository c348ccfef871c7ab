import json

import numpy as np
import pytest

from conformance import (
    BENFORD_FIRST_DIGIT,
    AnalyzeOptions,
    EmptySample,
    SampleTooSmall,
    analyze,
    chi_square_from_counts,
    empirical_from,
    first_digit_counts,
    first_two_digit_counts,
    ks_to_benford,
    mad_from_counts,
    merge_counts,
)
from random_laws import BenfordExact, Uniform, sample
from significand import DomainError


def benford_values(n: int = 10**4, seed: int = 0) -> np.ndarray:
    return sample(BenfordExact(), n, seed).values


def test_empirical_from() -> None:
    with pytest.warns(UserWarning, match="2 zero values"):
        e = empirical_from([0, 2, -30, 0])
    assert e.n_zero == 2
    assert e.n_negative_used == 1
    assert e.n_used == 2
    assert list(e.significands) == [2.0, 3.0]


def test_empirical_from_rejects() -> None:
    with pytest.raises(EmptySample):
        empirical_from([0, 0])
    with pytest.raises(DomainError):
        empirical_from([1.0, float("nan")])


def test_ks_to_benford() -> None:
    assert ks_to_benford(empirical_from([1.0])) == 1.0
    assert ks_to_benford(empirical_from([10**0.5])) == pytest.approx(0.5)
    assert ks_to_benford(empirical_from(benford_values())) < 0.03


def test_digit_counts() -> None:
    e = empirical_from([1, 2, 2, 9.99, 123])
    assert list(first_digit_counts(e)) == [2, 2, 0, 0, 0, 0, 0, 0, 1]
    pairs = first_two_digit_counts(empirical_from([1.0, 3.14, 99]))
    assert len(pairs) == 90
    assert pairs[0] == 1
    assert pairs[31 - 10] == 1
    assert pairs[99 - 10] == 1
    assert pairs.sum() == 3


def test_chi_square() -> None:
    exact = chi_square_from_counts(1000 * BENFORD_FIRST_DIGIT)
    assert exact.statistic == pytest.approx(0.0, abs=1e-9)
    assert exact.p_value == pytest.approx(1.0)
    flat = chi_square_from_counts([100] * 9)
    assert flat.statistic > 300
    assert flat.p_value < 1e-6
    with pytest.raises(SampleTooSmall):
        chi_square_from_counts([5] * 8 + [4])


def test_mad() -> None:
    assert mad_from_counts(1000 * BENFORD_FIRST_DIGIT) == pytest.approx(0.0, abs=1e-12)
    assert mad_from_counts([1] * 9) == pytest.approx(
        float(np.mean(np.abs(1 / 9 - BENFORD_FIRST_DIGIT)))
    )
    with pytest.raises(EmptySample):
        mad_from_counts([0] * 9)


def test_analyze_benford_sample() -> None:
    values = benford_values()
    report = analyze(values)
    assert report.n_used == 10**4
    assert sum(report.first_digit_counts) == report.n_used
    assert sum(report.expected_counts) == pytest.approx(report.n_used)
    assert report.ks_distance < 0.03
    assert report.chi_square_pvalue > 1e-4
    assert report.mad < 0.01
    assert report.digit_pair_counts is None
    assert report.digit_pair_table() is None


def test_analyze_uniform_sample() -> None:
    report = analyze(sample(Uniform(1.0, 10.0), 10**4, seed=1).values)
    assert report.ks_distance > 0.2
    assert report.chi_square_pvalue < 1e-6


def test_analyze_is_scale_invariant() -> None:
    values = benford_values()
    report = analyze(values)
    scaled = analyze(values * 1000.0)
    assert scaled.first_digit_counts == report.first_digit_counts
    assert scaled.ks_distance == pytest.approx(report.ks_distance, abs=1e-9)


def first_digit_one(values: np.ndarray) -> float:
    report = analyze(values)
    return report.first_digit_counts[0] / report.n_used


def test_rescaling_moves_digits_of_uniform_data_only() -> None:
    uniform = sample(Uniform(0.0, 1.0), 10**4, seed=1).values
    benford = benford_values()
    factors = (2.0, np.pi, 10.0)
    shifts = [abs(first_digit_one(c * uniform) - first_digit_one(uniform)) for c in factors]
    assert max(shifts) > 0.1
    for c in factors:
        assert analyze(c * uniform).ks_distance > 0.2
        assert abs(first_digit_one(c * benford) - first_digit_one(benford)) < 0.02
        assert abs(analyze(c * benford).ks_distance - analyze(benford).ks_distance) < 0.02


def test_analyze_consecutive_integers() -> None:
    report = analyze(np.arange(1, 10**5 + 1))
    assert report.n_used == 10**5
    assert report.ks_distance > 0.1


def test_analyze_small_sample() -> None:
    with pytest.raises(SampleTooSmall):
        analyze([1.0, 2.0, 3.0])


def test_analyze_with_zeros() -> None:
    values = np.concatenate([benford_values(100), np.zeros(5)])
    with pytest.warns(UserWarning):
        report = analyze(values)
    assert report.n_zero == 5
    assert report.n_used == 100


def test_report_outputs() -> None:
    report = analyze(benford_values(), AnalyzeOptions(digit_pairs=True))
    table = report.digit_table()
    assert list(table.columns) == ["digit", "observed", "expected", "observed_freq", "benford_freq"]
    assert list(table["digit"]) == list(range(1, 10))
    pairs = report.digit_pair_table()
    assert pairs is not None
    assert len(pairs) == 90
    assert pairs["observed"].sum() == report.n_used
    data = json.loads(report.to_json())
    assert data == report.as_dict()
    assert data["n_used"] == 10**4
    assert len(data["digit_pair_counts"]) == 90
    text = report.to_text()
    assert "KS distance to Benford" in text
    assert report.verdict_note in text


def test_verdict_note_ignores_magnitude() -> None:
    note = analyze(benford_values()).verdict_note
    assert "magnitude" not in note
    assert "range" not in note


def test_merge_counts() -> None:
    values = benford_values()
    a, b = values[:3000], values[3000:]
    total = merge_counts(
        first_digit_counts(empirical_from(a)), first_digit_counts(empirical_from(b))
    )
    assert list(total) == list(first_digit_counts(empirical_from(values)))


def test_empirical_from_reduced_significands() -> None:
    with pytest.warns(UserWarning, match="1 zero values"):
        e = empirical_from([3.0, -7.5, 0.0, 1.0], reduced=True)
    assert list(e.significands) == [1.0, 3.0, 7.5]
    assert e.n_zero == 1
    assert e.n_negative_used == 1
    with pytest.raises(DomainError):
        empirical_from([30.0], reduced=True)
    values = benford_values(1000)
    reduced = analyze(values / 10.0 ** np.floor(np.log10(values)), reduced=True)
    assert reduced.first_digit_counts == analyze(values).first_digit_counts
