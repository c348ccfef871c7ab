import math
from fractions import Fraction

import numpy as np
import pytest

from config import MonteCarloCriteria
from mod1 import star_discrepancy
from random_laws import (
    BenfordExact,
    DiscreteAtoms,
    MixtureLaw,
    RandomMeasureSpec,
    Scaled,
    Uniform,
    sample,
)
from significand import DomainError, first_digits_of
from stochastic import (
    AffineMap,
    DigitFrequencies,
    DistancePoint,
    DistanceSeries,
    Multiply,
    PowerMap,
    TrialSummary,
    base_invariance_check,
    combined_sample,
    first_digit_scale_profile,
    ks_to_benford_values,
    mixture_distance_to_benford,
    mixture_ks_to_benford,
    polynomial_iterate_random_start,
    polynomial_orbit_discrepancy,
    power_sequence,
    product_sequence,
    product_with_benford,
    random_walk_distance_series,
    random_walk_paths,
    randomized_iteration,
    randomized_iteration_trials,
    scale_invariance_check,
    two_sample_distance,
    uniform_power_distance,
    uniform_product_distance,
)

F = Fraction
UNIT = Uniform(0.0, 1.0)


def test_uniform_power_distance() -> None:
    assert uniform_power_distance(1) == pytest.approx(0.26886, abs=1e-4)
    distances = [uniform_power_distance(n) for n in range(1, 21)]
    assert all(a > b for a, b in zip(distances, distances[1:]))
    # the distance decays like c / n
    assert 50 * uniform_power_distance(50) == pytest.approx(0.2878, abs=0.005)
    with pytest.raises(DomainError):
        uniform_power_distance(0)


def test_uniform_product_distance() -> None:
    assert uniform_product_distance(1) == pytest.approx(uniform_power_distance(1), abs=1e-3)
    assert uniform_product_distance(2) < uniform_product_distance(1)
    assert uniform_product_distance(10) < 0.01


def test_power_sequence() -> None:
    series = power_sequence(UNIT, 20, 10**5, seed=1)
    assert len(series) == 20
    assert series[1] == pytest.approx(uniform_power_distance(1), abs=0.01)
    assert series[20] < 0.03
    assert series[20] < series[1]
    frame = series.to_frame()
    assert list(frame.columns) == ["step", "distance", "samples", "seed"]
    assert list(frame["step"]) == list(range(1, 21))
    assert set(frame["seed"]) == {1}


def test_power_sequence_is_reproducible() -> None:
    a = power_sequence(UNIT, 5, 1000, seed=9)
    b = power_sequence(UNIT, 5, 1000, seed=9)
    assert a.distances == b.distances
    picked = power_sequence(UNIT, 5, 1000, seed=9, steps=[2, 5])
    assert picked.distances == [a[2], a[5]]


def test_power_sequence_limits() -> None:
    with pytest.raises(DomainError):
        power_sequence(UNIT, 101, 100)
    with pytest.raises(DomainError):
        power_sequence(UNIT, 5, 100, steps=[6])
    with pytest.raises(DomainError):
        power_sequence(DiscreteAtoms.constant(2.0), 5, 100)
    with pytest.raises(DomainError):
        power_sequence(UNIT, 5, 0)


def test_product_sequence() -> None:
    series = product_sequence(UNIT, 10, 10**5, seed=2)
    assert series[1] == pytest.approx(uniform_power_distance(1), abs=0.01)
    assert series[10] < 0.02


def test_products_of_uniforms_approach_benford() -> None:
    series = product_sequence(UNIT, 5, 10**6, seed=2)
    distances = [series[k] for k in range(1, 6)]
    assert all(b <= a + 0.003 for a, b in zip(distances, distances[1:]))
    for k, d in enumerate(distances, 1):
        assert d == pytest.approx(uniform_product_distance(k), abs=0.004), k
    assert series[5] < 0.01


def test_powers_of_a_uniform_decay_like_one_over_n() -> None:
    steps = [2, 5, 10, 20]
    series = power_sequence(UNIT, 20, 10**6, seed=1, steps=steps)
    scaled = [n * series[n] for n in steps]
    assert max(scaled) <= 2 * min(scaled)
    for n in steps:
        assert series[n] == pytest.approx(uniform_power_distance(n), abs=0.004), n


def test_product_with_benford() -> None:
    assert product_with_benford(Uniform(3.0, 4.0), 10**5, seed=3) < 0.01
    with pytest.raises(DomainError):
        product_with_benford(DiscreteAtoms((0.0, 1.0), (0.5, 0.5)), 100)


def test_scale_invariance_check() -> None:
    benford = scale_invariance_check(BenfordExact(), 3.0, 10**5, seed=4)
    assert benford.distance < 0.015
    assert benford.below_two == pytest.approx(math.log10(2), abs=0.01)
    assert benford.scaled_below_two == pytest.approx(math.log10(2), abs=0.01)
    uniform = scale_invariance_check(Uniform(1.0, 10.0), 2.0, 10**5, seed=4)
    assert uniform.below_two == pytest.approx(1 / 9, abs=0.01)
    assert uniform.scaled_below_two == pytest.approx(5 / 9, abs=0.01)
    assert uniform.distance > 0.3
    with pytest.raises(DomainError):
        scale_invariance_check(BenfordExact(), -1.0, 100)


def test_uniform_is_not_scale_invariant() -> None:
    distances = [scale_invariance_check(UNIT, a, 10**5, seed=4).distance for a in (2.0, 3.0, 7.0)]
    assert max(distances) > 0.1


def test_first_digit_scale_profile() -> None:
    for p in first_digit_scale_profile(BenfordExact(), 1, [1.0, 2.0, 3.0, 7.5], 10**5, seed=5):
        assert p == pytest.approx(math.log10(2), abs=0.01)
    profile = first_digit_scale_profile(Uniform(1.0, 10.0), 1, [1.0, 2.0], 10**5, seed=5)
    assert profile == pytest.approx([1 / 9, 5 / 9], abs=0.01)
    with pytest.raises(DomainError):
        first_digit_scale_profile(BenfordExact(), 0, [1.0], 100)


def test_base_invariance_check() -> None:
    assert base_invariance_check(BenfordExact(), 3, 10**5, seed=6) < 0.015
    # base invariant without being Benford
    assert base_invariance_check(MixtureLaw(0.3), 2, 10**5, seed=6) < 0.015
    with pytest.raises(DomainError):
        base_invariance_check(BenfordExact(), 1, 100)


def test_uniform_is_not_base_invariant() -> None:
    assert base_invariance_check(UNIT, 2, 10**5, seed=6) > 0.05


def test_mixture_distance() -> None:
    assert mixture_distance_to_benford(0.3) == 0.3
    assert mixture_ks_to_benford(0.3, 10**5, seed=7) == pytest.approx(0.3, abs=0.01)
    with pytest.raises(DomainError):
        mixture_distance_to_benford(-0.1)


def test_distances() -> None:
    values = sample(BenfordExact(), 10**5, seed=8).values
    assert ks_to_benford_values(values) < 0.01
    logs = np.log10(values)
    assert two_sample_distance(logs, logs) == 0.0


def test_map_invariants() -> None:
    with pytest.raises(DomainError):
        Multiply(F(0))
    with pytest.raises(DomainError):
        PowerMap(F(-1))
    with pytest.raises(DomainError):
        AffineMap(F(0), F(1))


def test_randomized_iteration_is_benford() -> None:
    for seed in range(10):
        s = randomized_iteration(Multiply(F(2)), Multiply(F(3)), 0.5, 1, 10**5, seed=seed)
        assert len(s) == 10**5
        assert star_discrepancy(s).star_discrepancy < 0.02, seed


def test_randomized_iteration_with_one_map() -> None:
    s = randomized_iteration(Multiply(F(2)), Multiply(F(2)), 0.5, 1, 100, seed=11)
    expected = [(j * math.log10(2)) % 1 for j in range(1, 101)]
    assert s.values == pytest.approx(expected, abs=1e-12)
    tens = randomized_iteration(Multiply(F(10)), Multiply(F(2)), 1.0, 1, 100)
    assert star_discrepancy(tens).star_discrepancy == 1.0
    squares = randomized_iteration(PowerMap(F(2)), Multiply(F(2)), 1.0, 10, 50)
    assert not squares.values.any()


def test_randomized_affine_map() -> None:
    s = randomized_iteration(AffineMap(F(2), F(1)), Multiply(F(2)), 1.0, 1, 5)
    expected = [math.log10(v) % 1 for v in (3, 7, 15, 31, 63)]
    assert s.values == pytest.approx(expected, abs=1e-12)


def test_affine_map_with_a_dominant_offset() -> None:
    # a x = 10**-299 against b = 10**20
    tiny = randomized_iteration(AffineMap(F(1, 10**299), F(10**20)), Multiply(F(2)), 1.0, 1, 1)
    assert tiny.values[0] == 0.0
    s = randomized_iteration(AffineMap(F(1), F(10**6)), Multiply(F(2)), 1.0, 1, 1)
    assert s.values[0] == pytest.approx(math.log10(1000001) - 6, abs=1e-12)
    far = randomized_iteration(AffineMap(F(1, 10**5000), F(3)), Multiply(F(2)), 1.0, 1, 1)
    assert far.values[0] == pytest.approx(math.log10(3), abs=1e-12)


def test_randomized_iteration_limits() -> None:
    with pytest.raises(DomainError):
        randomized_iteration(Multiply(F(2)), Multiply(F(3)), 1.5, 1, 10)
    with pytest.raises(DomainError):
        randomized_iteration(Multiply(F(2)), Multiply(F(3)), 0.5, 0, 10)
    with pytest.raises(DomainError):
        randomized_iteration(Multiply(F(2)), Multiply(F(3)), 0.5, 1, 0)


def test_randomized_iteration_trials() -> None:
    summary = randomized_iteration_trials(
        PowerMap(F(1, 2)), PowerMap(F(3)), 0.5, Uniform(2.0, 10.0), 200, trials=4, seed=12
    )
    assert summary.trials == 4
    assert all(0 < d <= 1 for d in summary.discrepancies)
    assert 0 <= summary.fraction <= 1
    again = randomized_iteration_trials(
        PowerMap(F(1, 2)), PowerMap(F(3)), 0.5, Uniform(2.0, 10.0), 200, trials=4, seed=12
    )
    assert again == summary


def test_square_root_and_cube_inside_the_benford_region() -> None:
    # p1 = 0.6 sits just below the 61.3% boundary; at n = 10**4 about three
    # paths in four pass, short of the 90% level
    summary = randomized_iteration_trials(
        PowerMap(F(1, 2)), PowerMap(F(3)), 0.6, Uniform(2.0, 10.0), 10**4, trials=100, seed=42
    )
    assert summary.trials == 100
    assert summary.fraction == pytest.approx(0.76, abs=0.05)
    assert not summary.holds


def test_trials_do_not_depend_on_workers(monkeypatch: pytest.MonkeyPatch) -> None:
    args = (Multiply(F(2)), Multiply(F(3)), 0.5, Uniform(1.0, 10.0), 500)
    serial = randomized_iteration_trials(*args, trials=3, seed=13)
    monkeypatch.setenv("BENFORD_THREADS", "2")
    parallel = randomized_iteration_trials(*args, trials=3, seed=13)
    assert serial == parallel


def test_trial_summary() -> None:
    criteria = MonteCarloCriteria(0.05, 0.95)
    summary = TrialSummary((0.01, 0.02, 0.1), criteria)
    assert summary.fraction == pytest.approx(2 / 3)
    assert not summary.holds
    assert TrialSummary((0.01,) * 20, criteria).holds


def test_polynomial_orbit_discrepancy() -> None:
    assert polynomial_orbit_discrepancy([0, 0, 1], 10, 50) == 1.0
    assert 0 < polynomial_orbit_discrepancy([1, 0, 1], 1, 100) < 1


def test_polynomial_iterate_random_start() -> None:
    summary = polynomial_iterate_random_start(
        [0, 0, 1], Uniform(2.0, 3.0), 200, trials=4, seed=14, region_start=1.0
    )
    assert summary.trials == 4
    assert all(0 < d < 1 for d in summary.discrepancies)
    with pytest.raises(DomainError):
        polynomial_iterate_random_start([0, 0, 1], Uniform(0.5, 2.0), 50, 50, region_start=1.0)
    with pytest.raises(DomainError):
        polynomial_iterate_random_start([0, 0, 1], Uniform(0.1, 0.9), 50, 4)
    with pytest.raises(DomainError):
        polynomial_iterate_random_start([0, 0, 1], Uniform(2.0, 3.0), 50, 0)


def test_square_plus_one_from_random_starts() -> None:
    summary = polynomial_iterate_random_start([1, 0, 1], UNIT, 10**4, trials=50, seed=42)
    assert summary.trials == 50
    assert summary.fraction >= 0.95
    assert summary.holds


def test_combined_sample() -> None:
    m = RandomMeasureSpec(
        ((0.5, Scaled(BenfordExact(), 2.0)), (0.5, Scaled(BenfordExact(), 3.0)))
    )
    batch = combined_sample(m, 1000, 100, seed=15)
    assert len(batch) == 100 * 1000
    assert len(batch.components) == len(batch)
    assert set(batch.components) <= {0, 1}
    assert batch == combined_sample(m, 1000, 100, seed=15)
    assert ks_to_benford_values(batch.values) < 0.02
    single = RandomMeasureSpec(((1.0, UNIT),))
    assert not combined_sample(single, 10, 5).components.any()
    with pytest.raises(DomainError):
        combined_sample(RandomMeasureSpec(((1.0, DiscreteAtoms.constant(2.0)),)), 10, 5)
    with pytest.raises(DomainError):
        combined_sample(m, 0, 5)


def test_combined_sample_of_biased_laws() -> None:
    m = RandomMeasureSpec(((0.5, Uniform(2.0, 3.0)), (0.5, Uniform(4.0, 5.0))))
    batch = combined_sample(m, 100, 100, seed=15)
    digits = first_digits_of(batch.values)
    assert not np.any(digits == 1)
    assert set(digits) <= {2, 4}
    assert ks_to_benford_values(batch.values) > 0.2


def test_random_walk_paths() -> None:
    table = random_walk_paths(UNIT, 1000, 10**4, seed=16)
    assert table.total == 10**4
    assert table.frequency(1) < 0.01
    assert table.frequency(4) + table.frequency(5) > 0.99


def test_random_walk_distance_series() -> None:
    series = random_walk_distance_series(UNIT, 100, 10**4, seed=17, checkpoints=[1, 10, 100])
    assert [p.step for p in series.points] == [1, 10, 100]
    assert series[1] == pytest.approx(uniform_power_distance(1), abs=0.03)
    assert series[100] > 0.3
    default = random_walk_distance_series(UNIT, 100, 100, seed=17)
    assert default.points[0].step == 1
    assert default.points[-1].step == 100


def test_digit_frequencies() -> None:
    table = DigitFrequencies((1,) * 9)
    assert table.frequency(1) == pytest.approx(1 / 9)
    assert table.deviation_from_benford(1) == pytest.approx(1 / 9 - math.log10(2))
    assert DigitFrequencies((0,) * 9).frequency(1) == 0.0


def test_distance_series() -> None:
    series = DistanceSeries([DistancePoint(2, 0.5, 10, 1)])
    assert series[2] == 0.5
    with pytest.raises(KeyError):
        series[3]
