"""Benford conformance of a finite dataset.

Zeros are counted and left out of every statistic; negative values are
folded to |x|. The report carries the KS distance of the significands to
Benford's CDF, a first-digit chi-square test and the mean absolute
deviation of the first-digit frequencies.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Any, Iterable
from warnings import warn

import numpy as np
import numpy.typing as npt
import pandas as pd  # type: ignore
from scipy import stats  # type: ignore

from benford_law import first_digit_pmf, first_two_digits_pmf
from mod1 import Mod1Sequence, star_discrepancy
from significand import DomainError, significands_of

CHI_SQUARE_MIN_SAMPLES = 45
CHI_SQUARE_DOF = 8
SIGNIFICANT_DIGITS = 12

BENFORD_FIRST_DIGIT = np.array([first_digit_pmf(d) for d in range(1, 10)])


class EmptySample(DomainError):
    pass


class SampleTooSmall(DomainError):
    pass


@dataclass
class EmpiricalSignificands:
    significands: npt.NDArray[np.float64]
    n_zero: int = 0
    n_negative_used: int = 0

    def __post_init__(self) -> None:
        self.significands = np.sort(np.asarray(self.significands, dtype=np.float64))
        if len(self.significands) and (
            self.significands[0] < 1.0 or self.significands[-1] >= 10.0
        ):
            raise DomainError("significands must lie in [1, 10)")

    @property
    def n_used(self) -> int:
        return len(self.significands)

    @property
    def logs(self) -> npt.NDArray[np.float64]:
        logs = np.log10(self.significands)
        return np.minimum(logs, np.nextafter(1.0, 0.0))


def empirical_from(
    values: Iterable[float] | npt.ArrayLike, reduced: bool = False
) -> EmpiricalSignificands:
    """Nonzero |values| reduced to significands; zeros are counted apart.

    With `reduced`, the values already are sign * S(x) (0 for zeros), as
    produced by exact ingestion of numbers beyond the float range.
    """
    x = np.asarray(values, dtype=np.float64).ravel()
    if not np.all(np.isfinite(x)):
        raise DomainError("non-finite value in sample")
    nonzero = x != 0
    n_zero = int(len(x) - np.count_nonzero(nonzero))
    if not np.any(nonzero):
        raise EmptySample(f"no nonzero value among {len(x)}")
    if n_zero:
        warn(f"{n_zero} zero values excluded from the significands")
    significands = np.abs(x[nonzero]) if reduced else significands_of(x[nonzero])
    return EmpiricalSignificands(
        significands,
        n_zero=n_zero,
        n_negative_used=int(np.count_nonzero(x < 0)),
    )


def ks_to_benford(e: EmpiricalSignificands) -> float:
    """sup_t |F_N(t) - log10 t|, from both one-sided limits at every jump."""
    if e.n_used == 0:
        raise EmptySample("empty sample")
    return star_discrepancy(Mod1Sequence(e.logs)).star_discrepancy


def first_digit_counts(e: EmpiricalSignificands) -> npt.NDArray[np.int64]:
    digits = np.floor(e.significands).astype(np.int64)
    return np.bincount(digits, minlength=10)[1:10]


def first_two_digit_counts(e: EmpiricalSignificands) -> npt.NDArray[np.int64]:
    """Counts of 10 D1 + D2 for 10..99."""
    pairs = np.floor(e.significands * 10.0).astype(np.int64)
    pairs = np.clip(pairs, 10, 99)
    return np.bincount(pairs, minlength=100)[10:100]


@dataclass(frozen=True)
class ChiSquare:
    statistic: float
    p_value: float


def chi_square_from_counts(counts: npt.ArrayLike) -> ChiSquare:
    observed = np.asarray(counts, dtype=np.float64)
    n = float(observed.sum())
    if n < CHI_SQUARE_MIN_SAMPLES:
        raise SampleTooSmall(
            f"chi-square needs at least {CHI_SQUARE_MIN_SAMPLES} values (got {n:g});"
            " an exact multinomial test would be needed"
        )
    expected = n * BENFORD_FIRST_DIGIT
    statistic = float(np.sum((observed - expected) ** 2 / expected))
    return ChiSquare(statistic, float(stats.chi2.sf(statistic, CHI_SQUARE_DOF)))


def chi_square_first_digit(e: EmpiricalSignificands) -> ChiSquare:
    return chi_square_from_counts(first_digit_counts(e))


def mad_from_counts(counts: npt.ArrayLike) -> float:
    observed = np.asarray(counts, dtype=np.float64)
    n = observed.sum()
    if n <= 0:
        raise EmptySample("no counts")
    return float(np.mean(np.abs(observed / n - BENFORD_FIRST_DIGIT)))


def mad_first_digit(e: EmpiricalSignificands) -> float:
    """Mean absolute deviation of first-digit frequencies; descriptive only."""
    return mad_from_counts(first_digit_counts(e))


@dataclass(frozen=True)
class AnalyzeOptions:
    digit_pairs: bool = False


def _round(x: float) -> float:
    return float(f"{x:.{SIGNIFICANT_DIGITS}g}")


@dataclass
class ConformanceReport:
    n_used: int
    n_zero: int
    n_negative_used: int
    first_digit_counts: tuple[int, ...]
    expected_counts: tuple[float, ...]
    ks_distance: float
    chi_square: float
    chi_square_pvalue: float
    mad: float
    digit_pair_counts: tuple[int, ...] | None = None
    verdict_note: str = field(default="")

    def digit_table(self) -> pd.DataFrame:
        observed = np.asarray(self.first_digit_counts, dtype=np.float64)
        return pd.DataFrame(
            {
                "digit": range(1, 10),
                "observed": self.first_digit_counts,
                "expected": self.expected_counts,
                "observed_freq": observed / self.n_used,
                "benford_freq": BENFORD_FIRST_DIGIT,
            }
        )

    def digit_pair_table(self) -> pd.DataFrame | None:
        if self.digit_pair_counts is None:
            return None
        return pd.DataFrame(
            {
                "digits": range(10, 100),
                "observed": self.digit_pair_counts,
                "expected": [self.n_used * first_two_digits_pmf(n) for n in range(10, 100)],
            }
        )

    def as_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "n_used": self.n_used,
            "n_zero": self.n_zero,
            "n_negative_used": self.n_negative_used,
            "first_digit_counts": list(self.first_digit_counts),
            "expected_counts": [_round(x) for x in self.expected_counts],
            "ks_distance": _round(self.ks_distance),
            "chi_square": _round(self.chi_square),
            "chi_square_pvalue": _round(self.chi_square_pvalue),
            "mad": _round(self.mad),
        }
        if self.digit_pair_counts is not None:
            data["digit_pair_counts"] = list(self.digit_pair_counts)
        data["verdict_note"] = self.verdict_note
        return data

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), separators=(",", ":"))

    def to_text(self) -> str:
        lines = [
            f"values used: {self.n_used} (zeros excluded: {self.n_zero},"
            f" negatives folded: {self.n_negative_used})",
            f"KS distance to Benford: {self.ks_distance:.6f}",
            f"chi-square (8 dof): {self.chi_square:.6f}, p-value {self.chi_square_pvalue:.6g}",
            f"MAD: {self.mad:.6f}",
            "",
            self.digit_table().to_string(index=False, float_format=lambda x: f"{x:.6f}"),
        ]
        pairs = self.digit_pair_table()
        if pairs is not None:
            lines += ["", pairs.to_string(index=False, float_format=lambda x: f"{x:.3f}")]
        lines += ["", self.verdict_note]
        return "\n".join(lines)


def _verdict_note(ks: float, p_value: float, n: int) -> str:
    # judged from the digit distribution alone, never from the range of the data
    return (
        f"Over {n} nonzero values the significands lie at KS distance {ks:.4g}"
        f" from Benford's law (first-digit chi-square p-value {p_value:.3g})."
        " The KS distance is descriptive; no significance level is attached to it."
    )


def analyze(
    values: Iterable[float] | npt.ArrayLike,
    options: AnalyzeOptions = AnalyzeOptions(),
    reduced: bool = False,
) -> ConformanceReport:
    e = empirical_from(values, reduced)
    counts = first_digit_counts(e)
    chi = chi_square_from_counts(counts)
    ks = ks_to_benford(e)
    pairs = first_two_digit_counts(e) if options.digit_pairs else None
    return ConformanceReport(
        n_used=e.n_used,
        n_zero=e.n_zero,
        n_negative_used=e.n_negative_used,
        first_digit_counts=tuple(int(c) for c in counts),
        expected_counts=tuple(float(x) for x in e.n_used * BENFORD_FIRST_DIGIT),
        ks_distance=ks,
        chi_square=chi.statistic,
        chi_square_pvalue=chi.p_value,
        mad=mad_from_counts(counts),
        digit_pair_counts=None if pairs is None else tuple(int(c) for c in pairs),
        verdict_note=_verdict_note(ks, chi.p_value, e.n_used),
    )


def merge_counts(*partitions: npt.ArrayLike) -> npt.NDArray[np.int64]:
    """First-digit counts of partitions are additive."""
    total = np.zeros(9, dtype=np.int64)
    for counts in partitions:
        total += np.asarray(counts, dtype=np.int64)
    return total

