"""The Benford distribution and distances of named families to it.

Benford's law is P(S(X) <= t) = log10 t for t in [1, 10). Everything here is
closed form or a finite sum over decades; no sampling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from scipy import special  # type: ignore

from significand import DigitVector, DomainError, significand

LN10 = math.log(10)

# decades whose mass is below this are dropped from the normal/exponential sums
_NEGLIGIBLE_MASS = 1e-13


def _check_t(t: float) -> None:
    if not 1.0 <= t < 10.0:
        raise DomainError(f"t must lie in [1, 10): {t}")


def _check_digit(d: int) -> None:
    if not 1 <= d <= 9:
        raise DomainError(f"first digit must lie in 1..9: {d}")


def benford_cdf(t: float) -> float:
    _check_t(t)
    return math.log10(t)


def first_digit_pmf(d: int) -> float:
    """P(D1 = d) = log10(1 + 1/d)."""
    _check_digit(d)
    return math.log1p(1 / d) / LN10


@dataclass(frozen=True)
class DigitTupleQuery:
    digits: DigitVector

    def __post_init__(self) -> None:
        if self.digits.is_zero:
            raise DomainError("leading digit must lie in 1..9")

    @classmethod
    def of(cls, *digits: int) -> DigitTupleQuery:
        return cls(DigitVector(tuple(digits)))


def digit_tuple_prob(q: DigitTupleQuery) -> float:
    """P(D1 = d1, ..., Dm = dm) = log10(1 + 1/(10**(m-1) d1 + ... + dm))."""
    return math.log1p(1 / q.digits.as_integer) / LN10


def second_digit_pmf(d: int) -> float:
    """P(D2 = d), the marginal of the two-digit law over d1."""
    if not 0 <= d <= 9:
        raise DomainError(f"second digit must lie in 0..9: {d}")
    return math.fsum(math.log1p(1 / (10 * d1 + d)) / LN10 for d1 in range(1, 10))


def first_two_digits_pmf(n: int) -> float:
    """P(10 D1 + D2 = n) for n in 10..99."""
    if not 10 <= n <= 99:
        raise DomainError(f"two-digit prefix must lie in 10..99: {n}")
    return digit_tuple_prob(DigitTupleQuery.of(n // 10, n % 10))


@dataclass(frozen=True)
class UniformFamily:
    """Uniform law on [a, b]."""

    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise DomainError(f"non-finite endpoint in [{self.a}, {self.b}]")
        if not self.a < self.b:
            raise DomainError(f"need a < b: [{self.a}, {self.b}]")

    def scaled(self, factor: float) -> UniformFamily:
        if factor > 0:
            return UniformFamily(self.a * factor, self.b * factor)
        return UniformFamily(self.b * factor, self.a * factor)


def _significand_measure(x: float, t: float) -> float:
    """Lebesgue measure of {y in [0, x] : S(y) <= t}, x >= 0.

    Decades below the one holding x contribute (t - 1) 10**j each, a
    geometric series; the decade of x contributes 10**K (min(S(x), t) - 1).
    """
    if x <= 0:
        return 0.0
    decomposition = significand(x)
    scale = 10.0**decomposition.exponent
    return scale * ((t - 1.0) / 9.0 + min(decomposition.significand, t) - 1.0)


def uniform_significand_cdf(f: UniformFamily, t: float) -> float:
    """P(S(U) <= t) for U uniform on [a, b], exactly up to rounding."""
    _check_t(t)
    positive = _significand_measure(max(f.b, 0.0), t) - _significand_measure(
        max(f.a, 0.0), t
    )
    negative = _significand_measure(-min(f.a, 0.0), t) - _significand_measure(
        -min(f.b, 0.0), t
    )
    return min(1.0, max(0.0, (positive + negative) / (f.b - f.a)))


def _uniform_breakpoints(f: UniformFamily) -> list[float]:
    points = {1.0, 10.0}
    for endpoint in (f.a, f.b):
        if endpoint != 0:
            points.add(significand(endpoint).significand)
    return sorted(points)


def uniform_benford_distance(f: UniformFamily) -> float:
    """sup over t in (1, 10) of |P(S(U) <= t) - log10 t|.

    P(S(U) <= t) is piecewise linear in t, with kinks only at the
    significands of the endpoints. On a piece with slope c the difference
    c t + const - log10 t is convex, so its maximum sits at the piece ends
    and its minimum at the stationary point t = 1 / (c ln 10).
    """

    def cdf(t: float) -> float:
        return 1.0 if t >= 10.0 else uniform_significand_cdf(f, t)

    breakpoints = _uniform_breakpoints(f)
    values = [cdf(t) for t in breakpoints]
    best = 0.0
    for t, value in zip(breakpoints, values):
        best = max(best, abs(value - math.log10(t)))
    for (t0, f0), (t1, f1) in zip(
        zip(breakpoints, values), zip(breakpoints[1:], values[1:])
    ):
        slope = (f1 - f0) / (t1 - t0)
        if slope <= 0:
            continue
        stationary = 1.0 / (slope * LN10)
        if t0 < stationary < t1:
            value = f0 + slope * (stationary - t0)
            best = max(best, abs(value - math.log10(stationary)))
    return best


@dataclass(frozen=True)
class GridMinimum:
    distance: float
    family: UniformFamily


def uniform_distance_grid_minimum(
    grid: int = 200, sign_mixed: bool = False
) -> GridMinimum:
    """Smallest uniform_benford_distance over a grid of families.

    Distances are invariant under scaling by 10 and under U -> -U, so the
    families are parametrized by b = 10**beta with beta in [0, 1) and by
    a = r b (nonnegative) or a = -r b (sign-mixed), r on a grid in [0, 1).
    """
    if grid < 1:
        raise DomainError(f"grid must be >= 1: {grid}")
    best: GridMinimum | None = None
    for i in range(grid):
        b = 10.0 ** (i / grid)
        for j in range(grid):
            r = j / grid if not sign_mixed else (j + 1) / grid
            family = UniformFamily(-r * b if sign_mixed else r * b, b)
            distance = uniform_benford_distance(family)
            if best is None or distance < best.distance:
                best = GridMinimum(distance, family)
    assert best is not None
    return best


def _normal_cdf(x: float, mean: float, sd: float) -> float:
    return float(0.5 * special.erfc(-(x - mean) / (sd * math.sqrt(2))))


def _normal_sf(x: float, mean: float, sd: float) -> float:
    return float(0.5 * special.erfc((x - mean) / (sd * math.sqrt(2))))


def _normal_interval(lo: float, hi: float, mean: float, sd: float) -> float:
    """P(lo <= X < hi), taking the tail that avoids cancellation."""
    if lo >= mean:
        return _normal_sf(lo, mean, sd) - _normal_sf(hi, mean, sd)
    return _normal_cdf(hi, mean, sd) - _normal_cdf(lo, mean, sd)


def _normal_decades(mean: float, sd: float) -> range:
    if not (math.isfinite(mean) and math.isfinite(sd)) or sd <= 0:
        raise DomainError(f"need finite mean and sd > 0: N({mean}, {sd})")
    reach = abs(mean) + 12 * sd
    k_max = math.floor(math.log10(reach)) + 1
    inner = abs(mean) - 12 * sd
    if inner > 0:
        k_min = math.floor(math.log10(inner)) - 1
    else:
        # mass of (-10**k, 10**k) is at most 2 * 10**k * density maximum
        k_min = math.floor(math.log10(_NEGLIGIBLE_MASS * sd * math.sqrt(2 * math.pi) / 2))
    return range(k_min, k_max + 1)


def _normal_band_mass(mean: float, sd: float, lo: float, hi: float) -> float:
    """P(|X| in [lo 10**k, hi 10**k) for some k), 1 <= lo < hi <= 10."""
    total = []
    for k in _normal_decades(mean, sd):
        scale = 10.0**k
        total.append(_normal_interval(lo * scale, hi * scale, mean, sd))
        total.append(_normal_interval(-hi * scale, -lo * scale, mean, sd))
    return math.fsum(total)


def normal_digit_prob(mean: float, sd: float, d: int) -> float:
    """P(D1(X) = d) for X ~ N(mean, sd**2)."""
    _check_digit(d)
    return _normal_band_mass(mean, sd, float(d), float(d + 1))


def normal_significand_cdf(mean: float, sd: float, t: float) -> float:
    _check_t(t)
    return _normal_band_mass(mean, sd, 1.0, t)


def _exponential_decades(rate: float) -> range:
    if not math.isfinite(rate) or rate <= 0:
        raise DomainError(f"rate must be positive: {rate}")
    # below: the remaining decades hold at most ~rate * 10**k_min mass
    k_min = math.floor(math.log10(_NEGLIGIBLE_MASS / rate))
    # above: exp(-rate x) underflows
    k_max = math.ceil(math.log10(800.0 / rate))
    return range(k_min, k_max + 1)


def _exponential_band_mass(
    rate: float, lo: npt.NDArray[np.float64], hi: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    total = np.zeros(np.broadcast(lo, hi).shape)
    for k in _exponential_decades(rate):
        scale = 10.0**k
        # exp(-r lo) - exp(-r hi) = -exp(-r lo) * expm1(-r (hi - lo))
        total += -np.exp(-rate * lo * scale) * np.expm1(-rate * (hi - lo) * scale)
    return total


def exponential_significand_cdf(rate: float, t: float) -> float:
    _check_t(t)
    return float(_exponential_band_mass(rate, np.array(1.0), np.array(t)))


def exponential_digit_prob(rate: float, d: int) -> float:
    _check_digit(d)
    return float(_exponential_band_mass(rate, np.array(float(d)), np.array(d + 1.0)))


def exponential_benford_distance(rate: float, resolution: int = 4000) -> float:
    """Numeric sup distance of an exponential law to Benford.

    Evaluated on a grid that is uniform in log10 t; not a sharp constant.
    """
    s = np.linspace(0.0, 1.0, resolution + 1)[:-1]
    t = 10.0**s
    cdf = _exponential_band_mass(rate, np.ones_like(t), t)
    return float(np.max(np.abs(cdf - s)))
