"""Fractional parts, star discrepancy and equidistribution modulo one.

A sequence is Benford exactly when <log10 |x_n|> is uniformly distributed
mod 1, so every verdict in this toolkit goes through `star_discrepancy`.

Long rotations and log-domain recurrences are accumulated in binary fixed
point: a value is an integer `raw` standing for raw / 2**bits. With
bits = 128 (the default) the n-th multiple of an angle is exact to
n * 2**-128, far below float resolution for any n we accept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath  # type: ignore
import numpy as np
import numpy.typing as npt

from significand import DomainError, log_significands_of

FIXED_POINT_BITS = 128
FLOAT_MANTISSA_BITS = 53

# extra working bits for mpmath on top of the requested fixed-point precision
_GUARD_BITS = 64


def fixed_to_float(raw: int, bits: int = FIXED_POINT_BITS) -> float:
    """Fractional part of raw / 2**bits as a float in [0, 1)."""
    frac = raw & ((1 << bits) - 1)
    if bits > FLOAT_MANTISSA_BITS:
        return (frac >> (bits - FLOAT_MANTISSA_BITS)) * 2.0**-FLOAT_MANTISSA_BITS
    return frac * 2.0**-bits


def fixed_point_from_float(x: float, bits: int = FIXED_POINT_BITS) -> int:
    """floor(x * 2**bits), exact since floats are dyadic."""
    if not math.isfinite(x):
        raise DomainError(f"non-finite input: {x}")
    return math.floor(Fraction(x) * (1 << bits))


def fixed_point_from_mpf(x: mpmath.mpf, bits: int = FIXED_POINT_BITS) -> int:
    with mpmath.workprec(bits + _GUARD_BITS + max(0, int(abs(x)).bit_length())):
        return int(mpmath.floor(x * mpmath.mpf(2) ** bits))


def power_of_ten_exponent(value: Fraction) -> int | None:
    """k if value == 10**k exactly, else None."""
    num, den = value.numerator, value.denominator
    if num == 1:
        k = len(str(den)) - 1 if den.bit_length() < 4000 else None
        if k is not None and den == 10**k:
            return -k
        return None
    if den != 1:
        return None
    if num.bit_length() < 4000:
        k = len(str(num)) - 1
        return k if num == 10**k else None
    # a power of ten ends in as many zero bits as its exponent
    k = (num & -num).bit_length() - 1
    return k if num == 10**k else None


def _log10_int(n: int, bits: int) -> mpmath.mpf:
    # keep the top bits only; the dropped tail changes log10 by < 2**-(bits+guard)
    keep = bits + 2 * _GUARD_BITS
    shift = max(0, n.bit_length() - keep)
    top = n >> shift
    return mpmath.log10(mpmath.mpf(top)) + shift * mpmath.log10(2)


def fixed_point_log10(value: Fraction | int, bits: int = FIXED_POINT_BITS) -> int:
    """floor(log10(value) * 2**bits) for value > 0; exact for powers of ten."""
    value = Fraction(value)
    if value <= 0:
        raise DomainError(f"log10 needs a positive value: {value}")
    k = power_of_ten_exponent(value)
    if k is not None:
        return k << bits
    with mpmath.workprec(bits + 2 * _GUARD_BITS):
        log = _log10_int(value.numerator, bits) - _log10_int(value.denominator, bits)
        return fixed_point_from_mpf(log, bits)


def fixed_point_log10_mpf(x: mpmath.mpf, bits: int = FIXED_POINT_BITS) -> int:
    """Same for an mpmath number; integer powers of ten come out exact."""
    x = abs(x)
    if x == 0:
        raise DomainError("log10 needs a nonzero value")
    with mpmath.workprec(bits + 2 * _GUARD_BITS):
        log = mpmath.log10(x)
        k = int(mpmath.nint(log))
        if mpmath.mpf(10) ** k == x:
            return k << bits
        return fixed_point_from_mpf(log, bits)


def frac(x: float) -> float:
    """x - floor(x), in [0, 1)."""
    r = x - math.floor(x)
    return r if r < 1.0 else math.nextafter(1.0, 0.0)


def floor_part(x: float) -> int:
    if not math.isfinite(x) or abs(x) >= 2.0**62:
        raise DomainError(f"floor of {x} is out of range")
    return math.floor(x)


@dataclass
class Mod1Sequence:
    values: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 1 or len(self.values) == 0:
            raise DomainError("a mod-1 sequence holds at least one value")
        if np.any(self.values < 0.0) or np.any(self.values >= 1.0):
            raise DomainError("mod-1 values must lie in [0, 1)")

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, item: int) -> float:
        return float(self.values[item])

    @property
    def significands(self) -> npt.NDArray[np.float64]:
        return np.minimum(10.0**self.values, np.nextafter(10.0, 0.0))


@dataclass(frozen=True)
class DiscrepancyResult:
    star_discrepancy: float
    n: int
    sup_location: float


def star_discrepancy(s: Mod1Sequence) -> DiscrepancyResult:
    """D*_N = max_i max(i/N - u_(i), u_(i) - (i-1)/N) over sorted points."""
    u = np.sort(s.values, kind="stable")
    n = len(u)
    i = np.arange(1, n + 1, dtype=np.float64)
    above = i / n - u
    below = u - (i - 1) / n
    i_above = int(np.argmax(above))
    i_below = int(np.argmax(below))
    if above[i_above] >= below[i_below]:
        return DiscrepancyResult(float(above[i_above]), n, float(u[i_above]))
    return DiscrepancyResult(float(below[i_below]), n, float(u[i_below]))


def kolmogorov_to_uniform(values: Iterable[float] | npt.ArrayLike) -> float:
    return star_discrepancy(Mod1Sequence(np.asarray(values))).star_discrepancy


@dataclass(frozen=True)
class FixedPointAngle:
    """Fractional part of an angle alpha, stored as raw / 2**bits."""

    raw: int
    bits: int = FIXED_POINT_BITS

    def __post_init__(self) -> None:
        object.__setattr__(self, "raw", self.raw & ((1 << self.bits) - 1))

    @classmethod
    def from_float(cls, alpha: float, bits: int = FIXED_POINT_BITS) -> FixedPointAngle:
        return cls(fixed_point_from_float(alpha, bits), bits)

    @classmethod
    def log10_of(
        cls, value: Fraction | int, bits: int = FIXED_POINT_BITS
    ) -> FixedPointAngle:
        return cls(fixed_point_log10(value, bits), bits)

    def at(self, n: int) -> float:
        """<n * alpha>, computed directly for any index."""
        return fixed_to_float(n * self.raw, self.bits)

    def fractional_parts(self, start: int, count: int) -> npt.NDArray[np.float64]:
        """<k * alpha> for k = start, ..., start + count - 1."""
        mask = (1 << self.bits) - 1
        acc = (start * self.raw) & mask
        out = np.empty(count, dtype=np.float64)
        for j in range(count):
            out[j] = fixed_to_float(acc, self.bits)
            acc = (acc + self.raw) & mask
        return out


def named_angle(name: str, bits: int = FIXED_POINT_BITS) -> FixedPointAngle:
    """log2, log3, log5, ... (decimal logs of integers), sqrt2, sqrt3, pi, e."""
    if name.startswith("log") and name[3:].isdigit():
        return FixedPointAngle.log10_of(int(name[3:]), bits)
    with mpmath.workprec(bits + _GUARD_BITS):
        constants = {
            "sqrt2": mpmath.sqrt(2),
            "sqrt3": mpmath.sqrt(3),
            "pi": +mpmath.pi,
            "e": +mpmath.e,
            "golden": (1 + mpmath.sqrt(5)) / 2,
        }
        if name not in constants:
            raise DomainError(f"unknown angle: '{name}'")
        return FixedPointAngle(fixed_point_from_mpf(constants[name], bits), bits)


def weyl_sequence(alpha: float | FixedPointAngle, n: int) -> Mod1Sequence:
    """(<alpha>, <2 alpha>, ..., <n alpha>)."""
    if n < 1:
        raise DomainError(f"n must be >= 1: {n}")
    angle = alpha if isinstance(alpha, FixedPointAngle) else FixedPointAngle.from_float(alpha)
    return Mod1Sequence(angle.fractional_parts(1, n))


def log_mod1_of(xs: Iterable[float] | npt.ArrayLike) -> Mod1Sequence:
    """<log10 |x_n|>, with log 0 := 0."""
    return Mod1Sequence(log_significands_of(xs))
