"""Decimal significands and significant digits.

S(x) is the unique number in [1, 10) with |x| = S(x) * 10**k; by
convention S(0) = 0 and S(-x) = S(x). Two paths are provided:

- a float path (`significand`, `digits`, `log_significand` and their
  vectorized versions) used for bulk work,
- an exact path (`significand_of_fraction`, `significand_exact_pow`,
  `digits` on int/Fraction input) built on Python big integers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Iterable

import numpy as np
import numpy.typing as npt

from config import MAX_DIGITS_FLOAT, MAX_EXACT_BITS, BudgetExceeded

LOG10_2 = math.log10(2)


class DomainError(ValueError):
    pass


@dataclass(frozen=True)
class SignificandDecomposition:
    sign: int
    significand: float
    exponent: int

    def __post_init__(self) -> None:
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"invalid sign: {self.sign}")
        if self.sign == 0:
            if self.significand != 0 or self.exponent != 0:
                raise DomainError("zero must decompose as (0, 0, 0)")
        elif not 1.0 <= self.significand < 10.0:
            raise DomainError(f"significand out of [1, 10): {self.significand}")

    def reconstruct(self) -> float:
        if self.sign == 0:
            return 0.0
        value = self.significand
        exponent = self.exponent
        # two steps so that 10**exponent never overflows on its own
        while exponent > 300:
            value *= 1e300
            exponent -= 300
        while exponent < -300:
            value *= 1e-300
            exponent += 300
        return self.sign * value * 10.0**exponent


@dataclass(frozen=True)
class DigitVector:
    digits: tuple[int, ...]

    def __post_init__(self) -> None:
        if not self.digits:
            raise DomainError("a digit vector holds at least one digit")
        if any(not 0 <= d <= 9 for d in self.digits):
            raise DomainError(f"digits must lie in 0..9: {self.digits}")
        if self.digits[0] == 0 and any(self.digits):
            raise DomainError(f"leading digit must be 1..9: {self.digits}")

    def __len__(self) -> int:
        return len(self.digits)

    def __getitem__(self, item: int) -> int:
        return self.digits[item]

    @property
    def is_zero(self) -> bool:
        return not any(self.digits)

    @property
    def as_integer(self) -> int:
        """10**(m-1) d1 + 10**(m-2) d2 + ... + dm"""
        value = 0
        for d in self.digits:
            value = value * 10 + d
        return value

    def prefix(self, m: int) -> DigitVector:
        return DigitVector(self.digits[:m])


def _check_finite(x: float) -> None:
    if not math.isfinite(x):
        raise DomainError(f"non-finite input: {x}")


def _scale_by_power_of_ten(a: float, k: int) -> float:
    """a / 10**k, multiplying by exact powers of ten where possible."""
    if k >= 0:
        if k > 300:
            return a / 1e300 / 10.0 ** (k - 300)
        return a / 10.0**k
    if -k > 300:
        return a * 1e300 * 10.0 ** (-k - 300)
    return a * 10.0 ** (-k)


def significand(x: float) -> SignificandDecomposition:
    _check_finite(x)
    if x == 0:
        return SignificandDecomposition(0, 0.0, 0)
    sign = 1 if x > 0 else -1
    a = abs(x)
    k = math.floor(math.log10(a))
    s = _scale_by_power_of_ten(a, k)
    if s >= 10.0:
        s = _scale_by_power_of_ten(a, k + 1)
        k += 1
    elif s < 1.0:
        s = _scale_by_power_of_ten(a, k - 1)
        k -= 1
    if s >= 10.0:
        # float noise pushed the significand onto 10
        s, k = 1.0, k + 1
    return SignificandDecomposition(sign, s, k)


def _decimal_exponent_of_fraction(value: Fraction) -> int:
    """floor(log10(value)) for value > 0, exactly."""
    num, den = value.numerator, value.denominator
    k = math.floor((num.bit_length() - den.bit_length()) * LOG10_2)
    while True:
        # value >= 10**k ?
        if k >= 0:
            above = num >= den * 10**k
        else:
            above = num * 10 ** (-k) >= den
        if not above:
            k -= 1
            continue
        if k + 1 >= 0:
            below_next = num < den * 10 ** (k + 1)
        else:
            below_next = num * 10 ** (-k - 1) < den
        if not below_next:
            k += 1
            continue
        return k


def significand_of_fraction(value: Fraction | int) -> SignificandDecomposition:
    """Exact decomposition; the float significand is correctly rounded."""
    value = Fraction(value)
    if value == 0:
        return SignificandDecomposition(0, 0.0, 0)
    sign = 1 if value > 0 else -1
    a = abs(value)
    k = _decimal_exponent_of_fraction(a)
    exact = a / 10**k if k >= 0 else a * 10 ** (-k)
    s = float(exact)
    if s >= 10.0:
        s, k = 1.0, k + 1
    return SignificandDecomposition(sign, s, k)


def significand_of_decimal(value: Decimal) -> SignificandDecomposition:
    """Exact decomposition of a decimal literal of any magnitude."""
    if not value.is_finite():
        raise DomainError(f"non-finite input: {value}")
    if value.is_zero():
        return SignificandDecomposition(0, 0.0, 0)
    sign, coefficient, _ = value.as_tuple()
    k = value.adjusted()
    s = float(Decimal((0, coefficient, 1 - len(coefficient))))
    if s >= 10.0:
        s, k = 1.0, k + 1
    return SignificandDecomposition(-1 if sign else 1, s, k)


def significand_exact_pow(base: Fraction | int, n: int) -> SignificandDecomposition:
    base = Fraction(base)
    if base <= 0:
        raise DomainError(f"base must be positive: {base}")
    if n < 1:
        raise DomainError(f"exponent must be >= 1: {n}")
    bits = n * max(base.numerator.bit_length(), base.denominator.bit_length())
    if bits > MAX_EXACT_BITS:
        raise BudgetExceeded(
            f"{base}**{n} needs about {bits} bits, budget is {MAX_EXACT_BITS}"
        )
    return significand_of_fraction(
        Fraction(base.numerator**n, base.denominator**n)
    )


def _exact_digits(value: Fraction, m: int) -> DigitVector:
    if value == 0:
        return DigitVector((0,) * m)
    a = abs(value)
    k = _decimal_exponent_of_fraction(a)
    shift = m - 1 - k
    scaled = a * 10**shift if shift >= 0 else a / 10 ** (-shift)
    leading = math.floor(scaled)
    return DigitVector(tuple(int(c) for c in str(leading)))


def digits(x: float | int | Fraction, m: int) -> DigitVector:
    """D1(x), ..., Dm(x), terminating decimal representation.

    Floats are read through their shortest round-trip decimal form, so
    digits(2019.0, 6) and digits(-20.19, 4) give what one reads on the
    page. Only m <= 15 is meaningful on that path; ints and Fractions
    are handled exactly for any m.
    """
    if m < 1:
        raise DomainError(f"m must be >= 1: {m}")
    if isinstance(x, (int, Fraction)) and not isinstance(x, bool):
        return _exact_digits(Fraction(x), m)
    x = float(x)
    _check_finite(x)
    if m > MAX_DIGITS_FLOAT:
        raise DomainError(
            f"m = {m} exceeds the {MAX_DIGITS_FLOAT}-digit budget of the float path"
        )
    if x == 0:
        return DigitVector((0,) * m)
    mantissa = Decimal(repr(abs(x))).as_tuple().digits
    significant = list(mantissa)
    while significant and significant[0] == 0:
        significant.pop(0)
    significant = (significant + [0] * m)[:m]
    return DigitVector(tuple(significant))


def log_significand(x: float) -> float:
    """<log10 |x>>, i.e. log10 S(x); 0 for x = 0."""
    _check_finite(x)
    if x == 0:
        return 0.0
    decomposition = significand(x)
    r = math.log10(decomposition.significand)
    return r if r < 1.0 else math.nextafter(1.0, 0.0)


def first_digit(x: float) -> int:
    return int(significand(x).significand)


def significands_of(values: Iterable[float] | npt.ArrayLike) -> npt.NDArray[np.float64]:
    """Vectorized S(x). Zeros map to 0."""
    a = np.abs(np.asarray(values, dtype=np.float64))
    if not np.all(np.isfinite(a)):
        raise DomainError("non-finite input")
    out = np.zeros_like(a)
    nonzero = a > 0
    x = a[nonzero]
    k = np.floor(np.log10(x))
    s = _vector_scale(x, k)
    high = s >= 10.0
    s[high] = _vector_scale(x[high], k[high] + 1)
    low = s < 1.0
    s[low] = _vector_scale(x[low], k[low] - 1)
    s[s >= 10.0] = 1.0
    out[nonzero] = s
    return out


def _vector_scale(
    x: npt.NDArray[np.float64], k: npt.NDArray[np.float64]
) -> npt.NDArray[np.float64]:
    out = np.empty_like(x)
    big = k > 300
    tiny = k < -300
    positive = (k >= 0) & ~big
    negative = (k < 0) & ~tiny
    out[positive] = x[positive] / 10.0 ** k[positive]
    out[negative] = x[negative] * 10.0 ** (-k[negative])
    out[big] = x[big] / 1e300 / 10.0 ** (k[big] - 300)
    out[tiny] = x[tiny] * 1e300 * 10.0 ** (-k[tiny] - 300)
    return out


def log_significands_of(
    values: Iterable[float] | npt.ArrayLike,
) -> npt.NDArray[np.float64]:
    """Vectorized log10 S(x) in [0, 1); zeros map to 0 (log 0 := 0)."""
    s = significands_of(values)
    out = np.zeros_like(s)
    nonzero = s > 0
    out[nonzero] = np.log10(s[nonzero])
    out[out >= 1.0] = np.nextafter(1.0, 0.0)
    return out


def first_digits_of(
    values: Iterable[float] | npt.ArrayLike,
) -> npt.NDArray[np.int64]:
    """Vectorized D1(x); 0 for x = 0."""
    return np.floor(significands_of(values)).astype(np.int64)
