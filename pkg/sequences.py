"""Deterministic sequences and their Benford classification.

Every generator emits the fractional parts <log10 |x_n|> of its terms
x_1, ..., x_n (log 0 := 0), which is what the equidistribution test needs.
Terms are never materialized as floats: geometric and affine orbits run in
128-bit fixed-point log arithmetic once the additive parts are negligible,
integer sequences start with exact big integers, and polynomial orbits keep
a precision that grows with the orbit length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Union

import mpmath  # type: ignore
import numpy as np
import numpy.typing as npt

from config import (
    EXACT_TERMS,
    MAX_ORBIT_PRECISION_BITS,
    MAX_SEQUENCE_TERMS,
    BudgetExceeded,
    check_budget,
)
from mod1 import (
    FIXED_POINT_BITS,
    Mod1Sequence,
    fixed_point_log10,
    fixed_point_log10_mpf,
    fixed_to_float,
    power_of_ten_exponent,
)
from significand import DomainError, digits

MAX_SUPPORT_TERMS = 10**5

# extra bits beyond what a recurrence needs, both for mpmath and the fixed point
_GUARD_BITS = 64

# rounding noise tolerated around log10 of a digit boundary, in units of 2**-96
_SNAP_BITS = 96


@dataclass(frozen=True)
class Rational:
    """Exact base p/q, kept in lowest terms."""

    p: int
    q: int = 1

    def __post_init__(self) -> None:
        if self.p <= 0 or self.q <= 0:
            raise DomainError(f"rational base must be positive: {self.p}/{self.q}")
        g = math.gcd(self.p, self.q)
        object.__setattr__(self, "p", self.p // g)
        object.__setattr__(self, "q", self.q // g)

    @property
    def fraction(self) -> Fraction:
        return Fraction(self.p, self.q)

    def __float__(self) -> float:
        return self.p / self.q

    def __str__(self) -> str:
        return str(self.p) if self.q == 1 else f"{self.p}/{self.q}"

    def log10_raw(self, bits: int) -> int:
        return fixed_point_log10(self.fraction, bits)

    def as_mpf(self) -> mpmath.mpf:
        return mpmath.mpf(self.p) / self.q

    def pow(self, k: int) -> Rational:
        if k >= 0:
            return Rational(self.p**k, self.q**k)
        return Rational(self.q**-k, self.p**-k)


@dataclass(frozen=True)
class TenPower:
    """10**(m/k), normalized to k >= 1 and gcd(m, k) = 1."""

    m: int
    k: int = 1

    def __post_init__(self) -> None:
        if self.k == 0:
            raise DomainError("10^(m/k) needs k != 0")
        sign = -1 if self.k < 0 else 1
        g = math.gcd(self.m, self.k)
        object.__setattr__(self, "m", sign * self.m // g)
        object.__setattr__(self, "k", sign * self.k // g)

    @property
    def exponent(self) -> Fraction:
        return Fraction(self.m, self.k)

    def __float__(self) -> float:
        return float(10.0 ** (self.m / self.k))

    def __str__(self) -> str:
        return f"10^({self.m}/{self.k})"

    def log10_raw(self, bits: int) -> int:
        return (self.m << bits) // self.k

    def as_mpf(self) -> mpmath.mpf:
        return mpmath.power(10, mpmath.mpf(self.m) / self.k)

    def pow(self, k: int) -> TenPower:
        return TenPower(self.m * k, self.k)


ExactBase = Union[Rational, TenPower]


def ten_exponent(b: ExactBase) -> Fraction | None:
    """alpha with b = 10**alpha when alpha is rational, else None.

    For p/q in lowest terms, (p/q)**k = 10**m forces p**k = 10**m q**k; the
    prime factorizations then make p/q itself a power of ten, so an integer
    exponent is the only possible rational one.
    """
    if isinstance(b, TenPower):
        return b.exponent
    k = power_of_ten_exponent(b.fraction)
    return None if k is None else Fraction(k)


def is_rational_power_of_ten(b: ExactBase) -> bool:
    return ten_exponent(b) is not None


def product_is_rational_power_of_ten(a1: ExactBase, a2: ExactBase) -> bool:
    """Whether a1 a2 = 10**alpha for a rational alpha."""
    if isinstance(a1, Rational) and isinstance(a2, Rational):
        return is_rational_power_of_ten(Rational(a1.p * a2.p, a1.q * a2.q))
    # one factor is 10**(m/k), so the product is one iff the other factor is
    return is_rational_power_of_ten(a1) and is_rational_power_of_ten(a2)


def _base_value(b: ExactBase) -> float:
    return float(b)


@dataclass(frozen=True)
class Power:
    """start * base**n."""

    base: ExactBase
    start: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if self.start <= 0:
            raise DomainError(f"start must be positive: {self.start}")


@dataclass(frozen=True)
class AffineIterate:
    """Orbit of f(x) = a x + b from x0."""

    a: ExactBase
    b: Fraction = Fraction(0)
    x0: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if _base_value(self.a) <= 1:
            raise DomainError(f"affine multiplier must exceed 1: {self.a}")
        if self.b < 0 or self.x0 <= 0:
            raise DomainError(f"need b >= 0 and x0 > 0: b={self.b}, x0={self.x0}")


@dataclass(frozen=True)
class PolynomialTerm:
    """a * n**b."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if self.a == 0:
            raise DomainError("polynomial term needs a != 0")


@dataclass(frozen=True)
class Factorial:
    pass


@dataclass(frozen=True)
class LinearRecurrence:
    """x_n = coeffs[0] x_{n-1} + ... + coeffs[r-1] x_{n-r}; init are x_1..x_r."""

    coeffs: tuple[Fraction, ...]
    init: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if not self.coeffs or len(self.coeffs) != len(self.init):
            raise DomainError("a recurrence of order r needs r coefficients and r initial terms")

    @property
    def is_fibonacci_like(self) -> bool:
        return self.coeffs == (1, 1) and all(x >= 0 for x in self.init) and any(self.init)


@dataclass(frozen=True)
class PolynomialIterate:
    """Orbit of f(x) = sum coeffs[i] x**i from x0."""

    coeffs: tuple[Fraction, ...]
    x0: Fraction

    def __post_init__(self) -> None:
        trimmed = list(self.coeffs)
        while trimmed and trimmed[-1] == 0:
            trimmed.pop()
        if len(trimmed) < 3:
            raise DomainError(f"iterated polynomial must have degree >= 2: {self.coeffs}")
        object.__setattr__(self, "coeffs", tuple(trimmed))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, x: Fraction | mpmath.mpf) -> Fraction | mpmath.mpf:
        coeffs: list[Fraction | mpmath.mpf] = list(self.coeffs)
        if not isinstance(x, Fraction):
            coeffs = [mpmath.mpf(c.numerator) / c.denominator for c in self.coeffs]
        value = coeffs[-1]
        for c in reversed(coeffs[:-1]):
            value = value * x + c
        return value


@dataclass(frozen=True)
class AlternatingAffine:
    """x_{n+1} = a1 x_n + b1 for even n, a2 x_n + b2 for odd n."""

    a1: ExactBase
    a2: ExactBase
    b1: Fraction = Fraction(0)
    b2: Fraction = Fraction(0)
    x0: Fraction = Fraction(1)

    def __post_init__(self) -> None:
        if _base_value(self.a1) <= 1 or _base_value(self.a2) <= 1:
            raise DomainError(f"multipliers must exceed 1: {self.a1}, {self.a2}")
        if self.b1 < 0 or self.b2 < 0 or self.x0 <= 0:
            raise DomainError("need b1, b2 >= 0 and x0 > 0")


@dataclass(frozen=True)
class Primes:
    pass


SequenceSpec = Union[
    Power,
    AffineIterate,
    PolynomialTerm,
    Factorial,
    LinearRecurrence,
    PolynomialIterate,
    AlternatingAffine,
    Primes,
]


def fibonacci() -> LinearRecurrence:
    return LinearRecurrence((Fraction(1), Fraction(1)), (Fraction(1), Fraction(1)))


class Verdict(Enum):
    BENFORD = "Benford"
    NOT_BENFORD = "NotBenford"
    UNKNOWN = "Unknown"


# rule tags
AFFINE_MULTIPLIER = "affine-multiplier-criterion"
ALTERNATING_PRODUCT = "alternating-product-criterion"
POLYNOMIAL_GROWTH = "polynomial-growth"
CLASSICAL_SEQUENCE = "classical-sequence"
PRIMES_RULE = "primes"
OPEN_PROBLEM = "open-problem"


@dataclass(frozen=True)
class BenfordClassification:
    verdict: Verdict
    rule: str
    note: str = ""

    def __post_init__(self) -> None:
        if self.verdict is Verdict.UNKNOWN and self.rule != OPEN_PROBLEM:
            raise DomainError(f"an unknown verdict cannot cite '{self.rule}'")

    def __str__(self) -> str:
        return f"{self.verdict.value} ({self.note})" if self.note else self.verdict.value


def classify(spec: SequenceSpec) -> BenfordClassification:
    if isinstance(spec, (Power, AffineIterate)):
        multiplier = spec.base if isinstance(spec, Power) else spec.a
        if is_rational_power_of_ten(multiplier):
            return BenfordClassification(
                Verdict.NOT_BENFORD,
                AFFINE_MULTIPLIER,
                "multiplier is a rational power of 10",
            )
        return BenfordClassification(
            Verdict.BENFORD, AFFINE_MULTIPLIER, "multiplier is not a rational power of 10"
        )
    if isinstance(spec, AlternatingAffine):
        if product_is_rational_power_of_ten(spec.a1, spec.a2):
            return BenfordClassification(
                Verdict.NOT_BENFORD,
                ALTERNATING_PRODUCT,
                "a1*a2 is a rational power of 10",
            )
        return BenfordClassification(
            Verdict.BENFORD, ALTERNATING_PRODUCT, "a1*a2 is not a rational power of 10"
        )
    if isinstance(spec, PolynomialTerm):
        return BenfordClassification(
            Verdict.NOT_BENFORD, POLYNOMIAL_GROWTH, "a*n^b is never Benford"
        )
    if isinstance(spec, Factorial):
        return BenfordClassification(Verdict.BENFORD, CLASSICAL_SEQUENCE, "n! is Benford")
    if isinstance(spec, LinearRecurrence):
        if spec.is_fibonacci_like:
            return BenfordClassification(
                Verdict.BENFORD, CLASSICAL_SEQUENCE, "Fibonacci-type recurrence is Benford"
            )
        return BenfordClassification(
            Verdict.UNKNOWN, OPEN_PROBLEM, "general linear recurrences are not decided here"
        )
    if isinstance(spec, PolynomialIterate):
        return BenfordClassification(
            Verdict.UNKNOWN,
            OPEN_PROBLEM,
            "it is unknown whether a fixed-start polynomial orbit is Benford;"
            " random starts are Benford with probability one",
        )
    if isinstance(spec, Primes):
        return BenfordClassification(
            Verdict.NOT_BENFORD, PRIMES_RULE, "primes are not Benford (empirical tables only)"
        )
    raise DomainError(f"unknown sequence spec: {spec!r}")


def power_transform(spec: SequenceSpec, k: int) -> Power:
    """(x_n**k) for a geometric sequence, e.g. (2**-n) or (4**n) from (2**n)."""
    if not isinstance(spec, Power):
        raise DomainError(f"only geometric sequences can be raised to a power: {spec!r}")
    if k == 0:
        raise DomainError("k must be nonzero")
    start = spec.start**k
    return Power(spec.base.pow(k), Fraction(start))


def scale_start(spec: SequenceSpec, c: Fraction | int) -> SequenceSpec:
    c = Fraction(c)
    if c <= 0:
        raise DomainError(f"scale must be positive: {c}")
    if isinstance(spec, Power):
        return replace(spec, start=spec.start * c)
    if isinstance(spec, (AffineIterate, AlternatingAffine, PolynomialIterate)):
        return replace(spec, x0=spec.x0 * c)
    raise DomainError(f"no starting point to scale in {spec!r}")


@dataclass
class _LogTerms:
    """Fixed-point fractional parts <log10 |x_j|> at a given precision."""

    raws: list[int] = field(default_factory=list)
    bits: int = FIXED_POINT_BITS

    def append(self, raw: int) -> None:
        mask = (1 << self.bits) - 1
        slack = 1 << (self.bits - _SNAP_BITS)
        r = raw & mask
        # an exact power of ten can come out a few units off an integer
        if r < slack or r > mask - slack:
            r = 0
        self.raws.append(r)

    def append_value(self, x: Fraction | mpmath.mpf) -> None:
        if x == 0:
            self.raws.append(0)
        elif isinstance(x, Fraction):
            self.append(fixed_point_log10(abs(x), self.bits))
        else:
            self.append(fixed_point_log10_mpf(x, self.bits))

    def fractions(self) -> npt.NDArray[np.float64]:
        return np.array([fixed_to_float(r, self.bits) for r in self.raws], dtype=np.float64)

    def first_digits(self) -> npt.NDArray[np.int64]:
        slack = 1 << (self.bits - _SNAP_BITS)
        thresholds = [fixed_point_log10(d, self.bits) - slack for d in range(2, 10)]
        out = np.empty(len(self.raws), dtype=np.int64)
        for j, r in enumerate(self.raws):
            d = 1
            for threshold in thresholds:
                if r < threshold:
                    break
                d += 1
            out[j] = d
        return out


def _bit_size(x: Fraction | mpmath.mpf) -> int:
    """Roughly log2 |x|, without converting huge values to float."""
    if x == 0:
        return -(1 << 62)
    if isinstance(x, Fraction):
        return abs(x.numerator).bit_length() - x.denominator.bit_length()
    return int(mpmath.mag(x))


def _affine_cycle(
    maps: list[tuple[ExactBase, Fraction]], x0: Fraction, n: int
) -> _LogTerms:
    """Orbit of a cycle of affine maps x -> a x + b, x0 > 0.

    Direct iteration (exact rationals, or mpmath when a multiplier is an
    irrational power of ten) until every additive term is below 2**-192
    relative to x; from then on log x grows by exactly log a per step.
    """
    terms = _LogTerms()
    bits = terms.bits
    largest_b = max(abs(b) for _, b in maps)
    exact = all(isinstance(a, Rational) for a, _ in maps)
    negligible = _bit_size(largest_b + 1) + bits + _GUARD_BITS
    x: Fraction | mpmath.mpf = x0
    j = 0
    with mpmath.workprec(bits + 2 * _GUARD_BITS):
        if not exact:
            x = mpmath.mpf(x0.numerator) / x0.denominator
        while j < n:
            a, b = maps[j % len(maps)]
            if exact:
                assert isinstance(a, Rational)
                x = a.fraction * x + b
            else:
                x = a.as_mpf() * x + mpmath.mpf(b.numerator) / b.denominator
            terms.append_value(x)
            j += 1
            if largest_b == 0 or _bit_size(x) > negligible:
                break
    if j == n:
        return terms
    steps = [a.log10_raw(bits) for a, _ in maps]
    raw = terms.raws[-1] if terms.raws else 0
    while j < n:
        raw += steps[j % len(maps)]
        terms.append(raw)
        raw = terms.raws[-1]
        j += 1
    return terms


def _float_log_raw(v: float, bits: int) -> int:
    """floor(v * 2**bits) for a float logarithm, to within 2**-53 absolute."""
    return math.floor(v * 2.0**53) << (bits - 53)


def _factorial(n: int, exact_terms: int) -> _LogTerms:
    terms = _LogTerms()
    bits = terms.bits
    value = 1
    raw = 0
    for j in range(1, n + 1):
        if j <= exact_terms:
            value *= j
            raw = fixed_point_log10(value, bits)
        else:
            # exact integer accumulation of the rounded logs
            raw += _float_log_raw(math.log10(j), bits)
        terms.append(raw)
    return terms


def _linear_recurrence(spec: LinearRecurrence, n: int, exact_terms: int) -> _LogTerms:
    terms = _LogTerms()
    bits = terms.bits
    window = list(spec.init)
    for x in window[:n]:
        terms.append_value(x)
    j = len(window)
    while j < min(n, exact_terms):
        x = sum((c * window[-1 - i] for i, c in enumerate(spec.coeffs)), Fraction(0))
        window = window[1:] + [x]
        terms.append_value(x)
        j += 1
    if j >= n:
        return terms

    # float state scaled by 2**-exponent; exponent * log10 2 stays exact
    top = max(abs(x) for x in window)
    exponent = 0
    if top > 0:
        exponent = max(0, top.numerator.bit_length() - top.denominator.bit_length() - 60)
    state = [float(x / Fraction(2) ** exponent) for x in window]
    coeffs = [float(c) for c in spec.coeffs]
    log10_2 = fixed_point_log10(2, bits)
    while j < n:
        x = math.fsum(c * state[-1 - i] for i, c in enumerate(coeffs))
        state = state[1:] + [x]
        if x == 0:
            terms.raws.append(0)
        else:
            terms.append(_float_log_raw(math.log10(abs(x)), bits) + exponent * log10_2)
        largest = max(abs(v) for v in state)
        if largest > 2.0**100:
            state = [v * 2.0**-64 for v in state]
            exponent += 64
        elif 0 < largest < 2.0**-100:
            state = [v * 2.0**64 for v in state]
            exponent -= 64
        j += 1
    return terms


def orbit_precision_bits(spec: PolynomialIterate, n: int) -> int:
    """Fractional bits an n-step orbit needs: each step multiplies log errors by the degree."""
    return FIXED_POINT_BITS + _GUARD_BITS + math.ceil(n * math.log2(spec.degree))


def _polynomial_orbit(spec: PolynomialIterate, n: int) -> _LogTerms:
    bits = orbit_precision_bits(spec, n)
    if bits > MAX_ORBIT_PRECISION_BITS:
        raise BudgetExceeded(
            f"a {n}-step orbit of a degree-{spec.degree} polynomial needs {bits} bits,"
            f" budget is {MAX_ORBIT_PRECISION_BITS}"
        )
    terms = _LogTerms(bits=bits)
    leading = spec.coeffs[-1]
    spread = sum(abs(c) for c in spec.coeffs[:-1]) / abs(leading)
    negligible = _bit_size(spread + 1) + bits + _GUARD_BITS
    size_limit = 4 * (bits + _GUARD_BITS)
    x: Fraction | mpmath.mpf = spec.x0
    j = 0
    with mpmath.workprec(bits + 2 * _GUARD_BITS):
        while j < n:
            x = spec(x)
            if isinstance(x, Fraction) and max(
                x.numerator.bit_length(), x.denominator.bit_length()
            ) > size_limit:
                x = mpmath.mpf(x.numerator) / x.denominator
            terms.append_value(x)
            j += 1
            if _bit_size(x) > negligible:
                break
    if j == n:
        return terms
    # far out, log f(x) = d log x + log a_d up to a negligible term
    degree = spec.degree
    shift = fixed_point_log10(abs(leading), bits)
    raw = terms.raws[-1]
    while j < n:
        raw = degree * raw + shift
        terms.append(raw)
        raw = terms.raws[-1]
        j += 1
    return terms


def _primes(n: int) -> npt.NDArray[np.int64]:
    if n < 6:
        limit = 15
    else:
        limit = int(n * (math.log(n) + math.log(math.log(n)))) + 1
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if sieve[p]:
            sieve[p * p :: p] = False
    return np.flatnonzero(sieve)[:n].astype(np.int64)


def _log_terms(spec: SequenceSpec, n: int, exact_terms: int) -> _LogTerms:
    if isinstance(spec, Power):
        return _affine_cycle([(spec.base, Fraction(0))], spec.start, n)
    if isinstance(spec, AffineIterate):
        return _affine_cycle([(spec.a, spec.b)], spec.x0, n)
    if isinstance(spec, AlternatingAffine):
        return _affine_cycle([(spec.a1, spec.b1), (spec.a2, spec.b2)], spec.x0, n)
    if isinstance(spec, Factorial):
        return _factorial(n, exact_terms)
    if isinstance(spec, LinearRecurrence):
        return _linear_recurrence(spec, n, exact_terms)
    if isinstance(spec, PolynomialIterate):
        return _polynomial_orbit(spec, n)
    raise DomainError(f"no log-domain generator for {spec!r}")


def _check_n(n: int, limit: int = MAX_SEQUENCE_TERMS) -> None:
    if n < 1:
        raise DomainError(f"n must be >= 1: {n}")
    check_budget("n", n, limit)


def generate(
    spec: SequenceSpec, n: int, exact_terms: int = EXACT_TERMS
) -> Mod1Sequence:
    """<log10 |x_1|>, ..., <log10 |x_n|>.

    `exact_terms` bounds the big-integer phase of factorials and linear
    recurrences; later terms continue in the log domain.
    """
    _check_n(n)
    if isinstance(spec, PolynomialTerm):
        index = np.arange(1, n + 1, dtype=np.float64)
        logs = math.log10(abs(spec.a)) + float(spec.b) * np.log10(index)
        values = logs - np.floor(logs)
        return Mod1Sequence(np.minimum(values, np.nextafter(1.0, 0.0)))
    if isinstance(spec, Primes):
        logs = np.log10(_primes(n).astype(np.float64))
        return Mod1Sequence(logs - np.floor(logs))
    return Mod1Sequence(_log_terms(spec, n, exact_terms).fractions())


def first_digits(spec: SequenceSpec, n: int) -> npt.NDArray[np.int64]:
    """D1(x_1), ..., D1(x_n), exact at digit boundaries."""
    _check_n(n)
    if isinstance(spec, PolynomialTerm):
        if spec.b.denominator == 1 and spec.b >= 0:
            return np.array(
                [digits(spec.a * j ** int(spec.b), 1)[0] for j in range(1, n + 1)],
                dtype=np.int64,
            )
        return np.floor(generate(spec, n).significands).astype(np.int64)
    if isinstance(spec, Primes):
        return np.array([digits(int(p), 1)[0] for p in _primes(n)], dtype=np.int64)
    return _log_terms(spec, n, EXACT_TERMS).first_digits()


def first_digit_support(spec: SequenceSpec, n: int) -> set[int]:
    _check_n(n, MAX_SUPPORT_TERMS)
    return {int(d) for d in first_digits(spec, n)}


def count_first_digit_up_to(limit: int, d: int) -> int:
    """#{1 <= j <= limit : D1(j) = d}, by exact enumeration of decades."""
    if not 1 <= d <= 9:
        raise DomainError(f"first digit must lie in 1..9: {d}")
    count = 0
    scale = 1
    while d * scale <= limit:
        count += min(limit, (d + 1) * scale - 1) - d * scale + 1
        scale *= 10
    return count
