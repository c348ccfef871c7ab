"""Seeded Monte Carlo experiments on significands.

Each experiment works on log10 |x| rather than x: powers multiply logs,
products add them, so nothing overflows for any step count we accept.
Distances to Benford are Kolmogorov distances of <log10 |x|> to the
uniform law (exact, via `mod1.star_discrepancy`); comparisons of two
samples use scipy's two-sample KS statistic.

Multi-trial experiments split their seed with `SeededRNG.fork` and may run
on a process pool (see `config.worker_count`).
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterable, Sequence, TypeVar, Union

import numpy as np
import numpy.typing as npt
import pandas as pd  # type: ignore
from scipy import stats  # type: ignore

from benford_law import first_digit_pmf
from config import (
    DEFAULT_CRITERIA,
    DEFAULT_SEED,
    MAX_POWER_STEPS,
    MAX_SAMPLES,
    MAX_SEQUENCE_TERMS,
    MonteCarloCriteria,
    check_budget,
    worker_count,
)
from mod1 import (
    FIXED_POINT_BITS,
    Mod1Sequence,
    fixed_point_log10,
    fixed_to_float,
    kolmogorov_to_uniform,
    star_discrepancy,
)
from random_laws import (
    BenfordExact,
    FloatArray,
    MixtureLaw,
    RandomMeasureSpec,
    RandomVariableSpec,
    SampleBatch,
    SeededRNG,
    spec_digest,
)
from sequences import PolynomialIterate, generate
from significand import DomainError, first_digits_of, log_significands_of

T = TypeVar("T")
R = TypeVar("R")

_GUARD_BITS = 64


@dataclass(frozen=True)
class DistancePoint:
    step: int
    distance: float
    samples: int
    seed: int


@dataclass
class DistanceSeries:
    """Per-step distances, the rows of a `simulate` CSV."""

    points: list[DistancePoint] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, step: int) -> float:
        for point in self.points:
            if point.step == step:
                return point.distance
        raise KeyError(step)

    @property
    def distances(self) -> list[float]:
        return [p.distance for p in self.points]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            [(p.step, p.distance, p.samples, p.seed) for p in self.points],
            columns=["step", "distance", "samples", "seed"],
        )


@dataclass(frozen=True)
class TrialSummary:
    """Outcome of a "with probability one" claim rendered as seeded trials."""

    discrepancies: tuple[float, ...]
    criteria: MonteCarloCriteria

    @property
    def trials(self) -> int:
        return len(self.discrepancies)

    @property
    def fraction(self) -> float:
        passing = sum(d < self.criteria.discrepancy_threshold for d in self.discrepancies)
        return passing / self.trials

    @property
    def holds(self) -> bool:
        return self.fraction >= self.criteria.pass_fraction


def _fractional(logs: FloatArray) -> FloatArray:
    frac = logs - np.floor(logs)
    return np.minimum(frac, np.nextafter(1.0, 0.0))


def _safe_log10(values: FloatArray) -> FloatArray:
    """log10 |x| with log 0 := 0."""
    a = np.abs(values)
    out = np.zeros_like(a)
    nonzero = a > 0
    out[nonzero] = np.log10(a[nonzero])
    return out


def ks_of_logs(logs: FloatArray) -> float:
    """Distance of the significands 10**<logs> to Benford."""
    return kolmogorov_to_uniform(_fractional(logs))


def ks_to_benford_values(values: FloatArray | Iterable[float]) -> float:
    return kolmogorov_to_uniform(log_significands_of(values))


def two_sample_distance(logs_a: FloatArray, logs_b: FloatArray) -> float:
    result = stats.ks_2samp(_fractional(logs_a), _fractional(logs_b))
    return float(result.statistic)


def _check_samples(samples: int) -> None:
    if samples < 1:
        raise DomainError(f"samples must be >= 1: {samples}")
    check_budget("samples", samples, MAX_SAMPLES)


def _check_continuous(spec: RandomVariableSpec) -> None:
    if not spec.continuous:
        raise DomainError(f"a continuous law is required: {spec.describe()}")


def _map_trials(fn: Callable[[T], R], tasks: Sequence[T]) -> list[R]:
    workers = worker_count()
    if workers <= 1 or len(tasks) <= 1:
        return [fn(task) for task in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, tasks))


# powers and products


def power_sequence(
    spec: RandomVariableSpec,
    n_max: int,
    samples: int,
    seed: int = DEFAULT_SEED,
    steps: Iterable[int] | None = None,
) -> DistanceSeries:
    """KS distance of S(X**n) to Benford for n = 1..n_max (or `steps`).

    One sample of X serves every n; log10 |X**n| = n log10 |X|.
    """
    _check_continuous(spec)
    _check_samples(samples)
    if not 1 <= n_max <= MAX_POWER_STEPS:
        raise DomainError(f"n_max must lie in 1..{MAX_POWER_STEPS}: {n_max}")
    logs = _safe_log10(spec.draw(SeededRNG(seed), samples))
    series = DistanceSeries()
    for n in steps if steps is not None else range(1, n_max + 1):
        if not 1 <= n <= n_max:
            raise DomainError(f"step {n} outside 1..{n_max}")
        series.points.append(DistancePoint(n, ks_of_logs(n * logs), samples, seed))
    return series


def product_sequence(
    spec: RandomVariableSpec, n_max: int, samples: int, seed: int = DEFAULT_SEED
) -> DistanceSeries:
    """KS distance of S(X_1 ... X_k) to Benford for k = 1..n_max."""
    _check_continuous(spec)
    _check_samples(samples)
    if not 1 <= n_max <= MAX_POWER_STEPS:
        raise DomainError(f"n_max must lie in 1..{MAX_POWER_STEPS}: {n_max}")
    rng = SeededRNG(seed)
    logs = np.zeros(samples)
    series = DistanceSeries()
    for k in range(1, n_max + 1):
        logs += _safe_log10(spec.draw(rng, samples))
        series.points.append(DistancePoint(k, ks_of_logs(logs), samples, seed))
    return series


def uniform_power_distance(n: int) -> float:
    """Exact KS distance of S(U**n) to Benford, U uniform on (0, 1).

    -log10 U**n is exponential with rate ln(10)/n, and the fractional part
    of an exponential variable has CDF (1 - exp(-r u)) / (1 - exp(-r)).
    """
    if n < 1:
        raise DomainError(f"n must be >= 1: {n}")
    rate = math.log(10) / n
    norm = -math.expm1(-rate)

    def cdf(s: float) -> float:
        return (math.exp(-rate * (1 - s)) - math.exp(-rate)) / norm

    s_max = 1 + math.log(norm / rate) / rate
    return s_max - cdf(s_max)


def uniform_product_distance(k: int, resolution: int = 20000) -> float:
    """KS distance of S(U_1 ... U_k) to Benford, on a fine grid.

    -ln(U_1 ... U_k) is Gamma(k), so log10 of the product is -G / ln 10.
    """
    if k < 1:
        raise DomainError(f"k must be >= 1: {k}")
    gamma = stats.gamma(k)
    ln10 = math.log(10)
    s = np.linspace(0.0, 1.0, resolution + 1)
    cdf = np.zeros_like(s)
    j = 0
    while True:
        upper = gamma.cdf((j + 1) * ln10)
        cdf += upper - gamma.cdf((j + 1 - s) * ln10)
        if gamma.sf((j + 1) * ln10) < 1e-16:
            break
        j += 1
    return float(np.max(np.abs(cdf - s)))


def product_with_benford(
    spec_y: RandomVariableSpec, samples: int, seed: int = DEFAULT_SEED
) -> float:
    """KS distance of S(X Y) to Benford, X exact Benford independent of Y."""
    if spec_y.atom_at_zero:
        raise DomainError(f"Y must not have an atom at 0: {spec_y.describe()}")
    _check_samples(samples)
    rng_x, rng_y = SeededRNG(seed).fork(2)
    logs = _safe_log10(BenfordExact().draw(rng_x, samples)) + _safe_log10(
        spec_y.draw(rng_y, samples)
    )
    return ks_of_logs(logs)


@dataclass(frozen=True)
class ScaleCheck:
    distance: float
    below_two: float
    scaled_below_two: float


def scale_invariance_check(
    spec: RandomVariableSpec, factor: float, samples: int, seed: int = DEFAULT_SEED
) -> ScaleCheck:
    """Two-sample distance between S(X) and S(a X), independent draws.

    Also reports the empirical P(S <= 2) of both samples.
    """
    if not (math.isfinite(factor) and factor > 0):
        raise DomainError(f"factor must be positive: {factor}")
    _check_samples(samples)
    rng_x, rng_ax = SeededRNG(seed).fork(2)
    logs = _safe_log10(spec.draw(rng_x, samples))
    scaled = _safe_log10(spec.draw(rng_ax, samples) * factor)
    log2 = math.log10(2)
    return ScaleCheck(
        two_sample_distance(logs, scaled),
        float(np.mean(_fractional(logs) <= log2)),
        float(np.mean(_fractional(scaled) <= log2)),
    )


def first_digit_scale_profile(
    spec: RandomVariableSpec,
    d: int,
    factors: Iterable[float],
    samples: int,
    seed: int = DEFAULT_SEED,
) -> list[float]:
    """P(D1(a X) = d) for each factor a, on one sample of X.

    A law is Benford iff this is log10(1 + 1/d) for every a (one digit suffices).
    """
    if not 1 <= d <= 9:
        raise DomainError(f"first digit must lie in 1..9: {d}")
    _check_samples(samples)
    values = spec.draw(SeededRNG(seed), samples)
    profile = []
    for a in factors:
        digits = first_digits_of(values * a)
        profile.append(float(np.mean(digits == d)))
    return profile


def base_invariance_check(
    law: MixtureLaw | RandomVariableSpec, n: int, samples: int, seed: int = DEFAULT_SEED
) -> float:
    """Two-sample distance between S(Z) and S(Z**n), independent draws."""
    if n < 2:
        raise DomainError(f"n must be >= 2: {n}")
    _check_samples(samples)
    rng_z, rng_zn = SeededRNG(seed).fork(2)
    logs = _safe_log10(law.draw(rng_z, samples))
    powered = n * _safe_log10(law.draw(rng_zn, samples))
    return two_sample_distance(logs, powered)


def mixture_distance_to_benford(q: float) -> float:
    """sup_t |(1 - q) log t + q - log t| = q, attained as t -> 1+."""
    return MixtureLaw(q).q


def mixture_ks_to_benford(q: float, samples: int, seed: int = DEFAULT_SEED) -> float:
    """Monte Carlo counterpart of `mixture_distance_to_benford`."""
    _check_samples(samples)
    return ks_of_logs(_safe_log10(MixtureLaw(q).draw(SeededRNG(seed), samples)))


# randomized function systems


@dataclass(frozen=True)
class Multiply:
    """x -> c x"""

    c: Fraction

    def __post_init__(self) -> None:
        if self.c <= 0:
            raise DomainError(f"multiplier must be positive: {self.c}")


@dataclass(frozen=True)
class PowerMap:
    """x -> x**k, k a positive rational"""

    k: Fraction

    def __post_init__(self) -> None:
        if self.k <= 0:
            raise DomainError(f"exponent must be positive: {self.k}")


@dataclass(frozen=True)
class AffineMap:
    """x -> a x + b"""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if self.a <= 0 or self.b < 0:
            raise DomainError(f"need a > 0 and b >= 0: a={self.a}, b={self.b}")


MapSpec = Union[Multiply, PowerMap, AffineMap]


def _path_precision(maps: Sequence[MapSpec], choices: npt.NDArray[np.bool_]) -> int:
    """Fractional bits so that rounding survives every later x -> x**(p/q)."""
    growth = 0.0
    for chosen, m in zip((True, False), maps):
        if isinstance(m, PowerMap) and m.k.numerator > 1:
            uses = int(np.count_nonzero(choices == chosen))
            growth += uses * math.log2(m.k.numerator)
    return FIXED_POINT_BITS + _GUARD_BITS + math.ceil(growth)


def _apply_map(m: MapSpec, raw: int, bits: int, step: int, log_b: int) -> int:
    if isinstance(m, Multiply):
        return raw + step
    if isinstance(m, PowerMap):
        return raw * m.k.numerator // m.k.denominator
    raw += step
    if m.b == 0:
        return raw
    # log(a x + b) = log(max) + log(1 + min / max), with logs of a x and b
    high, low = (raw, log_b) if raw >= log_b else (log_b, raw)
    if high - low >= (1000 << bits):
        return high
    gap = (high - low) / (1 << bits)
    correction = math.log1p(10.0**-gap) / math.log(10)
    return high + (math.floor(correction * 2.0**53) << (bits - 53))


def randomized_iteration(
    f1: MapSpec,
    f2: MapSpec,
    p1: float,
    x0: float | Fraction,
    n: int,
    seed: int = DEFAULT_SEED,
) -> Mod1Sequence:
    """One path x_{j+1} = f(x_j), f = f1 with probability p1 else f2.

    log10 x_j is kept in fixed point with its integer part, at a precision
    that grows with the number of x -> x**(p/q) steps on the path.
    """
    if not 0 <= p1 <= 1:
        raise DomainError(f"p1 must lie in [0, 1]: {p1}")
    if n < 1:
        raise DomainError(f"n must be >= 1: {n}")
    check_budget("n", n, MAX_SEQUENCE_TERMS)
    x0 = Fraction(x0)
    if x0 <= 0:
        raise DomainError(f"x0 must be positive: {x0}")
    choices = SeededRNG(seed).random(n) < p1
    maps = (f1, f2)
    bits = _path_precision(maps, choices)
    steps = [
        fixed_point_log10(m.c if isinstance(m, Multiply) else m.a, bits)
        if isinstance(m, (Multiply, AffineMap))
        else 0
        for m in maps
    ]
    offsets = [
        fixed_point_log10(m.b, bits) if isinstance(m, AffineMap) and m.b > 0 else 0
        for m in maps
    ]
    raw = fixed_point_log10(x0, bits)
    out = np.empty(n, dtype=np.float64)
    for j, first in enumerate(choices):
        index = 0 if first else 1
        raw = _apply_map(maps[index], raw, bits, steps[index], offsets[index])
        out[j] = fixed_to_float(raw, bits)
    return Mod1Sequence(out)


def _randomized_trial(
    task: tuple[MapSpec, MapSpec, float, float, int, np.random.SeedSequence]
) -> float:
    f1, f2, p1, x0, n, sequence = task
    path_seed = int(sequence.generate_state(1, np.uint64)[0])
    return star_discrepancy(randomized_iteration(f1, f2, p1, x0, n, path_seed)).star_discrepancy


def randomized_iteration_trials(
    f1: MapSpec,
    f2: MapSpec,
    p1: float,
    start: RandomVariableSpec,
    n: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    criteria: MonteCarloCriteria = DEFAULT_CRITERIA,
) -> TrialSummary:
    """Seeded paths from random starting points."""
    _check_continuous(start)
    rng = SeededRNG(seed)
    starts = start.draw(rng, trials)
    if np.any(starts <= 0):
        raise DomainError("starting points must be positive")
    children = np.random.SeedSequence(seed).spawn(trials)
    tasks = [(f1, f2, p1, float(x0), n, child) for x0, child in zip(starts, children)]
    return TrialSummary(tuple(_map_trials(_randomized_trial, tasks)), criteria)


# polynomial orbits from random starts


def polynomial_orbit_discrepancy(
    coeffs: Sequence[Fraction | int], x0: float | Fraction, n: int
) -> float:
    spec = PolynomialIterate(tuple(Fraction(c) for c in coeffs), Fraction(x0))
    return star_discrepancy(generate(spec, n)).star_discrepancy


def _polynomial_trial(task: tuple[tuple[Fraction, ...], float, int]) -> float:
    coeffs, x0, n = task
    return polynomial_orbit_discrepancy(coeffs, x0, n)


def polynomial_iterate_random_start(
    coeffs: Sequence[Fraction | int],
    start: RandomVariableSpec,
    n: int,
    trials: int,
    seed: int = DEFAULT_SEED,
    criteria: MonteCarloCriteria = DEFAULT_CRITERIA,
    region_start: float | None = None,
) -> TrialSummary:
    """First-n discrepancies of orbits of f from `trials` random starts.

    `region_start` is the point beyond which f(x) > x is claimed; each
    sampled start must lie beyond it and satisfy f(x0) > x0.
    """
    _check_continuous(start)
    if trials < 1:
        raise DomainError(f"trials must be >= 1: {trials}")
    f = PolynomialIterate(tuple(Fraction(c) for c in coeffs), Fraction(1))
    starts = start.draw(SeededRNG(seed), trials)
    for x0 in starts:
        exact = Fraction(float(x0))
        if region_start is not None and x0 <= region_start:
            raise DomainError(f"start {x0} lies outside the region x > {region_start}")
        if not f(exact) > exact:
            raise DomainError(f"f(x) > x fails at the sampled start {x0}")
    tasks = [(f.coeffs, float(x0), n) for x0 in starts]
    return TrialSummary(tuple(_map_trials(_polynomial_trial, tasks)), criteria)


# random probability measures


def combined_sample(
    m: RandomMeasureSpec, per_measure: int, k_measures: int, seed: int = DEFAULT_SEED
) -> SampleBatch:
    """Pick k_measures laws by weight, draw per_measure values from each.

    Rows of the batch follow the order in which laws were picked;
    `components` records the picked law of each value.
    """
    if per_measure < 1 or k_measures < 1:
        raise DomainError("per_measure and k_measures must be >= 1")
    check_budget("samples", per_measure * k_measures, MAX_SAMPLES)
    for law in m.laws:
        if not law.continuous or law.atom_at_zero:
            raise DomainError(f"component laws must be continuous without mass at 0: {law.describe()}")
    rng = SeededRNG(seed)
    picks = rng.generator.choice(len(m.components), size=k_measures, p=m.weights)
    values = np.empty((k_measures, per_measure), dtype=np.float64)
    for index, law in enumerate(m.laws):
        rows = np.flatnonzero(picks == index)
        if len(rows):
            values[rows] = law.draw(rng, len(rows) * per_measure).reshape(len(rows), per_measure)
    components = np.repeat(picks.astype(np.int64), per_measure)
    return SampleBatch(values.ravel(), seed, spec_digest(m), components=components)


# random walks


@dataclass(frozen=True)
class DigitFrequencies:
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def frequency(self, d: int) -> float:
        return self.counts[d - 1] / self.total if self.total else 0.0

    def deviation_from_benford(self, d: int) -> float:
        return self.frequency(d) - first_digit_pmf(d)


def _digit_counts(values: FloatArray) -> DigitFrequencies:
    digits = first_digits_of(values)
    counts = np.bincount(digits[digits > 0], minlength=10)[1:10]
    return DigitFrequencies(tuple(int(c) for c in counts))


def _check_walk(step: RandomVariableSpec, n_steps: int, paths: int) -> None:
    if n_steps < 1 or paths < 1:
        raise DomainError("n_steps and paths must be >= 1")
    check_budget("samples", paths, MAX_SAMPLES)
    variance = step.variance
    if not math.isfinite(variance):
        raise DomainError(f"step law needs finite variance: {step.describe()}")


def random_walk_paths(
    step: RandomVariableSpec, n_steps: int, paths: int, seed: int = DEFAULT_SEED
) -> DigitFrequencies:
    """First-digit table of the n_steps-th partial sums across paths."""
    _check_walk(step, n_steps, paths)
    rng = SeededRNG(seed)
    sums = np.zeros(paths)
    for _ in range(n_steps):
        sums += step.draw(rng, paths)
    return _digit_counts(sums)


def random_walk_distance_series(
    step: RandomVariableSpec,
    n_steps: int,
    paths: int,
    seed: int = DEFAULT_SEED,
    checkpoints: Iterable[int] | None = None,
) -> DistanceSeries:
    """KS distance of S(partial sums) to Benford at checkpoint times."""
    _check_walk(step, n_steps, paths)
    marks = sorted(set(checkpoints)) if checkpoints is not None else _log_spaced(n_steps)
    rng = SeededRNG(seed)
    sums = np.zeros(paths)
    series = DistanceSeries()
    marks_left = list(marks)
    for t in range(1, n_steps + 1):
        sums += step.draw(rng, paths)
        if marks_left and t == marks_left[0]:
            marks_left.pop(0)
            series.points.append(DistancePoint(t, ks_to_benford_values(sums), paths, seed))
    return series


def _log_spaced(n: int, count: int = 20) -> list[int]:
    return sorted({max(1, round(10 ** (math.log10(n) * i / count))) for i in range(count + 1)})
