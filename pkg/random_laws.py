"""Random variables, random probability measures and seeded sampling.

Every draw goes through `SeededRNG`, a numpy PCG64 generator tied to its
seed. Parallel work gets disjoint streams from `SeededRNG.fork`, which
spawns child seed sequences, so results never depend on worker count.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np
import numpy.typing as npt
from scipy import stats  # type: ignore

from config import DEFAULT_SEED, MAX_SAMPLES, check_budget
from significand import DomainError

GENERATOR_NAME = "numpy.PCG64"

FloatArray = npt.NDArray[np.float64]


class SeededRNG:
    """numpy Generator over PCG64 that remembers its seed."""

    def __init__(self, seed: int | np.random.SeedSequence = DEFAULT_SEED):
        if isinstance(seed, np.random.SeedSequence):
            self._sequence = seed
        else:
            self._sequence = np.random.SeedSequence(seed)
        self.generator = np.random.Generator(np.random.PCG64(self._sequence))

    @property
    def seed(self) -> int:
        return int(self._sequence.entropy)  # type: ignore[arg-type]

    def fork(self, count: int) -> list[SeededRNG]:
        """Independent child streams, one per parallel task."""
        return [SeededRNG(child) for child in self._sequence.spawn(count)]

    def random(self, n: int) -> FloatArray:
        return self.generator.random(n)


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.a) and math.isfinite(self.b) and self.a < self.b):
            raise DomainError(f"uniform law needs finite a < b: [{self.a}, {self.b}]")

    def describe(self) -> str:
        return f"uniform(a={self.a!r},b={self.b!r})"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        return rng.generator.uniform(self.a, self.b, n)

    def cdf(self, x: float) -> float:
        return float(stats.uniform(loc=self.a, scale=self.b - self.a).cdf(x))

    def pdf(self, x: float) -> float:
        return float(stats.uniform(loc=self.a, scale=self.b - self.a).pdf(x))

    @property
    def continuous(self) -> bool:
        return True

    @property
    def positive(self) -> bool:
        return self.a >= 0

    @property
    def atom_at_zero(self) -> bool:
        return False

    @property
    def variance(self) -> float:
        return (self.b - self.a) ** 2 / 12


@dataclass(frozen=True)
class Exponential:
    rate: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.rate) and self.rate > 0):
            raise DomainError(f"exponential rate must be positive: {self.rate}")

    def describe(self) -> str:
        return f"exp(rate={self.rate!r})"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        return rng.generator.exponential(1 / self.rate, n)

    def cdf(self, x: float) -> float:
        return float(stats.expon(scale=1 / self.rate).cdf(x))

    def pdf(self, x: float) -> float:
        return float(stats.expon(scale=1 / self.rate).pdf(x))

    @property
    def continuous(self) -> bool:
        return True

    @property
    def positive(self) -> bool:
        return True

    @property
    def atom_at_zero(self) -> bool:
        return False

    @property
    def variance(self) -> float:
        return 1 / self.rate**2


@dataclass(frozen=True)
class Normal:
    mean: float
    sd: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.mean) and math.isfinite(self.sd) and self.sd > 0):
            raise DomainError(f"normal law needs finite mean and sd > 0: {self.mean}, {self.sd}")

    def describe(self) -> str:
        return f"normal(mean={self.mean!r},sd={self.sd!r})"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        return rng.generator.normal(self.mean, self.sd, n)

    def cdf(self, x: float) -> float:
        return float(stats.norm(loc=self.mean, scale=self.sd).cdf(x))

    def pdf(self, x: float) -> float:
        return float(stats.norm(loc=self.mean, scale=self.sd).pdf(x))

    @property
    def continuous(self) -> bool:
        return True

    @property
    def positive(self) -> bool:
        return False

    @property
    def atom_at_zero(self) -> bool:
        return False

    @property
    def variance(self) -> float:
        return self.sd**2


@dataclass(frozen=True)
class BenfordExact:
    """10**U with U uniform on [0, 1), so that S(X) = X."""

    def describe(self) -> str:
        return "benford"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        return 10.0 ** rng.random(n)

    def cdf(self, x: float) -> float:
        if x < 1:
            return 0.0
        return math.log10(x) if x < 10 else 1.0

    def pdf(self, x: float) -> float:
        return 1 / (x * math.log(10)) if 1 <= x < 10 else 0.0

    @property
    def continuous(self) -> bool:
        return True

    @property
    def positive(self) -> bool:
        return True

    @property
    def atom_at_zero(self) -> bool:
        return False

    @property
    def variance(self) -> float:
        ln10 = math.log(10)
        mean = 9 / ln10
        return 99 / (2 * ln10) - mean**2


@dataclass(frozen=True)
class Scaled:
    inner: RandomVariableSpec
    factor: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.factor) and self.factor > 0):
            raise DomainError(f"scale factor must be positive: {self.factor}")

    def describe(self) -> str:
        return f"{self.inner.describe()}|scale({self.factor!r})"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        return self.inner.draw(rng, n) * self.factor

    def cdf(self, x: float) -> float:
        return self.inner.cdf(x / self.factor)

    def pdf(self, x: float) -> float:
        return self.inner.pdf(x / self.factor) / self.factor

    @property
    def continuous(self) -> bool:
        return self.inner.continuous

    @property
    def positive(self) -> bool:
        return self.inner.positive

    @property
    def atom_at_zero(self) -> bool:
        return self.inner.atom_at_zero

    @property
    def variance(self) -> float:
        return self.inner.variance * self.factor**2


@dataclass(frozen=True)
class PowerOf:
    """X**k, k a nonzero integer."""

    inner: RandomVariableSpec
    k: int

    def __post_init__(self) -> None:
        if self.k == 0:
            raise DomainError("power must be nonzero")

    def describe(self) -> str:
        return f"{self.inner.describe()}|pow({self.k})"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        return self.inner.draw(rng, n) ** float(self.k)

    def _check_positive(self) -> None:
        if not self.inner.positive:
            raise DomainError("the law of X**k is only tabulated for positive X")

    def cdf(self, x: float) -> float:
        self._check_positive()
        if x <= 0:
            return 0.0
        root = x ** (1 / self.k)
        if self.k > 0:
            return self.inner.cdf(root)
        return 1.0 - self.inner.cdf(root)

    def pdf(self, x: float) -> float:
        self._check_positive()
        if x <= 0:
            return 0.0
        root = x ** (1 / self.k)
        return self.inner.pdf(root) * abs(root / (self.k * x))

    @property
    def continuous(self) -> bool:
        return self.inner.continuous

    @property
    def positive(self) -> bool:
        return self.inner.positive

    @property
    def atom_at_zero(self) -> bool:
        return self.inner.atom_at_zero

    @property
    def variance(self) -> float:
        raise DomainError("variance of X**k is not tabulated")


@dataclass(frozen=True)
class DiscreteAtoms:
    values: tuple[float, ...]
    probabilities: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values or len(self.values) != len(self.probabilities):
            raise DomainError("atoms need as many probabilities as values")
        if any(p < 0 for p in self.probabilities):
            raise DomainError(f"negative probability: {self.probabilities}")
        if abs(math.fsum(self.probabilities) - 1.0) > 1e-12:
            raise DomainError(f"probabilities must sum to 1: {self.probabilities}")
        if not all(math.isfinite(v) for v in self.values):
            raise DomainError(f"non-finite atom: {self.values}")

    @classmethod
    def constant(cls, value: float) -> DiscreteAtoms:
        return cls((value,), (1.0,))

    def describe(self) -> str:
        atoms = ",".join(f"{v!r}={p!r}" for v, p in zip(self.values, self.probabilities))
        return f"atoms({atoms})"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        index = rng.generator.choice(len(self.values), size=n, p=np.array(self.probabilities))
        return np.asarray(self.values, dtype=np.float64)[index]

    def cdf(self, x: float) -> float:
        return min(1.0, math.fsum(p for v, p in zip(self.values, self.probabilities) if v <= x))

    def pdf(self, x: float) -> float:
        raise DomainError("a discrete law has no density")

    @property
    def continuous(self) -> bool:
        return False

    @property
    def positive(self) -> bool:
        return all(v > 0 for v in self.values)

    @property
    def atom_at_zero(self) -> bool:
        return any(v == 0 and p > 0 for v, p in zip(self.values, self.probabilities))

    @property
    def variance(self) -> float:
        values = np.asarray(self.values)
        p = np.asarray(self.probabilities)
        mean = float(np.sum(values * p))
        return float(np.sum(p * (values - mean) ** 2))


RandomVariableSpec = Union[
    Uniform, Exponential, Normal, BenfordExact, Scaled, PowerOf, DiscreteAtoms
]


@dataclass(frozen=True)
class MixtureLaw:
    """Z = (1 - q) X + q Y: X Benford, Y the atom at 1 (significand 1)."""

    q: float

    def __post_init__(self) -> None:
        if not 0 <= self.q <= 1:
            raise DomainError(f"mixture weight must lie in [0, 1]: {self.q}")

    def describe(self) -> str:
        return f"mixture(q={self.q!r})"

    def draw(self, rng: SeededRNG, n: int) -> FloatArray:
        benford = BenfordExact().draw(rng, n)
        atom = rng.random(n) < self.q
        return np.where(atom, 1.0, benford)

    def significand_cdf(self, t: float) -> float:
        return (1 - self.q) * math.log10(t) + self.q


@dataclass(frozen=True)
class RandomMeasureSpec:
    """A random probability measure: law i is picked with probability weight i."""

    components: tuple[tuple[float, RandomVariableSpec], ...]

    def __post_init__(self) -> None:
        if not self.components:
            raise DomainError("a random measure needs at least one component")
        weights = [w for w, _ in self.components]
        if any(w < 0 for w in weights):
            raise DomainError(f"negative weight: {weights}")
        if abs(math.fsum(weights) - 1.0) > 1e-12:
            raise DomainError(f"weights must sum to 1: {weights}")

    @property
    def weights(self) -> FloatArray:
        return np.array([w for w, _ in self.components], dtype=np.float64)

    @property
    def laws(self) -> list[RandomVariableSpec]:
        return [law for _, law in self.components]

    def describe(self) -> str:
        return ";".join(f"{w!r}@{law.describe()}" for w, law in self.components)


@dataclass
class SampleBatch:
    values: FloatArray
    seed: int
    spec_digest: str
    generator: str = GENERATOR_NAME
    components: npt.NDArray[np.int64] = field(
        default_factory=lambda: np.zeros(0, dtype=np.int64)
    )

    def __len__(self) -> int:
        return len(self.values)

    def __eq__(self, other: SampleBatch) -> bool:
        return (
            self.seed == other.seed
            and self.spec_digest == other.spec_digest
            and self.generator == other.generator
            and np.array_equal(self.values, other.values)
        )


def spec_digest(spec: RandomVariableSpec | MixtureLaw | RandomMeasureSpec) -> str:
    """Content hash of a spec's canonical description."""
    return hashlib.sha256(spec.describe().encode("utf-8")).hexdigest()[:16]


def sample(
    spec: RandomVariableSpec | MixtureLaw, n: int, seed: int = DEFAULT_SEED
) -> SampleBatch:
    """n i.i.d. draws; same (spec, seed) gives the same values."""
    if n < 1:
        raise DomainError(f"n must be >= 1: {n}")
    check_budget("samples", n, MAX_SAMPLES)
    rng = SeededRNG(seed)
    return SampleBatch(spec.draw(rng, n), seed, spec_digest(spec))


def average_measure_cdf(m: RandomMeasureSpec, t: float) -> float:
    """E(t) = sum_i w_i P_i((-inf, t])."""
    return math.fsum(w * law.cdf(t) for w, law in m.components)


def average_measure_density(m: RandomMeasureSpec, x: float) -> float:
    return math.fsum(w * law.pdf(x) for w, law in m.components)
