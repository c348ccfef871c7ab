import math

import numpy as np
import pytest
from scipy import integrate  # type: ignore

from config import MAX_SAMPLES, BudgetExceeded
from random_laws import (
    BenfordExact,
    DiscreteAtoms,
    Exponential,
    MixtureLaw,
    Normal,
    PowerOf,
    RandomMeasureSpec,
    Scaled,
    SeededRNG,
    Uniform,
    average_measure_cdf,
    average_measure_density,
    sample,
    spec_digest,
)
from significand import DomainError
from stochastic import ks_to_benford_values


def test_sample_is_reproducible() -> None:
    a = sample(Uniform(0.0, 1.0), 1000, seed=7)
    b = sample(Uniform(0.0, 1.0), 1000, seed=7)
    assert a == b
    assert a.seed == 7
    assert a.generator == "numpy.PCG64"
    c = sample(Uniform(0.0, 1.0), 1000, seed=8)
    assert not np.array_equal(a.values, c.values)


def test_sample_limits() -> None:
    with pytest.raises(DomainError):
        sample(Uniform(0.0, 1.0), 0)
    with pytest.raises(BudgetExceeded):
        sample(Uniform(0.0, 1.0), MAX_SAMPLES + 1)


def test_spec_digest() -> None:
    digest = spec_digest(Uniform(0.0, 1.0))
    assert len(digest) == 16
    assert digest == spec_digest(Uniform(0.0, 1.0))
    assert digest != spec_digest(Uniform(0.0, 2.0))
    assert spec_digest(BenfordExact()) != spec_digest(Scaled(BenfordExact(), 2.0))


def test_fork() -> None:
    first = [child.random(5) for child in SeededRNG(5).fork(3)]
    again = [child.random(5) for child in SeededRNG(5).fork(3)]
    for x, y in zip(first, again):
        assert np.array_equal(x, y)
    assert not np.array_equal(first[0], first[1])
    assert SeededRNG(123).seed == 123


def test_law_invariants() -> None:
    with pytest.raises(DomainError):
        Uniform(1.0, 0.0)
    with pytest.raises(DomainError):
        Exponential(0.0)
    with pytest.raises(DomainError):
        Normal(0.0, 0.0)
    with pytest.raises(DomainError):
        Scaled(Uniform(0.0, 1.0), 0.0)
    with pytest.raises(DomainError):
        PowerOf(Uniform(0.0, 1.0), 0)
    with pytest.raises(DomainError):
        MixtureLaw(1.5)


def test_describe() -> None:
    assert Uniform(0.0, 1.0).describe() == "uniform(a=0.0,b=1.0)"
    assert PowerOf(Scaled(BenfordExact(), 3.0), -1).describe() == "benford|scale(3.0)|pow(-1)"


def test_benford_exact() -> None:
    law = BenfordExact()
    assert law.cdf(0.5) == 0.0
    assert law.cdf(2.0) == pytest.approx(math.log10(2))
    assert law.cdf(10.0) == 1.0
    total, _ = integrate.quad(law.pdf, 1.0, 10.0)
    assert total == pytest.approx(1.0)
    values = sample(law, 10**5, seed=1).values
    assert values.min() >= 1.0 and values.max() < 10.0
    assert np.var(values) == pytest.approx(law.variance, rel=0.02)


def test_scaled() -> None:
    law = Scaled(Uniform(0.0, 1.0), 4.0)
    assert law.cdf(1.0) == pytest.approx(0.25)
    assert law.pdf(1.0) == pytest.approx(0.25)
    assert law.variance == pytest.approx(16 / 12)
    values = sample(law, 1000, seed=3).values
    assert np.array_equal(values, sample(Uniform(0.0, 1.0), 1000, seed=3).values * 4.0)


def test_power_of() -> None:
    square = PowerOf(Uniform(0.0, 1.0), 2)
    assert square.cdf(0.25) == pytest.approx(0.5)
    assert square.cdf(-1.0) == 0.0
    inverse = PowerOf(Uniform(1.0, 2.0), -1)
    assert inverse.cdf(0.75) == pytest.approx(2 / 3)
    total, _ = integrate.quad(inverse.pdf, 0.5, 1.0)
    assert total == pytest.approx(1.0)
    with pytest.raises(DomainError):
        PowerOf(Normal(0.0, 1.0), 2).cdf(1.0)
    with pytest.raises(DomainError):
        square.variance


def test_discrete_atoms() -> None:
    with pytest.raises(DomainError):
        DiscreteAtoms((1.0, 2.0), (0.5, 0.4))
    with pytest.raises(DomainError):
        DiscreteAtoms((1.0,), (0.5, 0.5))
    with pytest.raises(DomainError):
        DiscreteAtoms((1.0, 2.0), (1.5, -0.5))
    constant = DiscreteAtoms.constant(3.0)
    assert set(sample(constant, 100).values) == {3.0}
    assert not constant.continuous
    assert constant.positive
    atoms = DiscreteAtoms((0.0, 1.0), (0.5, 0.5))
    assert atoms.atom_at_zero
    assert not atoms.positive
    assert atoms.cdf(0.0) == 0.5
    assert atoms.cdf(1.0) == 1.0
    assert atoms.variance == pytest.approx(0.25)
    with pytest.raises(DomainError):
        atoms.pdf(0.5)


def test_mixture_law() -> None:
    law = MixtureLaw(0.3)
    assert law.significand_cdf(1.0) == pytest.approx(0.3)
    assert law.significand_cdf(10.0) == pytest.approx(1.0)
    values = law.draw(SeededRNG(2), 10**5)
    assert np.mean(values == 1.0) == pytest.approx(0.3, abs=0.01)
    assert values.min() >= 1.0 and values.max() < 10.0


def test_random_measure() -> None:
    with pytest.raises(DomainError):
        RandomMeasureSpec(())
    with pytest.raises(DomainError):
        RandomMeasureSpec(((0.5, Uniform(0.0, 1.0)), (0.4, BenfordExact())))
    m = RandomMeasureSpec(((0.5, Uniform(0.0, 2.0)), (0.5, Exponential(1.0))))
    assert list(m.weights) == [0.5, 0.5]
    assert average_measure_cdf(m, 1.0) == pytest.approx(0.5 * 0.5 + 0.5 * (1 - math.exp(-1)))
    assert average_measure_density(m, 1.0) == pytest.approx(0.5 * 0.5 + 0.5 * math.exp(-1))
    assert m.describe() == "0.5@uniform(a=0.0,b=2.0);0.5@exp(rate=1.0)"


def test_die_roll_measure_density() -> None:
    m = RandomMeasureSpec(((1 / 3, Uniform(0.0, 1.0)), (2 / 3, Exponential(1.0))))
    assert average_measure_density(m, 0.5) == pytest.approx(1 / 3 + 2 / 3 * math.exp(-0.5))
    assert average_measure_density(m, 2.0) == pytest.approx(2 / 3 * math.exp(-2.0))


def test_benford_closed_under_powers() -> None:
    for k in (-1, 2, 3):
        values = sample(PowerOf(BenfordExact(), k), 10**5, seed=20 + k).values
        assert ks_to_benford_values(values) < 0.01, k
