"""Numeric refutations of four widespread misconceptions about Benford's law.

Each function returns a `DemoResult` listing the claim and the numbers that
contradict it; `benford.py demo` prints all four.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from benford_law import (
    UniformFamily,
    exponential_benford_distance,
    first_digit_pmf,
    normal_digit_prob,
    uniform_benford_distance,
    uniform_distance_grid_minimum,
)
from config import DEFAULT_SEED
from conformance import analyze
from mod1 import star_discrepancy
from random_laws import BenfordExact, SeededRNG, Uniform, sample
from sequences import (
    PolynomialIterate,
    Power,
    Rational,
    TenPower,
    classify,
    count_first_digit_up_to,
    first_digit_support,
    first_digits,
    generate,
)
from stochastic import random_walk_paths


@dataclass
class DemoResult:
    claim: str
    findings: list[tuple[str, str]] = field(default_factory=list)
    conclusion: str = ""

    def add(self, label: str, value: str) -> None:
        self.findings.append((label, value))

    def to_text(self) -> str:
        width = max((len(label) for label, _ in self.findings), default=0)
        lines = [f"Claim: {self.claim}"]
        lines += [f"  {label.ljust(width)}  {value}" for label, value in self.findings]
        lines.append(f"  => {self.conclusion}")
        return "\n".join(lines)


def order_of_magnitude(samples: int = 10**5, seed: int = DEFAULT_SEED) -> DemoResult:
    result = DemoResult("a Benford dataset must span several orders of magnitude")
    batch = sample(BenfordExact(), samples, seed)
    report = analyze(batch.values)
    result.add("law", "10**U, U uniform on [0, 1)")
    result.add("range of values", f"[{batch.values.min():.4f}, {batch.values.max():.4f}]")
    result.add("KS distance to Benford", f"{report.ks_distance:.5f}")
    result.add("chi-square p-value", f"{report.chi_square_pvalue:.4f}")
    result.conclusion = "exactly Benford while confined to a single decade [1, 10)"
    return result


def exponential_sequences(
    n: int = 10**4, paths: int = 10**4, steps: int = 1000, seed: int = DEFAULT_SEED
) -> DemoResult:
    result = DemoResult("exponential sequences (a**n) can be assumed Benford")
    for label, spec in (("2**n", Power(Rational(2))), ("10**(n/2)", Power(TenPower(1, 2)))):
        verdict = classify(spec)
        discrepancy = star_discrepancy(generate(spec, n)).star_discrepancy
        result.add(label, f"{verdict}, discrepancy {discrepancy:.5f}")
    result.add("first digits of 10**(n/2)", str(sorted(first_digit_support(Power(TenPower(1, 2)), n))))

    near = Power(TenPower(1, 100))
    near_digits = first_digits(near, n)
    result.add(
        "10**(n/100)",
        f"{classify(near)}, yet P(D1=1) = {np.mean(near_digits == 1):.4f}"
        f" against log10 2 = {first_digit_pmf(1):.4f}",
    )

    bases = Uniform(1.0, 10.0).draw(SeededRNG(seed), 3)
    for x in bases:
        base = Fraction(float(x))
        spec = Power(Rational(base.numerator, base.denominator))
        discrepancy = star_discrepancy(generate(spec, n)).star_discrepancy
        result.add(f"random base {float(x):.6f}", f"discrepancy {discrepancy:.5f}")

    limit = 2 * 10**5 - 1
    ones = count_first_digit_up_to(limit, 1)
    result.add("n a, n <= 199999", f"P(D1=1) = {ones}/{limit} = {ones / limit:.4f}")

    walk = random_walk_paths(Uniform(0.0, 1.0), steps, paths, seed)
    result.add(
        f"sums of {steps} uniform steps",
        f"P(D1=1) = {walk.frequency(1):.4f} over {paths} paths",
    )
    result.conclusion = (
        "a**n is Benford iff a is not a rational power of 10;"
        " arithmetic sequences and random walks never are"
    )
    return result


def spread_and_regularity(grid: int = 50) -> DemoResult:
    result = DemoResult("a regular law with a large spread is close to Benford")
    for mean, sd in ((7.0, 1.0), (700.0, 100.0)):
        result.add(f"N({mean:g}, {sd:g}**2)", f"P(D1=1) = {normal_digit_prob(mean, sd, 1):.3e}")
    result.add("U(0, 1)", f"distance {uniform_benford_distance(UniformFamily(0.0, 1.0)):.5f}")
    nonnegative = uniform_distance_grid_minimum(grid, sign_mixed=False)
    mixed = uniform_distance_grid_minimum(grid, sign_mixed=True)
    result.add(f"any U(a, b), 0 <= a, {grid}x{grid} grid", f"distance >= {nonnegative.distance:.4f}")
    result.add(f"any U(a, b), a < 0 < b, {grid}x{grid} grid", f"distance >= {mixed.distance:.4f}")
    result.add("Exp(1)", f"distance {exponential_benford_distance(1.0):.5f}")
    result.conclusion = "neither normal nor uniform laws come close to Benford at any spread"
    return result


def no_simple_explanation(n: int = 500) -> DemoResult:
    result = DemoResult("a simple intuitive argument explains Benford's law in general")
    spec = PolynomialIterate((Fraction(1), Fraction(0), Fraction(1)), Fraction(1))
    verdict = classify(spec)
    discrepancy = star_discrepancy(generate(spec, n)).star_discrepancy
    result.add("x -> x**2 + 1 from 1", f"1, 2, 5, 26, 677, ...: {verdict.verdict.value}")
    result.add(f"discrepancy of the first {n} terms", f"{discrepancy:.5f} (observed only)")
    result.conclusion = "whether this orbit is Benford is an open problem"
    return result


def run_all(seed: int = DEFAULT_SEED) -> list[DemoResult]:
    return [
        order_of_magnitude(seed=seed),
        exponential_sequences(seed=seed),
        spread_and_regularity(),
        no_simple_explanation(),
    ]
