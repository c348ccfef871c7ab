"""Budgets, defaults and Monte Carlo criteria shared by every module.

All sizes the toolkit accepts are bounded here. Exceeding one raises
`BudgetExceeded` instead of silently truncating the work.
"""

from __future__ import annotations

import os
from dataclasses import dataclass

DEFAULT_SEED = 42

MAX_ROWS = 10**7
MAX_SAMPLES = 10**7
MAX_SEQUENCE_TERMS = 10**6
MAX_POWER_STEPS = 100
MAX_DIGITS_FLOAT = 15

# terms of integer sequences (factorial, recurrences) computed with exact big integers
EXACT_TERMS = 10**4

# bit budget for exact rational powers (significand_exact_pow)
MAX_EXACT_BITS = 2**25

# fractional bits kept by super-exponential orbits; caps their length
MAX_ORBIT_PRECISION_BITS = 2**17

NON_NUMERIC_TOLERANCE = 0.10

THREADS_ENV_VAR = "BENFORD_THREADS"


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class MonteCarloCriteria:
    """How "with probability one" statements are rendered at finite size.

    A trial passes when its star discrepancy is below
    `discrepancy_threshold`; a claim holds when at least `pass_fraction`
    of the seeded trials pass.
    """

    discrepancy_threshold: float = 0.05
    pass_fraction: float = 0.95


DEFAULT_CRITERIA = MonteCarloCriteria()


def check_budget(name: str, value: int, limit: int) -> None:
    if value > limit:
        raise BudgetExceeded(f"{name} = {value} exceeds the budget of {limit}")


def worker_count() -> int:
    raw = os.environ.get(THREADS_ENV_VAR, "").strip()
    if not raw:
        return 1
    try:
        count = int(raw)
    except ValueError:
        return 1
    return max(1, min(count, os.cpu_count() or 1))
