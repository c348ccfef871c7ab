r"""
Benford's law toolkit: test datasets, query the digit law, generate and
classify sequences, and run seeded Monte Carlo experiments.

Test a column of a CSV file (by header name or 0-based index) or a field
of a JSON-lines file:

    python3 benford.py analyze invoices.csv --column amount
    python3 benford.py analyze data.jsonl --column value --output json

Non-numeric cells are counted; more than 10% of them aborts the run
(exit 2) unless --lenient is given.

Query the digit law:

    python3 benford.py law                      # first and second digit tables
    python3 benford.py law --tuple 3,1,4        # P(D1=3, D2=1, D3=4)
    python3 benford.py law --cdf 2.5            # P(S <= 2.5)
    python3 benford.py law --uniform 0,1        # distance of U(0,1) to Benford
    python3 benford.py law --normal 7,1,1       # P(D1=1) for N(7,1)

Sequences are written as power:2, power:10^(1/2), affine:a=2,b=1,x0=1,
alt-affine:a1=2,a2=5, poly-term:a=1,b=2, recurrence:c=[1,1],init=[1,1],
poly-iter:f=[1,0,1],x0=1, factorial, fib or primes:

    python3 benford.py generate --spec fib --n 5000 --values significands
    python3 benford.py classify --spec power:10^(1/2)

Run an experiment and write the per-step distances as CSV
(columns step, distance, samples, seed):

    python3 benford.py simulate powers --spec uniform:a=0,b=1 --n 20
    python3 benford.py simulate products --samples 1000000 --n 5
    python3 benford.py simulate product-with-benford --spec uniform:a=3,b=4
    python3 benford.py simulate scale-check --spec benford --n 10
    python3 benford.py simulate base-check --spec mixture:q=0.3 --n 5
    python3 benford.py simulate mixture --spec mixture:q=0.3
    python3 benford.py simulate randomized-iteration --maps mul:2 mul:3 --p1 0.5
    python3 benford.py simulate poly-random-start --poly [1,0,1] --trials 50
    python3 benford.py simulate combined --spec "1/2@benford|scale=2;1/2@benford|scale=3"
    python3 benford.py simulate walk --spec uniform:a=0,b=1 --n 1000

Laws are uniform:a=0,b=1, exp:rate=1, normal:mean=7,sd=1, benford,
atoms:values=[2,3],p=[1/2,1/2], const:c=1 and mixture:q=0.3, with optional
modifiers such as benford|scale=3|pow=2.

Walk through four common misconceptions and their numeric refutations:

    python3 benford.py demo

The seed defaults to 42 and is written with every simulated result.
Exit codes: 0 success, 1 usage or syntax error, 2 data error, 3 budget
exceeded. BENFORD_THREADS caps the worker processes of multi-trial runs.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import warnings
from argparse import Namespace
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd  # type: ignore

from benford_law import (
    DigitTupleQuery,
    UniformFamily,
    benford_cdf,
    digit_tuple_prob,
    exponential_benford_distance,
    first_digit_pmf,
    normal_digit_prob,
    second_digit_pmf,
    uniform_benford_distance,
)
from common_errors import run_all
from config import (
    DEFAULT_SEED,
    MAX_SAMPLES,
    MAX_SEQUENCE_TERMS,
    BudgetExceeded,
    check_budget,
)
from conformance import AnalyzeOptions, EmptySample, SampleTooSmall, analyze
from dataset_reader import DataError, read_numeric
from random_laws import MixtureLaw, RandomVariableSpec
from sequences import classify, generate
from significand import DomainError
from spec_parser import parse_law, parse_map, parse_measure, parse_polynomial, parse_sequence
from stochastic import (
    DistancePoint,
    DistanceSeries,
    TrialSummary,
    base_invariance_check,
    combined_sample,
    ks_to_benford_values,
    mixture_ks_to_benford,
    polynomial_iterate_random_start,
    power_sequence,
    product_sequence,
    product_with_benford,
    random_walk_distance_series,
    randomized_iteration_trials,
    scale_invariance_check,
)

logger = logging.getLogger("benford")

EXPERIMENTS = (
    "powers",
    "products",
    "product-with-benford",
    "scale-check",
    "base-check",
    "mixture",
    "randomized-iteration",
    "poly-random-start",
    "combined",
    "walk",
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_BUDGET = 3

# --spec and --n defaults per experiment
_EXPERIMENT_DEFAULTS: dict[str, tuple[str, int]] = {
    "powers": ("uniform:a=0,b=1", 20),
    "products": ("uniform:a=0,b=1", 10),
    "product-with-benford": ("uniform:a=3,b=4", 1),
    "scale-check": ("benford", 10),
    "base-check": ("mixture:q=0.3", 5),
    "mixture": ("mixture:q=0.3", 1),
    "randomized-iteration": ("uniform:a=1,b=10", 10**4),
    "poly-random-start": ("uniform:a=1,b=10", 10**4),
    "combined": ("1/2@benford|scale=2;1/2@benford|scale=3", 10),
    "walk": ("uniform:a=0,b=1", 1000),
}


@dataclass
class RunConfig:
    command: str
    spec: str | None = None
    input_path: Path | None = None
    column: str = "0"
    fmt: str | None = None
    seed: int = DEFAULT_SEED
    n: int | None = None
    trials: int = 50
    samples: int = 10**5
    output: str = "text"
    output_file: Path | None = None
    lenient: bool = False
    digit_pairs: bool = False
    values: str = "fractions"
    experiment: str | None = None
    digit_tuple: tuple[int, ...] | None = None
    cdf: float | None = None
    uniform: tuple[float, float] | None = None
    normal: tuple[float, float, float] | None = None
    exponential: float | None = None
    maps: tuple[str, str] = ("mul:2", "mul:3")
    p1: float = 0.5
    poly: str = "[1,0,1]"
    region_start: float | None = None


def _emit(text: str, config: RunConfig, out: TextIO) -> None:
    if config.output_file is not None:
        with open(config.output_file, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        out.write(text)


def _emit_frame(df: pd.DataFrame, config: RunConfig, out: TextIO) -> None:
    if config.output == "csv":
        _emit(df.to_csv(index=False, lineterminator="\n"), config, out)
    elif config.output == "json":
        _emit(df.to_json(orient="records") + "\n", config, out)
    else:
        _emit(df.to_string(index=False) + "\n", config, out)


# analyze


def run_analyze(config: RunConfig, out: TextIO) -> None:
    if config.input_path is None:
        raise DataError("analyze needs an input file")
    column = read_numeric(config.input_path, config.column, config.fmt, config.lenient)
    logger.info(
        "read %d rows from %s, %d non-numeric",
        column.n_rows,
        config.input_path,
        column.n_non_numeric,
    )
    report = analyze(
        column.significands, AnalyzeOptions(digit_pairs=config.digit_pairs), reduced=True
    )
    if config.output == "json":
        data = report.as_dict()
        data["n_rows"] = column.n_rows
        data["n_non_numeric"] = column.n_non_numeric
        _emit(json.dumps(data, separators=(",", ":")) + "\n", config, out)
    elif config.output == "csv":
        _emit_frame(report.digit_table(), config, out)
    else:
        header = f"rows: {column.n_rows} (non-numeric: {column.n_non_numeric})\n"
        _emit(header + report.to_text() + "\n", config, out)


# law


def _law_values(config: RunConfig) -> dict[str, float]:
    values: dict[str, float] = dict()
    if config.digit_tuple is not None:
        values["tuple"] = digit_tuple_prob(DigitTupleQuery.of(*config.digit_tuple))
    if config.cdf is not None:
        values["cdf"] = benford_cdf(config.cdf)
    if config.uniform is not None:
        values["uniform_distance"] = uniform_benford_distance(UniformFamily(*config.uniform))
    if config.normal is not None:
        mean, sd, d = config.normal
        values["normal_digit_prob"] = normal_digit_prob(mean, sd, int(d))
    if config.exponential is not None:
        values["exponential_distance"] = exponential_benford_distance(config.exponential)
    return values


def run_law(config: RunConfig, out: TextIO) -> None:
    values = _law_values(config)
    if not values:
        df = pd.DataFrame(
            {
                "digit": range(10),
                "first_digit": [np.nan] + [first_digit_pmf(d) for d in range(1, 10)],
                "second_digit": [second_digit_pmf(d) for d in range(10)],
            }
        )
        if config.output == "text":
            _emit(df.to_string(index=False, na_rep="", float_format=lambda x: f"{x:.6f}") + "\n", config, out)
        else:
            _emit_frame(df, config, out)
        return
    if config.output == "json":
        _emit(json.dumps(values, separators=(",", ":")) + "\n", config, out)
    elif len(values) == 1:
        _emit(f"{next(iter(values.values())):.6f}\n", config, out)
    else:
        _emit("".join(f"{key}: {value:.6f}\n" for key, value in values.items()), config, out)


# sequences


def _require_spec(config: RunConfig) -> str:
    if not config.spec:
        raise SyntaxError(f"{config.command} needs --spec")
    return config.spec


def run_generate(config: RunConfig, out: TextIO) -> None:
    spec = parse_sequence(_require_spec(config))
    n = config.n if config.n is not None else 1000
    check_budget("n", n, MAX_SEQUENCE_TERMS)
    sequence = generate(spec, n)
    values = sequence.significands if config.values == "significands" else sequence.values
    df = pd.DataFrame({"n": np.arange(1, n + 1), config.values[:-1]: values})
    if config.output == "text":
        _emit("".join(f"{v!r}\n" for v in values.tolist()), config, out)
    else:
        _emit_frame(df, config, out)


def run_classify(config: RunConfig, out: TextIO) -> None:
    c = classify(parse_sequence(_require_spec(config)))
    if config.output == "json":
        data = {"verdict": c.verdict.value, "rule": c.rule, "note": c.note}
        _emit(json.dumps(data, separators=(",", ":")) + "\n", config, out)
    else:
        _emit(f"{c}\nrule: {c.rule}\n", config, out)


# simulate


def _continuous_law(text: str) -> RandomVariableSpec:
    law = parse_law(text)
    if isinstance(law, MixtureLaw):
        raise SyntaxError(f"a random variable is required, not a mixture: '{text}'")
    return law


def _trial_series(summary: TrialSummary, n: int, seed: int) -> DistanceSeries:
    logger.info(
        "%.1f%% of %d trials below %g",
        100 * summary.fraction,
        summary.trials,
        summary.criteria.discrepancy_threshold,
    )
    return DistanceSeries(
        [DistancePoint(i + 1, d, n, seed) for i, d in enumerate(summary.discrepancies)]
    )


def _simulate(config: RunConfig, experiment: str) -> DistanceSeries:
    default_spec, default_n = _EXPERIMENT_DEFAULTS[experiment]
    spec = config.spec or default_spec
    n = config.n if config.n is not None else default_n
    seed = config.seed
    samples = config.samples
    check_budget("samples", samples, MAX_SAMPLES)
    check_budget("trials", config.trials, MAX_SAMPLES)
    if experiment == "powers":
        return power_sequence(_continuous_law(spec), n, samples, seed)
    if experiment == "products":
        return product_sequence(_continuous_law(spec), n, samples, seed)
    if experiment == "product-with-benford":
        distance = product_with_benford(_continuous_law(spec), samples, seed)
        return DistanceSeries([DistancePoint(1, distance, samples, seed)])
    if experiment == "scale-check":
        law = _continuous_law(spec)
        points = []
        for factor in range(2, n + 1):
            check = scale_invariance_check(law, float(factor), samples, seed)
            points.append(DistancePoint(factor, check.distance, samples, seed))
        return DistanceSeries(points)
    if experiment == "base-check":
        law = parse_law(spec)
        return DistanceSeries(
            [
                DistancePoint(k, base_invariance_check(law, k, samples, seed), samples, seed)
                for k in range(2, n + 1)
            ]
        )
    if experiment == "mixture":
        law = parse_law(spec)
        if not isinstance(law, MixtureLaw):
            raise SyntaxError(f"mixture needs a mixture:q=... spec, got '{spec}'")
        return DistanceSeries(
            [DistancePoint(1, mixture_ks_to_benford(law.q, samples, seed), samples, seed)]
        )
    if experiment == "randomized-iteration":
        f1, f2 = (parse_map(m) for m in config.maps)
        summary = randomized_iteration_trials(
            f1, f2, config.p1, _continuous_law(spec), n, config.trials, seed
        )
        return _trial_series(summary, n, seed)
    if experiment == "poly-random-start":
        summary = polynomial_iterate_random_start(
            parse_polynomial(config.poly),
            _continuous_law(spec),
            n,
            config.trials,
            seed,
            region_start=config.region_start,
        )
        return _trial_series(summary, n, seed)
    if experiment == "combined":
        measure = parse_measure(spec)
        batch = combined_sample(measure, n, config.trials, seed)
        series = DistanceSeries()
        for k in sorted({max(1, round(config.trials * i / 10)) for i in range(1, 11)}):
            series.points.append(
                DistancePoint(k, ks_to_benford_values(batch.values[: k * n]), k * n, seed)
            )
        return series
    if experiment == "walk":
        return random_walk_distance_series(_continuous_law(spec), n, samples, seed)
    raise SyntaxError(f"unknown experiment '{experiment}'")


def run_simulate(config: RunConfig, out: TextIO) -> None:
    experiment = config.experiment
    if experiment is None or experiment not in EXPERIMENTS:
        raise SyntaxError(f"unknown experiment '{experiment}' (choose from {', '.join(EXPERIMENTS)})")
    logger.info("Doing %s with seed %d", experiment, config.seed)
    series = _simulate(config, experiment)
    _emit_frame(series.to_frame(), config, out)


# demo


def run_demo(config: RunConfig, out: TextIO) -> None:
    results = run_all(config.seed)
    if config.output == "json":
        data = {"seed": config.seed, "demos": [asdict(r) for r in results]}
        _emit(json.dumps(data, separators=(",", ":")) + "\n", config, out)
    else:
        text = f"seed: {config.seed}\n\n" + "\n\n".join(r.to_text() for r in results)
        _emit(text + "\n", config, out)


def run(config: RunConfig, out: TextIO | None = None) -> int:
    """Run one command and return its exit code."""
    out = out if out is not None else sys.stdout
    commands = {
        "analyze": run_analyze,
        "law": run_law,
        "generate": run_generate,
        "classify": run_classify,
        "simulate": run_simulate,
        "demo": run_demo,
    }
    try:
        if config.command not in commands:
            raise SyntaxError(f"unknown command '{config.command}'")
        commands[config.command](config, out)
    except SyntaxError as e:
        logger.error("%s", e.msg)
        return EXIT_USAGE
    except BudgetExceeded as e:
        logger.error("budget exceeded: %s", e)
        return EXIT_BUDGET
    except (DataError, EmptySample, SampleTooSmall, OSError) as e:
        logger.error("%s", e)
        return EXIT_DATA
    except DomainError as e:
        logger.error("%s", e)
        return EXIT_USAGE
    return EXIT_OK


class ArgumentParser(argparse.ArgumentParser):
    """Usage errors exit with 1."""

    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _int_tuple(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers separated by commas: '{text}'")


def _float_tuple(size: int) -> Any:
    def parse(text: str) -> tuple[float, ...]:
        try:
            values = tuple(float(x) for x in text.split(","))
        except ValueError:
            values = ()
        if len(values) != size:
            raise argparse.ArgumentTypeError(f"expected {size} numbers separated by commas: '{text}'")
        return values

    return parse


def parse_args(argv: list[str] | None = None) -> Namespace:
    parser = ArgumentParser(
        prog="benford",
        description=__doc__,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--verbose", "-v", action="store_true", help="log progress")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    def common(p: argparse.ArgumentParser, outputs: tuple[str, ...]) -> None:
        p.add_argument("--output", choices=outputs, default=outputs[0], help="output format")
        p.add_argument("--output-file", "-o", dest="output_file", default=None, help="write here instead of stdout")
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"random seed, def {DEFAULT_SEED}")

    p = sub.add_parser("analyze", help="Benford conformance of a numeric column")
    p.add_argument("input_path", help="CSV or JSON-lines file")
    p.add_argument("--column", default="0", help="header name, index or JSON key, def 0")
    p.add_argument("--format", dest="fmt", choices=("csv", "jsonl"), default=None, help="def: from the file extension")
    p.add_argument("--lenient", action="store_true", help="tolerate any share of non-numeric cells")
    p.add_argument("--digit-pairs", dest="digit_pairs", action="store_true", help="add the first-two-digit table")
    common(p, ("text", "json", "csv"))

    p = sub.add_parser("law", help="digit law queries")
    p.add_argument("--tuple", dest="digit_tuple", type=_int_tuple, default=None, help="digits d1,d2,...")
    p.add_argument("--cdf", type=float, default=None, help="P(S <= t)")
    p.add_argument("--uniform", type=_float_tuple(2), default=None, help="a,b")
    p.add_argument("--normal", type=_float_tuple(3), default=None, help="mean,sd,digit")
    p.add_argument("--exponential", type=float, default=None, help="rate")
    common(p, ("text", "json", "csv"))

    p = sub.add_parser("generate", help="fractional parts of log10 of a sequence")
    p.add_argument("--spec", required=True, help="sequence spec")
    p.add_argument("--n", type=int, default=None, help="number of terms, def 1000")
    p.add_argument("--values", choices=("fractions", "significands"), default="fractions")
    common(p, ("csv", "text", "json"))

    p = sub.add_parser("classify", help="is a sequence Benford?")
    p.add_argument("--spec", required=True, help="sequence spec")
    common(p, ("text", "json"))

    p = sub.add_parser("simulate", help="seeded Monte Carlo experiments")
    p.add_argument("experiment", choices=EXPERIMENTS)
    p.add_argument("--spec", default=None, help="law or random measure spec")
    p.add_argument("--n", type=int, default=None, help="steps, path length or factor range")
    p.add_argument("--samples", type=int, default=10**5, help="samples per step, def 100000")
    p.add_argument("--trials", type=int, default=50, help="trials or drawn measures, def 50")
    p.add_argument("--maps", nargs=2, default=("mul:2", "mul:3"), help="two maps, def mul:2 mul:3")
    p.add_argument("--p1", type=float, default=0.5, help="probability of the first map")
    p.add_argument("--poly", default="[1,0,1]", help="coefficients, low to high")
    p.add_argument("--region-start", dest="region_start", type=float, default=None)
    common(p, ("csv", "json"))

    p = sub.add_parser("demo", help="four common misconceptions, refuted")
    common(p, ("text", "json"))

    return parser.parse_args(argv)


def config_from_args(args: Namespace) -> RunConfig:
    config = RunConfig(command=args.command, seed=args.seed, output=args.output)
    if args.output_file:
        config.output_file = Path(args.output_file)
    for key in (
        "spec",
        "column",
        "fmt",
        "n",
        "trials",
        "samples",
        "lenient",
        "digit_pairs",
        "values",
        "experiment",
        "digit_tuple",
        "cdf",
        "uniform",
        "normal",
        "exponential",
        "p1",
        "poly",
        "region_start",
    ):
        if hasattr(args, key):
            setattr(config, key, getattr(args, key))
    if getattr(args, "input_path", None):
        config.input_path = Path(args.input_path)
    if hasattr(args, "maps"):
        config.maps = tuple(args.maps)  # type: ignore[assignment]
    return config


def main() -> None:
    args = parse_args()
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(name)s: %(levelname)s: %(message)s",
    )
    logging.captureWarnings(True)
    warnings.simplefilter("default")
    config = config_from_args(args)
    logger.info("seed: %d", config.seed)
    sys.exit(run(config))


if __name__ == "__main__":
    main()
