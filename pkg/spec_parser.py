"""Parse the command-line syntax for sequences, random laws and maps.

Sequences:
    power:2   power:3/2   power:10^(1/2)
    affine:a=2,b=1,x0=1
    alt-affine:a1=2,b1=0,a2=3,b2=0,x0=1
    poly-term:a=1,b=2
    recurrence:c=[1,1],init=[1,1]
    poly-iter:f=[1,0,1],x0=1      (coefficients low to high)
    factorial   fib   primes

Random laws, optionally followed by modifiers:
    uniform:a=0,b=1   exp:rate=1   normal:mean=7,sd=1   benford
    atoms:values=[2,3],p=[1/2,1/2]   const:c=1   mixture:q=0.3
    benford|scale=3|pow=-1

Random measures:  1/3@uniform:a=0,b=1; 2/3@exp:rate=1
Maps:             mul:2   pow:1/2   affine:a=2,b=1

Malformed input raises SyntaxError.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Callable

from random_laws import (
    BenfordExact,
    DiscreteAtoms,
    Exponential,
    MixtureLaw,
    Normal,
    PowerOf,
    RandomMeasureSpec,
    RandomVariableSpec,
    Scaled,
    Uniform,
)
from sequences import (
    AffineIterate,
    AlternatingAffine,
    ExactBase,
    Factorial,
    LinearRecurrence,
    PolynomialIterate,
    PolynomialTerm,
    Power,
    Primes,
    Rational,
    SequenceSpec,
    TenPower,
    fibonacci,
)
from significand import DomainError
from stochastic import AffineMap, MapSpec, Multiply, PowerMap

NUMBER = r"[-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?(?:/\d+)?"
HEAD_PATTERN = re.compile(r"\s*([a-z][a-z0-9-]*)\s*(?::|$)")
PARAM_PATTERN = re.compile(r"\s*(\w+)\s*=\s*(\[[^\]]*\]|[^,\]\[]+?)\s*(,|$)")
NUMBER_PATTERN = re.compile(NUMBER)
TEN_POWER_PATTERN = re.compile(r"10\^(?:\((-?\d+)(?:/(-?\d+))?\)|(-?\d+))")


def _fail(content: str, pos: int) -> SyntaxError:
    return SyntaxError("can't understand '%s' near %d" % (content, pos))


class SpecParser:
    """Parse one spec string."""

    def __init__(self, content: str):
        self.content = content.strip()

    def head(self) -> tuple[str, str]:
        """The spec name and the raw text of its parameters."""
        m = HEAD_PATTERN.match(self.content)
        if not m:
            raise _fail(self.content, 0)
        return m.group(1), self.content[len(m.group(0)) :]

    def params(self, text: str, allowed: set[str]) -> dict[str, str]:
        params: dict[str, str] = dict()
        pos = 0
        offset = len(self.content) - len(text)
        while pos < len(text):
            m = PARAM_PATTERN.match(text, pos)
            if not m or m.group(1) not in allowed or m.group(1) in params:
                raise _fail(self.content, offset + pos)
            params[m.group(1)] = m.group(2)
            pos += len(m.group(0))
            if m.group(3) == "" and pos < len(text):
                raise _fail(self.content, offset + pos)
        return params

    def number(self, text: str) -> Fraction:
        if not NUMBER_PATTERN.fullmatch(text.strip()):
            raise _fail(self.content, self.content.find(text))
        try:
            return Fraction(text.strip())
        except (ValueError, ZeroDivisionError):
            raise _fail(self.content, self.content.find(text))

    def number_list(self, text: str) -> tuple[Fraction, ...]:
        text = text.strip()
        if not (text.startswith("[") and text.endswith("]")):
            raise _fail(self.content, self.content.find(text))
        inner = text[1:-1].strip()
        if not inner:
            raise _fail(self.content, self.content.find(text))
        return tuple(self.number(item) for item in inner.split(","))

    def base(self, text: str) -> ExactBase:
        text = text.strip()
        if m := TEN_POWER_PATTERN.fullmatch(text):
            if m.group(3) is not None:
                return TenPower(int(m.group(3)), 1)
            return TenPower(int(m.group(1)), int(m.group(2) or 1))
        value = self.number(text)
        return Rational(value.numerator, value.denominator)

    def _required(self, params: dict[str, str], key: str) -> str:
        if key not in params:
            raise SyntaxError("missing '%s' in '%s'" % (key, self.content))
        return params[key]

    def _optional(self, params: dict[str, str], key: str, default: str) -> Fraction:
        return self.number(params.get(key, default))

    def parse_sequence(self) -> SequenceSpec:
        name, rest = self.head()
        if name in ("factorial", "fib", "primes"):
            if rest.strip():
                raise _fail(self.content, len(self.content) - len(rest))
            return {"factorial": Factorial, "fib": fibonacci, "primes": Primes}[name]()
        if name == "power":
            return Power(self.base(rest))
        if name == "affine":
            p = self.params(rest, {"a", "b", "x0"})
            return AffineIterate(
                self.base(self._required(p, "a")),
                self._optional(p, "b", "0"),
                self._optional(p, "x0", "1"),
            )
        if name == "alt-affine":
            p = self.params(rest, {"a1", "b1", "a2", "b2", "x0"})
            return AlternatingAffine(
                self.base(self._required(p, "a1")),
                self.base(self._required(p, "a2")),
                self._optional(p, "b1", "0"),
                self._optional(p, "b2", "0"),
                self._optional(p, "x0", "1"),
            )
        if name == "poly-term":
            p = self.params(rest, {"a", "b"})
            return PolynomialTerm(self._optional(p, "a", "1"), self.number(self._required(p, "b")))
        if name == "recurrence":
            p = self.params(rest, {"c", "init"})
            return LinearRecurrence(
                self.number_list(self._required(p, "c")),
                self.number_list(self._required(p, "init")),
            )
        if name == "poly-iter":
            p = self.params(rest, {"f", "x0"})
            return PolynomialIterate(
                self.number_list(self._required(p, "f")), self._optional(p, "x0", "1")
            )
        raise SyntaxError("unknown sequence '%s'" % name)

    def parse_law(self) -> RandomVariableSpec | MixtureLaw:
        base, *modifiers = self.content.split("|")
        law = SpecParser(base).parse_simple_law()
        for modifier in modifiers:
            p = self.params(modifier, {"scale", "pow"})
            if isinstance(law, MixtureLaw) or len(p) != 1:
                raise _fail(self.content, self.content.find(modifier))
            if "scale" in p:
                law = Scaled(law, float(self.number(p["scale"])))
            else:
                k = self.number(p["pow"])
                if k.denominator != 1:
                    raise _fail(self.content, self.content.find(modifier))
                law = PowerOf(law, int(k))
        return law

    def parse_simple_law(self) -> RandomVariableSpec | MixtureLaw:
        name, rest = self.head()
        simple: dict[str, tuple[set[str], Callable[[dict[str, str]], RandomVariableSpec]]] = {
            "uniform": ({"a", "b"}, lambda p: Uniform(self._float(p, "a"), self._float(p, "b"))),
            "exp": ({"rate"}, lambda p: Exponential(self._float(p, "rate"))),
            "normal": ({"mean", "sd"}, lambda p: Normal(self._float(p, "mean"), self._float(p, "sd"))),
            "const": ({"c"}, lambda p: DiscreteAtoms.constant(self._float(p, "c"))),
            "atoms": (
                {"values", "p"},
                lambda p: DiscreteAtoms(
                    tuple(float(v) for v in self.number_list(self._required(p, "values"))),
                    tuple(float(v) for v in self.number_list(self._required(p, "p"))),
                ),
            ),
        }
        if name == "benford":
            if rest.strip():
                raise _fail(self.content, len(self.content) - len(rest))
            return BenfordExact()
        if name == "mixture":
            return MixtureLaw(self._float(self.params(rest, {"q"}), "q"))
        if name not in simple:
            raise SyntaxError("unknown law '%s'" % name)
        allowed, build = simple[name]
        return build(self.params(rest, allowed))

    def _float(self, params: dict[str, str], key: str) -> float:
        return float(self.number(self._required(params, key)))

    def parse_measure(self) -> RandomMeasureSpec:
        components = []
        for part in self.content.split(";"):
            if "@" not in part:
                raise _fail(self.content, self.content.find(part))
            weight, law_text = part.split("@", 1)
            law = SpecParser(law_text).parse_law()
            if isinstance(law, MixtureLaw):
                raise _fail(self.content, self.content.find(law_text))
            components.append((float(self.number(weight)), law))
        return RandomMeasureSpec(tuple(components))

    def parse_map(self) -> MapSpec:
        name, rest = self.head()
        if name == "mul":
            return Multiply(self.number(rest))
        if name == "pow":
            return PowerMap(self.number(rest))
        if name == "affine":
            p = self.params(rest, {"a", "b"})
            return AffineMap(self.number(self._required(p, "a")), self._optional(p, "b", "0"))
        raise SyntaxError("unknown map '%s'" % name)


def _wrap(fn: Callable[[], object], content: str) -> object:
    try:
        return fn()
    except DomainError as e:
        raise SyntaxError("invalid parameters in '%s': %s" % (content, e))


def parse_sequence(content: str) -> SequenceSpec:
    return _wrap(SpecParser(content).parse_sequence, content)  # type: ignore[return-value]


def parse_law(content: str) -> RandomVariableSpec | MixtureLaw:
    return _wrap(SpecParser(content).parse_law, content)  # type: ignore[return-value]


def parse_measure(content: str) -> RandomMeasureSpec:
    return _wrap(SpecParser(content).parse_measure, content)  # type: ignore[return-value]


def parse_map(content: str) -> MapSpec:
    return _wrap(SpecParser(content).parse_map, content)  # type: ignore[return-value]


def parse_polynomial(content: str) -> tuple[Fraction, ...]:
    """[c0,c1,...], low to high."""
    return SpecParser(content).number_list(content)
