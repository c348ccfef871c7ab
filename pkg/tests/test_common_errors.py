from common_errors import (
    DemoResult,
    exponential_sequences,
    no_simple_explanation,
    order_of_magnitude,
    spread_and_regularity,
)


def findings(result: DemoResult) -> dict[str, str]:
    return dict(result.findings)


def test_demo_result_text() -> None:
    result = DemoResult("a claim")
    result.add("short", "1")
    result.add("longer label", "2")
    result.conclusion = "refuted"
    assert result.to_text() == "\n".join(
        [
            "Claim: a claim",
            "  short         1",
            "  longer label  2",
            "  => refuted",
        ]
    )


def test_order_of_magnitude() -> None:
    result = order_of_magnitude(samples=10**4, seed=1)
    found = findings(result)
    assert found["range of values"].startswith("[1.")
    assert float(found["KS distance to Benford"]) < 0.03
    assert "single decade" in result.conclusion


def test_exponential_sequences() -> None:
    result = exponential_sequences(n=1000, paths=1000, steps=100, seed=1)
    found = findings(result)
    assert found["2**n"].startswith("Benford")
    assert found["10**(n/2)"].startswith("NotBenford")
    assert found["first digits of 10**(n/2)"] == "[1, 3]"
    assert found["10**(n/100)"].startswith("NotBenford")
    assert "111111/199999" in found["n a, n <= 199999"]
    assert sum(label.startswith("random base") for label in found) == 3
    assert found["sums of 100 uniform steps"].startswith("P(D1=1) = 0.0000")


def test_spread_and_regularity() -> None:
    found = findings(spread_and_regularity(grid=10))
    assert found["U(0, 1)"] == "distance 0.26886"
    assert found["N(7, 1**2)"] == found["N(700, 100**2)"]
    nonnegative = float(found["any U(a, b), 0 <= a, 10x10 grid"].split()[-1])
    assert nonnegative > 0.13
    mixed = float(found["any U(a, b), a < 0 < b, 10x10 grid"].split()[-1])
    assert mixed > 0.07


def test_no_simple_explanation() -> None:
    result = no_simple_explanation(n=100)
    found = findings(result)
    assert found["x -> x**2 + 1 from 1"].endswith("Unknown")
    assert "open problem" in result.conclusion
