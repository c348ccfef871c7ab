from decimal import Decimal
from pathlib import Path

import pytest

from dataset_reader import (
    DataError,
    iter_jsonl,
    parse_number,
    read_csv_column,
    read_jsonl_field,
    read_numeric,
)


def write(path: Path, content: str) -> Path:
    path.write_text(content, encoding="utf-8")
    return path


def test_parse_number() -> None:
    assert parse_number(" -2.5e3 ") == -2500
    assert parse_number("0.001") == Decimal("0.001")
    assert parse_number(".5") == Decimal("0.5")
    assert parse_number(3) == 3
    assert parse_number(0.25) == Decimal("0.25")
    assert parse_number("9" * 400) == 10**400 - 1
    assert parse_number(10**400) == Decimal(10**400)
    for cell in ("1,000", "12,5", "inf", "nan", "", "abc", "1e", "1e9999999999999999", True, None):
        assert parse_number(cell) is None
    assert parse_number(float("inf")) is None


def test_significands_of_huge_integers(tmp_path: Path) -> None:
    path = write(tmp_path / "data.csv", "x\n%d\n-%d\n0\n12\n" % (3 * 10**400, 7 * 10**500))
    column = read_csv_column(path, "x")
    assert list(column.significands) == [3.0, -7.0, 0.0, 1.2]
    assert list(column.values) == [float("inf"), float("-inf"), 0.0, 12.0]
    jsonl = write(tmp_path / "data.jsonl", '{"v": %d}\n{"v": 2.5e-400}\n' % (5 * 10**400))
    assert list(read_jsonl_field(jsonl, "v").significands) == [5.0, 2.5]


def test_read_csv_by_name_and_index(tmp_path: Path) -> None:
    path = write(tmp_path / "data.csv", "id,amount\n1,12.5\n2,-3\n3,1e3\n")
    column = read_csv_column(path, "amount")
    assert list(column.values) == [12.5, -3.0, 1000.0]
    assert column.n_rows == 3
    assert column.n_non_numeric == 0
    assert list(read_csv_column(path, "1").values) == list(column.values)


def test_read_csv_missing_column(tmp_path: Path) -> None:
    path = write(tmp_path / "data.csv", "id,amount\n1,12.5\n")
    with pytest.raises(DataError, match="no column 'total'"):
        read_csv_column(path, "total")


def test_read_csv_non_numeric(tmp_path: Path) -> None:
    path = write(tmp_path / "data.csv", "amount\n12.5\nabc\n1e3\n")
    with pytest.raises(DataError, match="tolerance"):
        read_csv_column(path, "amount")
    with pytest.warns(UserWarning, match="1 of 3 cells"):
        column = read_csv_column(path, "amount", lenient=True)
    assert list(column.values) == [12.5, 1000.0]
    assert column.non_numeric_fraction == pytest.approx(1 / 3)


def test_read_csv_tolerates_a_few_bad_cells(tmp_path: Path) -> None:
    rows = [str(i) for i in range(1, 20)] + ["n/a"]
    path = write(tmp_path / "data.csv", "x\n" + "\n".join(rows) + "\n")
    with pytest.warns(UserWarning):
        column = read_csv_column(path, "x")
    assert len(column.values) == 19
    assert column.n_non_numeric == 1


def test_read_csv_empty(tmp_path: Path) -> None:
    with pytest.raises(DataError):
        read_csv_column(write(tmp_path / "empty.csv", ""), "0")
    with pytest.raises(DataError, match="no rows"):
        read_csv_column(write(tmp_path / "header.csv", "x\n"), "x")


def test_read_csv_nothing_numeric(tmp_path: Path) -> None:
    path = write(tmp_path / "data.csv", "x\na\nb\n")
    with pytest.raises(DataError, match="no numeric value"), pytest.warns(UserWarning):
        read_csv_column(path, "x", lenient=True)


def test_iter_jsonl(tmp_path: Path) -> None:
    path = write(tmp_path / "data.jsonl", '{"value": 3}\n\n{"value": "4.5"}\n')
    assert list(iter_jsonl(path)) == [{"value": 3}, {"value": "4.5"}]
    with pytest.raises(DataError, match=":2:"):
        list(iter_jsonl(write(tmp_path / "bad.jsonl", '{"value": 3}\n{value\n')))
    with pytest.raises(DataError, match="JSON object"):
        list(iter_jsonl(write(tmp_path / "list.jsonl", "[1, 2]\n")))


def test_read_jsonl_field(tmp_path: Path) -> None:
    lines = ['{"value": %d}' % i for i in range(1, 20)] + ['{"value": true}']
    path = write(tmp_path / "data.jsonl", "\n".join(lines) + "\n")
    with pytest.warns(UserWarning):
        column = read_jsonl_field(path, "value")
    assert list(column.values) == [float(i) for i in range(1, 20)]
    # a missing key counts as non-numeric
    with pytest.raises(DataError):
        read_jsonl_field(path, "other")


def test_read_numeric_dispatch(tmp_path: Path) -> None:
    jsonl = write(tmp_path / "data.jsonl", '{"v": 1}\n{"v": 2}\n')
    csv = write(tmp_path / "data.csv", "v\n1\n2\n")
    assert list(read_numeric(jsonl, "v").values) == [1.0, 2.0]
    assert list(read_numeric(csv, "v").values) == [1.0, 2.0]
    txt = write(tmp_path / "data.txt", '{"v": 1}\n')
    assert list(read_numeric(txt, "v", fmt="jsonl").values) == [1.0]
    with pytest.raises(DataError, match="unknown format"):
        read_numeric(csv, "v", fmt="xlsx")
