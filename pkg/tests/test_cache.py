from fractions import Fraction
from pathlib import Path

import pytest

from qlerch.appell import CoeffTable, coefficient_table, phi_mock
from qlerch.cache import CacheFormatError, read_table, write_table
from qlerch.ring_series import INTEGER, RATIONAL, modular


def write_phi_table(path: Path, count: int = 30) -> CoeffTable:
    table = coefficient_table("phiMock", phi_mock(count), count)
    write_table(path, table)
    return table


def test_written_table_reads_back(tmp_path: Path):
    path = tmp_path / "tables" / "phi.coeffs"
    table = write_phi_table(path)
    loaded = read_table(path, label="phiMock", ring=INTEGER)
    assert loaded == table
    assert path.read_text(encoding="utf-8").splitlines()[:2] == ["# qlerch-coefficients", "format-version: 1"]


def test_rational_values_survive(tmp_path: Path):
    path = tmp_path / "rat.coeffs"
    write_table(path, CoeffTable("A", RATIONAL, [Fraction(1, 2), Fraction(-3, 4), Fraction(2)]))
    assert read_table(path).values == [Fraction(1, 2), Fraction(-3, 4), Fraction(2)]


def test_no_temporary_files_are_left_behind(tmp_path: Path):
    write_phi_table(tmp_path / "phi.coeffs")
    assert [p.name for p in tmp_path.iterdir()] == ["phi.coeffs"]


def test_ring_mismatch_is_rejected(tmp_path: Path):
    path = tmp_path / "phi.coeffs"
    write_phi_table(path)
    with pytest.raises(CacheFormatError, match="cache_ring_mismatch:int"):
        read_table(path, ring=modular(5))


def test_label_mismatch_is_rejected(tmp_path: Path):
    path = tmp_path / "phi.coeffs"
    write_phi_table(path)
    with pytest.raises(CacheFormatError, match="cache_label_mismatch:phiMock"):
        read_table(path, label="rho")


@pytest.mark.parametrize(
    "mutate, code",
    [
        (lambda lines: ["# something else"] + lines[1:], "cache_magic_missing"),
        (
            lambda lines: [line.replace("format-version: 1", "format-version: 2") for line in lines],
            "cache_version_mismatch:2",
        ),
        (lambda lines: [line for line in lines if line != "---"], "cache_separator_missing"),
        (lambda lines: [line for line in lines if not line.startswith("ring:")], "cache_header_missing:ring"),
        (lambda lines: lines[:-1], "cache_count_mismatch"),
        (lambda lines: lines[:-1] + ["x"], "cache_value_invalid:x"),
    ],
)
def test_corrupt_files_are_rejected(tmp_path: Path, mutate, code: str):
    path = tmp_path / "phi.coeffs"
    write_phi_table(path, count=5)
    lines = path.read_text(encoding="utf-8").splitlines()
    path.write_text("\n".join(mutate(lines)) + "\n", encoding="utf-8")
    with pytest.raises(CacheFormatError, match=code):
        read_table(path)
