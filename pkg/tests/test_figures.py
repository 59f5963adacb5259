import math
from pathlib import Path

import pytest

from nondefect.figures import (
    COLUMNS,
    emit_plot,
    figure_fatpoints,
    figure_froberg,
    read_csv,
    rows_to_csv,
    split_alpha,
)
from fractions import Fraction

GOLDEN = Path(__file__).parent / "golden"


def linear_scan(n, ranks, ambient, fraction, chain):
    """Largest r by walking r = 0, 1, 2, ... (independent of the bisection)."""
    best = None
    r = 0
    while True:
        a1 = math.floor(Fraction(fraction) * r)
        alpha = (a1, r - a1)
        if chain:
            ok = all(
                sum(a * N for a, N in zip(alpha[: i + 1], ranks[: i + 1])) + ranks[0] * (ranks[i] - 1) < ambient
                for i in range(2)
            )
        else:
            ok = alpha[0] * ranks[0] + alpha[1] * ranks[1] < ambient
        if not ok:
            return best
        best = r
        r += 1


@pytest.mark.parametrize("n", [10, 11, 15])
def test_froberg_rows_match_linear_scan(n):
    (row,) = figure_froberg(n, n)
    ranks = [math.comb(n + 1, 2), n]  # N_2, N_1 for d = (5, 6), shift 1
    ambient = math.comb(n + 6, 7)
    assert row.r_blue == linear_scan(n, ranks, ambient, "0.2", chain=False)
    assert row.r_orange == linear_scan(n, ranks, ambient, "0.2", chain=True)


@pytest.mark.parametrize("n", [4, 10, 12])
def test_fatpoint_rows_match_linear_scan(n):
    (row,) = figure_fatpoints(n, n)
    ranks = [math.comb(n + 2, 3), math.comb(n + 1, 2)]
    ambient = math.comb(n + 8, 9)
    assert row.r_blue == linear_scan(n, ranks, ambient, "0.3", chain=False)
    assert row.r_orange == linear_scan(n, ranks, ambient, "0.3", chain=True)


def test_split_alpha():
    assert split_alpha(10, Fraction(1, 5)) == (2, 8)
    assert split_alpha(9, Fraction(3, 10)) == (2, 7)


def test_csv_contract():
    text = rows_to_csv(figure_froberg(10, 12))
    lines = text.split("\n")
    assert lines[0] == ",".join(COLUMNS)
    assert "\r" not in text and text.endswith("\n")
    assert [ln.split(",")[0] for ln in lines[1:-1]] == ["10", "11", "12"]


@pytest.mark.parametrize(
    "name,make",
    [
        ("figure_froberg.csv", lambda: figure_froberg(10, 200)),
        ("figure_fatpoints.csv", lambda: figure_fatpoints(2, 200)),
    ],
)
def test_golden(name, make):
    assert rows_to_csv(make()) == (GOLDEN / name).read_text(encoding="utf-8")


def test_froberg_shift_changes_output():
    assert figure_froberg(10, 10, shift=2)[0].r_blue != figure_froberg(10, 10)[0].r_blue


def test_sweep_argument_errors():
    with pytest.raises(ValueError):
        figure_froberg(1, 5)
    with pytest.raises(ValueError):
        figure_froberg(5, 4)
    with pytest.raises(ValueError):
        figure_fatpoints(3, 5, multiplicities=(3, 3))
    with pytest.raises(ValueError):
        figure_froberg(3, 5, fraction=1.5)


def test_read_csv_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError):
        read_csv(empty)
    header_only = tmp_path / "header.csv"
    header_only.write_text("n,r_blue,r_orange,ratio\n")
    with pytest.raises(ValueError):
        read_csv(header_only)
    wrong = tmp_path / "wrong.csv"
    wrong.write_text("n,r_blue\n1,2\n")
    with pytest.raises(ValueError):
        read_csv(wrong)


def test_emit_plot(tmp_path):
    pytest.importorskip("matplotlib")
    csv_path = tmp_path / "f.csv"
    csv_path.write_text(rows_to_csv(figure_froberg(10, 40)))
    a = emit_plot(csv_path, tmp_path / "a.svg").read_bytes()
    b = emit_plot(csv_path, tmp_path / "b.svg").read_bytes()
    assert a.startswith(b"<?xml") and b"<svg" in a
    assert a == b


def test_emit_plot_single_row(tmp_path):
    pytest.importorskip("matplotlib")
    csv_path = tmp_path / "one.csv"
    csv_path.write_text(rows_to_csv(figure_fatpoints(12, 12)))
    assert emit_plot(csv_path, tmp_path / "one.svg").stat().st_size > 0


def test_emit_plot_empty_csv(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(ValueError):
        emit_plot(empty, tmp_path / "x.svg")
