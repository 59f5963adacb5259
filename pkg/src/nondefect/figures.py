"""Bound sweeps over the number of variables, CSV output and optional SVG plots.

For each ``n`` the sweep reports

* ``r_blue``: the largest ``r`` whose expected span dimension stays strictly
  below the ambient dimension (the expected-dimension "not filling" range);
* ``r_orange``: the largest ``r`` for which the nondefectivity inequality
  chain holds, empty when it fails already at ``r = 0``;
* ``ratio = r_orange / r_blue``.

Points are split between two components as ``alpha_1 = floor(fraction * r)``
and ``alpha_2 = r - alpha_1``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Sequence

from .bounds import fatpoint_ranks, froberg_ranks, nondefective_chain
from .fieldcore import forms_dim

COLUMNS = ("n", "r_blue", "r_orange", "ratio")


@dataclass(frozen=True)
class SweepRow:
    n: int
    r_blue: int
    r_orange: int | None

    @property
    def ratio(self) -> Fraction | None:
        if self.r_orange is None or self.r_blue == 0:
            return None
        return Fraction(self.r_orange, self.r_blue)

    def cells(self) -> list[str]:
        ratio = self.ratio
        return [
            str(self.n),
            str(self.r_blue),
            "" if self.r_orange is None else str(self.r_orange),
            "" if ratio is None else f"{float(ratio):.6f}",
        ]


def split_alpha(r: int, fraction: Fraction) -> tuple[int, int]:
    a1 = math.floor(fraction * r)
    return a1, r - a1


def _max_true(pred: Callable[[int], bool]) -> int | None:
    """Largest ``r >= 0`` with ``pred(r)`` for a predicate that is true then false."""
    if not pred(0):
        return None
    hi = 1
    while pred(hi):
        hi *= 2
    lo = hi // 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def sweep_point(n: int, ranks: Sequence[int], ambient: int, fraction: Fraction) -> SweepRow:
    def blue(r: int) -> bool:
        a1, a2 = split_alpha(r, fraction)
        return a1 * ranks[0] + a2 * ranks[1] < ambient

    def orange(r: int) -> bool:
        return all(q.holds for q in nondefective_chain(ranks, ambient, split_alpha(r, fraction)))

    r_blue = _max_true(blue)
    assert r_blue is not None
    return SweepRow(n, r_blue, _max_true(orange))


def _fraction(x) -> Fraction:
    f = Fraction(str(x))
    if not 0 <= f <= 1:
        raise ValueError(f"fraction must lie in [0, 1], got {x}")
    return f


def figure_froberg(
    n_min: int, n_max: int, d1: int = 5, d2: int = 6, fraction=0.2, shift: int = 1
) -> list[SweepRow]:
    """Forms of degrees ``d1 < d2``, a ``fraction`` of them of degree ``d1``, in degree ``d2 + shift``."""
    if n_min < 2 or n_max < n_min:
        raise ValueError(f"need 2 <= n_min <= n_max, got {n_min}, {n_max}")
    if not d1 < d2:
        raise ValueError(f"need d1 < d2, got {d1}, {d2}")
    f = _fraction(fraction)
    return [
        sweep_point(n, froberg_ranks(n, (d1, d2), shift), forms_dim(n, d2 + shift), f)
        for n in range(n_min, n_max + 1)
    ]


def figure_fatpoints(
    n_min: int, n_max: int, D: int = 9, multiplicities: Sequence[int] = (4, 3), fraction=0.3
) -> list[SweepRow]:
    """Fat points of two multiplicities ``m1 > m2``, a ``fraction`` of them of multiplicity ``m1``."""
    if n_min < 2 or n_max < n_min:
        raise ValueError(f"need 2 <= n_min <= n_max, got {n_min}, {n_max}")
    m = sorted(multiplicities, reverse=True)
    if len(m) != 2 or m[0] == m[1] or not all(1 <= x <= D for x in m):
        raise ValueError(f"need two distinct multiplicities in [1, D], got {multiplicities}")
    f = _fraction(fraction)
    return [sweep_point(n, fatpoint_ranks(n, m), forms_dim(n, D), f) for n in range(n_min, n_max + 1)]


def rows_to_csv(rows: Sequence[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    for row in rows:
        writer.writerow(row.cells())
    return buf.getvalue()


def write_csv(rows: Sequence[SweepRow], out: str | Path) -> Path:
    out = Path(out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
    return out


def read_csv(path: str | Path) -> list[dict[str, str]]:
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        missing = [c for c in COLUMNS if c not in (reader.fieldnames or [])]
        if missing:
            raise ValueError(f"{path}: missing columns {missing}")
        rows = list(reader)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return rows


def emit_plot(csv_path: str | Path, svg_path: str | Path, title: str | None = None) -> Path:
    """Two-series line plot (``r_blue``, ``r_orange``) above a ratio subplot, written as SVG."""
    rows = read_csv(csv_path)
    try:
        import matplotlib

        matplotlib.use("Agg")
        import matplotlib.pyplot as plt
    except ImportError as exc:  # optional dependency
        raise RuntimeError("SVG output needs matplotlib (pip install artifact[plot])") from exc

    def col(name):
        return [float(r[name]) if r[name] != "" else float("nan") for r in rows]

    n = col("n")
    plt.rcParams["svg.hashsalt"] = "nondefect"
    fig, (top, bottom) = plt.subplots(2, 1, figsize=(6, 6), sharex=True)
    top.plot(n, col("r_blue"), label="expected (not filling)", color="tab:blue", marker="." if len(n) == 1 else None)
    top.plot(n, col("r_orange"), label="criterion holds", color="tab:orange", marker="." if len(n) == 1 else None)
    top.set_ylabel("max r")
    top.legend()
    if title:
        top.set_title(title)
    bottom.plot(n, col("ratio"), color="tab:green", marker="." if len(n) == 1 else None)
    bottom.set_xlabel("n")
    bottom.set_ylabel("ratio")
    fig.tight_layout()
    svg_path = Path(svg_path)
    svg_path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(svg_path, format="svg", metadata={"Date": None})
    plt.close(fig)
    return svg_path
