"""Closed-form nondefectivity and filling criteria.

Every comparison is done in exact integer / :class:`~fractions.Fraction`
arithmetic.  Ranks are expected sorted in non-increasing order and component
types aligned with that order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .fieldcore import forms_dim


class Verdict(str, Enum):
    GUARANTEED_NONDEFECTIVE = "GUARANTEED_NONDEFECTIVE"
    GUARANTEED_FILLING = "GUARANTEED_FILLING"
    CRITERION_SILENT = "CRITERION_SILENT"


VACUOUS = "vacuous"


@dataclass(frozen=True)
class Inequality:
    lhs: int
    rhs: int

    @property
    def holds(self) -> bool:
        return self.lhs < self.rhs

    def as_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds}


@dataclass(frozen=True)
class BoundReport:
    alpha: tuple[int, ...]
    ranks: tuple[int, ...]
    expected_dim: int
    ambient_dim: int
    filling_expected: bool
    nondef_criterion: tuple[Inequality, ...]
    filling_holds: bool
    filling_lhs: int
    filling_rhs: int
    verdict: Verdict
    extras: dict = field(default_factory=dict)

    @property
    def nondefective_guaranteed(self) -> bool:
        return self.verdict is Verdict.GUARANTEED_NONDEFECTIVE

    def as_dict(self) -> dict:
        out = {
            "alpha": list(self.alpha),
            "ranks": list(self.ranks),
            "expected_dim": self.expected_dim,
            "ambient_dim": self.ambient_dim,
            "filling_expected": self.filling_expected,
            "nondef_criterion": [q.as_dict() for q in self.nondef_criterion],
            "filling_criterion": {
                "holds": self.filling_holds,
                "lhs": self.filling_lhs,
                "rhs": self.filling_rhs,
            },
            "verdict": self.verdict.value,
        }
        out.update(self.extras)
        return out


def _check_sorted(ranks: Sequence[int]) -> None:
    if any(a < b for a, b in zip(ranks, ranks[1:])):
        raise ValueError(f"ranks must be sorted non-increasing, got {list(ranks)}")
    if any(r < 1 for r in ranks):
        raise ValueError(f"ranks must be positive, got {list(ranks)}")


def _check_alpha(ranks: Sequence[int], alpha: Sequence[int]) -> None:
    if len(alpha) != len(ranks):
        raise ValueError(f"alpha {tuple(alpha)} does not match {len(ranks)} components")
    if any(a < 0 for a in alpha):
        raise ValueError(f"alpha entries must be nonnegative, got {tuple(alpha)}")


def expected_dim(ranks: Sequence[int], ambient: int, alpha: Sequence[int]) -> tuple[int, bool]:
    """``(min(sum alpha_i N_i, ambient), sum alpha_i N_i >= ambient)``.

    The empty join (``alpha = 0``) is reported as not filling.
    """
    _check_alpha(ranks, alpha)
    total = sum(a * n for a, n in zip(alpha, ranks))
    if total == 0:
        return 0, False
    return min(total, ambient), total >= ambient


def nondefective_chain(ranks: Sequence[int], ambient: int, alpha: Sequence[int]) -> tuple[Inequality, ...]:
    """Left/right sides of ``sum_{j<=i} alpha_j N_j + N_1 (N_i - 1) < ambient`` for each ``i``."""
    _check_sorted(ranks)
    _check_alpha(ranks, alpha)
    n1 = ranks[0]
    out = []
    partial = 0
    for a, n in zip(alpha, ranks):
        partial += a * n
        out.append(Inequality(partial + n1 * (n - 1), ambient))
    return tuple(out)


def filling_criterion(ranks: Sequence[int], ambient: int, alpha: Sequence[int]) -> bool:
    return _filling_sides(ranks, ambient, alpha)[0]


def _filling_sides(ranks, ambient, alpha) -> tuple[bool, int, int]:
    _check_sorted(ranks)
    _check_alpha(ranks, alpha)
    n1 = ranks[0]
    lhs = sum(a * n for a, n in zip(alpha, ranks))
    rhs = ambient + (n1 - 1) * sum(ranks)
    return all(a >= n1 for a in alpha) and lhs > rhs, lhs, rhs


def nondefective_criterion(ranks: Sequence[int], ambient: int, alpha: Sequence[int]) -> BoundReport:
    ranks = tuple(int(r) for r in ranks)
    alpha = tuple(int(a) for a in alpha)
    chain = nondefective_chain(ranks, ambient, alpha)
    exp, fill_exp = expected_dim(ranks, ambient, alpha)
    fills, lhs, rhs = _filling_sides(ranks, ambient, alpha)
    if all(q.holds for q in chain):
        verdict = Verdict.GUARANTEED_NONDEFECTIVE
    elif fills:
        verdict = Verdict.GUARANTEED_FILLING
    else:
        verdict = Verdict.CRITERION_SILENT
    return BoundReport(alpha, ranks, exp, ambient, fill_exp, chain, fills, lhs, rhs, verdict)


def two_component_criterion(ranks: Sequence[int], ambient: int, alpha: Sequence[int]) -> bool:
    """The two-condition test ``alpha_1 < V/N_1 - N_1`` and ``alpha_1 N_1 + alpha_2 N_2 + N_1 N_2 < V``."""
    if len(ranks) != 2 or len(alpha) != 2:
        raise ValueError("the two-component criterion needs exactly two components")
    _check_sorted(ranks)
    n1, n2 = ranks
    a1, a2 = alpha
    if not a1 < Fraction(ambient, n1) - n1:
        return False
    return a1 * n1 + a2 * n2 + n1 * n2 < ambient


@dataclass(frozen=True)
class SecantBounds:
    """``r_nondef_max`` is ``None`` when the nondefectivity range is vacuous."""

    r_nondef_max: int | None
    r_fill_min: int

    @property
    def vacuous(self) -> bool:
        return self.r_nondef_max is None

    def as_dict(self) -> dict:
        return {
            "r_nondef_max": VACUOUS if self.vacuous else self.r_nondef_max,
            "r_fill_min": self.r_fill_min,
        }


def secant_bounds(ambient: int, n_max: int) -> SecantBounds:
    """Secants are nondefective for ``r <= V/N - N`` and fill ``V`` for ``r >= V/N + N``."""
    if n_max < 1:
        raise ValueError(f"need N_max >= 1, got {n_max}")
    q = Fraction(ambient, n_max)
    low = math.floor(q - n_max)
    return SecantBounds(low if low >= 0 else None, math.ceil(q + n_max))


def froberg_ranks(n: int, degrees: Sequence[int], shift: int) -> list[int]:
    degrees = sorted(degrees)
    top = degrees[-1] + shift
    return [forms_dim(n, top - d) for d in degrees]


def froberg_report(n: int, degrees: Sequence[int], shift: int, alpha: Sequence[int]) -> BoundReport:
    """Criterion for ``(f_1..f_r)`` in degree ``d_k + shift``; ``alpha`` is aligned with sorted degrees."""
    degrees = sorted(int(d) for d in degrees)
    if shift < 1:
        raise ValueError(f"shift must be >= 1, got {shift}")
    ranks = froberg_ranks(n, degrees, shift)
    ambient = forms_dim(n, degrees[-1] + shift)
    rep = nondefective_criterion(ranks, ambient, alpha)
    if rep.verdict is Verdict.GUARANTEED_NONDEFECTIVE:
        hilbert = rep.expected_dim
    elif rep.verdict is Verdict.GUARANTEED_FILLING:
        hilbert = ambient
    else:
        hilbert = None
    return _with(rep, {"hilbert_value": hilbert, "expected_hilbert_value": rep.expected_dim})


def fatpoint_ranks(n: int, multiplicities: Sequence[int]) -> list[int]:
    return [forms_dim(n, m - 1) for m in sorted(multiplicities, reverse=True)]


def fatpoint_report(n: int, D: int, multiplicities: Sequence[int], alpha: Sequence[int]) -> BoundReport:
    """Criterion for general fat points; ``alpha`` is aligned with decreasing multiplicities."""
    mults = sorted((int(m) for m in multiplicities), reverse=True)
    if any(not 1 <= m <= D for m in mults) or len(set(mults)) != len(mults):
        raise ValueError(f"multiplicities must be distinct and in [1, D], got {mults}")
    ranks = fatpoint_ranks(n, mults)
    ambient = forms_dim(n, D)
    rep = nondefective_criterion(ranks, ambient, alpha)
    span = rep.expected_dim
    extras = {
        "expected_span_dim": span,
        "expected_fatpoint_dim": ambient - span,
    }
    if rep.verdict is Verdict.GUARANTEED_NONDEFECTIVE:
        extras["fatpoint_dim"] = ambient - span
    elif rep.verdict is Verdict.GUARANTEED_FILLING:
        extras["fatpoint_dim"] = 0
    else:
        extras["fatpoint_dim"] = None
    return _with(rep, extras)


def _with(rep: BoundReport, extras: dict) -> BoundReport:
    return BoundReport(
        rep.alpha,
        rep.ranks,
        rep.expected_dim,
        rep.ambient_dim,
        rep.filling_expected,
        rep.nondef_criterion,
        rep.filling_holds,
        rep.filling_lhs,
        rep.filling_rhs,
        rep.verdict,
        {**rep.extras, **extras},
    )


@dataclass(frozen=True)
class PartitionBounds:
    component_rank: int
    ambient_dim: int
    r_g_upper: int
    r_nondef_max: int | None

    @property
    def vacuous(self) -> bool:
        return self.r_nondef_max is None

    def as_dict(self) -> dict:
        return {
            "component_rank": self.component_rank,
            "ambient_dim": self.ambient_dim,
            "r_g_upper": self.r_g_upper,
            "r_nondef_max": VACUOUS if self.vacuous else self.r_nondef_max,
        }


def partition_bounds(n: int, d: int, parts: Sequence[int]) -> PartitionBounds:
    """Generic partition rank is at most ``n^d/N + N``; nondefective for ``r < n^d/N - N``."""
    if sum(parts) != d or any(x < 1 for x in parts):
        raise ValueError(f"parts {tuple(parts)} are not a partition of {d}")
    N = sum(n**x for x in parts) - len(parts) + 1
    q = Fraction(n**d, N)
    upper = math.floor(q + N)
    low = q - N
    # largest integer strictly below low
    r_max = math.ceil(low) - 1
    return PartitionBounds(N, n**d, upper, r_max if r_max >= 0 else None)


def moment_component_rank(n: int) -> int:
    return math.comb(n + 1, 2) + n


def mixture_identifiable(n: int, r: int, s: int) -> bool:
    """Sufficient condition for ``r`` Gaussians and ``s`` Laplacians to be identifiable from degree-5 moments."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if r < 0 or s < 0:
        raise ValueError(f"need r, s >= 0, got {r}, {s}")
    if r + s == 0:
        return True  # the empty mixture, whatever the inequality says at small n
    N = moment_component_rank(n)
    return r + s <= Fraction(math.comb(n + 4, 5), N) - N


def min_identifiable_n(r: int, s: int, n_max: int = 10000) -> int | None:
    """Smallest ``n`` at which :func:`mixture_identifiable` holds (``None`` if beyond ``n_max``)."""
    for n in range(1, n_max + 1):
        if mixture_identifiable(n, r, s):
            return n
    return None
