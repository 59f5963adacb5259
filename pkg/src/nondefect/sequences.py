"""Observed intersection sequences ``a(alpha, i) = dim <E_x1..E_xr> cap E_y``.

All values here are sample statistics over GF(p): a specialization can only
undershoot ranks, so they are reported as *observed* values, not generic ones.
Each step of a trace uses fresh, independent samples derived from the base seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bundle import BundleFamily, component_type
from .certify import DEFAULT_SEED, sample_fibers, trial_rng
from .fieldcore import DEFAULT_PRIME, check_prime
from .linalg import rank_array

DIAGONAL = -1


def _observe(family: BundleFamily, alpha, probe: int, p: int, rng: np.random.Generator) -> tuple[int, int]:
    """Return ``(a, span_rank)`` for one fresh sample of type ``alpha`` plus a probe point."""
    span = sample_fibers(family, alpha, rng, p)
    probe_rows = family.fiber_rows(family.sample_point(probe, rng, p), p)
    r_span = rank_array(span, p)
    r_probe = rank_array(probe_rows, p)
    r_both = rank_array(np.vstack([span, probe_rows]), p)
    return r_span + r_probe - r_both, r_span


def intersection_value(
    family: BundleFamily,
    alpha: Sequence[int],
    probe: int,
    prime: int = DEFAULT_PRIME,
    seed: int = DEFAULT_SEED,
) -> int:
    """Observed ``dim <E_x1, ..., E_x|alpha|> cap E_y`` with ``y`` on component ``probe``."""
    p = check_prime(prime)
    alpha = component_type(alpha, family.k)
    family._check_component(probe)
    return _observe(family, alpha, probe, p, trial_rng(seed))[0]


@dataclass(frozen=True)
class SequenceTrace:
    family: BundleFamily
    base_alpha: tuple[int, ...]
    direction: int
    probe: int
    values: tuple[int, ...]
    prime: int
    seed: int

    @property
    def stationarity_points(self) -> list[int]:
        v = self.values
        return [s for s in range(len(v) - 1) if v[s] == v[s + 1] != 0]

    @property
    def monotone(self) -> bool:
        return all(a <= b for a, b in zip(self.values, self.values[1:]))

    @property
    def within_bounds(self) -> bool:
        n = self.family.ranks()[self.probe]
        return all(0 <= v <= n for v in self.values)

    def alpha_at(self, s: int) -> tuple[int, ...]:
        return _step(self.base_alpha, self.direction, s)

    def as_dict(self) -> dict:
        return {
            "family": self.family.describe(),
            "base_alpha": list(self.base_alpha),
            "direction": "diagonal" if self.direction == DIAGONAL else self.direction,
            "probe": self.probe,
            "observed_values": list(self.values),
            "stationarity_points": self.stationarity_points,
            "monotone": self.monotone,
            "prime": self.prime,
            "seed": self.seed,
        }


def _step(alpha: tuple[int, ...], direction: int, s: int) -> tuple[int, ...]:
    if direction == DIAGONAL:
        return tuple(a + s for a in alpha)
    out = list(alpha)
    out[direction] += s
    return tuple(out)


def trace(
    family: BundleFamily,
    alpha: Sequence[int],
    direction: int,
    probe: int,
    steps: int,
    prime: int = DEFAULT_PRIME,
    seed: int = DEFAULT_SEED,
) -> SequenceTrace:
    """Observed values at ``alpha + s * e_direction`` for ``s = 0..steps`` (``DIAGONAL`` adds 1 everywhere)."""
    if steps < 1:
        raise ValueError(f"need steps >= 1, got {steps}")
    p = check_prime(prime)
    alpha = component_type(alpha, family.k)
    family._check_component(probe)
    if direction != DIAGONAL and not 0 <= direction < family.k:
        raise IndexError(f"direction {direction} out of range for {family.k} components")
    values = tuple(
        _observe(family, _step(alpha, direction, s), probe, p, trial_rng(seed, s))[0] for s in range(steps + 1)
    )
    return SequenceTrace(family, alpha, direction, probe, values, p, int(seed))


@dataclass(frozen=True)
class DiagonalCheck:
    alpha: tuple[int, ...]
    probe: int
    a_alpha: int
    a_next: int
    span_rank: int | None
    ambient: int
    probe_rank: int

    @property
    def triggered(self) -> bool:
        return self.a_alpha == self.a_next != 0

    @property
    def consequence_holds(self) -> bool:
        if not self.triggered:
            return True
        return self.span_rank == self.ambient and self.a_alpha == self.probe_rank

    def as_dict(self) -> dict:
        return {
            "alpha": list(self.alpha),
            "probe": self.probe,
            "a_alpha": self.a_alpha,
            "a_alpha_plus_one": self.a_next,
            "triggered": self.triggered,
            "span_rank": self.span_rank,
            "ambient_dim": self.ambient,
            "consequence_holds": self.consequence_holds,
        }


def diagonal_check(
    family: BundleFamily,
    alpha: Sequence[int],
    probe: int,
    prime: int = DEFAULT_PRIME,
    seed: int = DEFAULT_SEED,
) -> DiagonalCheck:
    """If ``a(alpha) = a(alpha + 1) != 0`` the span of a type-``alpha`` sample must fill V."""
    p = check_prime(prime)
    alpha = component_type(alpha, family.k)
    family._check_component(probe)
    a0, span0 = _observe(family, alpha, probe, p, trial_rng(seed, 0))
    a1, _ = _observe(family, _step(alpha, DIAGONAL, 1), probe, p, trial_rng(seed, 1))
    span = None
    if a0 == a1 != 0:
        span = rank_array(sample_fibers(family, alpha, trial_rng(seed, 2), p), p)
        span = max(span, span0)
    return DiagonalCheck(alpha, probe, a0, a1, span, family.ambient_dim(), family.ranks()[probe])
