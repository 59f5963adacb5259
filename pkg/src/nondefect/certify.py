"""Terracini rank certificates.

For a component type ``alpha`` we sample ``alpha_i`` random points on each
component over GF(p), stack their fiber matrices and compute the exact rank.
Rank can only drop under specialization, so an observed rank equal to the
expected dimension proves the generic statement; anything less is reported
as ``INCONCLUSIVE`` together with the gap, never as a defect.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .bounds import expected_dim
from .bundle import BundleFamily, component_type
from .fieldcore import DEFAULT_PRIME, CapExceeded, check_prime, enumerate_types, matrix_cap
from .linalg import rank_array

DEFAULT_TRIALS = 3
DEFAULT_SEED = 0


class CertVerdict(str, Enum):
    CERTIFIED_NONDEFECTIVE = "CERTIFIED_NONDEFECTIVE"
    CERTIFIED_FILLING = "CERTIFIED_FILLING"
    INCONCLUSIVE = "INCONCLUSIVE"


class SoundnessError(AssertionError):
    """An observed rank exceeded the expected dimension; indicates a bug."""


def trial_rng(seed: int, *key: int) -> np.random.Generator:
    """Independent stream for ``(seed, *key)``; identical under any scheduling."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(int(k) for k in key))))


@dataclass(frozen=True)
class Trial:
    seed: int
    prime: int
    index: int
    observed_rank: int

    def as_dict(self) -> dict:
        return {"seed": self.seed, "prime": self.prime, "trial": self.index, "observed_rank": self.observed_rank}


@dataclass(frozen=True)
class CertificateReport:
    family: BundleFamily
    alpha: tuple[int, ...]
    sampled_alpha: tuple[int, ...]
    expected: int
    filling_expected: bool
    ambient: int
    trials: tuple[Trial, ...]
    best_observed: int
    verdict: CertVerdict

    @property
    def gap(self) -> int:
        return self.expected - self.best_observed

    @property
    def certified(self) -> bool:
        return self.verdict is not CertVerdict.INCONCLUSIVE

    def as_dict(self) -> dict:
        return {
            "family": self.family.describe(),
            "alpha": list(self.alpha),
            "sampled_alpha": list(self.sampled_alpha),
            "expected": self.expected,
            "filling_expected": self.filling_expected,
            "ambient_dim": self.ambient,
            "trials": [t.as_dict() for t in self.trials],
            "best_observed": self.best_observed,
            "gap": self.gap,
            "verdict": self.verdict.value,
        }


def guarded_counts(alpha: Sequence[int], ranks: Sequence[int], ambient: int) -> tuple[int, ...]:
    """Point counts actually sampled.

    When ``sum alpha_i N_i > 2 * ambient`` only enough points are drawn (round
    robin over the components of ``alpha``) to exceed ``ambient`` by one fiber:
    if that sub-join already fills ``V`` so does the full one.
    """
    total = sum(a * n for a, n in zip(alpha, ranks))
    if total <= 2 * ambient:
        return tuple(alpha)
    target = ambient + max(n for a, n in zip(alpha, ranks) if a)
    counts = [0] * len(alpha)
    rows = 0
    while rows < target:
        for i, (a, n) in enumerate(zip(alpha, ranks)):
            if counts[i] < a and rows < target:
                counts[i] += 1
                rows += n
    return tuple(counts)


def sample_fibers(
    family: BundleFamily, counts: Sequence[int], rng: np.random.Generator, p: int
) -> np.ndarray:
    """Stacked fiber rows of ``counts[i]`` fresh points on each component ``i``."""
    blocks = []
    for i, c in enumerate(counts):
        for _ in range(c):
            blocks.append(family.fiber_rows(family.sample_point(i, rng, p), p))
    if not blocks:
        return np.zeros((0, family.ambient_dim()), dtype=np.int64)
    return np.vstack(blocks)


def _run_trial(family, counts, p, seed, index) -> Trial:
    rows = sample_fibers(family, counts, trial_rng(seed, index), p)
    return Trial(int(seed), int(p), int(index), rank_array(rows, p))


def certify_alpha(
    family: BundleFamily,
    alpha: Sequence[int],
    prime: int = DEFAULT_PRIME,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> CertificateReport:
    """Terracini rank experiment for one component type."""
    p = check_prime(prime)
    if trials < 1:
        raise ValueError(f"need at least one trial, got {trials}")
    ranks = family.ranks()
    alpha = component_type(alpha, len(ranks))
    ambient = family.ambient_dim()
    expected, filling_expected = expected_dim(ranks, ambient, alpha)
    counts = guarded_counts(alpha, ranks, ambient)
    cap = matrix_cap()
    if ambient > cap:
        raise CapExceeded(f"ambient dimension {ambient} exceeds the matrix cap of {cap}")
    if sum(a * n for a, n in zip(counts, ranks)) > cap:
        raise CapExceeded(f"{sum(a * n for a, n in zip(counts, ranks))} fiber rows exceed the matrix cap of {cap}")

    if workers > 1 and trials > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda t: _run_trial(family, counts, p, seed, t), range(trials)))
    else:
        results = [_run_trial(family, counts, p, seed, t) for t in range(trials)]
    results.sort(key=lambda t: t.index)

    for t in results:
        if t.observed_rank > expected:
            raise SoundnessError(
                f"observed rank {t.observed_rank} exceeds expected {expected} for {family} alpha={alpha}"
            )
    best = max(t.observed_rank for t in results)
    total = sum(a * n for a, n in zip(alpha, ranks))
    if best == ambient and total >= ambient and total > 0:
        verdict = CertVerdict.CERTIFIED_FILLING
    elif best == total and total < ambient:
        verdict = CertVerdict.CERTIFIED_NONDEFECTIVE
    else:
        verdict = CertVerdict.INCONCLUSIVE
    return CertificateReport(
        family, alpha, counts, expected, filling_expected, ambient, tuple(results), best, verdict
    )


@dataclass(frozen=True)
class RReport:
    family: BundleFamily
    r: int
    reports: dict[tuple[int, ...], CertificateReport]

    @property
    def r_nondefective(self) -> bool:
        return all(rep.certified for rep in self.reports.values())

    def as_dict(self) -> dict:
        return {
            "family": self.family.describe(),
            "r": self.r,
            "r_nondefective_certified": self.r_nondefective,
            "types": [self.reports[a].as_dict() for a in self.reports],
        }


def certify_r(
    family: BundleFamily,
    r: int,
    prime: int = DEFAULT_PRIME,
    trials: int = DEFAULT_TRIALS,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> RReport:
    """One certificate per component type with ``|alpha| = r``, in :func:`enumerate_types` order."""
    types = enumerate_types(family.k, r)

    def one(alpha):
        return certify_alpha(family, alpha, prime, trials, seed)

    if workers > 1 and len(types) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            reps = list(pool.map(one, types))
    else:
        reps = [one(a) for a in types]
    return RReport(family, r, dict(zip(types, reps)))


class ScanGrade(str, Enum):
    CERTIFIED = "CERTIFIED"
    STABLE_GAP = "STABLE_GAP"
    UNSTABLE_GAP = "UNSTABLE_GAP"


@dataclass(frozen=True)
class ScanReport:
    family: BundleFamily
    alpha: tuple[int, ...]
    expected: int
    runs: tuple[CertificateReport, ...]
    grade: ScanGrade
    min_observed: int
    max_observed: int
    gaps: tuple[int, ...] = field(default=())

    @property
    def gap(self) -> int:
        return self.expected - self.max_observed

    def as_dict(self) -> dict:
        return {
            "family": self.family.describe(),
            "alpha": list(self.alpha),
            "expected": self.expected,
            "grade": self.grade.value,
            "min_observed": self.min_observed,
            "max_observed": self.max_observed,
            "gap": self.gap,
            "runs": [
                {"prime": r.trials[0].prime, "seed": r.trials[0].seed, "best_observed": r.best_observed, "gap": r.gap}
                for r in self.runs
            ],
        }


def defect_evidence_scan(
    family: BundleFamily,
    alpha: Sequence[int],
    primes: Sequence[int],
    seeds: Sequence[int],
    trials: int = 1,
) -> ScanReport:
    """Repeat :func:`certify_alpha` over a prime x seed grid and grade the stability of the gap.

    Any run reaching the expected dimension upgrades the result to a certificate.
    """
    if not primes or not seeds:
        raise ValueError("need at least one prime and one seed")
    runs = tuple(certify_alpha(family, alpha, p, trials, s) for p in primes for s in seeds)
    gaps = tuple(r.gap for r in runs)
    observed = [r.best_observed for r in runs]
    if min(gaps) == 0:
        grade = ScanGrade.CERTIFIED
    elif len(set(gaps)) == 1:
        grade = ScanGrade.STABLE_GAP
    else:
        grade = ScanGrade.UNSTABLE_GAP
    return ScanReport(family, runs[0].alpha, runs[0].expected, runs, grade, min(observed), max(observed), gaps)
