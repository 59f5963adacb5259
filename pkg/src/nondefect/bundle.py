"""Concrete embedded bundle families and their fibers in coordinates.

Each family describes a union of irreducible cones ``X_1 u ... u X_k`` inside
an ambient space ``V`` together with a fiber ``E_x`` attached to every point.
Components are always stored so that their ranks are non-increasing.

* :class:`Froberg`: general forms of degrees ``d_1 <= ... <= d_k``; the fiber
  at ``f`` is the degree ``d_k + shift`` piece of the principal ideal ``(f)``.
* :class:`FatPoints`: powers ``l_p^(D-m+1)`` of linear forms; the fiber is
  ``l_p^(D-m+1) * C[x]_(m-1)``, the apolar complement of a fat point of
  multiplicity ``m`` at ``p``.
* :class:`Partition`: partition-rank-one tensors, one component per
  distinct ordering of the part sizes; the fiber is the tangent space.
* :class:`Moments`: degree-5 moment forms of Gaussian and/or Laplace
  distributions; the fiber is the tangent space in ``(mu, Sigma)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .fieldcore import (
    DEFAULT_PRIME,
    GradedVector,
    forms_dim,
    monomial_basis,
    multiplication_matrix,
    poly_mul,
    power_linear_form,
)

RESAMPLE_BUDGET = 16

ComponentType = tuple[int, ...]


class DegenerateSampleError(RuntimeError):
    """No nondegenerate point was drawn within the resampling budget."""


def component_type(alpha: Sequence[int], k: int | None = None) -> ComponentType:
    out = tuple(int(a) for a in alpha)
    if any(a < 0 for a in out):
        raise ValueError(f"component type entries must be nonnegative, got {out}")
    if k is not None and len(out) != k:
        raise ValueError(f"component type {out} has {len(out)} entries, family has {k} components")
    return out


@dataclass(frozen=True)
class PointSample:
    """A random point on one component; ``params`` layout depends on the family."""

    component: int
    params: tuple
    attempts: int = 1


def _uniform(rng: np.random.Generator, p: int, size) -> np.ndarray:
    return rng.integers(0, p, size=size, dtype=np.int64)


def _draw(rng: np.random.Generator, make: Callable[[], tuple], ok: Callable[[tuple], bool]) -> tuple[tuple, int]:
    for attempt in range(1, RESAMPLE_BUDGET + 1):
        params = make()
        if ok(params):
            return params, attempt
    raise DegenerateSampleError(f"no nondegenerate sample in {RESAMPLE_BUDGET} attempts")


class BundleFamily:
    """Common interface of the four families."""

    kind: str = ""

    @property
    def k(self) -> int:
        return len(self.ranks())

    def ambient_dim(self) -> int:
        raise NotImplementedError

    def ranks(self) -> list[int]:
        raise NotImplementedError

    def sample_point(self, i: int, rng: np.random.Generator, p: int = DEFAULT_PRIME) -> PointSample:
        raise NotImplementedError

    def fiber_rows(self, point: PointSample, p: int = DEFAULT_PRIME) -> np.ndarray:
        raise NotImplementedError

    def point_vector(self, point: PointSample, p: int = DEFAULT_PRIME) -> np.ndarray:
        """Coordinates in V of the sampled variety point itself."""
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    def component_labels(self) -> list[str]:
        return [str(i) for i in range(self.k)]

    def _check_component(self, i: int) -> None:
        if not 0 <= i < self.k:
            raise IndexError(f"component index {i} out of range for {self.k} components")

    def _check_ambient(self) -> None:
        if self.ambient_dim() < max(self.ranks()):
            raise ValueError(
                f"{self.kind}: ambient dimension {self.ambient_dim()} below the largest rank {max(self.ranks())}"
            )


@dataclass(frozen=True)
class Froberg(BundleFamily):
    n: int
    degrees: tuple[int, ...]
    shift: int = 1
    kind = "froberg"

    def __post_init__(self) -> None:
        degrees = tuple(sorted(int(d) for d in self.degrees))
        if self.n < 1 or not degrees or degrees[0] < 1 or self.shift < 1:
            raise ValueError(f"froberg needs n >= 1, degrees >= 1 and shift >= 1, got {self}")
        object.__setattr__(self, "degrees", degrees)
        self._check_ambient()

    @property
    def target_degree(self) -> int:
        return self.degrees[-1] + self.shift

    def ambient_dim(self) -> int:
        return forms_dim(self.n, self.target_degree)

    def ranks(self) -> list[int]:
        return [forms_dim(self.n, self.target_degree - d) for d in self.degrees]

    def sample_point(self, i, rng, p=DEFAULT_PRIME):
        self._check_component(i)
        size = forms_dim(self.n, self.degrees[i])
        params, tries = _draw(rng, lambda: (_uniform(rng, p, size),), lambda t: bool(t[0].any()))
        return PointSample(i, params, tries)

    def _form(self, point, p):
        return GradedVector(monomial_basis(self.n, self.degrees[point.component]), point.params[0], p)

    def fiber_rows(self, point, p=DEFAULT_PRIME):
        return multiplication_matrix(self._form(point, p), self.target_degree)

    def point_vector(self, point, p=DEFAULT_PRIME):
        # f times the first monomial of the multiplier degree
        return self.fiber_rows(point, p)[0]

    def describe(self):
        return {"kind": self.kind, "n": self.n, "degrees": list(self.degrees), "shift": self.shift}

    def component_labels(self):
        return [f"degree {d}" for d in self.degrees]


@dataclass(frozen=True)
class FatPoints(BundleFamily):
    n: int
    D: int
    multiplicities: tuple[int, ...]
    kind = "fatpoints"

    def __post_init__(self) -> None:
        mults = tuple(sorted((int(m) for m in self.multiplicities), reverse=True))
        if not mults or len(set(mults)) != len(mults):
            raise ValueError(f"multiplicities must be nonempty and distinct, got {self.multiplicities}")
        if self.n < 1 or not all(1 <= m <= self.D for m in mults):
            raise ValueError(f"fatpoints needs n >= 1 and 1 <= m_i <= D, got {self}")
        object.__setattr__(self, "multiplicities", mults)
        self._check_ambient()

    def ambient_dim(self) -> int:
        return forms_dim(self.n, self.D)

    def ranks(self) -> list[int]:
        return [forms_dim(self.n, m - 1) for m in self.multiplicities]

    def sample_point(self, i, rng, p=DEFAULT_PRIME):
        self._check_component(i)
        params, tries = _draw(rng, lambda: (_uniform(rng, p, self.n),), lambda t: bool(t[0].any()))
        return PointSample(i, params, tries)

    def _power(self, point, p):
        m = self.multiplicities[point.component]
        return power_linear_form(point.params[0].tolist(), self.D - m + 1, p)

    def fiber_rows(self, point, p=DEFAULT_PRIME):
        return multiplication_matrix(self._power(point, p), self.D)

    def point_vector(self, point, p=DEFAULT_PRIME):
        # l_p^D, which lies in l_p^(D-m+1) * C[x]_(m-1)
        return power_linear_form(point.params[0].tolist(), self.D, p).coeffs.copy()

    def describe(self):
        return {"kind": self.kind, "n": self.n, "D": self.D, "multiplicities": list(self.multiplicities)}

    def component_labels(self):
        return [f"multiplicity {m}" for m in self.multiplicities]


def _kron_rows(blocks: Sequence[np.ndarray], p: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=np.int64)
    for b in blocks:
        out = np.kron(out, np.atleast_2d(b)) % p
    return out


@dataclass(frozen=True)
class Partition(BundleFamily):
    """Partition-rank-one tensors in ``(C^n)^(x d)`` for a fixed partition of ``d``.

    Components are the distinct orderings of ``parts``; orderings that produce the
    same sequence of part sizes parametrize the same variety and are merged.
    """

    n: int
    d: int
    parts: tuple[int, ...]
    kind = "partition"
    orderings: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        parts = tuple(int(x) for x in self.parts)
        if self.n < 1 or not parts or any(x < 1 for x in parts) or sum(parts) != self.d:
            raise ValueError(f"parts must be positive and sum to d={self.d}, got {parts}")
        object.__setattr__(self, "parts", parts)
        object.__setattr__(self, "orderings", tuple(sorted(set(itertools.permutations(parts)))))
        self._check_ambient()

    def ambient_dim(self) -> int:
        return self.n**self.d

    def component_rank(self) -> int:
        return sum(self.n**x for x in self.parts) - len(self.parts) + 1

    def ranks(self) -> list[int]:
        return [self.component_rank()] * len(self.orderings)

    def sample_point(self, i, rng, p=DEFAULT_PRIME):
        self._check_component(i)
        sizes = self.orderings[i]
        params, tries = _draw(
            rng,
            lambda: tuple(_uniform(rng, p, self.n**s) for s in sizes),
            lambda fs: all(f.any() for f in fs),
        )
        return PointSample(i, params, tries)

    def fiber_rows(self, point, p=DEFAULT_PRIME):
        factors = point.params
        blocks = []
        for j, t in enumerate(factors):
            left = [f[None, :] for f in factors[:j]]
            right = [f[None, :] for f in factors[j + 1 :]]
            eye = np.eye(t.size, dtype=np.int64)
            blocks.append(_kron_rows(left + [eye] + right, p))
        return np.vstack(blocks)

    def point_vector(self, point, p=DEFAULT_PRIME):
        return _kron_rows([f[None, :] for f in point.params], p)[0]

    def describe(self):
        return {"kind": self.kind, "n": self.n, "d": self.d, "parts": list(self.parts)}

    def component_labels(self):
        return ["slots " + "x".join(map(str, o)) for o in self.orderings]


@dataclass(frozen=True)
class MomentRecipe:
    """Tangent rows of a degree-5 moment variety parametrized by a mean and a scale matrix.

    ``mean_factor(l, q)`` returns the degree-4 form multiplying ``t_j`` in the
    derivative with respect to ``mu_j``; ``scale_factor(l, q)`` returns the
    degree-3 form multiplying ``t_j t_k`` in the derivative with respect to
    ``Sigma_jk``.  ``moment(l, q)`` returns the moment form itself.
    """

    name: str
    mean_factor: Callable[[GradedVector, GradedVector], GradedVector]
    scale_factor: Callable[[GradedVector, GradedVector], GradedVector]
    moment: Callable[[GradedVector, GradedVector], GradedVector]


def _lin(*terms: tuple[int, GradedVector]) -> GradedVector:
    basis, p = terms[0][1].basis, terms[0][1].p
    acc = np.zeros(basis.size, dtype=np.int64)
    for c, g in terms:
        acc = (acc + (c % p) * g.coeffs) % p
    return GradedVector(basis, acc, p)


def quintic_recipe(name: str, a: int, b: int) -> MomentRecipe:
    """Recipe for moment forms ``l^5 + a q l^3 + b q^2 l``."""

    def mean_factor(l, q):
        l2 = poly_mul(l, l)
        return _lin((5, poly_mul(l2, l2)), (3 * a, poly_mul(q, l2)), (b, poly_mul(q, q)))

    def scale_factor(l, q):
        return _lin((a, poly_mul(poly_mul(l, l), l)), (2 * b, poly_mul(q, l)))

    def moment(l, q):
        l2 = poly_mul(l, l)
        l3 = poly_mul(l2, l)
        return _lin((1, poly_mul(l3, l2)), (a, poly_mul(q, l3)), (b, poly_mul(poly_mul(q, q), l)))

    return MomentRecipe(name, mean_factor, scale_factor, moment)


MOMENT_RECIPES: dict[str, MomentRecipe] = {
    "gaussian": quintic_recipe("gaussian", 10, 15),
    "laplace": quintic_recipe("laplace", 10, 30),
}


def register_moment_recipe(recipe: MomentRecipe) -> None:
    MOMENT_RECIPES[recipe.name] = recipe


@dataclass(frozen=True)
class Moments(BundleFamily):
    n: int
    families: tuple[str, ...] = ("gaussian", "laplace")
    degree: int = 5
    kind = "moments"

    def __post_init__(self) -> None:
        fams = tuple(dict.fromkeys(str(f).lower() for f in self.families))
        if not fams:
            raise ValueError("moments needs at least one distribution family")
        unknown = [f for f in fams if f not in MOMENT_RECIPES]
        if unknown:
            raise ValueError(f"unknown moment families {unknown}; known: {sorted(MOMENT_RECIPES)}")
        if self.degree != 5:
            raise ValueError("only degree-5 moment forms are implemented")
        if self.n < 1:
            raise ValueError(f"need n >= 1, got {self.n}")
        builtin = [f for f in ("gaussian", "laplace") if f in fams]
        object.__setattr__(self, "families", tuple(builtin + sorted(set(fams) - set(builtin))))
        self._check_ambient()

    def ambient_dim(self) -> int:
        return forms_dim(self.n, 5)

    def ranks(self) -> list[int]:
        return [self.n + self.n * (self.n + 1) // 2] * len(self.families)

    def sample_point(self, i, rng, p=DEFAULT_PRIME):
        self._check_component(i)
        m = self.n * (self.n + 1) // 2
        params, tries = _draw(
            rng,
            lambda: (_uniform(rng, p, self.n), _uniform(rng, p, m)),
            lambda t: bool(t[0].any()) and bool(t[1].any()),
        )
        return PointSample(i, params, tries)

    def _forms(self, point, p):
        mu, upper = point.params
        ell = GradedVector(monomial_basis(self.n, 1), mu, p)
        # q = t^T Sigma t; off-diagonal coefficient is 2*Sigma_jk (graded-lex = upper triangle order)
        iu = np.triu_indices(self.n)
        q_coeffs = np.where(iu[0] == iu[1], upper, 2 * upper) % p
        q = GradedVector(monomial_basis(self.n, 2), q_coeffs, p)
        return ell, q

    def fiber_rows(self, point, p=DEFAULT_PRIME):
        recipe = MOMENT_RECIPES[self.families[point.component]]
        ell, q = self._forms(point, p)
        mean_rows = multiplication_matrix(recipe.mean_factor(ell, q), 5)
        scale = recipe.scale_factor(ell, q)
        if scale.is_zero():
            raise DegenerateSampleError("scale derivative vanishes at this sample")
        scale_rows = multiplication_matrix(scale, 5)
        iu = np.triu_indices(self.n)
        scale_rows = (scale_rows * np.where(iu[0] == iu[1], 1, 2)[:, None]) % p
        return np.vstack([mean_rows, scale_rows])

    def point_vector(self, point, p=DEFAULT_PRIME):
        recipe = MOMENT_RECIPES[self.families[point.component]]
        ell, q = self._forms(point, p)
        return recipe.moment(ell, q).coeffs.copy()

    def describe(self):
        return {"kind": self.kind, "n": self.n, "families": list(self.families)}

    def component_labels(self):
        return list(self.families)


def ambient_dim(family: BundleFamily) -> int:
    return family.ambient_dim()


def ranks(family: BundleFamily) -> list[int]:
    return family.ranks()


def sample_point(family: BundleFamily, i: int, rng: np.random.Generator, p: int = DEFAULT_PRIME) -> PointSample:
    return family.sample_point(i, rng, p)


def fiber_matrix(family: BundleFamily, point: PointSample, p: int = DEFAULT_PRIME):
    """Fiber at ``point`` as a :class:`~nondefect.linalg.DenseMatrix` with ``ambient_dim`` columns."""
    from .linalg import DenseMatrix

    return DenseMatrix(family.fiber_rows(point, p), p)


FAMILY_KINDS = {"froberg": Froberg, "fatpoints": FatPoints, "partition": Partition, "moments": Moments}


def family_from_dict(desc: dict) -> BundleFamily:
    """Build a family from its JSON descriptor (the ``family`` object of a scenario)."""
    kind = desc.get("kind")
    if kind == "froberg":
        return Froberg(int(desc["n"]), tuple(desc["degrees"]), int(desc.get("shift", 1)))
    if kind == "fatpoints":
        return FatPoints(int(desc["n"]), int(desc["D"]), tuple(desc["multiplicities"]))
    if kind == "partition":
        parts = tuple(desc["parts"])
        return Partition(int(desc["n"]), int(desc.get("d", sum(parts))), parts)
    if kind == "moments":
        return Moments(int(desc["n"]), tuple(desc.get("families", ("gaussian", "laplace"))))
    raise ValueError(f"unknown family kind {kind!r}")
