"""Prime-field scalars, graded monomial bases and multiplication maps.

Forms of degree ``d`` in ``n`` variables are stored as dense coefficient
vectors over a :class:`MonomialBasis`, whose monomials are listed in
graded-lexicographic order (``x1^d`` first, ``xn^d`` last).  All coefficient
arithmetic happens in GF(p) on ``int64`` numpy arrays; since the modulus is
kept below 2**31, a product of two reduced entries always fits in 63 bits.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Sequence

import numpy as np

DEFAULT_PRIME = 2147483647
MAX_PRIME = 2**31
DEFAULT_MATRIX_CAP = 20000
DEFAULT_TYPE_CAP = 100000


class CapExceeded(ValueError):
    """A requested basis, matrix or enumeration is larger than the configured cap."""


def matrix_cap() -> int:
    """Largest admissible basis size / matrix dimension (``ND_MATRIX_CAP`` overrides)."""
    raw = os.environ.get("ND_MATRIX_CAP")
    if raw is None:
        return DEFAULT_MATRIX_CAP
    try:
        cap = int(raw)
    except ValueError as exc:
        raise ValueError(f"ND_MATRIX_CAP must be an integer, got {raw!r}") from exc
    if cap < 1:
        raise ValueError(f"ND_MATRIX_CAP must be positive, got {cap}")
    return cap


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    # deterministic Miller-Rabin for p < 3.3e24
    d, s = p - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41):
        if a % p == 0:
            continue
        x = pow(a, d, p)
        if x in (1, p - 1):
            continue
        for _ in range(s - 1):
            x = x * x % p
            if x == p - 1:
                break
        else:
            return False
    return True


def check_prime(p: int) -> int:
    """Validate a working modulus: an odd prime below 2**31."""
    p = int(p)
    if not (2 < p < MAX_PRIME) or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime below 2**31, got {p}")
    return p


@dataclass(frozen=True)
class FieldScalar:
    """An element of GF(p); results of arithmetic are always reduced."""

    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other: "FieldScalar | int") -> int:
        if isinstance(other, FieldScalar):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FieldScalar(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FieldScalar(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FieldScalar(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FieldScalar(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldScalar(-self.value, self.p)

    def __pow__(self, e: int):
        return FieldScalar(pow(self.value, e, self.p), self.p)

    def inverse(self) -> "FieldScalar":
        if self.value == 0:
            raise ZeroDivisionError("zero has no inverse in GF(p)")
        return FieldScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FieldScalar(self._coerce(other), self.p).inverse()

    def __int__(self) -> int:
        return self.value


def forms_dim(n: int, t: int, max_bits: int | None = None) -> int:
    """Dimension ``binomial(n+t-1, t)`` of the space of degree-``t`` forms in ``n`` variables.

    Computed exactly.  With ``max_bits`` set, a result that does not fit in an
    unsigned integer of that width raises :class:`OverflowError`.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if t < 0:
        raise ValueError(f"need t >= 0, got {t}")
    value = math.comb(n + t - 1, t)
    if max_bits is not None and value >= 1 << max_bits:
        raise OverflowError(f"forms_dim({n}, {t}) = {value} does not fit in {max_bits} bits")
    return value


def _graded_lex(n: int, d: int) -> Iterator[tuple[int, ...]]:
    if n == 1:
        yield (d,)
        return
    for first in range(d, -1, -1):
        for rest in _graded_lex(n - 1, d - first):
            yield (first,) + rest


class MonomialBasis:
    """Degree-``d`` monomials in ``n`` variables, graded-lex ordered."""

    def __init__(self, n: int, d: int):
        if n < 1 or d < 0:
            raise ValueError(f"need n >= 1 and d >= 0, got n={n}, d={d}")
        size = forms_dim(n, d)
        cap = matrix_cap()
        if size > cap:
            raise CapExceeded(
                f"basis of degree-{d} forms in {n} variables has {size} monomials, cap is {cap}"
            )
        self.n = n
        self.d = d
        self.size = size
        self.exponents: tuple[tuple[int, ...], ...] = tuple(_graded_lex(n, d))
        self._index = {e: i for i, e in enumerate(self.exponents)}

    def index_of(self, exponent: Sequence[int]) -> int:
        return self._index[tuple(exponent)]

    def exponent(self, index: int) -> tuple[int, ...]:
        return self.exponents[index]

    def exponent_array(self) -> np.ndarray:
        return np.array(self.exponents, dtype=np.int64).reshape(self.size, self.n)

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"MonomialBasis(n={self.n}, d={self.d}, size={self.size})"


@lru_cache(maxsize=256)
def _cached_basis(n: int, d: int) -> MonomialBasis:
    return MonomialBasis(n, d)


def monomial_basis(n: int, d: int) -> MonomialBasis:
    """Shared basis instance; the size cap is re-checked on every call."""
    if n >= 1 and d >= 0 and forms_dim(n, d) > matrix_cap():
        return MonomialBasis(n, d)  # raises CapExceeded
    return _cached_basis(n, d)


@dataclass(frozen=True, eq=False)
class GradedVector:
    """Coefficients of a form over ``basis`` with entries in GF(p)."""

    basis: MonomialBasis
    coeffs: np.ndarray
    p: int = DEFAULT_PRIME

    def __post_init__(self) -> None:
        coeffs = np.mod(np.asarray(self.coeffs, dtype=np.int64), self.p)
        if coeffs.shape != (self.basis.size,):
            raise ValueError(f"expected {self.basis.size} coefficients, got shape {coeffs.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self) -> int:
        return self.basis.d

    def is_zero(self) -> bool:
        return not self.coeffs.any()

    def __add__(self, other: "GradedVector") -> "GradedVector":
        if other.basis is not self.basis or other.p != self.p:
            raise ValueError("cannot add forms over different bases or moduli")
        return GradedVector(self.basis, (self.coeffs + other.coeffs) % self.p, self.p)

    def __mul__(self, other: "GradedVector") -> "GradedVector":
        return poly_mul(self, other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GradedVector):
            return NotImplemented
        return (
            self.basis.n == other.basis.n
            and self.basis.d == other.basis.d
            and self.p == other.p
            and np.array_equal(self.coeffs, other.coeffs)
        )

    def evaluate(self, point: Sequence[int]) -> int:
        """Value of the form at ``point`` in GF(p), by direct monomial evaluation."""
        total = 0
        for c, e in zip(self.coeffs.tolist(), self.basis.exponents):
            if c:
                term = c
                for x, k in zip(point, e):
                    term = term * pow(int(x), k, self.p) % self.p
                total += term
        return total % self.p


def form(n: int, d: int, coeffs, p: int = DEFAULT_PRIME) -> GradedVector:
    return GradedVector(monomial_basis(n, d), np.asarray(coeffs, dtype=np.int64), p)


@lru_cache(maxsize=256)
def _mul_table(n: int, a: int, b: int) -> np.ndarray:
    """``T[i, j]`` = index in degree ``a+b`` of (monomial i of degree a) * (monomial j of degree b)."""
    left = monomial_basis(n, a).exponent_array()
    right = monomial_basis(n, b).exponent_array()
    target = monomial_basis(n, a + b)
    sums = left[:, None, :] + right[None, :, :]
    table = np.empty(sums.shape[:2], dtype=np.int64)
    lookup = target._index
    for i in range(sums.shape[0]):
        for j in range(sums.shape[1]):
            table[i, j] = lookup[tuple(sums[i, j].tolist())]
    table.setflags(write=False)
    return table


def poly_mul(f: GradedVector, g: GradedVector) -> GradedVector:
    """Product of two forms in the same number of variables, mod p."""
    if f.basis.n != g.basis.n or f.p != g.p:
        raise ValueError("forms must share variable count and modulus")
    p = f.p
    table = _mul_table(f.basis.n, f.degree, g.degree)
    prods = np.outer(f.coeffs, g.coeffs) % p
    out = np.zeros(monomial_basis(f.basis.n, f.degree + g.degree).size, dtype=np.int64)
    # each summand < 2**31, at most N_a of them per target monomial
    np.add.at(out, table.ravel(), prods.ravel())
    return GradedVector(monomial_basis(f.basis.n, f.degree + g.degree), out % p, p)


def multiplication_matrix(f: GradedVector, target_degree: int) -> np.ndarray:
    """Rows are the coefficient vectors of ``f * m`` for every monomial ``m`` of degree ``target_degree - deg f``."""
    if f.is_zero():
        raise ValueError("multiplication by the zero form: fiber undefined at the cone point")
    a = f.degree
    if target_degree < a:
        raise ValueError(f"target degree {target_degree} is below the degree {a} of f")
    n = f.basis.n
    c = target_degree - a
    table = _mul_table(n, a, c)
    out = np.zeros((monomial_basis(n, c).size, monomial_basis(n, target_degree).size), dtype=np.int64)
    rows = np.arange(table.shape[1])
    # for fixed multiplier monomial j the targets table[:, j] are distinct
    out[rows[None, :], table] = f.coeffs[:, None]
    return out


def multiplication_rows(f: GradedVector, target_degree: int) -> list[GradedVector]:
    basis = monomial_basis(f.basis.n, target_degree)
    return [GradedVector(basis, row, f.p) for row in multiplication_matrix(f, target_degree)]


def _multinomial(e: int, beta: Sequence[int]) -> int:
    out = math.factorial(e)
    for b in beta:
        out //= math.factorial(b)
    return out


def power_linear_form(point: Sequence[int], e: int, p: int = DEFAULT_PRIME) -> GradedVector:
    """Coefficients of ``(point_1 x_1 + ... + point_n x_n) ** e`` via the multinomial theorem."""
    if e < 1:
        raise ValueError(f"exponent must be positive, got {e}")
    pt = [int(x) % p for x in point]
    if not any(pt):
        raise ValueError("power of the zero linear form")
    basis = monomial_basis(len(pt), e)
    powers = [[pow(x, k, p) for k in range(e + 1)] for x in pt]
    coeffs = np.empty(basis.size, dtype=np.int64)
    for idx, beta in enumerate(basis.exponents):
        c = _multinomial(e, beta) % p
        for i, b in enumerate(beta):
            if b:
                c = c * powers[i][b] % p
        coeffs[idx] = c
    return GradedVector(basis, coeffs, p)


def type_count(k: int, r: int) -> int:
    return math.comb(r + k - 1, k - 1)


def enumerate_types(k: int, r: int, cap: int = DEFAULT_TYPE_CAP) -> list[tuple[int, ...]]:
    """All ``alpha`` in N_0^k with ``|alpha| = r``, first entry descending: ``(r,0,..), (r-1,1,..), ...``."""
    if k < 1:
        raise ValueError(f"need k >= 1, got {k}")
    if r < 0:
        raise ValueError(f"need r >= 0, got {r}")
    count = type_count(k, r)
    if count > cap:
        raise CapExceeded(f"{count} component types with k={k}, r={r} exceed the cap of {cap}")

    def rec(k: int, r: int) -> Iterator[tuple[int, ...]]:
        if k == 1:
            yield (r,)
            return
        for first in range(r, -1, -1):
            for rest in rec(k - 1, r - first):
                yield (first,) + rest

    return list(rec(k, r))
