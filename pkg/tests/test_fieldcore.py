import math
import random

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nondefect.fieldcore import (
    DEFAULT_PRIME,
    CapExceeded,
    FieldScalar,
    GradedVector,
    check_prime,
    enumerate_types,
    form,
    forms_dim,
    is_prime,
    monomial_basis,
    multiplication_rows,
    poly_mul,
    power_linear_form,
)
from nondefect.linalg import rank_array
from oracles import evaluate_power, pascal_forms_dim

P = DEFAULT_PRIME
PASCAL = pascal_forms_dim(40, 12)


# --- FieldScalar -----------------------------------------------------------


@given(st.integers(), st.integers())
def test_scalar_arithmetic_reduced(a, b):
    x, y = FieldScalar(a % P, P), FieldScalar(b % P, P)
    for z in (x + y, x - y, x * y, -x):
        assert 0 <= z.value < P
    assert (x + y).value == (a + b) % P
    assert (x * y).value == (a * b) % P


@given(st.integers(1, P - 1))
def test_scalar_inverse(a):
    x = FieldScalar(a, P)
    assert (x * x.inverse()).value == 1


def test_scalar_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        FieldScalar(0, P).inverse()


def test_prime_checks():
    assert is_prime(2147483647) and is_prime(7) and not is_prime(2147483649)
    with pytest.raises(ValueError):
        check_prime(15)
    with pytest.raises(ValueError):
        check_prime(2**31 + 11)  # prime, but too wide for the kernel


# --- forms_dim ---------------------------------------------------------------


@pytest.mark.parametrize("n,t,expected", [(5, 0, 1), (3, 1, 3), (27, 5, 169911)])
def test_forms_dim_examples(n, t, expected):
    assert forms_dim(n, t) == expected
    assert PASCAL[n][t] == expected


def test_forms_dim_matches_pascal_table():
    for n in range(1, 41):
        for t in range(13):
            assert forms_dim(n, t) == PASCAL[n][t]


@pytest.mark.parametrize("n", range(2, 13))
@pytest.mark.parametrize("t", range(1, 13))
def test_pascal_identity(n, t):
    assert forms_dim(n, t) == forms_dim(n - 1, t) + forms_dim(n, t - 1)


def test_forms_dim_overflow_is_explicit():
    big = forms_dim(200, 40)
    assert big > 2**64  # arbitrary precision by default
    with pytest.raises(OverflowError):
        forms_dim(200, 40, max_bits=64)


def test_forms_dim_bad_args():
    with pytest.raises(ValueError):
        forms_dim(0, 2)
    with pytest.raises(ValueError):
        forms_dim(2, -1)


# --- MonomialBasis -------------------------------------------------------------


def test_basis_n2_d2():
    b = monomial_basis(2, 2)
    assert b.exponents == ((2, 0), (1, 1), (0, 2))
    assert len(b) == 3


@pytest.mark.parametrize("n,d,size", [(1, 7, 1), (3, 4, 15)])
def test_basis_sizes(n, d, size):
    assert len(monomial_basis(n, d)) == size == PASCAL[n][d]


@given(st.integers(1, 6), st.integers(0, 8))
def test_basis_roundtrip(n, d):
    b = monomial_basis(n, d)
    assert len(b) == math.comb(n + d - 1, d)
    assert len(set(b.exponents)) == len(b)
    for i, e in enumerate(b.exponents):
        assert sum(e) == d
        assert b.index_of(e) == i
        assert b.exponent(i) == e


def test_basis_roundtrip_all_small():
    for n in range(1, 9):
        for d in range(0, 15):
            if forms_dim(n, d) > 10**4:
                break
            b = monomial_basis(n, d)
            assert all(b.index_of(b.exponent(i)) == i for i in range(len(b)))


def test_basis_graded_lex_order():
    b = monomial_basis(3, 2)
    assert b.exponents == ((2, 0, 0), (1, 1, 0), (1, 0, 1), (0, 2, 0), (0, 1, 1), (0, 0, 2))


def test_basis_cap(monkeypatch):
    monkeypatch.setenv("ND_MATRIX_CAP", "100")
    with pytest.raises(CapExceeded):
        monomial_basis(6, 5)  # 252 > 100


def test_graded_vector_length_checked():
    with pytest.raises(ValueError):
        GradedVector(monomial_basis(2, 2), np.array([1, 2]), P)


# --- multiplication rows -------------------------------------------------------


def test_multiplication_rows_monomial():
    rows = multiplication_rows(form(2, 2, [1, 0, 0]), 3)
    assert [list(r.coeffs) for r in rows] == [[1, 0, 0, 0], [0, 1, 0, 0]]


def test_multiplication_rows_identity_multiplier():
    rows = multiplication_rows(form(2, 1, [1, 1]), 1)
    assert len(rows) == 1 and list(rows[0].coeffs) == [1, 1]


def test_multiplication_rows_random_quadric_injective():
    rng = np.random.default_rng(1)
    f = form(3, 2, rng.integers(0, P, 6))
    rows = multiplication_rows(f, 4)
    assert len(rows) == 6
    assert rank_array(np.array([r.coeffs for r in rows]), P) == 6


def test_multiplication_rows_errors():
    with pytest.raises(ValueError):
        multiplication_rows(form(2, 2, [0, 0, 0]), 3)
    with pytest.raises(ValueError):
        multiplication_rows(form(2, 2, [1, 0, 0]), 1)


@given(st.lists(st.integers(0, P - 1), min_size=6, max_size=6), st.lists(st.integers(0, P - 1), min_size=6, max_size=6))
def test_multiplication_rows_linear(a, b):
    f, g = form(3, 2, a), form(3, 2, b)
    if f.is_zero() or g.is_zero() or (f + g).is_zero():
        return
    rf, rg, rs = (multiplication_rows(h, 4) for h in (f, g, f + g))
    for x, y, z in zip(rf, rg, rs):
        assert z == x + y


def test_poly_mul_matches_evaluation():
    rng = random.Random(3)
    f = form(3, 2, [rng.randrange(P) for _ in range(6)])
    g = form(3, 3, [rng.randrange(P) for _ in range(10)])
    pt = [rng.randrange(P) for _ in range(3)]
    assert poly_mul(f, g).evaluate(pt) == f.evaluate(pt) * g.evaluate(pt) % P


# --- powers of linear forms ----------------------------------------------------


def test_power_binomial():
    assert list(power_linear_form([1, 1], 2).coeffs) == [1, 2, 1]


def test_power_pure():
    assert list(power_linear_form([1, 0], 3).coeffs) == [1, 0, 0, 0]


def test_power_zero_point():
    with pytest.raises(ValueError):
        power_linear_form([0, 0, 0], 2)


@pytest.mark.parametrize("seed", range(5))
def test_power_evaluation_oracle(seed):
    rng = random.Random(seed)
    pt = [rng.randrange(1, P) for _ in range(3)]
    at = [rng.randrange(P) for _ in range(3)]
    v = power_linear_form(pt, 4)
    assert v.evaluate(at) == evaluate_power(pt, 4, at, P)
    assert v.evaluate(pt) == evaluate_power(pt, 4, pt, P)


@given(
    st.lists(st.integers(0, P - 1), min_size=3, max_size=3).filter(any),
    st.integers(1, 4),
    st.integers(1, 4),
)
def test_power_multiplicative(pt, e1, e2):
    lhs = poly_mul(power_linear_form(pt, e1), power_linear_form(pt, e2))
    assert lhs == power_linear_form(pt, e1 + e2)


# --- component types ------------------------------------------------------------


def test_enumerate_types_examples():
    assert enumerate_types(2, 3) == [(3, 0), (2, 1), (1, 2), (0, 3)]
    assert enumerate_types(1, 5) == [(5,)]
    assert len(enumerate_types(3, 2)) == 6
    assert enumerate_types(3, 0) == [(0, 0, 0)]


@given(st.integers(1, 5), st.integers(0, 8))
def test_enumerate_types_count(k, r):
    types = enumerate_types(k, r)
    assert len(types) == math.comb(r + k - 1, k - 1)
    assert len(set(types)) == len(types)
    assert all(len(t) == k and sum(t) == r and min(t) >= 0 for t in types)


def test_enumerate_types_cap():
    with pytest.raises(CapExceeded):
        enumerate_types(6, 30, cap=1000)
