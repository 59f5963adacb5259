import numpy as np
import pytest

from nondefect.bundle import (
    MOMENT_RECIPES,
    DegenerateSampleError,
    FatPoints,
    Froberg,
    Moments,
    Partition,
    PointSample,
    ambient_dim,
    family_from_dict,
    fiber_matrix,
    quintic_recipe,
    ranks,
    register_moment_recipe,
    sample_point,
)
from nondefect.certify import trial_rng
from nondefect.fieldcore import DEFAULT_PRIME, forms_dim
from nondefect.linalg import rank, rank_array
from oracles import pascal_forms_dim

P = DEFAULT_PRIME
PASCAL = pascal_forms_dim(30, 10)

DESK = [
    Froberg(3, (2, 3), 1),
    Froberg(4, (2, 3, 4), 1),
    Froberg(3, (3,), 2),
    FatPoints(3, 4, (2,)),
    FatPoints(4, 7, (3, 2)),
    FatPoints(3, 6, (3, 2, 1)),
    Partition(2, 3, (1, 2)),
    Partition(3, 3, (1, 1, 1)),
    Partition(3, 5, (1, 1, 1, 2)),
    Moments(3, ("gaussian",)),
    Moments(4),
]


def test_ambient_examples():
    assert ambient_dim(Froberg(3, (2, 3), 1)) == 15 == PASCAL[3][4]
    assert ambient_dim(Partition(2, 3, (1, 2))) == 8
    assert ambient_dim(Moments(27)) == 169911 == PASCAL[27][5]


def test_rank_examples():
    assert ranks(Froberg(3, (2, 3), 1)) == [6, 3] == [PASCAL[3][2], PASCAL[3][1]]
    assert ranks(FatPoints(3, 4, (2,))) == [3]
    assert ranks(Moments(6)) == [27, 27]
    assert ranks(Partition(2, 3, (1, 2))) == [5, 5]


def test_canonical_sorting():
    assert Froberg(3, (3, 2), 1).degrees == (2, 3)
    assert FatPoints(4, 7, (2, 3)).multiplicities == (3, 2)
    assert Moments(3, ("laplace", "gaussian")).families == ("gaussian", "laplace")
    for fam in DESK:
        r = fam.ranks()
        assert r == sorted(r, reverse=True)
        assert fam.ambient_dim() >= max(r)


@pytest.mark.parametrize(
    "bad",
    [
        lambda: Froberg(3, (2,), 0),
        lambda: FatPoints(3, 4, (2, 2)),
        lambda: FatPoints(3, 4, (5,)),
        lambda: Partition(3, 4, (1, 2)),
        lambda: Moments(3, ()),
        lambda: Moments(3, ("cauchy",)),
    ],
)
def test_invalid_families(bad):
    with pytest.raises(ValueError):
        bad()


def test_family_from_dict_roundtrip():
    for fam in DESK:
        assert family_from_dict(fam.describe()) == fam


def test_sampling_deterministic():
    for fam in DESK:
        a = sample_point(fam, fam.k - 1, trial_rng(5, 1))
        b = sample_point(fam, fam.k - 1, trial_rng(5, 1))
        assert all(np.array_equal(x, y) for x, y in zip(a.params, b.params))


def test_froberg_sample_shape():
    pt = Froberg(3, (2, 3), 1).sample_point(0, trial_rng(0))
    assert pt.params[0].shape == (6,) and pt.params[0].any()


class ZeroThenRandom:
    """rng stand-in whose first draws are all zero."""

    def __init__(self, zeros):
        self.zeros = zeros
        self.rng = np.random.default_rng(0)

    def integers(self, low, high, size, dtype):
        if self.zeros > 0:
            self.zeros -= 1
            return np.zeros(size, dtype=dtype)
        return self.rng.integers(low, high, size=size, dtype=dtype)


def test_zero_vector_resampled():
    pt = FatPoints(3, 4, (2,)).sample_point(0, ZeroThenRandom(2))
    assert pt.params[0].any() and pt.attempts == 3


def test_resample_budget_exhausted():
    with pytest.raises(DegenerateSampleError):
        FatPoints(3, 4, (2,)).sample_point(0, ZeroThenRandom(100))


def test_component_index_checked():
    with pytest.raises(IndexError):
        FatPoints(3, 4, (2,)).sample_point(1, trial_rng(0))


def test_froberg_monomial_fiber():
    fam = Froberg(2, (2,), 1)
    pt = PointSample(0, (np.array([1, 0, 0]),))
    M = fiber_matrix(fam, pt)
    assert M.entries.tolist() == [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert rank(M) == 2


def test_fatpoint_coordinate_fiber():
    fam = FatPoints(2, 3, (2,))
    M = fiber_matrix(fam, PointSample(0, (np.array([1, 0]),)))
    assert M.entries.tolist() == [[1, 0, 0, 0], [0, 1, 0, 0]]
    assert rank(M) == 2 == forms_dim(2, 1)


def test_partition_fiber_shape():
    fam = Partition(2, 3, (1, 2))
    M = fiber_matrix(fam, fam.sample_point(0, trial_rng(0)))
    assert (M.rows, M.cols) == (6, 8) and rank(M) == 5


def test_moments_gaussian_n3():
    fam = Moments(3, ("gaussian",))
    M = fiber_matrix(fam, fam.sample_point(0, trial_rng(0)))
    assert M.rows == 9 and rank(M) == 9


@pytest.mark.parametrize("fam", DESK, ids=lambda f: f"{f.kind}{f.describe()}")
def test_generic_fiber_rank(fam):
    for i, expected in enumerate(fam.ranks()):
        hits = sum(
            rank_array(fam.fiber_rows(fam.sample_point(i, trial_rng(seed, i)), P), P) == expected
            for seed in range(100)
        )
        assert hits >= 99


@pytest.mark.parametrize("fam", DESK, ids=lambda f: f"{f.kind}{f.describe()}")
def test_fiber_contains_point(fam):
    for i in range(fam.k):
        pt = fam.sample_point(i, trial_rng(11, i))
        rows = fam.fiber_rows(pt, P)
        v = fam.point_vector(pt, P)
        assert v.any()
        assert rank_array(np.vstack([rows, v]), P) == rank_array(rows, P)


def test_gaussian_and_laplace_fibers_differ():
    fam = Moments(6)
    pt = fam.sample_point(0, trial_rng(3))
    g = fam.fiber_rows(pt, P)
    l = fam.fiber_rows(PointSample(1, pt.params), P)
    assert rank_array(np.vstack([g, l]), P) > 27


def _finite_difference_derivative(values, p):
    # f'(0) for a degree <= 5 polynomial from f(0..5): sum_k (-1)^(k+1) Delta^k f(0) / k
    diffs = [list(values)]
    while len(diffs[-1]) > 1:
        prev = diffs[-1]
        diffs.append([(b - a) % p for a, b in zip(prev, prev[1:])])
    return sum(((-1) ** (k + 1)) * diffs[k][0] * pow(k, p - 2, p) for k in range(1, len(diffs))) % p


@pytest.mark.parametrize("family", ["gaussian", "laplace"])
def test_moment_tangent_rows_match_jacobian(family):
    fam = Moments(3, (family,))
    pt = fam.sample_point(0, trial_rng(9))
    mu, upper = pt.params
    rows = fam.fiber_rows(pt, P)

    def moment_at(mu_, upper_):
        return fam.point_vector(PointSample(0, (mu_ % P, upper_ % P)), P)

    params = [("mu", j) for j in range(3)] + [("sigma", j) for j in range(upper.size)]
    for r, (which, j) in enumerate(params):
        samples = []
        for h in range(6):
            m2, u2 = mu.copy(), upper.copy()
            (m2 if which == "mu" else u2)[j] += h
            samples.append(moment_at(m2, u2))
        jac = [_finite_difference_derivative([s[c] for s in samples], P) for c in range(rows.shape[1])]
        assert rows[r].tolist() == jac


def test_partition_slot_relabeling():
    fam = Partition(3, 3, (1, 2))
    assert fam.orderings == ((1, 2), (2, 1))
    pt = fam.sample_point(0, trial_rng(4))
    t1, t2 = pt.params
    swapped = PointSample(1, (t2, t1))
    a = fam.fiber_rows(pt, P)
    b = fam.fiber_rows(swapped, P)
    # move slot 1 to the end: T'[b, c, a] = T[a, b, c]
    a_perm = a.reshape(-1, 3, 3, 3).transpose(0, 2, 3, 1).reshape(a.shape[0], -1)
    assert rank_array(a_perm, P) == rank_array(b, P) == fam.component_rank()
    assert rank_array(np.vstack([a_perm, b]), P) == fam.component_rank()


def test_partition_component_dedup():
    assert len(Partition(3, 5, (1, 1, 1, 2)).orderings) == 4
    assert len(Partition(3, 3, (1, 1, 1)).orderings) == 1


def test_register_moment_recipe(monkeypatch):
    monkeypatch.setattr("nondefect.bundle.MOMENT_RECIPES", dict(MOMENT_RECIPES))
    register_moment_recipe(quintic_recipe("toy", 10, 20))
    fam = Moments(3, ("gaussian", "toy"))
    assert fam.families == ("gaussian", "toy")
    rows = fam.fiber_rows(fam.sample_point(1, trial_rng(0)), P)
    assert rank_array(rows, P) == 9
