import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from spanroute.errors import OutOfSpan, RankDeficient
from spanroute.graph import enumerate_paths
from spanroute.spanner import build_spanner


def volume(rows):
    """|det| generalised to a d-subset of R^m: sqrt of the Gram determinant."""
    M = np.asarray(rows, dtype=float)
    return float(np.sqrt(max(np.linalg.det(M @ M.T), 0.0)))


def test_diamond_spanner(diamond_paths):
    sp = build_spanner(diamond_paths.matrix, 2)
    assert sorted(sp.basis_ids) == [0, 1]
    for i, p in enumerate(diamond_paths.matrix):
        expected = np.zeros(2)
        expected[sp.basis_ids.index(i)] = 1
        assert np.allclose(sp.coefficients(p), expected)


def test_parallel_serial_spanner(ps_paths):
    sp = build_spanner(ps_paths.matrix, 3)
    assert sp.basis_ids == (0, 1, 2)
    # hand solve: (1,3) = -(0,2) + (0,3) + (1,2)
    assert np.allclose(sp.coefficients(ps_paths.matrix[3]), [-1, 1, 1], atol=1e-12)
    # brute force over all 3-subsets: the chosen basis has maximal volume
    best = max(volume(ps_paths.matrix[list(c)]) for c in itertools.combinations(range(4), 3))
    assert volume(sp.basis) == pytest.approx(best)


def test_rank_deficient():
    with pytest.raises(RankDeficient):
        build_spanner([[1, 0, 1], [1, 0, 1]], 2)


def test_coefficients_identity_and_zero(ps_paths):
    sp = build_spanner(ps_paths.matrix, 3)
    assert np.allclose(sp.coefficients(sp.basis[1]), [0, 1, 0])
    assert np.allclose(sp.coefficients(np.zeros(4)), 0)


def test_out_of_span(ps_paths):
    sp = build_spanner(ps_paths.matrix, 3)
    with pytest.raises(OutOfSpan):
        sp.coefficients([1, 0, 0, 0])


def test_exact_spanner_property_on_bundled(bundled):
    ps = enumerate_paths(bundled)
    sp = build_spanner(ps.matrix, ps.dimension)
    coef = sp.coefficient_matrix(ps.matrix)
    assert np.max(np.abs(coef)) <= 1 + 1e-9
    assert np.allclose(coef @ sp.basis, ps.matrix, atol=1e-9)


def test_determinism(bundled):
    ps = enumerate_paths(bundled)
    a = build_spanner(ps.matrix, ps.dimension)
    b = build_spanner(ps.matrix, ps.dimension)
    assert a.basis_ids == b.basis_ids


def test_approximate_mode():
    rng = np.random.default_rng(3)
    X = rng.normal(size=(40, 4))
    sp = build_spanner(X, 4, approx_C=2.0)
    assert np.max(np.abs(sp.coefficient_matrix(X))) <= 2 + 1e-9


vectors = st.lists(
    st.lists(st.integers(-4, 4), min_size=3, max_size=3), min_size=3, max_size=12
).filter(lambda v: np.linalg.matrix_rank(np.array(v, float)) == 3)


@given(vectors, st.sampled_from([1.0, 1.5, 3.0]))
def test_spanner_bound_and_monotone_swaps(X, C):
    X = np.array(X, float)
    sp = build_spanner(X, 3, approx_C=C)
    assert np.max(np.abs(sp.coefficient_matrix(X))) <= C + 1e-9
    h = sp.det_history
    for before, after in zip(h, h[1:]):
        assert after > C * before


@given(st.lists(st.lists(st.integers(0, 1), min_size=5, max_size=5), min_size=2, max_size=10, unique_by=tuple))
def test_embedded_subspace(rows):
    X = np.array(rows, float)
    d = int(np.linalg.matrix_rank(X))
    if d == 0:
        return
    sp = build_spanner(X, d)
    coef = sp.coefficient_matrix(X)
    assert np.max(np.abs(coef)) <= 1 + 1e-9
    assert np.allclose(coef @ sp.basis, X, atol=1e-9)
