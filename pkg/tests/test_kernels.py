import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dpcurves import _kernels
from dpcurves.lattice import CurveClass, SurfaceKind, candidate_filter, make_surface, weyl_normalize

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


def python_splits(beta, prune_genus):
    """Reference: parts with 1 <= d1 < d via the scalar candidate filter."""
    k = len(beta) - 1
    s = make_surface(SurfaceKind.P2_BLOWUP, k)
    beta = CurveClass(beta)
    out = []

    def rec(prefix, i, d1):
        if i == k:
            b1 = CurveClass((d1, *prefix))
            if candidate_filter(s, b1, prune_genus=prune_genus) and \
                    candidate_filter(s, beta - b1, prune_genus=prune_genus):
                out.append(b1.coords)
            return
        for v in range(0, beta[i + 1] + 1):
            rec(prefix + [v], i + 1, d1)

    for d1 in range(1, beta[0]):
        rec([], 0, d1)
    return sorted(out)


blowup_class = st.integers(0, 6).flatmap(
    lambda k: st.tuples(st.integers(1, 9), st.lists(st.integers(0, 5), min_size=k, max_size=k)))


@settings(max_examples=150, deadline=None)
@given(blowup_class, st.booleans())
def test_numpy_splits_match_reference(cls, prune):
    d, m = cls
    beta = np.array([d, *m], dtype=np.int64)
    c1 = 3 * d - sum(m)
    got = _kernels.blowup_splits(beta, c1, prune, backend="numpy")
    assert [tuple(r) for r in got.tolist()] == python_splits(beta.tolist(), prune)


@needs_numba
@settings(max_examples=150, deadline=None)
@given(blowup_class, st.booleans())
def test_backends_agree_on_splits(cls, prune):
    d, m = cls
    beta = np.array([d, *m], dtype=np.int64)
    c1 = 3 * d - sum(m)
    a = _kernels.blowup_splits(beta, c1, prune, backend="numpy")
    b = _kernels.blowup_splits(beta, c1, prune, backend="numba")
    assert a.dtype == b.dtype == np.int64
    np.testing.assert_array_equal(a, b)


rows_strategy = st.integers(0, 8).flatmap(
    lambda k: st.lists(st.lists(st.integers(-3, 12), min_size=k + 1, max_size=k + 1),
                       min_size=1, max_size=20))


@settings(max_examples=150, deadline=None)
@given(rows_strategy)
def test_normalize_matches_scalar(rows):
    k = len(rows[0]) - 1
    s = make_surface(SurfaceKind.P2_BLOWUP, k)
    arr = np.array(rows, dtype=np.int64)
    want = [weyl_normalize(s, r).coords for r in rows]
    for backend in ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else []):
        got = _kernels.normalize_blowup_rows(arr, backend=backend)
        assert [tuple(r) for r in got.tolist()] == want
    np.testing.assert_array_equal(arr, np.array(rows))  # input untouched


def test_quadric_splits():
    rows = _kernels.quadric_splits(np.array([1, 1]))
    assert sorted(map(tuple, rows.tolist())) == [(0, 1), (1, 0)]


def test_backend_flag_is_reported():
    assert _kernels.BACKEND in ("numba", "numpy")
    if not _kernels.HAVE_NUMBA:
        with pytest.raises(RuntimeError):
            _kernels.blowup_splits(np.array([2]), 6, True, backend="numba")
