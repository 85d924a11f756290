import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from nameshift import _kernels


def brute_pairs(lo, hi, window):
    out = []
    for i in range(len(lo)):
        for j in range(i + 1, len(lo)):
            gap = max(lo[j] - hi[i], lo[i] - hi[j], 0)
            if gap <= window:
                out.append((i, j))
    return out


spans = st.lists(st.tuples(st.integers(0, 60), st.integers(0, 4)), max_size=25).map(
    lambda xs: sorted((a, a + d) for a, d in xs))


@given(spans, st.integers(1, 12))
def test_window_pairs_numpy_matches_brute_force(sp, window):
    lo = np.array([a for a, _ in sp], dtype=np.int64)
    hi = np.array([b for _, b in sp], dtype=np.int64)
    got = sorted(map(tuple, _kernels.window_pairs_numpy(lo, hi, window).tolist()))
    assert got == brute_pairs(lo.tolist(), hi.tolist(), window)


@pytest.mark.skipif(not _kernels.HAS_NUMBA, reason="numba not installed")
@given(spans, st.integers(1, 12))
def test_window_pairs_numba_matches_numpy(sp, window):
    lo = np.array([a for a, _ in sp], dtype=np.int64)
    hi = np.array([b for _, b in sp], dtype=np.int64)
    a = _kernels.window_pairs_numba(lo, hi, window)
    b = _kernels.window_pairs_numpy(lo, hi, window)
    assert sorted(map(tuple, a.tolist())) == sorted(map(tuple, b.tolist()))


sets = st.lists(st.frozensets(st.integers(0, 130), max_size=8), max_size=15)


@given(sets)
def test_subset_matrix_matches_brute_force(rows):
    bits = _kernels.pack_sets(rows, 131)
    expected = np.array([[b <= a for b in rows] for a in rows], dtype=bool).reshape(len(rows), len(rows))
    assert np.array_equal(_kernels.subset_matrix_numpy(bits), expected)
    if _kernels.HAS_NUMBA:
        assert np.array_equal(_kernels.subset_matrix_numba(bits), expected)


vectors = st.integers(1, 6).flatmap(lambda n: st.tuples(
    st.lists(st.floats(0, 50, allow_nan=False), min_size=n, max_size=n),
    st.lists(st.lists(st.floats(0, 50, allow_nan=False), min_size=n, max_size=n), min_size=1, max_size=5)))


@given(vectors)
def test_cosine_scores_match_definition(data):
    q, rows = data
    q = np.array(q)
    rows = np.array(rows)
    want = []
    for r in rows:
        denom = np.linalg.norm(q) * np.linalg.norm(r)
        want.append(float(q @ r / denom) if denom > 0 else 0.0)
    np.testing.assert_allclose(_kernels.cosine_scores_numpy(q, rows), want, atol=1e-9)
    if _kernels.HAS_NUMBA:
        np.testing.assert_allclose(_kernels.cosine_scores_numba(q, rows), want, atol=1e-9)


def test_dispatch_follows_flag(backend):
    lo = np.array([0, 3, 30], dtype=np.int64)
    hi = np.array([1, 4, 31], dtype=np.int64)
    assert _kernels.window_pairs(lo, hi, 10).tolist() == [[0, 1]]
    assert _kernels.USE_NUMBA == (backend == "numba")


def test_pack_sets_layout():
    bits = _kernels.pack_sets([{0, 64}, set()], 65)
    assert bits.shape == (2, 2)
    assert bits[0, 0] == 1 and bits[0, 1] == 1 and not bits[1].any()
