import numpy as np

from motrans import kernels, quat


def test_backend_reports_a_known_value():
    assert kernels.backend() in ("numba", "numpy")


def test_lbs_blend_backends_agree():
    if not kernels._HAVE_NUMBA:
        return  # numpy-only environment: nothing to compare
    rng = np.random.default_rng(1)
    verts = rng.normal(size=(200, 3))
    w = rng.uniform(size=(200, 6))
    w /= w.sum(axis=1, keepdims=True)
    rots = quat.to_matrix(quat.random_unit(rng, 6))
    trans = rng.normal(size=(6, 3))
    fast = kernels._lbs_blend_numba(verts, w, rots, trans)
    slow = kernels._lbs_blend_numpy(verts, w, rots, trans)
    assert np.abs(fast - slow).max() < 1e-12


def test_kde_sum_backends_agree():
    if not kernels._HAVE_NUMBA:
        return
    rng = np.random.default_rng(2)
    pts = rng.normal(size=(50, 3))
    queries = rng.normal(size=(20, 3))
    fast = kernels._kde_sum_numba(pts, queries, 0.3)
    slow = kernels._kde_sum_numpy(pts, queries, 0.3)
    assert np.abs(fast / slow - 1.0).max() < 1e-12
