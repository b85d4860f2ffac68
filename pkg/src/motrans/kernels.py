"""Hot numeric kernels with numba acceleration and a pure-numpy fallback.

Both paths compute identical results; set MOTRANS_DISABLE_NUMBA=1 to force
the numpy implementations (useful for debugging and for environments where
numba is unavailable). `benchmarks/bench_kernels.py` compares the two.
"""

from __future__ import annotations

import math
import os

import numpy as np

_DISABLE = os.environ.get("MOTRANS_DISABLE_NUMBA", "").lower() in ("1", "true", "yes")

try:
    if _DISABLE:
        raise ImportError
    from numba import njit, prange
    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False


def backend() -> str:
    return "numba" if _HAVE_NUMBA else "numpy"


# --- pure-numpy implementations -------------------------------------------

def _lbs_blend_numpy(vertices, weights, rotations, translations):
    # (K,V,3) transformed copies, blended by the (V,K) weight matrix
    transformed = np.einsum("kij,vj->kvi", rotations, vertices) + translations[:, None, :]
    return np.einsum("vk,kvi->vi", weights, transformed)


def _kde_sum_numpy(points, queries, h):
    d2 = ((queries[:, None, :] - points[None, :, :]) ** 2).sum(axis=2)
    norm = 1.0 / (len(points) * h ** 3 * (2.0 * np.pi) ** 1.5)
    return norm * np.exp(-d2 / (2.0 * h * h)).sum(axis=1)


# --- numba implementations --------------------------------------------------

if _HAVE_NUMBA:

    @njit(cache=True, parallel=True)
    def _lbs_blend_numba(vertices, weights, rotations, translations):  # pragma: no cover
        V = vertices.shape[0]
        K = weights.shape[1]
        out = np.zeros((V, 3))
        for v in prange(V):
            for k in range(K):
                w = weights[v, k]
                if w == 0.0:
                    continue
                R = rotations[k]
                t = translations[k]
                x, y, z = vertices[v, 0], vertices[v, 1], vertices[v, 2]
                out[v, 0] += w * (R[0, 0] * x + R[0, 1] * y + R[0, 2] * z + t[0])
                out[v, 1] += w * (R[1, 0] * x + R[1, 1] * y + R[1, 2] * z + t[1])
                out[v, 2] += w * (R[2, 0] * x + R[2, 1] * y + R[2, 2] * z + t[2])
        return out

    @njit(cache=True, parallel=True)
    def _kde_sum_numba(points, queries, h):  # pragma: no cover
        n = points.shape[0]
        m = queries.shape[0]
        norm = 1.0 / (n * h ** 3 * (2.0 * np.pi) ** 1.5)
        inv = 1.0 / (2.0 * h * h)
        out = np.empty(m)
        for i in prange(m):
            acc = 0.0
            for j in range(n):
                dx = queries[i, 0] - points[j, 0]
                dy = queries[i, 1] - points[j, 1]
                dz = queries[i, 2] - points[j, 2]
                acc += math.exp(-(dx * dx + dy * dy + dz * dz) * inv)
            out[i] = acc * norm
        return out


def lbs_blend(vertices: np.ndarray, weights: np.ndarray,
              rotations: np.ndarray, translations: np.ndarray) -> np.ndarray:
    """Weighted blend of per-part rigid transforms: sum_k W[v,k] (R_k x_v + t_k)."""
    vertices = np.ascontiguousarray(vertices, dtype=np.float64)
    weights = np.ascontiguousarray(weights, dtype=np.float64)
    rotations = np.ascontiguousarray(rotations, dtype=np.float64)
    translations = np.ascontiguousarray(translations, dtype=np.float64)
    if _HAVE_NUMBA:
        return _lbs_blend_numba(vertices, weights, rotations, translations)
    return _lbs_blend_numpy(vertices, weights, rotations, translations)


def kde_sum(points: np.ndarray, queries: np.ndarray, h: float) -> np.ndarray:
    """Gaussian KDE density at each query: mean of 3-D kernels over `points`."""
    points = np.ascontiguousarray(points, dtype=np.float64)
    queries = np.ascontiguousarray(queries, dtype=np.float64)
    if _HAVE_NUMBA:
        return _kde_sum_numba(points, queries, float(h))
    return _kde_sum_numpy(points, queries, float(h))
