"""NumPy fallback for the hot pair-sum kernels.

Row-vectorized with a fixed row order so results are reproducible run to
run.  The Cython extension (_corecy) implements the same contract.
"""

from __future__ import annotations

import numpy as np

BACKEND_NAME = "numpy"

_CHUNK = 256


def pairsum_energy(u, W, p):
    """sum_{i,j} |u_i - u_j|^p W_ij (the diagonal of W must be zero)."""
    u = np.asarray(u, dtype=float)
    total = 0.0
    for start in range(0, len(u), _CHUNK):
        block = u[start:start + _CHUNK]
        d = np.abs(block[:, None] - u[None, :])
        if p == 2.0:
            d *= d
        else:
            d **= p
        total += float(np.sum(d * W[start:start + _CHUNK]))
    return total


def pairsum_gradient(u, W, p):
    """out_i = sum_j |u_i - u_j|^(p-2) (u_i - u_j) W_ij."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    for start in range(0, len(u), _CHUNK):
        block = u[start:start + _CHUNK]
        d = block[:, None] - u[None, :]
        if p == 2.0:
            t = d
        else:
            t = np.abs(d) ** (p - 2.0) * d
        out[start:start + _CHUNK] = np.sum(t * W[start:start + _CHUNK], axis=1)
    return out


def holder_sup(values, coords, alpha):
    """max over node pairs of |v_i - v_j| / |x_i - x_j|^alpha."""
    values = np.asarray(values, dtype=float)
    coords = np.asarray(coords, dtype=float)
    best = 0.0
    n = len(values)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        dv = np.abs(values[start:stop, None] - values[None, :])
        d2 = np.zeros((stop - start, n))
        for ax in range(coords.shape[1]):
            diff = coords[start:stop, ax, None] - coords[None, :, ax]
            d2 += diff * diff
        np.fill_diagonal(d2[:, start:stop], np.inf)
        q = dv / d2 ** (alpha / 2.0)
        best = max(best, float(q.max(initial=0.0)))
    return best
