"""numpy implementations of the batched kernels (fallback backend)."""
import numpy as np


def weighted_outer(u, v, w):
    return w[:, None, None] * u[:, :, None] * v[:, None, :]


def sandwich(L, X, R):
    return L @ X @ R


def commutator(X, Y):
    return X @ Y - Y @ X


def diag_commutator(d, X):
    return (d[:, :, None] - d[:, None, :]) * X


def rank_r_projector(n, m):
    mT = np.swapaxes(m, -1, -2)
    R = mT @ n
    dets = np.linalg.det(R)
    out = np.full(n.shape[:1] + (n.shape[1], n.shape[1]), np.nan, dtype=complex)
    ok = dets != 0
    if ok.any():
        out[ok] = n[ok] @ np.linalg.solve(R[ok], mT[ok])
    return out, dets
