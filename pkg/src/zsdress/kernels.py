"""Backend selection for the batched matrix kernels.

The compiled module is used when it imports; ``ZSDRESS_PURE_PYTHON=1`` forces
the numpy fallback.  All wrappers take a leading batch axis.
"""
import os

import numpy as np

from . import _pykernels

_python = _pykernels
try:
    if os.environ.get("ZSDRESS_PURE_PYTHON", "") not in ("", "0"):
        raise ImportError("pure-python backend requested")
    from . import _ckernels as _compiled
except ImportError:
    _compiled = None

BACKEND = "cython" if _compiled is not None else "python"
_impl = _compiled if _compiled is not None else _python


def available_backends():
    return ["cython", "python"] if _compiled is not None else ["python"]


def get_backend(name):
    """Return the raw kernel module for ``name`` ("cython" or "python")."""
    if name == "python":
        return _python
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")


def _c(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def weighted_outer(u, v, w, backend=None):
    """out[k] = w[k] * outer(u[k], v[k])."""
    impl = _impl if backend is None else get_backend(backend)
    return impl.weighted_outer(_c(u), _c(v), _c(w))


def sandwich(L, X, R, backend=None):
    """out[k] = L @ X[k] @ R."""
    impl = _impl if backend is None else get_backend(backend)
    return impl.sandwich(_c(L), _c(X), _c(R))


def commutator(X, Y, backend=None):
    impl = _impl if backend is None else get_backend(backend)
    return impl.commutator(_c(X), _c(Y))


def diag_commutator(d, X, backend=None):
    """[diag(d[k]), X[k]] for a batch of diagonals ``d`` of shape (K, N)."""
    impl = _impl if backend is None else get_backend(backend)
    X = _c(X)
    d = np.broadcast_to(np.asarray(d, dtype=np.complex128), X.shape[:2])
    return impl.diag_commutator(_c(d), X)


def rank_r_projector(n, m, backend=None):
    """Return ``(n (m^T n)^{-1} m^T, det(m^T n))`` for (K, N, r) inputs."""
    impl = _impl if backend is None else get_backend(backend)
    return impl.rank_r_projector(_c(n), _c(m))
