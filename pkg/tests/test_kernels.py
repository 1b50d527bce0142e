import importlib
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zsdress import kernels

BACKENDS = kernels.available_backends()


def _rand(rng, *shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(1, 6), st.integers(0, 2**32 - 1))
def test_backends_agree(K, N, seed):
    rng = np.random.default_rng(seed)
    u, v, w = _rand(rng, K, N), _rand(rng, K, N), _rand(rng, K)
    L, R, X, Y = _rand(rng, N, N), _rand(rng, N, N), _rand(rng, K, N, N), _rand(rng, K, N, N)
    d = _rand(rng, K, N)
    for b in BACKENDS:
        assert np.allclose(kernels.weighted_outer(u, v, w, backend=b), w[:, None, None] * np.einsum("ki,kj->kij", u, v))
        assert np.allclose(kernels.sandwich(L, X, R, backend=b), L @ X @ R)
        assert np.allclose(kernels.commutator(X, Y, backend=b), X @ Y - Y @ X)
        D = np.einsum("ki,ij->kij", d, np.eye(N))
        assert np.allclose(kernels.diag_commutator(d, X, backend=b), D @ X - X @ D)


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("r", [1, 2, 3])
def test_rank_r_projector(backend, r):
    rng = np.random.default_rng(r)
    n, m = _rand(rng, 9, 6, r), _rand(rng, 9, 6, r)
    P, dets = kernels.rank_r_projector(n, m, backend=backend)
    R = np.swapaxes(m, 1, 2) @ n
    assert np.allclose(dets, np.linalg.det(R))
    assert np.allclose(P @ P, P)
    assert np.allclose(np.trace(P, axis1=1, axis2=2), r)


@pytest.mark.parametrize("backend", BACKENDS)
def test_rank_r_projector_singular_gives_nan(backend):
    n = np.zeros((2, 4, 2), dtype=complex)
    n[1] = np.eye(4)[:, :2]
    P, dets = kernels.rank_r_projector(n, n.copy(), backend=backend)
    assert dets[0] == 0 and np.isnan(P[0]).all()
    assert np.allclose(P[1], np.diag([1, 1, 0, 0]))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


def test_pure_python_switch():
    env = dict(os.environ, ZSDRESS_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import zsdress; print(zsdress.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_compiled_backend_is_default_when_built():
    mod = importlib.util.find_spec("zsdress._ckernels")
    if mod is None or os.environ.get("ZSDRESS_PURE_PYTHON"):
        pytest.skip("compiled kernels not built")
    assert kernels.BACKEND == "cython"
