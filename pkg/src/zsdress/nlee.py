"""Finite-difference residuals of the N-wave and NLS-type equations.

Derivatives are second-order central differences with step h in each axis;
norms are entrywise maxima over the grid.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .fields import Grid, MatrixField
from .lie_algebra import AlgebraBasis, CartanElement, ad_j_inverse, projector_p0, root_components

SQRT2 = np.sqrt(2.0)

# name -> root coordinates for the C_2 component system
C2_COMPONENTS = {
    "Q12b": (1, -1),
    "Q12": (1, 1),
    "Q11": (2, 0),
    "Q22": (0, 2),
    "Q1b2": (-1, 1),
    "Q1b2b": (-1, -1),
    "Q1b1b": (-2, 0),
    "Q2b2b": (0, -2),
}
LONG_C2 = ("Q11", "Q22", "Q1b1b", "Q2b2b")


@dataclass(frozen=True, eq=False)
class NWaveData:
    J: CartanElement
    I: CartanElement
    Q: MatrixField
    basis: AlgebraBasis | None = None

    @property
    def kappa(self) -> float:
        J, I = self.J.coords, self.I.coords
        return J[0] * I[1] - J[1] * I[0]


@dataclass(eq=False)
class ResidualField:
    components: dict
    h: float
    grid: Grid
    extra: dict = field(default_factory=dict)

    @property
    def max_norms(self) -> dict:
        return {k: float(np.abs(v).max()) if v.size else 0.0 for k, v in self.components.items()}

    @property
    def max_norm(self) -> float:
        return max(self.max_norms.values(), default=0.0)

    def worst_point(self, name=None):
        names = [name] if name is not None else list(self.components)
        best, where = -1.0, None
        x, t = self.grid.x, self.grid.t
        for n in names:
            v = np.abs(self.components[n])
            if not v.size:
                continue
            v = v.reshape(v.shape[:2] + (-1,)).max(axis=2)
            j, i = np.unravel_index(int(np.argmax(v)), v.shape)
            if v[j, i] > best:
                best, where = float(v[j, i]), (float(x[i]), float(t[j]))
        return where

    def to_dict(self) -> dict:
        return {
            name: {"max_norm": val, "h": self.h, "grid_spec": self.grid.to_dict()}
            for name, val in self.max_norms.items()
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _stencil(f: MatrixField, grid: Grid, h: float):
    """Values at the centre and the four neighbours, each (nt, nx, ...)."""
    X, T = grid.mesh()
    xs = np.stack([X, X + h, X - h, X, X])
    ts = np.stack([T, T, T, T + h, T - h])
    v = f(xs, ts)
    c, xp, xm, tp, tm = v
    return c, (xp - xm) / (2 * h), (tp - tm) / (2 * h), (xp - 2 * c + xm) / (h * h)


def _dcomm(d, X):
    """[diag(d), X] for stacked matrices."""
    return (d[:, None] - d[None, :]) * X


def nwave_matrix_residual(J: CartanElement, I: CartanElement, Q, Qx, Qt):
    jd, idg = np.diag(J.matrix), np.diag(I.matrix)
    return 1j * _dcomm(jd, Qt) - 1j * _dcomm(idg, Qx) + _dcomm(idg, Q) @ _dcomm(jd, Q) - _dcomm(jd, Q) @ _dcomm(idg, Q)


def _offdiag(X):
    X = np.array(X, dtype=complex)
    n = X.shape[-1]
    X[..., np.arange(n), np.arange(n)] = 0.0
    return X


def nwave_residual(data: NWaveData, grid: Grid, h: float) -> ResidualField:
    """i[J,Q_t] - i[I,Q_x] + [[I,Q],[J,Q]] with the diagonal part of Q removed."""
    Q, Qx, Qt, _ = (_offdiag(v) for v in _stencil(data.Q, grid, h))
    R = nwave_matrix_residual(data.J, data.I, Q, Qx, Qt)
    return ResidualField({"matrix": R}, h, grid)


def c2_component_equations(J, I, q, qx, qt) -> dict:
    """The eight scalar N-wave equations for C_2, component dicts keyed by C2_COMPONENTS.

    Short-root equations are the root projections of the matrix equation;
    long-root equations are half of theirs.
    """
    J1, J2 = J
    I1, I2 = I
    kap = J1 * I2 - J2 * I1
    g = 2 * SQRT2 * kap
    gl = SQRT2 * kap
    i = 1j
    return {
        "Q12b": i * (J1 - J2) * qt["Q12b"] - i * (I1 - I2) * qx["Q12b"]
        + g * (q["Q2b2b"] * q["Q12"] - q["Q11"] * q["Q1b2b"]),
        "Q12": i * (J1 + J2) * qt["Q12"] - i * (I1 + I2) * qx["Q12"]
        - g * (q["Q22"] * q["Q12b"] + q["Q11"] * q["Q1b2"]),
        "Q11": i * J1 * qt["Q11"] - i * I1 * qx["Q11"] + gl * q["Q12b"] * q["Q12"],
        "Q22": i * J2 * qt["Q22"] - i * I2 * qx["Q22"] + gl * q["Q1b2"] * q["Q12"],
        "Q1b2": i * (J2 - J1) * qt["Q1b2"] - i * (I2 - I1) * qx["Q1b2"]
        + g * (q["Q1b1b"] * q["Q12"] - q["Q22"] * q["Q1b2b"]),
        "Q1b2b": -i * (J1 + J2) * qt["Q1b2b"] + i * (I1 + I2) * qx["Q1b2b"]
        + g * (q["Q1b1b"] * q["Q12b"] + q["Q2b2b"] * q["Q1b2"]),
        "Q1b1b": -i * J1 * qt["Q1b1b"] + i * I1 * qx["Q1b1b"] - gl * q["Q1b2b"] * q["Q1b2"],
        "Q2b2b": -i * J2 * qt["Q2b2b"] + i * I2 * qx["Q2b2b"] - gl * q["Q1b2b"] * q["Q12b"],
    }


def c2_components(basis: AlgebraBasis, M) -> dict:
    comps = root_components(basis, M)
    return {name: comps[basis.root(c)] for name, c in C2_COMPONENTS.items()}


def assemble_c2(basis: AlgebraBasis, comps: dict, long_weight: float = 1.0):
    out = 0
    for name, c in C2_COMPONENTS.items():
        w = long_weight if name in LONG_C2 else 1.0
        out = out + w * np.asarray(comps[name])[..., None, None] * basis.E(c)
    return out


def nwave_c2_components(data: NWaveData, grid: Grid, h: float) -> ResidualField:
    basis = data.basis
    if basis is None or basis.series != "C" or basis.rank != 2:
        raise ValueError("the component system is defined for C_2 only")
    Q, Qx, Qt, _ = _stencil(data.Q, grid, h)
    q, qx, qt = (c2_components(basis, v) for v in (Q, Qx, Qt))
    res = c2_component_equations(data.J.coords, data.I.coords, q, qx, qt)
    return ResidualField(res, h, grid)


def nls_terms(basis: AlgebraBasis, J: CartanElement, q, qx, qt, qxx):
    """i q_t + ad_J^{-1} q_xx - i P_0 [q, ad_J^{-1} q_x] + 1/2 [q, (1 - P_0)[q, ad_J^{-1} q]]."""
    inv = lambda X: ad_j_inverse(basis, J, X)  # noqa: E731
    p0 = lambda X: projector_p0(basis, J, X)  # noqa: E731
    comm = lambda A, B: A @ B - B @ A  # noqa: E731
    inner = comm(q, inv(q))
    return 1j * qt + inv(qxx) - 1j * p0(comm(q, inv(qx))) + 0.5 * comm(q, inner - p0(inner))


def nls_residual(basis: AlgebraBasis, J: CartanElement, q: MatrixField, grid: Grid, h: float) -> ResidualField:
    if not J.regular:
        raise ValueError("J must be regular")
    c, qx, qt, qxx = _stencil(q, grid, h)
    return ResidualField({"matrix": nls_terms(basis, J, c, qx, qt, qxx)}, h, grid)


def sl2_equations(q, qt_, qx, qxx, qtil, qtil_t, qtil_xx, omega1, omega2):
    r1 = 1j * qt_ + omega1 * qxx + omega2 * q * q * qtil
    r2 = 1j * qtil_t - omega1 * qtil_xx - omega2 * q * qtil * qtil
    return r1, r2


def nls_sl2_residual(q_field: MatrixField, qtilde_field: MatrixField, omega1: float, omega2: float,
                     grid: Grid, h: float) -> ResidualField:
    q, _, qt, qxx = _stencil(q_field, grid, h)
    p, _, pt, pxx = _stencil(qtilde_field, grid, h)
    r1, r2 = sl2_equations(q, qt, None, qxx, p, pt, pxx, omega1, omega2)
    return ResidualField({"q": r1, "qtilde": r2}, h, grid)


def convergence_pair(fn, h: float):
    """Run ``fn(h)`` and ``fn(h/2)``; return (ResidualField, ResidualField, ratio)."""
    a, b = fn(h), fn(h / 2)
    ra, rb = a.max_norm, b.max_norm
    ratio = np.inf if rb == 0 else ra / rb
    return a, b, ratio


# -- residuals from sampled grids (dump round trips) --------------------------

def _grid_derivatives(values, grid: Grid):
    """Interior central differences with the grid spacings; returns centre, d/dx, d/dt, d2/dx2."""
    dx, dt = grid.dx, grid.dt
    c = values[1:-1, 1:-1]
    vx = (values[1:-1, 2:] - values[1:-1, :-2]) / (2 * dx)
    vt = (values[2:, 1:-1] - values[:-2, 1:-1]) / (2 * dt)
    vxx = (values[1:-1, 2:] - 2 * c + values[1:-1, :-2]) / (dx * dx)
    return c, vx, vt, vxx


def _interior(grid: Grid) -> Grid:
    return Grid(grid.x[1], grid.x[-2], grid.nx - 2, grid.t[1], grid.t[-2], grid.nt - 2)


def sampled_nwave_c2_residual(basis, J, I, components: dict, grid: Grid) -> ResidualField:
    """Component-system residual from sampled C_2 components of shape (nt, nx)."""
    if grid.nx < 3 or grid.nt < 3:
        raise ValueError("need at least 3 points per axis")
    parts = {k: _grid_derivatives(np.asarray(v), grid) for k, v in components.items()}
    q = {k: p[0] for k, p in parts.items()}
    qx = {k: p[1] for k, p in parts.items()}
    qt = {k: p[2] for k, p in parts.items()}
    res = c2_component_equations(J.coords, I.coords, q, qx, qt)
    return ResidualField(res, min(grid.dx, grid.dt), _interior(grid))


def sampled_nls_sl2_residual(q, qtilde, omega1, omega2, grid: Grid) -> ResidualField:
    if grid.nx < 3 or grid.nt < 3:
        raise ValueError("need at least 3 points per axis")
    c, _, ct, cxx = _grid_derivatives(np.asarray(q), grid)
    p, _, pt, pxx = _grid_derivatives(np.asarray(qtilde), grid)
    r1, r2 = sl2_equations(c, ct, None, cxx, p, pt, pxx, omega1, omega2)
    return ResidualField({"q": r1, "qtilde": r2}, min(grid.dx, grid.dt), _interior(grid))
