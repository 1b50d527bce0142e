"""Dressing factors and dressed potentials over the zero seed potential.

Four constructions are provided: the rank-one sl(N) projector, the rank-one
orthogonal (B_r, D_r) pair of projectors, the rank-one symplectic pair with
its A, B corrections, and the rank-r projector with pi_1 + pi_-1 = 1 (mu = 1/2).
The sl(2) double dressing and its degenerate limit are at the end.

All fields are closures over the analytic seed solution.  The vectors
chi_0^+(lambda_+) n_0 and chi_0^-(lambda_-)^{-1} m_0 are rescaled pointwise by
positive scalars before use; every projector formula is homogeneous in n and
m separately, so the rescaling only removes overflow.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType

import numpy as np

from . import kernels
from .fields import Grid, MatrixField, zero_field
from .lie_algebra import AlgebraBasis, CartanElement, build_algebra, cartan_element, root_components
from .report import VerificationReport
from .spectral import (
    DispersionData,
    SpectralPair,
    c_factor,
    fas_exponent,
    fas_log_derivative,
)

CONSTRUCTIONS = ("SlRank1", "BDRank1", "CRank1", "RankR", "Sl2Double")
SINGULAR_RTOL = 1e-12


class SingularPointError(ValueError):
    """A dressing denominator vanished; ``x`` and ``t`` locate the first such point."""

    def __init__(self, quantity, x, t, value):
        self.quantity = quantity
        self.x = float(x)
        self.t = float(t)
        self.value = complex(value)
        super().__init__(f"{quantity} vanishes at x={self.x:.17g}, t={self.t:.17g} (value {self.value:.3e})")


class SeedConstraintError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SeedVectors:
    n_list: tuple
    m_list: tuple

    def __post_init__(self):
        n = tuple(np.array(v, dtype=complex).ravel() for v in self.n_list)
        m = tuple(np.array(v, dtype=complex).ravel() for v in self.m_list)
        if len(n) != len(m) or not n:
            raise ValueError("need equally many (and at least one) n and m vectors")
        if len({v.size for v in n + m}) != 1:
            raise ValueError("seed vectors must share one dimension")
        object.__setattr__(self, "n_list", n)
        object.__setattr__(self, "m_list", m)

    @classmethod
    def single(cls, n0, m0) -> "SeedVectors":
        return cls((n0,), (m0,))

    @classmethod
    def conjugate(cls, n_list) -> "SeedVectors":
        """Involution-compatible seeds, m = conj(n)."""
        n_list = [np.asarray(v, dtype=complex) for v in n_list]
        return cls(tuple(n_list), tuple(v.conj() for v in n_list))

    @property
    def count(self) -> int:
        return len(self.n_list)

    @property
    def dim(self) -> int:
        return self.n_list[0].size

    @property
    def n(self) -> np.ndarray:
        """Columns n_0^i, shape (N, r1)."""
        return np.stack(self.n_list, axis=1)

    @property
    def m(self) -> np.ndarray:
        return np.stack(self.m_list, axis=1)


def seed_constraint_residual(basis: AlgebraBasis, seeds: SeedVectors) -> float:
    """max |<v_i|S|v_k>| / (|v_i||v_k|) over the n- and m-families."""
    S = basis.s_matrix
    if S is None:
        return 0.0
    worst = 0.0
    for fam in (seeds.n, seeds.m):
        G = fam.T @ S @ fam
        norms = np.linalg.norm(fam, axis=0)
        worst = max(worst, float(np.max(np.abs(G) / np.outer(norms, norms))))
    return worst


@dataclass(frozen=True, eq=False)
class DressingState:
    pi_plus: MatrixField
    pi_minus: MatrixField
    mu: Fraction
    pair: SpectralPair
    construction: str
    aux: MappingProxyType = field(default_factory=lambda: MappingProxyType({}))
    basis: AlgebraBasis | None = None
    disp: DispersionData | None = None
    seeds: SeedVectors | None = None

    def __post_init__(self):
        if self.construction not in CONSTRUCTIONS:
            raise ValueError(f"unknown construction {self.construction!r}")
        object.__setattr__(self, "mu", Fraction(self.mu))


@dataclass(frozen=True, eq=False)
class DressedPotential:
    q1: MatrixField
    q0: MatrixField
    pair: SpectralPair
    Q: MatrixField
    root_coefficients: MappingProxyType
    basis: AlgebraBasis | None = None

    def coefficient(self, coords) -> MatrixField:
        return self.root_coefficients[self.basis.root(coords)]

    def q1_coefficient(self, coords) -> MatrixField:
        """Component of q1 = [J, Q] along E_alpha, i.e. alpha(J) times the Q component."""
        root = self.basis.root(coords)
        return self.q1.map(lambda M: root_components(self.basis, M)[root], shape=(), name=f"q1[{root.label}]")


# -- shared pieces -------------------------------------------------------------

def _cached(core):
    last = [None]

    def run(x, t):
        key = (x.tobytes(), t.tobytes())
        hit = last[0]
        if hit is not None and hit[0] == key:
            return hit[1]
        out = core(x, t)
        last[0] = (key, out)
        return out

    return run


def _scaled_columns(expo, cols):
    """exp(expo)[:, :, None] * cols, divided pointwise by its largest magnitude."""
    with np.errstate(divide="ignore"):
        logw = np.log(np.abs(cols).max(axis=1))
    shift = np.max(expo.real + logw, axis=1, keepdims=True)
    return np.exp(expo - shift)[:, :, None] * cols[None, :, :]


def _greedy_pivots(order, cols):
    rows = []
    for k in order:
        trial = rows + [int(k)]
        if np.linalg.matrix_rank(cols[trial], tol=1e-12 * np.abs(cols).max()) == len(trial):
            rows = trial
            if len(rows) == cols.shape[1]:
                return tuple(rows)
    raise ValueError("seed vectors are linearly dependent")


def _pivoted_columns(expo, cols):
    """diag(exp(expo)) @ cols @ G with G chosen so the pivot rows become the identity.

    Pivot rows are picked greedily by exponent size, so every entry of the
    result is a bounded constant times exp(expo_k - expo_pivot) with no
    cancellation, however large the exponents are.
    """
    with np.errstate(divide="ignore"):
        score = expo.real + np.log(np.abs(cols).max(axis=1))
    order = np.argsort(-score, axis=1, kind="stable")
    uniq, inverse = np.unique(order, axis=0, return_inverse=True)
    inverse = inverse.ravel()
    out = np.empty(expo.shape + (cols.shape[1],), dtype=complex)
    cache = {}
    for u, row in enumerate(uniq):
        piv = cache.get(tuple(row))
        if piv is None:
            piv = cache[tuple(row)] = _greedy_pivots(row, cols)
        sel = inverse == u
        M = cols @ np.linalg.inv(cols[list(piv)])
        e = expo[sel]
        out[sel] = np.exp(e[:, :, None] - e[:, list(piv)][:, None, :]) * M[None]
    return out


def _dressed_vectors(disp, seeds, pair, x, t):
    """n = chi(lambda_+) n_0 and m = chi(lambda_-)^{-1} m_0, shapes (K, N, r1)."""
    n = _scaled_columns(fas_exponent(disp, x, t, pair.lambda_plus), seeds.n)
    m = _scaled_columns(-fas_exponent(disp, x, t, pair.lambda_minus), seeds.m)
    return n, m


def _raw_vectors(disp, seeds, pair, x, t):
    """Unscaled chi(lambda_+) n_0 and chi(lambda_-)^{-1} m_0 (may overflow far out)."""
    n = np.exp(fas_exponent(disp, x, t, pair.lambda_plus))[:, :, None] * seeds.n[None]
    m = np.exp(-fas_exponent(disp, x, t, pair.lambda_minus))[:, :, None] * seeds.m[None]
    return n, m


def _raise_if_singular(quantity, value, scale, x, t):
    bad = ~(np.abs(value) > SINGULAR_RTOL * scale)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise SingularPointError(quantity, x[k], t[k], value[k])


def _s_transpose(basis, pi):
    """S pi^T S^{-1} for a batch."""
    return kernels.sandwich(basis.s_matrix, np.swapaxes(pi, -1, -2), basis.s_inverse)


def _check_inputs(basis, disp, seeds, series, count=None):
    if basis.series not in series:
        raise ValueError(f"construction needs series in {series}, got {basis.series_rank}")
    if disp.J.matrix.shape[0] != basis.rep_dim or seeds.dim != basis.rep_dim:
        raise ValueError("dimension mismatch between algebra, dispersion data and seeds")
    if not disp.J.regular:
        raise ValueError("J must be regular")
    if count is not None and seeds.count != count:
        raise ValueError(f"construction needs {count} seed vector pair(s), got {seeds.count}")


def _check_constraint(basis, seeds, tol=1e-10):
    res = seed_constraint_residual(basis, seeds)
    if res > tol:
        raise SeedConstraintError(f"<n|S|n> = <m|S|m> = 0 violated (relative residual {res:.3e})")


def _potential(state: DressingState, basis, J: CartanElement) -> DressedPotential:
    """Q = P_0(mu l (pi_1 - pi_-1)) and q_1 = [J, Q] over a zero seed."""
    coef = float(state.mu) * state.pair.l
    jd = np.diag(J.matrix)
    idx = np.arange(basis.rep_dim)
    p_ev, m_ev = state.pi_plus._evaluator, state.pi_minus._evaluator

    def Q_eval(x, t):
        X = coef * (p_ev(x, t) - m_ev(x, t))
        X[:, idx, idx] = 0.0
        return X

    Q = MatrixField(Q_eval, (basis.rep_dim,) * 2, "Q")
    q1 = Q.map(lambda X: kernels.diag_commutator(jd, X), name="q1")
    return _make_potential(basis, state.pair, Q, q1)


def _make_potential(basis, pair, Q, q1):
    coeffs = {}
    for a in basis.roots:
        Ea = basis.root_vectors[a]
        w = Ea.conj() / np.vdot(Ea, Ea).real
        coeffs[a] = Q.map(lambda X, w=w: np.einsum("ij,kij->k", w, X), shape=(), name=f"Q[{a.label}]")
    return DressedPotential(
        q1=q1,
        q0=zero_field(basis.rep_dim),
        pair=pair,
        Q=Q,
        root_coefficients=MappingProxyType(coeffs),
        basis=basis,
    )


def _state(core, keys, mu, pair, construction, basis, disp, seeds, literal=None, aux_keys=()):
    """Wrap a batched core evaluator into a DressingState.

    ``literal`` evaluates the auxiliary scalars (rho, A, B, Delta, R) from the
    unscaled vectors, so their values match the textbook normalisation.
    """
    core = _cached(core)
    N = basis.rep_dim
    aux = {}
    if literal is not None:
        literal = _cached(literal)
    for k in aux_keys:
        shape = () if k != "R" else (seeds.count, seeds.count)
        aux[k] = MatrixField(lambda x, t, k=k: literal(x, t)[k], shape, k)
    return DressingState(
        pi_plus=MatrixField(lambda x, t: core(x, t)[keys[0]], (N, N), "pi_1"),
        pi_minus=MatrixField(lambda x, t: core(x, t)[keys[1]], (N, N), "pi_-1"),
        mu=Fraction(mu),
        pair=pair,
        construction=construction,
        aux=MappingProxyType(aux),
        basis=basis,
        disp=disp,
        seeds=seeds,
    )


# -- constructions -------------------------------------------------------------

def _pairing(m, n):
    return np.einsum("ki,ki->k", m, n)


def _first(v):
    return v[:, :, 0]


def dress_sl_rank1(basis: AlgebraBasis, disp: DispersionData, pair: SpectralPair, seeds: SeedVectors):
    """Rank-one projector P = n m^T / (m^T n) and q_1 = l [J, P] for gl(N)."""
    _check_inputs(basis, disp, seeds, ("A",), 1)

    def core(x, t):
        n, m = map(_first, _dressed_vectors(disp, seeds, pair, x, t))
        den = _pairing(m, n)
        _raise_if_singular("<m|n>", den, _pairing(np.abs(m), np.abs(n)), x, t)
        P = kernels.weighted_outer(n, m, 1.0 / den)
        return {"pi1": P, "pim": np.zeros_like(P)}

    def literal(x, t):
        n, m = map(_first, _raw_vectors(disp, seeds, pair, x, t))
        return {"denominator": _pairing(m, n)}

    state = _state(core, ("pi1", "pim"), 1, pair, "SlRank1", basis, disp, seeds, literal, ("denominator",))
    return state, _potential(state, basis, disp.J)


def dress_bd_rank1(basis: AlgebraBasis, disp: DispersionData, pair: SpectralPair, seeds: SeedVectors):
    """pi_1 = n m^T / <m|n>, pi_-1 = S pi_1^T S^{-1} for B_r and D_r (mu = 1)."""
    _check_inputs(basis, disp, seeds, ("B", "D"), 1)
    _check_constraint(basis, seeds)

    def core(x, t):
        n, m = map(_first, _dressed_vectors(disp, seeds, pair, x, t))
        rho = _pairing(m, n)
        _raise_if_singular("<m|n>", rho, _pairing(np.abs(m), np.abs(n)), x, t)
        p1 = kernels.weighted_outer(n, m, 1.0 / rho)
        return {"pi1": p1, "pim": _s_transpose(basis, p1)}

    def literal(x, t):
        n, m = map(_first, _raw_vectors(disp, seeds, pair, x, t))
        return {"rho": _pairing(m, n)}

    state = _state(core, ("pi1", "pim"), 1, pair, "BDRank1", basis, disp, seeds, literal, ("rho",))
    return state, _potential(state, basis, disp.J)


def _c_scalars(S, l, n, m, dm, dp):
    rho = _pairing(m, n)
    A = -l * _pairing(m * dm, m @ S.T)
    B = l * _pairing(n, (dp * n) @ S.T)
    return rho, A, B, rho**2 + A * B


def dress_c_rank1(basis: AlgebraBasis, disp: DispersionData, pair: SpectralPair, seeds: SeedVectors):
    """Rank-one symplectic dressing with the linear-in-(x,t) corrections A, B.

    pi_1 = (rho n + B S m) m^T / Delta and
    pi_-1 = S (rho m + A S n) n^T S^{-1} / Delta, Delta = rho^2 + A B, where
    A = -l m^T D_- S m and B = l n^T S D_+ n with D_pm = chi^{-1} dchi/dlambda
    at lambda_pm.
    """
    _check_inputs(basis, disp, seeds, ("C",), 1)
    S, Sinv, l = basis.s_matrix, basis.s_inverse, pair.l

    def derivs(x, t):
        return (fas_log_derivative(disp, x, t, pair.lambda_minus),
                fas_log_derivative(disp, x, t, pair.lambda_plus))

    def core(x, t):
        n, m = map(_first, _dressed_vectors(disp, seeds, pair, x, t))
        rho, A, B, delta = _c_scalars(S, l, n, m, *derivs(x, t))
        _raise_if_singular("Delta", delta, np.abs(rho) ** 2 + np.abs(A * B), x, t)
        inv = 1.0 / delta
        p1 = kernels.weighted_outer(rho[:, None] * n + B[:, None] * (m @ S.T), m, inv)
        pm = kernels.sandwich(S, kernels.weighted_outer(rho[:, None] * m + A[:, None] * (n @ S.T), n, inv), Sinv)
        return {"pi1": p1, "pim": pm}

    def literal(x, t):
        n, m = map(_first, _raw_vectors(disp, seeds, pair, x, t))
        return dict(zip(("rho", "A", "B", "Delta"), _c_scalars(S, l, n, m, *derivs(x, t))))

    state = _state(core, ("pi1", "pim"), 1, pair, "CRank1", basis, disp, seeds, literal,
                   ("rho", "A", "B", "Delta"))
    return state, _potential(state, basis, disp.J)


def dress_rank_r(basis: AlgebraBasis, disp: DispersionData, pair: SpectralPair, seeds: SeedVectors):
    """Rank-r projector pi_1 = n R^{-1} m^T, R = m^T n, with pi_-1 = S pi_1^T S^{-1} and mu = 1/2."""
    _check_inputs(basis, disp, seeds, ("C", "D"), basis.rank)
    if basis.rep_dim != 2 * basis.rank:
        raise ValueError("rank-r projector needs a 2r-dimensional representation")
    _check_constraint(basis, seeds)

    def core(x, t):
        n = _pivoted_columns(fas_exponent(disp, x, t, pair.lambda_plus), seeds.n)
        m = _pivoted_columns(-fas_exponent(disp, x, t, pair.lambda_minus), seeds.m)
        R = np.swapaxes(m, 1, 2) @ n
        p1, det = kernels.rank_r_projector(n, m)
        scale = np.prod(np.linalg.norm(R, axis=2), axis=1)
        _raise_if_singular("det R", det, scale, x, t)
        return {"pi1": p1, "pim": _s_transpose(basis, p1)}

    def literal(x, t):
        n, m = _raw_vectors(disp, seeds, pair, x, t)
        R = np.swapaxes(m, 1, 2) @ n
        return {"R": R, "detR": np.linalg.det(R)}

    state = _state(core, ("pi1", "pim"), Fraction(1, 2), pair, "RankR", basis, disp, seeds, literal,
                   ("R", "detR"))
    return state, _potential(state, basis, disp.J)


# -- dressing factor -----------------------------------------------------------

def dressing_factor_eval(state: DressingState, x, t, lam, form: str = "meromorphic"):
    """u(x, t, lambda).

    For the rank-r construction ``form="meromorphic"`` returns
    1 + (c_1 - 1) pi_1 (the scalar c_{1/2}^{-1} stripped) and ``form="group"``
    returns c_{1/2}^{-1} (1 + (c_{1/2}^2 - 1) pi_1), which lies in the group.
    """
    if form not in ("meromorphic", "group"):
        raise ValueError(f"unknown form {form!r}")
    lam = complex(lam)
    pair = state.pair
    if lam in (pair.lambda_plus, pair.lambda_minus):
        raise ZeroDivisionError(f"dressing factor evaluated at a pole/zero lambda = {lam}")
    p1 = state.pi_plus(x, t)
    eye = np.eye(p1.shape[-1])
    if state.construction == "SlRank1":
        return eye + (c_factor(lam, pair, 1) - 1) * p1
    if state.construction == "RankR":
        ch = c_factor(lam, pair, Fraction(1, 2))
        u = eye + (ch * ch - 1) * p1
        return u / ch if form == "group" else u
    c = c_factor(lam, pair, state.mu)
    return eye + (c - 1) * p1 + (1 / c - 1) * state.pi_minus(x, t)


# -- verification helpers ------------------------------------------------------

def projector_identities(state: DressingState, basis: AlgebraBasis, x, t) -> dict:
    """Max residuals of the quadratic projector system at the given points."""
    p1 = state.pi_plus(np.ravel(x), np.ravel(t))
    pm = state.pi_minus(np.ravel(x), np.ravel(t))
    N = basis.rep_dim
    eye = np.eye(N)
    out = {}

    def mx(a):
        return float(np.abs(a).max())

    if basis.s_matrix is not None:
        Sp1 = _s_transpose(basis, p1)
        Spm = _s_transpose(basis, pm)
        out["pi_S_pi"] = max(mx(p1 @ Sp1), mx(pm @ Spm))
        cross = p1 @ Spm + pm @ Sp1
        out["alg_pi"] = mx(p1 + Sp1 - cross)
        out["alg_pi_2"] = mx(pm + Spm - cross)
    if state.construction in ("SlRank1", "BDRank1", "RankR"):
        out["idempotent"] = max(mx(p1 @ p1 - p1), mx(pm @ pm - pm))
        out["orthogonal"] = max(mx(p1 @ pm), mx(pm @ p1))
    if state.construction == "RankR":
        out["sum_identity"] = mx(p1 + pm - eye)
        out["trace"] = mx(np.trace(p1, axis1=1, axis2=2) - basis.rank)
    if state.construction == "SlRank1":
        out["trace"] = mx(np.trace(p1, axis1=1, axis2=2) - 1)
    return out


def group_membership_residual(state: DressingState, basis: AlgebraBasis, x, t, lams) -> tuple:
    """max |u S u^T S^{-1} - 1| over points and lambdas; returns (value, worst (x, t))."""
    S, Sinv = basis.s_matrix, basis.s_inverse
    x, t = np.ravel(x), np.ravel(t)
    worst, where = 0.0, None
    for lam in lams:
        u = dressing_factor_eval(state, x, t, lam, form="group")
        g = u @ S @ np.swapaxes(u, 1, 2) @ Sinv - np.eye(basis.rep_dim)
        err = np.abs(g).max(axis=(1, 2))
        k = int(np.argmax(err))
        if err[k] >= worst:
            worst, where = float(err[k]), (float(x[k]), float(t[k]))
    return worst, where


def algebra_membership_residual(potential: DressedPotential, basis: AlgebraBasis, x, t) -> float:
    q = potential.q1(np.ravel(x), np.ravel(t))
    scale = max(1.0, float(np.abs(q).max()))
    diag = float(np.abs(np.diagonal(q, axis1=1, axis2=2)).max())
    if basis.s_matrix is None:
        return diag / scale
    return max(diag, float(np.abs(_s_transpose(basis, q) + q).max())) / scale


def pi_ode_residuals(state: DressingState, potentials, J: CartanElement, grid: Grid, h: float):
    """Residual arrays (nt, nx, N, N) of the two first-order equations for pi_{+-1}.

    i dpi_1/dx + q_1 pi_1 - pi_1 q_0 - lambda_- [J, pi_1] and the same for pi_-1
    with lambda_+, using central differences of step h.
    """
    q0, q1 = potentials
    X, T = grid.mesh()
    jd = np.diag(J.matrix)
    out = []
    for pi, lam in ((state.pi_plus, state.pair.lambda_minus), (state.pi_minus, state.pair.lambda_plus)):
        P = pi(X, T)
        dP = (pi(X + h, T) - pi(X - h, T)) / (2 * h)
        Q1 = q1(X, T)
        Q0 = q0(X, T)
        comm = (jd[:, None] - jd[None, :]) * P
        out.append(1j * dP + Q1 @ P - P @ Q0 - lam * comm)
    return out[0], out[1]


def _worst(res, grid):
    mag = np.abs(res).reshape(res.shape[:2] + (-1,)).max(axis=2)
    j, i = np.unravel_index(int(np.argmax(mag)), mag.shape)
    return float(mag[j, i]), (float(grid.x[i]), float(grid.t[j]))


def verify_pi_odes(state, potentials, J, grid: Grid, h: float, tol: float = 1e-4,
                   convergence: bool = False, min_ratio: float = 3.5) -> VerificationReport:
    rep = VerificationReport()
    r_plus, r_minus = pi_ode_residuals(state, potentials, J, grid, h)
    vals = {}
    for name, r in (("pi_ode_plus", r_plus), ("pi_ode_minus", r_minus)):
        v, where = _worst(r, grid)
        vals[name] = v
        rep.add(name, v, tol, where, note=f"h={h:g}")
    if convergence:
        r2 = pi_ode_residuals(state, potentials, J, grid, h / 2)
        for (name, v), r in zip(vals.items(), r2):
            rep.add(name + ".order2", *convergence_entry(v, _worst(r, grid)[0], min_ratio))
    return rep


def convergence_entry(r_h, r_half, min_ratio=3.5, floor=1e-13):
    """(value, tolerance, where, note) for a halving test: pass iff r_h / r_half >= min_ratio.

    The value reported is r_half / r_h; residuals already at roundoff level
    count as converged.
    """
    if r_h <= floor:
        return 0.0, 1.0 / min_ratio, None, f"residual at roundoff ({r_h:.2e})"
    return r_half / r_h, 1.0 / min_ratio, None, f"ratio {r_h / max(r_half, 1e-300):.3f}"


# -- asymptotics ---------------------------------------------------------------

class AsymptoticsNotSettledError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class AsymptoticData:
    x_far: float
    pi_limits: dict
    K_plus: tuple
    K_minus: tuple
    d_plus: tuple
    d_minus: tuple | None
    mu: Fraction
    pair: SpectralPair
    settle_residual: float
    gauss_residual: float
    diag_plus: tuple = ()
    diag_minus: tuple = ()

    def u_plus(self, lam):
        """lim u(x, lambda) as x -> +inf: exp(mu ln c_1(lambda) K_+)."""
        return _diag_power(lam, self.pair, self.mu, self.diag_plus)

    def u_minus(self, lam):
        return _diag_power(lam, self.pair, self.mu, self.diag_minus)

    def shift_labels(self) -> list:
        lab = []
        for j, d in enumerate(self.d_plus, start=1):
            dm = None if self.d_minus is None else self.d_minus[j - 1]
            lab.append(f"d_{j}: +{_fmt_frac(d)} / {'unsupported' if dm is None else _fmt_frac(dm)} ln c1")
        return lab


def _fmt_frac(f):
    f = Fraction(f)
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def _diag_power(lam, pair, mu, K):
    return np.diag([c_factor(lam, pair, mu * Fraction(k)) for k in K])


def default_x_far(basis: AlgebraBasis, J: CartanElement, pair: SpectralPair, cap: float = 150.0) -> float:
    nu = min(pair.lambda_plus.imag, -pair.lambda_minus.imag)
    rate = min(a.evaluate(J.coords) for a in basis.positive_roots)
    x_far = 50.0 / (rate * nu)
    jmax = float(np.abs(np.diag(J.matrix)).max())
    return min(x_far, cap / (nu * jmax))


def _cartan_coords(basis, D):
    """Coordinates of diag(D) in the H_{e_k} basis, or None if D is not Cartan."""
    if basis.series == "A":
        return tuple(D)
    N, r = basis.rep_dim, basis.rank
    if any(D[k] != -D[N - 1 - k] for k in range(r)) or (basis.series == "B" and D[r] != 0):
        return None
    return tuple(D[:r])


def asymptotic_data(state: DressingState, basis: AlgebraBasis, J: CartanElement, disp=None,
                    x_far: float | None = None, t: float = 0.0, tol: float = 1e-8,
                    sample_lams=(0.5 + 2j, -1.0 + 0.3j, 2.0 - 0.7j)) -> AsymptoticData:
    """Limits of pi_{+-1} as x -> +-inf and the induced shifts of d_j.

    The shifts are returned as multiples of ln c_1(lambda):
    d_j^+ = mu (K_+ - K_-, omega_j) with K_pm the Cartan limits of pi_1 - pi_-1.
    """
    if x_far is None:
        x_far = default_x_far(basis, J, state.pair)
    limits = {}
    settle = 0.0
    K = {}
    for side, xv in (("plus", x_far), ("minus", -x_far)):
        p1 = state.pi_plus(xv, t)
        pm = state.pi_minus(xv, t)
        rounded = []
        for P in (p1, pm):
            R = np.diag(np.rint(np.diag(P).real))
            settle = max(settle, float(np.abs(P - R).max()))
            rounded.append(R)
        limits[side] = tuple(rounded)
        coords = _cartan_coords(basis, [int(v) for v in np.diag(rounded[0] - rounded[1]).real])
        if coords is None:
            raise AsymptoticsNotSettledError(f"limit of pi_1 - pi_-1 at x={xv:g} is not a Cartan element")
        K[side] = coords
        K[side + "_diag"] = tuple(int(v) for v in np.diag(rounded[0] - rounded[1]).real)
    if settle > tol:
        raise AsymptoticsNotSettledError(
            f"projectors at |x|={x_far:g} are {settle:.2e} away from diagonal projectors; increase x_far"
        )
    mu = state.mu
    diff = [Fraction(a) - Fraction(b) for a, b in zip(K["plus"], K["minus"])]
    d_plus = tuple(mu * sum((d * w for d, w in zip(diff, om)), Fraction(0)) for om in basis.fundamental_weights)
    d_minus = tuple(-d for d in d_plus) if basis.series == "C" else None

    data = AsymptoticData(x_far, limits, K["plus"], K["minus"], d_plus, d_minus, mu, state.pair, settle, 0.0,
                         K["plus_diag"], K["minus_diag"])
    gauss = 0.0
    if state.construction != "Sl2Double":
        for lam in sample_lams:
            for xv, lim in ((x_far, data.u_plus(lam)), (-x_far, data.u_minus(lam))):
                u = dressing_factor_eval(state, xv, t, lam, form="group")
                gauss = max(gauss, float(np.abs(u - lim).max()))
    object.__setattr__(data, "gauss_residual", gauss)
    return data


# -- sl(2) double dressing -----------------------------------------------------

def sl2_basis_and_dispersion(J1: float, flavor: str = "NLS", I1: float | None = None):
    basis = build_algebra("A", 1)
    J = cartan_element(basis, (J1, -J1))
    I = None if I1 is None else cartan_element(basis, (I1, -I1), require_regular=False)
    return basis, DispersionData(J, I, flavor)


def double_dress_sl2(J1: float, pair1: SpectralPair, pair2: SpectralPair | None, n0, m0,
                     disp: DispersionData | None = None) -> DressedPotential:
    """Two successive rank-one sl(2) dressings sharing the seed vectors.

    P is built from (n0, m0) at pair1; P' from u_1(lambda_2^+) chi(lambda_2^+) n0
    and m0^T chi(lambda_2^-)^{-1} u_1^{-1}(lambda_2^-).  The potential is
    q_2 = [J, l_2 P' + l_1 P].  ``pair2=None`` skips the second step.
    """
    basis, default_disp = sl2_basis_and_dispersion(J1)
    disp = default_disp if disp is None else disp
    seeds = SeedVectors.single(n0, m0)
    if seeds.dim != 2:
        raise ValueError("sl(2) seeds must be 2-vectors")
    l1 = pair1.l

    def rank1(n, m, quantity, x, t):
        den = np.einsum("ki,ki->k", m, n)
        _raise_if_singular(quantity, den, np.einsum("ki,ki->k", np.abs(m), np.abs(n)), x, t)
        return kernels.weighted_outer(n, m, 1.0 / den)

    def core(x, t):
        n, m = _dressed_vectors(disp, seeds, pair1, x, t)
        P = rank1(n[:, :, 0], m[:, :, 0], "<m|n>", x, t)
        out = {"P": P, "Q": l1 * P}
        if pair2 is not None:
            n2, m2 = _dressed_vectors(disp, seeds, pair2, x, t)
            u1 = np.eye(2) + (l1 / (pair2.lambda_plus - pair1.lambda_minus)) * P
            u1inv = np.eye(2) - (l1 / (pair2.lambda_minus - pair1.lambda_plus)) * P
            n2 = np.einsum("kij,kj->ki", u1, n2[:, :, 0])
            m2 = np.einsum("ki,kij->kj", m2[:, :, 0], u1inv)
            P2 = rank1(n2, m2, "<m'|n'>", x, t)
            out["P2"] = P2
            out["Q"] = out["Q"] + pair2.l * P2
        out["Q"][:, [0, 1], [0, 1]] = 0.0
        return out

    core = _cached(core)
    jd = np.diag(disp.J.matrix)
    Q = MatrixField(lambda x, t: core(x, t)["Q"], (2, 2), "Q")
    q1 = Q.map(lambda X: kernels.diag_commutator(jd, X), name="q2")
    return _make_potential(basis, pair1, Q, q1)


@dataclass(frozen=True)
class DegenerateLimit:
    eps: tuple
    values: np.ndarray
    extrapolated: np.ndarray


def degenerate_limit(J1: float, pair: SpectralPair, n0, m0, x, t, eps_values=(1e-2, 1e-3, 1e-4),
                     disp: DispersionData | None = None) -> DegenerateLimit:
    """Sweep lambda_2^pm = lambda_1^pm + eps and extrapolate eps -> 0.

    ``values[k]`` holds the coefficients (q^+, q^-) of E_{e1-e2}, E_{-(e1-e2)}
    for eps_values[k]; the limit uses the linear Richardson step on the two
    smallest eps.
    """
    basis = build_algebra("A", 1)
    up, down = basis.root((1, -1)), basis.root((-1, 1))
    vals = []
    for eps in eps_values:
        pot = double_dress_sl2(J1, pair, pair.shifted(eps), n0, m0, disp)
        vals.append(np.stack([pot.root_coefficients[up](x, t), pot.root_coefficients[down](x, t)]))
    vals = np.array(vals)
    order = np.argsort(eps_values)
    ea, eb = eps_values[order[0]], eps_values[order[1]]
    va, vb = vals[order[0]], vals[order[1]]
    extrap = (eb * va - ea * vb) / (eb - ea)
    return DegenerateLimit(tuple(eps_values), vals, extrap)


def dress(construction: str, basis, disp, pair, seeds):
    """Dispatch by construction name."""
    fn = {
        "SlRank1": dress_sl_rank1,
        "BDRank1": dress_bd_rank1,
        "CRank1": dress_c_rank1,
        "RankR": dress_rank_r,
    }.get(construction)
    if fn is None:
        raise ValueError(f"construction {construction!r} has no single-step dressing")
    return fn(basis, disp, pair, seeds)
