"""Command-line front end: generate field dumps, verify solutions, run the self-test.

Configs are JSON documents; complex numbers are written as [re, im] pairs
(plain numbers are accepted for real values).  Field dumps are one text file
per component with '#'-prefixed header lines and rows "x t re im".
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import closed_form as cf
from .dressing import (
    AsymptoticsNotSettledError,
    SeedConstraintError,
    SeedVectors,
    SingularPointError,
    algebra_membership_residual,
    asymptotic_data,
    convergence_entry,
    degenerate_limit,
    double_dress_sl2,
    dress,
    group_membership_residual,
    projector_identities,
    seed_constraint_residual,
    sl2_basis_and_dispersion,
    verify_pi_odes,
)
from .fields import Grid, MatrixField
from .lie_algebra import build_algebra, verify_cartan_weyl
from .nlee import (
    C2_COMPONENTS,
    NWaveData,
    nls_residual,
    nls_sl2_residual,
    nwave_c2_components,
    nwave_residual,
)
from .report import VerificationReport
from .spectral import SpectralPair, nls_dispersion, nwave_dispersion

PIPELINE = ("SlRank1", "BDRank1", "CRank1", "RankR")
CONSTRUCTIONS = PIPELINE + ("Sl2Double", "ClosedForm2", "ClosedForm3", "ClosedForm4")

DEFAULT_TOLERANCES = {
    "cartan_weyl": 1e-12,
    "seed_constraint": 1e-10,
    "group_membership": 1e-10,
    "projector": 1e-10,
    "projector_rank_r": 1e-12,
    "algebra_membership": 1e-10,
    "pi_ode": 1e-4,
    "convergence_ratio": 3.5,
    "cross_check": 1e-10,
    "asymptotics": 1e-8,
    "delta_positive": 1e-10,
    "degenerate_limit": 1e-5,
    "linear_in_eps": 0.05,
}
DEFAULT_SEED = 20240607
PI_ODE_STEP = 1e-3


class ConfigError(ValueError):
    pass


def _complex(v) -> complex:
    if isinstance(v, (list, tuple)):
        if len(v) != 2:
            raise ConfigError(f"complex numbers are [re, im] pairs, got {v!r}")
        return complex(float(v[0]), float(v[1]))
    return complex(v)


def _cjson(z) -> list:
    z = complex(z)
    return [z.real, z.imag]


def _vectors(raw, what) -> list:
    if raw is None:
        return []
    if not isinstance(raw, list) or not all(isinstance(v, list) for v in raw):
        raise ConfigError(f"seeds.{what} must be a list of vectors")
    return [np.array([_complex(c) for c in v]) for v in raw]


@dataclass
class RunConfig:
    series: str
    rank: int
    construction: str
    pair: SpectralPair
    flavor: str
    J: tuple
    I: tuple | None
    grid: Grid
    n_list: list = field(default_factory=list)
    m_list: list = field(default_factory=list)
    pair2: SpectralPair | None = None
    params: dict = field(default_factory=dict)
    fd_step: float = 1e-2
    tolerances: dict = field(default_factory=dict)
    eps_values: tuple = (1e-2, 1e-3, 1e-4)
    seed: int = DEFAULT_SEED
    raw: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, d: dict, verify: bool = False) -> "RunConfig":
        try:
            alg = d["algebra"]
            construction = d["construction"]
            spectral_cfg = d["spectral"]
            disp = d["dispersion"]
            grid = Grid.from_dict(d["grid"])
        except KeyError as exc:
            raise ConfigError(f"missing config key {exc}") from None
        if construction not in CONSTRUCTIONS:
            raise ConfigError(f"unknown construction {construction!r}")
        if verify and (grid.nx < 5 or grid.nt < 5):
            raise ConfigError("verification needs at least 5 grid points per axis")
        involution = bool(spectral_cfg.get("involution", False))
        pair = _pair(spectral_cfg, involution)
        pair2 = _pair(spectral_cfg["second"], bool(spectral_cfg["second"].get("involution", involution))) if "second" in spectral_cfg else None
        seeds = d.get("seeds", {})
        n_list = _vectors(seeds.get("n"), "n")
        m_list = _vectors(seeds.get("m"), "m")
        if involution:
            conj = [v.conj() for v in n_list]
            if m_list and any(not np.allclose(a, b, rtol=0, atol=1e-14) for a, b in zip(m_list, conj)):
                raise ConfigError("involution requires m0 = conj(n0)")
            m_list = conj
        if len(m_list) != len(n_list):
            raise ConfigError("seeds.n and seeds.m need the same number of vectors")
        tol = dict(DEFAULT_TOLERANCES)
        tol.update({k: float(v) for k, v in d.get("tolerances", {}).items()})
        I = disp.get("I")
        return cls(
            series=str(alg["series"]), rank=int(alg["rank"]), construction=construction, pair=pair,
            flavor=disp.get("flavor", "NWave"), J=tuple(float(v) for v in disp["J"]),
            I=None if I is None else tuple(float(v) for v in I), grid=grid, n_list=n_list, m_list=m_list,
            pair2=pair2, params=dict(d.get("params", {})), fd_step=float(d.get("fd_step", 1e-2)),
            tolerances=tol, eps_values=tuple(float(e) for e in d.get("eps_values", (1e-2, 1e-3, 1e-4))),
            seed=int(d.get("seed", DEFAULT_SEED)), raw=d,
        )

    @classmethod
    def load(cls, path, verify: bool = False) -> "RunConfig":
        with open(path) as fh:
            return cls.from_dict(json.load(fh), verify)


def _pair(spectral_cfg, involution) -> SpectralPair:
    lp = _complex(spectral_cfg["lambda_plus"])
    if involution:
        if "lambda_minus" in spectral_cfg and _complex(spectral_cfg["lambda_minus"]) != lp.conjugate():
            raise ConfigError("involution requires lambda_minus = conj(lambda_plus)")
        return SpectralPair.conjugate_pair(lp)
    if "lambda_minus" not in spectral_cfg:
        raise ConfigError("lambda_minus is required without involution")
    return SpectralPair(lp, _complex(spectral_cfg["lambda_minus"]))


# -- building solutions --------------------------------------------------------

@dataclass
class Solution:
    """Named scalar fields to dump plus whatever the verifier needs."""
    fields: dict
    basis: object = None
    disp: object = None
    state: object = None
    potential: object = None
    extra: dict = field(default_factory=dict)


def _dispersion(cfg: RunConfig, basis):
    if cfg.flavor == "NWave":
        if cfg.I is None:
            raise ConfigError("NWave dispersion needs I")
        return nwave_dispersion(basis, cfg.J, cfg.I)
    if cfg.flavor == "NLS":
        return nls_dispersion(basis, cfg.J)
    raise ConfigError(f"unknown flavor {cfg.flavor!r}")


def _closed_field(fn, key):
    return MatrixField(lambda x, t: fn(x, t)[key], (), key)


def _c2_params_check(cfg):
    if (cfg.series, cfg.rank) != ("C", 2) or cfg.flavor != "NWave":
        raise ConfigError(f"{cfg.construction} is a C_2 N-wave solution")


def _example4_seeds(cfg):
    if not cfg.n_list:
        raise ConfigError("ClosedForm4 needs one seed vector")
    n0, m0 = cfg.n_list[0], cfg.m_list[0]
    if np.any(n0[1:-1] != 0) or np.any(m0[1:-1] != 0):
        raise ConfigError("ClosedForm4 seeds have only the first and last components nonzero")
    return n0, m0


def build_solution(cfg: RunConfig) -> Solution:
    c = cfg.construction
    if c == "Sl2Double":
        return _build_sl2(cfg)
    try:
        basis = build_algebra(cfg.series, cfg.rank)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    disp = _dispersion(cfg, basis)
    if c in PIPELINE:
        seeds = SeedVectors(tuple(cfg.n_list), tuple(cfg.m_list))
        state, pot = dress(c, basis, disp, cfg.pair, seeds)
        fields = {f"Q[{r.label}]": f for r, f in pot.root_coefficients.items()}
        for k, f in state.aux.items():
            if f.shape == ():
                fields[k] = f
        return Solution(fields, basis, disp, state, pot)
    if c == "ClosedForm2":
        _c2_params_check(cfg)
        p = cf.Example2Params(cfg.pair, cfg.J, cfg.I, cfg.n_list[0], cfg.m_list[0])
        ev = _memo(lambda x, t: _merge(*cf.example2_eval(p, x, t)))
        fields = {k: _closed_field(ev, k) for k in list(C2_COMPONENTS) + ["Delta"]}
        state, pot = dress("CRank1", basis, disp, cfg.pair, SeedVectors.single(p.n0, p.m0))
        return Solution(fields, basis, disp, state, pot, {"params": p})
    if c == "ClosedForm3":
        _c2_params_check(cfg)
        try:
            p = cf.Example3Params(float(cfg.params["a"]), float(cfg.params["b"]), float(cfg.params["c"]), cfg.pair,
                                  cfg.J, cfg.I)
        except KeyError as exc:
            raise ConfigError(f"ClosedForm3 needs params {exc}") from None
        ev = _memo(lambda x, t: _merge(*cf.example3_eval(p, x, t), delta_key="Delta"))
        fields = {k: _closed_field(ev, k) for k in list(C2_COMPONENTS) + ["Delta"]}
        n1, n2 = p.seed_vectors()
        state, pot = dress("RankR", basis, disp, cfg.pair, SeedVectors((n1, n2), (n2, n1)))
        return Solution(fields, basis, disp, state, pot, {"params": p})
    if c == "ClosedForm4":
        if cfg.series != "C" or cfg.flavor != "NLS":
            raise ConfigError("ClosedForm4 is an NLS solution in C_r")
        n0, m0 = _example4_seeds(cfg)
        p = cf.Example4Params.from_seeds(cfg.J[0], cfg.pair, n0, m0)
        ev = _memo(lambda x, t: cf.example4_eval(p, x, t))
        fields = {k: _closed_field(ev, k) for k in ("q", "qtilde", "Delta")}
        state, pot = dress("CRank1", basis, disp, cfg.pair, SeedVectors.single(n0, m0))
        return Solution(fields, basis, disp, state, pot, {"params": p})
    raise ConfigError(f"construction {c!r} not handled")


def _merge(q, aux, delta_key=None):
    out = dict(q)
    if delta_key is not None:
        out[delta_key] = aux
    else:
        out.update(aux)
    return out


def _memo(fn):
    last = [None]

    def run(x, t):
        key = (x.tobytes(), t.tobytes())
        hit = last[0]
        if hit is not None and hit[0] == key:
            return hit[1]
        out = fn(x, t)
        last[0] = (key, out)
        return out

    return run


def _build_sl2(cfg: RunConfig) -> Solution:
    if (cfg.series, cfg.rank) != ("A", 1) or cfg.flavor != "NLS":
        raise ConfigError("Sl2Double runs on sl(2) with NLS dispersion")
    if not cfg.n_list or cfg.n_list[0].size != 2:
        raise ConfigError("Sl2Double needs one 2-component seed vector")
    J1 = cfg.J[0]
    basis, disp = sl2_basis_and_dispersion(J1)
    n0, m0 = cfg.n_list[0], cfg.m_list[0]
    extra = {"J1": J1, "n0": n0, "m0": m0}
    if cfg.pair2 is not None:
        pot = double_dress_sl2(J1, cfg.pair, cfg.pair2, n0, m0, disp)
        fields = {"q": pot.q1_coefficient((1, -1)), "qtilde": pot.q1_coefficient((-1, 1))}
        return Solution(fields, basis, disp, None, pot, extra)
    alpha = 2 * J1

    def limit(x, t):
        dl = degenerate_limit(J1, cfg.pair, n0, m0, x, t, cfg.eps_values, disp)
        return {"q": alpha * dl.extrapolated[0], "qtilde": -alpha * dl.extrapolated[1]}

    ev = _memo(limit)
    fields = {k: _closed_field(ev, k) for k in ("q", "qtilde")}
    extra["degenerate"] = True
    return Solution(fields, basis, disp, None, None, extra)


# -- generate ------------------------------------------------------------------

def _threads() -> int:
    try:
        return max(1, int(os.environ.get("ZSDRESS_THREADS", "1")))
    except ValueError:
        return 1


def _header(cfg: RunConfig, name: str) -> str:
    return (f"# config {json.dumps(cfg.raw, sort_keys=True)}\n"
            f"# component {name}\n"
            f"# columns x t re im\n")


def _rows(fields: dict, x, tv):
    X = x
    T = np.full_like(x, tv)
    return {k: np.asarray(f(X, T), dtype=complex) for k, f in fields.items()}


def cmd_generate(cfg: RunConfig, out_dir) -> dict:
    """Write one dump per field; returns {"files": [...], "error": message | None}.

    On a singular point the rows before the failing time slice are still written.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    sol = build_solution(cfg)
    grid = cfg.grid
    paths = {k: out / f"{_safe(k)}.dat" for k in sol.fields}
    handles = {k: open(p, "w") for k, p in paths.items()}
    error = None
    try:
        for k, fh in handles.items():
            fh.write(_header(cfg, k))
        x = grid.x
        with ThreadPoolExecutor(_threads()) as pool:
            futures = [pool.submit(_rows, sol.fields, x, tv) for tv in grid.t]
            for tv, fut in zip(grid.t, futures):
                try:
                    vals = fut.result()
                except SingularPointError as exc:
                    error = str(exc)
                    break
                for k, fh in handles.items():
                    v = vals[k]
                    block = np.column_stack([x, np.full_like(x, tv), v.real, v.imag])
                    np.savetxt(fh, block, fmt="%.17g")
            else:
                if sol.extra.get("degenerate"):
                    paths["extrapolation"] = _write_extrapolation(cfg, sol, out)
    finally:
        for fh in handles.values():
            fh.close()
    return {"files": [str(p) for p in paths.values()], "error": error}


def _safe(name: str) -> str:
    return "".join(ch if ch.isalnum() or ch in "-_" else "_" for ch in name).strip("_")


def _write_extrapolation(cfg, sol, out) -> Path:
    """Table over eps: max |q_eps - q_limit| and its ratio to eps."""
    X, T = cfg.grid.mesh()
    ex = sol.extra
    dl = degenerate_limit(ex["J1"], cfg.pair, ex["n0"], ex["m0"], X, T, cfg.eps_values, sol.disp)
    path = out / "extrapolation.dat"
    with open(path, "w") as fh:
        fh.write(_header(cfg, "extrapolation"))
        fh.write("# columns eps max_abs_diff_q max_abs_diff_qtilde diff_over_eps\n")
        for eps, v in zip(dl.eps, dl.values):
            d = np.abs(v - dl.extrapolated).reshape(2, -1).max(axis=1) * 2 * ex["J1"]
            fh.write(f"{eps:.17g} {d[0]:.17g} {d[1]:.17g} {d.max() / eps:.17g}\n")
    return path


def read_dump(path):
    """(config dict, component name, Grid, complex values of shape (nt, nx))."""
    cfg, name = None, None
    with open(path) as fh:
        for line in fh:
            if not line.startswith("#"):
                break
            if line.startswith("# config "):
                cfg = json.loads(line[len("# config "):])
            elif line.startswith("# component "):
                name = line[len("# component "):].strip()
    grid = Grid.from_dict(cfg["grid"])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        data = np.loadtxt(path, comments="#", ndmin=2)
    if data.size == 0:
        return cfg, name, grid, np.zeros((0, grid.nx), dtype=complex)
    vals = data[:, 2] + 1j * data[:, 3]
    nt = vals.size // grid.nx
    return cfg, name, grid, vals.reshape(nt, grid.nx)


# -- verify --------------------------------------------------------------------

def _subgrid_points(grid: Grid, k=3):
    xi = np.linspace(0, grid.nx - 1, k).round().astype(int)
    ti = np.linspace(0, grid.nt - 1, k).round().astype(int)
    X, T = np.meshgrid(grid.x[xi], grid.t[ti])
    return X.ravel(), T.ravel()


def _rel_diff(a, b):
    a, b = np.asarray(a), np.asarray(b)
    scale = float(np.abs(b).max())
    diff = np.abs(a - b)
    return float(diff.max()) / (scale if scale > 0 else 1.0), diff


def _argmax_point(diff, X, T):
    k = np.unravel_index(int(np.argmax(diff)), diff.shape)
    return float(X[k]), float(T[k])


def _convergence(rep, name, fn, h, tol):
    a, b = fn(h), fn(h / 2)
    for comp in a.max_norms:
        ra, rb = a.max_norms[comp], b.max_norms[comp]
        v, t, _, note = convergence_entry(ra, rb, tol["convergence_ratio"])
        rep.add(f"{name}.{comp}.order2", v, t, a.worst_point(comp), note=f"{note}; |r|={ra:.3e} at h={h:g}")
    return a, b


def _delta_check(rep, name, delta, X, T, tol):
    delta = np.asarray(delta)
    if np.any(~np.isfinite(delta)):
        rep.add(name, np.inf, tol, note="non-finite Delta")
        return
    bad = np.abs(delta.imag) / np.abs(delta)
    worst = float(bad.max())
    if np.any(delta.real <= 0):
        k = np.unravel_index(int(np.argmin(delta.real)), delta.shape)
        rep.add(name, np.inf, tol, (float(X[k]), float(T[k])), note="Delta has nonpositive real part")
    else:
        rep.add(name, worst, tol, _argmax_point(bad, X, T), note=f"min Delta {float(delta.real.min()):.3e}")


def cmd_verify(cfg: RunConfig) -> VerificationReport:
    tol = cfg.tolerances
    rep = VerificationReport(config_echo=cfg.raw, generator_seed=cfg.seed)
    rng = np.random.default_rng(cfg.seed)
    X, T = cfg.grid.mesh()

    try:
        basis = build_algebra(cfg.series, cfg.rank)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    rep.extend(verify_cartan_weyl(basis, tol["cartan_weyl"]), prefix="cartan_weyl.")

    if cfg.construction in ("BDRank1", "RankR") and cfg.n_list:
        res = seed_constraint_residual(basis, SeedVectors(tuple(cfg.n_list), tuple(cfg.m_list)))
        rep.add("seed_constraint", res, tol["seed_constraint"])
        if res > tol["seed_constraint"]:
            return rep
    try:
        sol = build_solution(cfg)
    except (SeedConstraintError, SingularPointError) as exc:
        rep.add("construction", np.inf, 0.0, note=str(exc))
        return rep

    if cfg.construction == "Sl2Double":
        _verify_sl2(rep, cfg, sol, tol)
        return rep

    try:
        _verify_pipeline(rep, cfg, sol, rng, tol)
        if sol.extra.get("params") is not None:
            _verify_closed_form(rep, cfg, sol, tol)
        elif cfg.construction == "CRank1" and (cfg.series, cfg.rank) == ("C", 2) and cfg.flavor == "NWave":
            p = cf.Example2Params(cfg.pair, cfg.J, cfg.I, cfg.n_list[0], cfg.m_list[0])
            sol.extra["params"] = p
            _cross_example2(rep, sol, p, X, T, tol)
    except SingularPointError as exc:
        rep.add("singular_point", np.inf, 0.0, (exc.x, exc.t), note=str(exc))
    return rep


def _verify_pipeline(rep, cfg, sol, rng, tol):
    state, pot, basis, disp = sol.state, sol.potential, sol.basis, sol.disp
    grid, h = cfg.grid, cfg.fd_step
    X, T = grid.mesh()

    if basis.s_matrix is not None:
        lams = (rng.normal(size=20) + 1j * rng.normal(size=20)) * 2
        xs, ts = _subgrid_points(grid)
        v, where = group_membership_residual(state, basis, xs, ts, lams)
        rep.add("group_membership", v, tol["group_membership"], where, note="20 lambdas, 9 points")

    ids = projector_identities(state, basis, X.ravel(), T.ravel())
    for k, v in ids.items():
        t = tol["projector_rank_r"] if state.construction == "RankR" and k in ("sum_identity", "trace") \
            else tol["projector"]
        rep.add(f"projector.{k}", v, t)
    rep.add("algebra_membership", algebra_membership_residual(pot, basis, X.ravel(), T.ravel()),
            tol["algebra_membership"])

    pots = (pot.q0, pot.q1)
    rep.extend(verify_pi_odes(state, pots, disp.J, grid, PI_ODE_STEP, tol=tol["pi_ode"]))
    conv = verify_pi_odes(state, pots, disp.J, grid, h, tol=np.inf, convergence=True,
                          min_ratio=tol["convergence_ratio"])
    for c in conv.checks:
        if c.name.endswith(".order2"):
            rep.checks.append(c)

    if disp.flavor == "NWave":
        data = NWaveData(disp.J, disp.I, pot.Q, basis)
        _convergence(rep, "nwave", lambda s: nwave_residual(data, grid, s), h, tol)
        if (basis.series, basis.rank) == ("C", 2):
            _convergence(rep, "nwave_c2", lambda s: nwave_c2_components(data, grid, s), h, tol)
    else:
        _convergence(rep, "nls", lambda s: nls_residual(basis, disp.J, pot.q1, grid, s), h, tol)

    try:
        ad = asymptotic_data(state, basis, disp.J, disp, tol=tol["asymptotics"])
    except AsymptoticsNotSettledError as exc:
        rep.add("asymptotics.settle", np.inf, tol["asymptotics"], note=str(exc))
    else:
        rep.add("asymptotics.settle", ad.settle_residual, tol["asymptotics"], note=f"x_far={ad.x_far:g}")
        rep.add("asymptotics.gauss_limit", ad.gauss_residual, tol["asymptotics"])
        rep.info["d_shifts"] = ad.shift_labels()
        rep.info["K_plus"] = [str(v) for v in ad.K_plus]
        rep.info["K_minus"] = [str(v) for v in ad.K_minus]

    if cfg.pair.involution and state.construction == "CRank1" and "Delta" in state.aux:
        _delta_check(rep, "delta_positive", state.aux["Delta"](X, T), X, T, tol["delta_positive"])


def _cross_example2(rep, sol, p, X, T, tol):
    q, aux = cf.example2_eval(p, X, T)
    for name, coords in C2_COMPONENTS.items():
        v, diff = _rel_diff(sol.potential.coefficient(coords)(X, T), q[name])
        rep.add(f"cross_check.{name}", v, tol["cross_check"], _argmax_point(diff, X, T))


def _verify_closed_form(rep, cfg, sol, tol):
    grid = cfg.grid
    X, T = grid.mesh()
    p = sol.extra["params"]
    c = cfg.construction
    if c == "ClosedForm2":
        _cross_example2(rep, sol, p, X, T, tol)
    elif c == "ClosedForm3":
        q, delta = cf.example3_eval(p, X, T)
        printed, _ = cf.example3_eval(p, X, T, printed=True)
        gaps = {}
        for name, coords in C2_COMPONENTS.items():
            pipe = sol.potential.coefficient(coords)(X, T)
            v, diff = _rel_diff(pipe, q[name])
            rep.add(f"cross_check.{name}", v, tol["cross_check"], _argmax_point(diff, X, T))
            gaps[name] = _rel_diff(printed[name], pipe)[0]
        rep.info["example3_printed_vs_pipeline"] = gaps
        detr = sol.state.aux["detR"](X, T)
        v, diff = _rel_diff(-detr / 2, delta)
        rep.add("cross_check.Delta", v, tol["cross_check"], _argmax_point(diff, X, T), note="Delta = -det R / 2")
        if cfg.pair.involution:
            _delta_check(rep, "delta_positive", delta, X, T, tol["delta_positive"])
    elif c == "ClosedForm4":
        e = cf.example4_eval(p, X, T)
        for name, coords in (("q", (2, 0)), ("qtilde", (-2, 0))):
            v, diff = _rel_diff(sol.potential.q1_coefficient(coords)(X, T), e[name])
            rep.add(f"cross_check.{name}", v, tol["cross_check"], _argmax_point(diff, X, T))
        J1 = p.J1
        _convergence(rep, "nls_sl2", lambda s: nls_sl2_residual(sol.fields["q"], sol.fields["qtilde"],
                                                               1 / (2 * J1), 2 / J1, grid, s), cfg.fd_step, tol)
        if p.involution:
            dinv = cf.example4_delta_involution(p, X, T)
            v, diff = _rel_diff(e["Delta"], dinv)
            rep.add("cross_check.Delta_cosh2", v, tol["cross_check"], _argmax_point(diff, X, T))
            _delta_check(rep, "delta_positive.cosh2", dinv + 0j, X, T, tol["delta_positive"])


def _verify_sl2(rep, cfg, sol, tol):
    grid, h = cfg.grid, cfg.fd_step
    X, T = grid.mesh()
    J1 = sol.extra["J1"]
    if sol.potential is not None:
        _convergence(rep, "nls_sl2", lambda s: nls_sl2_residual(sol.fields["q"], sol.fields["qtilde"],
                                                               1 / (2 * J1), 1 / J1, grid, s), h, tol)
        return
    n0, m0 = sol.extra["n0"], sol.extra["m0"]
    xs, ts = _subgrid_points(grid, 5)
    dl = degenerate_limit(J1, cfg.pair, n0, m0, xs, ts, cfg.eps_values, sol.disp)
    p = cf.Example4Params.from_seeds(J1, cfg.pair, n0, m0)
    e = cf.example4_eval(p, xs, ts)
    alpha = 2 * J1
    target = np.stack([np.sqrt(2) * e["q"], np.sqrt(2) * e["qtilde"]])
    got = np.stack([alpha * dl.extrapolated[0], -alpha * dl.extrapolated[1]])
    v, _ = _rel_diff(got, target)
    rep.add("degenerate_limit.sqrt2_example4", v, tol["degenerate_limit"])
    order = np.argsort(dl.eps)[::-1]
    errs = []
    for k in order:
        vals = np.stack([alpha * dl.values[k, 0], -alpha * dl.values[k, 1]])
        errs.append(float(np.abs(vals - target).max()))
    eps = np.array(dl.eps)[order]
    dev = max(abs((errs[i] / errs[i + 1]) / (eps[i] / eps[i + 1]) - 1) for i in range(len(errs) - 1))
    rep.add("degenerate_limit.linear_in_eps", dev, tol["linear_in_eps"],
            note="errors " + ", ".join(f"{e_:.2e}" for e_ in errs))
    rep.info["extrapolation"] = {f"{e_:g}": err for e_, err in zip(eps, errs)}
    # the finite-eps double dressing is an exact two-soliton solution
    pot = double_dress_sl2(J1, cfg.pair, cfg.pair.shifted(max(cfg.eps_values)), n0, m0, sol.disp)
    _convergence(rep, "nls_sl2_two_soliton",
                 lambda s: nls_sl2_residual(pot.q1_coefficient((1, -1)), pot.q1_coefficient((-1, 1)),
                                            1 / (2 * J1), 1 / J1, grid, s), h, tol)


# -- selftest ------------------------------------------------------------------

def _vec(v):
    return [_cjson(c) for c in v]


def canned_configs() -> dict:
    grid = {"x_min": -3, "x_max": 3, "nx": 21, "t_min": -3, "t_max": 3, "nt": 21}
    lp = [0.3, 0.5]
    nw = {"flavor": "NWave", "J": [2, 1], "I": [1, -1]}
    spectral_cfg = {"lambda_plus": lp, "involution": True}
    n_c2 = [1.0, 0.8 + 0.3j, 0.5 - 0.6j, 1.2 + 0.1j]
    n_b2 = np.array([1, 0.5 + 0.2j, 0.3 - 0.1j, 0.7j, 0])
    n_b2[4] = (2 * n_b2[1] * n_b2[3] - n_b2[2] ** 2) / (2 * n_b2[0])
    n_d2 = np.array([1, 0.5 + 0.2j, 0.3 - 0.1j, 0])
    n_d2[3] = n_d2[1] * n_d2[2] / n_d2[0]
    base = {"grid": grid, "spectral": spectral_cfg, "fd_step": 1e-2}
    return {
        "C2_rank1": {**base, "algebra": {"series": "C", "rank": 2}, "construction": "ClosedForm2",
                     "dispersion": nw, "seeds": {"n": [_vec(n_c2)]}},
        "C2_rank2": {**base, "algebra": {"series": "C", "rank": 2}, "construction": "ClosedForm3",
                     "dispersion": nw, "params": {"a": 2, "b": 1, "c": 3}},
        "C2_nls": {**base, "algebra": {"series": "C", "rank": 2}, "construction": "ClosedForm4",
                   "dispersion": {"flavor": "NLS", "J": [1.5, 0.7]},
                   "seeds": {"n": [_vec([1 + 0.2j, 0, 0, 0.7 - 0.4j])]}},
        "B2_rank1": {**base, "algebra": {"series": "B", "rank": 2}, "construction": "BDRank1",
                     "dispersion": nw, "seeds": {"n": [_vec(n_b2)]}},
        "D2_rank1": {**base, "algebra": {"series": "D", "rank": 2}, "construction": "BDRank1",
                     "dispersion": nw, "seeds": {"n": [_vec(n_d2)]}},
        "sl2_rank1": {**base, "algebra": {"series": "A", "rank": 1}, "construction": "SlRank1",
                      "dispersion": {"flavor": "NLS", "J": [1.5, -1.5]}, "seeds": {"n": [_vec([1, 0.6 - 0.3j])]}},
        "sl2_double": {**base, "algebra": {"series": "A", "rank": 1}, "construction": "Sl2Double",
                       "dispersion": {"flavor": "NLS", "J": [1.5, -1.5]},
                       "seeds": {"n": [_vec([1 + 0.2j, 0.7 - 0.4j])]}},
    }


def cmd_selftest() -> VerificationReport:
    rep = VerificationReport(generator_seed=DEFAULT_SEED)
    timings = {}
    for name, raw in canned_configs().items():
        start = time.perf_counter()
        sub = cmd_verify(RunConfig.from_dict(raw, verify=True))
        timings[name] = round(time.perf_counter() - start, 3)
        for c in sub.checks:
            rep.add(f"{name}.{c.name}", c.max_residual, c.tolerance, c.worst_point, c.note)
        rep.info[name] = sub.info
    rep.info["seconds"] = timings
    rep.config_echo = {"canned": sorted(canned_configs())}
    return rep


# -- entry point ---------------------------------------------------------------

def _write_report(rep, path):
    text = rep.to_json(indent=2)
    if path is None or path == "-":
        print(text)
    else:
        Path(path).write_text(text + "\n")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="zsdress", description="dressing-method soliton generator and verifier")
    sub = ap.add_subparsers(dest="cmd", required=True)
    g = sub.add_parser("generate", help="write field dumps for a config")
    g.add_argument("--config", required=True)
    g.add_argument("--out", required=True)
    v = sub.add_parser("verify", help="run the check battery for a config")
    v.add_argument("--config", required=True)
    v.add_argument("--report", default="-")
    s = sub.add_parser("selftest", help="run the canned check battery")
    s.add_argument("--report", default=None)
    args = ap.parse_args(argv)

    try:
        if args.cmd == "generate":
            res = cmd_generate(RunConfig.load(args.config), args.out)
            for f in res["files"]:
                print(f)
            if res["error"]:
                print(f"singular point: {res['error']} (partial output written)", file=sys.stderr)
                return 2
            return 0
        if args.cmd == "verify":
            rep = cmd_verify(RunConfig.load(args.config, verify=True))
            _write_report(rep, args.report)
        else:
            rep = cmd_selftest()
            if args.report:
                _write_report(rep, args.report)
        bad = rep.failures()
        for line in rep.summary_lines():
            if line.startswith("FAIL"):
                print(line, file=sys.stderr)
        print(f"{len(rep.checks) - len(bad)}/{len(rep.checks)} checks passed", file=sys.stderr)
        return 0 if rep.passed else 1
    except (ConfigError, SingularPointError, SeedConstraintError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
