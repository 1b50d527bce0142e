import json
import os
import subprocess
import sys
import time

import numpy as np
import pytest

from zsdress import build_algebra, nwave_dispersion
from zsdress.cli import (
    ConfigError,
    RunConfig,
    build_solution,
    canned_configs,
    cmd_generate,
    cmd_selftest,
    cmd_verify,
    main,
    read_dump,
)
from zsdress.nlee import C2_COMPONENTS, sampled_nwave_c2_residual

SMALL_GRID = {"x_min": -1, "x_max": 1, "nx": 5, "t_min": -1, "t_max": 1, "nt": 5}

SINGULAR = {
    "algebra": {"series": "A", "rank": 1}, "construction": "SlRank1",
    "spectral": {"lambda_plus": [0.3, 0.5], "lambda_minus": [0.3, -0.5]},
    "dispersion": {"flavor": "NLS", "J": [1.5, -1.5]},
    "seeds": {"n": [[1, 1]], "m": [[1, -1]]}, "grid": SMALL_GRID,
}


def _canned(name, **over):
    d = json.loads(json.dumps(canned_configs()[name]))
    d.update(over)
    return d


def _write(tmp_path, d, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(d))
    return str(p)


# -- config parsing --------------------------------------------------------------

def test_verify_needs_five_points():
    d = _canned("C2_rank1", grid={**SMALL_GRID, "nx": 3})
    RunConfig.from_dict(d)
    with pytest.raises(ConfigError):
        RunConfig.from_dict(d, verify=True)


def test_involution_mismatch_rejected():
    d = _canned("C2_rank1")
    d["spectral"] = {"lambda_plus": [0.3, 0.5], "lambda_minus": [0.3, 0.4], "involution": True}
    with pytest.raises(ConfigError):
        RunConfig.from_dict(d)
    d = _canned("C2_rank1")
    d["seeds"]["m"] = [[1, 0, 0, 0]]
    with pytest.raises(ConfigError):
        RunConfig.from_dict(d)


@pytest.mark.parametrize("change", [
    {"construction": "Bogus"},
    {"spectral": {"lambda_plus": [0.3, 0.5]}},
])
def test_bad_configs(change):
    with pytest.raises(ConfigError):
        RunConfig.from_dict(_canned("C2_rank1", **change))


def test_missing_key():
    d = _canned("C2_rank1")
    del d["grid"]
    with pytest.raises(ConfigError):
        RunConfig.from_dict(d)


def test_involution_fills_m():
    cfg = RunConfig.from_dict(_canned("C2_rank1"))
    assert np.array_equal(cfg.m_list[0], cfg.n_list[0].conj())
    assert cfg.pair.lambda_minus == cfg.pair.lambda_plus.conjugate()


# -- generate ----------------------------------------------------------------------

def test_generate_rank2_files(tmp_path):
    res = cmd_generate(RunConfig.from_dict(_canned("C2_rank2", grid=SMALL_GRID)), tmp_path)
    assert res["error"] is None
    names = {os.path.basename(f) for f in res["files"]}
    assert names == {f"{k}.dat" for k in C2_COMPONENTS} | {"Delta.dat"}
    cfg, comp, grid, vals = read_dump(tmp_path / "Q12.dat")
    assert comp == "Q12" and cfg["construction"] == "ClosedForm3"
    assert vals.shape == (grid.nt, grid.nx)


def test_generate_double_dressing(tmp_path):
    res = cmd_generate(RunConfig.from_dict(_canned("sl2_double", grid=SMALL_GRID)), tmp_path)
    names = {os.path.basename(f) for f in res["files"]}
    assert names == {"q.dat", "qtilde.dat", "extrapolation.dat"}
    rows = np.loadtxt(tmp_path / "extrapolation.dat", comments="#", ndmin=2)
    assert rows.shape == (3, 4)
    # diff/eps is roughly constant when the approach is linear
    assert rows[:, 3].max() / rows[:, 3].min() < 1.2


def test_dump_roundtrip_reproduces_residual(tmp_path):
    """Residuals computed from the text dump match those from the in-memory fields exactly."""
    raw = _canned("C2_rank1", grid={"x_min": -1, "x_max": 1, "nx": 9, "t_min": -1, "t_max": 1, "nt": 9})
    cfg = RunConfig.from_dict(raw)
    cmd_generate(cfg, tmp_path)
    vals, grid = {}, None
    for k in C2_COMPONENTS:
        _, _, grid, vals[k] = read_dump(tmp_path / f"{k}.dat")
    basis = build_algebra("C", 2)
    disp = nwave_dispersion(basis, cfg.J, cfg.I)
    sol = build_solution(cfg)
    X, T = grid.mesh()
    mem = {k: np.asarray(sol.fields[k](X, T)) for k in C2_COMPONENTS}
    for k in C2_COMPONENTS:
        assert np.array_equal(vals[k], mem[k])
    a = sampled_nwave_c2_residual(basis, disp.J, disp.I, vals, grid)
    b = sampled_nwave_c2_residual(basis, disp.J, disp.I, mem, grid)
    assert a.max_norms == b.max_norms


def test_partial_output_on_singular_point(tmp_path):
    res = cmd_generate(RunConfig.from_dict(SINGULAR), tmp_path)
    assert "x=0, t=0" in res["error"]
    _, _, grid, vals = read_dump(res["files"][0])
    assert vals.shape == (2, grid.nx) and np.isfinite(vals).all()
    code = main(["generate", "--config", _write(tmp_path, SINGULAR), "--out", str(tmp_path / "o")])
    assert code == 2


def test_threads_do_not_change_output(tmp_path):
    raw = _canned("C2_rank2", grid=SMALL_GRID)
    cfg_path = _write(tmp_path, raw)
    outs = []
    for threads in ("1", "4"):
        out = tmp_path / f"t{threads}"
        env = dict(os.environ, ZSDRESS_THREADS=threads)
        subprocess.run([sys.executable, "-m", "zsdress.cli", "generate", "--config", cfg_path,
                        "--out", str(out)], env=env, check=True, capture_output=True)
        outs.append({p.name: p.read_bytes() for p in out.iterdir()})
    assert outs[0] == outs[1]


# -- verify ------------------------------------------------------------------------

def test_verify_rank1_c2(tmp_path):
    out = tmp_path / "r.json"
    code = main(["verify", "--config", _write(tmp_path, _canned("C2_rank1")), "--report", str(out)])
    rep = json.loads(out.read_text())
    assert code == 0 and all(c["pass"] for c in rep["checks"])
    assert rep["info"]["d_shifts"] == ["d_1: +2 / -2 ln c1", "d_2: +2 / -2 ln c1"]
    names = {c["name"] for c in rep["checks"]}
    assert {"group_membership", "algebra_membership", "asymptotics.settle", "delta_positive"} <= names
    assert sum(n.startswith("cross_check.") for n in names) == 8


def test_broken_isotropic_seed_fails(tmp_path):
    d = _canned("D2_rank1")
    d["seeds"]["n"] = [[1, 0.5, 0.3, 0]]
    rep = cmd_verify(RunConfig.from_dict(d, verify=True))
    assert not rep.passed and rep["seed_constraint"].max_residual > 0.1
    assert main(["verify", "--config", _write(tmp_path, d), "--report", str(tmp_path / "r")]) == 1


def test_example4_verification_has_order2_table():
    rep = cmd_verify(RunConfig.from_dict(_canned("C2_nls"), verify=True))
    assert rep.passed
    order2 = [c for c in rep.checks if c.name.startswith("nls_sl2.") and c.name.endswith(".order2")]
    assert order2 and all(c.max_residual <= c.tolerance for c in order2)
    assert rep["cross_check.q"].max_residual <= 1e-10


def test_config_error_exit_code(tmp_path):
    d = _canned("C2_rank1", construction="Bogus")
    assert main(["verify", "--config", _write(tmp_path, d)]) == 2


# -- selftest ----------------------------------------------------------------------

def _strip_timing(text):
    d = json.loads(text)
    d["info"].pop("seconds")
    return d


def test_selftest_passes_and_is_deterministic():
    start = time.perf_counter()
    a = cmd_selftest()
    assert time.perf_counter() - start < 60
    assert a.passed, [c.name for c in a.failures()]
    b = cmd_selftest()
    assert _strip_timing(a.to_json()) == _strip_timing(b.to_json())
    assert set(a.config_echo["canned"]) == set(canned_configs())


def test_selftest_cli(tmp_path):
    out = tmp_path / "self.json"
    assert main(["selftest", "--report", str(out)]) == 0
    assert json.loads(out.read_text())["generator_seed"] == 20240607
