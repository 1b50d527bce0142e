import json
import math

from zsdress.report import VerificationReport


def test_pass_iff_below_tolerance():
    rep = VerificationReport(generator_seed=7)
    rep.add("ok", 1e-13, 1e-12, (0.5, -1.0))
    rep.add("equal", 1e-12, 1e-12)
    assert rep.passed
    rep.add("bad", 2.0, 1.0)
    rep.add("nan", math.nan, 1.0)
    assert not rep.passed
    assert [c.name for c in rep.failures()] == ["bad", "nan"]
    assert rep["ok"].worst_point == (0.5, -1.0)


def test_json_schema():
    rep = VerificationReport(config_echo={"a": 1}, generator_seed=3)
    rep.add("x", math.inf, 1.0, note="diverged")
    d = json.loads(rep.to_json())
    assert set(d) == {"checks", "config_echo", "generator_seed"}
    c = d["checks"][0]
    assert c == {"name": "x", "max_residual": "inf", "tolerance": 1.0, "pass": False,
                 "worst_point": None, "note": "diverged"}


def test_extend_prefixes():
    a, b = VerificationReport(), VerificationReport()
    b.add("y", 0.0, 1.0)
    b.info["k"] = 1
    a.extend(b, prefix="sub.")
    assert a.checks[0].name == "sub.y" and a.info == {"k": 1}
    assert a.summary_lines()[0].startswith("PASS  sub.y")
