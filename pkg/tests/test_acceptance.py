"""Acceptance criteria, one test each, driven through the verification harness.

The default configuration (20 trials of 20 chart points) is run once per
session; each criterion then checks the relevant residuals against its own
bound.  A summary line per criterion is printed at the end of the run.
"""

import pytest

from conftest import ACCEPTANCE_LINES
from dressing import harness


@pytest.fixture(scope="module")
def report():
    cfg = harness.SuiteConfig(suite="all", seed=20240611, trials=20, points=20)
    return harness.run_suite(cfg)


def _records(report):
    return {r["id"]: r for r in report["body"]["properties"]}


def _value(rec, key=None):
    assert "error" not in rec, rec.get("error")
    v = rec["max_residual"] if key is None else rec["detail"][key]
    return float(v)


def criterion(number, title, checks):
    """checks: list of (label, value, bound); bound None means exact zero."""
    failures = []
    worst = []
    for label, value, bound in checks:
        ok = value == 0.0 if bound is None else value < bound
        worst.append(f"{label}={value:.3g}" + ("" if bound is None else f"<{bound:g}"))
        if not ok:
            failures.append(label)
    status = "PASS" if not failures else "FAIL"
    line = f"[{status}] AC{number:02d} {title}: " + (", ".join(failures) if failures else "all within bounds")
    ACCEPTANCE_LINES.append(line)
    print(line)
    print("       " + "; ".join(worst))
    assert not failures, f"{title}: {failures}"


def test_ac01_dressing_invariance(report):
    r = _records(report)["core.dressing_invariance"]
    assert r["trials"] == 20
    criterion(1, "dressing invariance", [(g, _value(r, g), 1e-10) for g in ("su2", "so13", "k1")])


def test_ac02_curvature_naturality(report):
    r = _records(report)["core.curvature_naturality"]
    criterion(2, "curvature naturality", [(k, _value(r, k), 1e-9) for k in ("curvature", "second_derivative")])


def test_ac03_residual_laws(report):
    rec = _records(report)
    checks = [
        ("adjoint", _value(rec["core.adjoint_residual"]), 1e-9),
        ("conformal_lorentz", _value(rec["conformal.lorentz_residual"]), 1e-9),
        ("twisted", _value(rec["core.twisted_residual"]), 1e-9),
        ("electroweak_u1", _value(rec["ew.residual_u1"]), 1e-9),
        ("weyl", _value(rec["conformal.weyl_residual"]), 1e-9),
        ("composition", _value(rec["core.twisted_composition"]), 1e-10),
    ]
    criterion(3, "adjoint and twisted residual laws", checks)


def test_ac04_cocycle(report):
    r = _records(report)["core.cocycle"]
    # three pairs per trial, each checked in both orders for C and Cbar
    assert 3 * r["trials"] >= 50
    criterion(4, "Weyl cocycle identity", [("cocycle", _value(r), 1e-10)])


def test_ac05_brst(report):
    rec = _records(report)
    checks = [
        ("d_squared", _value(rec["brst.d_squared"]), None),
        ("nilpotency", _value(rec["brst.nilpotency"]), 1e-8),
        ("erased_ghost", _value(rec["brst.erasure"]), 1e-9),
        ("boost_ghost", _value(rec["brst.k1_ghost"]), 1e-9),
        ("adjoint_ghost", _value(rec["brst.adjoint_ghost"]), 1e-9),
        ("twisted_ghost", _value(rec["brst.twisted_ghost"]), 1e-9),
        ("weyl_ghost_exact", _value(rec["brst.weyl_ghost_symbolic"]), None),
    ]
    assert rec["brst.d_squared"]["check"] == rec["brst.weyl_ghost_symbolic"]["check"] == "exact"
    criterion(5, "BRST", checks)


def test_ac06_electroweak(report):
    rec = _records(report)
    checks = [
        ("lagrangian_equality", _value(rec["ew.lagrangian_equality"]), 1e-9),
        ("A_Z_cross_coupling", _value(rec["ew.no_cross_coupling"]), 1e-10),
        ("mass_ratio", _value(rec["ew.mass_ratio"]), 1e-12),
        ("symmetric_phase", _value(rec["ew.symmetric_phase"]), None),
    ]
    criterion(6, "electroweak", checks)


def test_ac07_gr(report):
    rec = _records(report)
    checks = [
        ("metricity", _value(rec["gr.metricity"]), 1e-12),
        ("metricity_exact", _value(rec["gr.metricity_symbolic"]), None),
        ("palatini_eh", _value(rec["gr.palatini_eh"]), 1e-8),
        ("lorentz_erasure", _value(rec["gr.lorentz_erasure"]), 1e-10),
        ("coordinate_composition", _value(rec["gr.coordinate_composition"]), 1e-10),
    ]
    criterion(7, "GR", checks)


def test_ac08_conformal(report):
    rec = _records(report)
    n = rec["conformal.normal_connection"]
    checks = [
        ("boost_constraint", _value(rec["conformal.boost_constraint"]), 1e-11),
        ("tractor_metric", _value(rec["conformal.tractor_metric_invariance"]), 1e-9),
        ("twistor_helicity", _value(rec["conformal.twistor_helicity_invariance"]), 1e-9),
        ("sigma_compatibility", _value(rec["conformal.sigma_compatibility"]), 1e-9),
        ("normal_torsion_exact", _value(rec["conformal.normal_torsion_symbolic"]), None),
        ("normal_f", _value(n, "conformally_flat.f"), 1e-9),
        ("normal_W_trace", _value(n, "conformally_flat.W_trace"), 1e-8),
        ("cotton_vs_fd", _value(rec["conformal.cotton_fd"]), 1e-8),
    ]
    criterion(8, "conformal", checks)


def test_ac09_lie_iso(report):
    rec = _records(report)
    checks = [
        ("bracket", _value(rec["core.lie_iso"], "bracket"), 1e-10),
        ("spin_cover", _value(rec["core.spin_cover"]), 1e-10),
        ("bar_det", _value(rec["core.bar_det"]), 1e-12),
    ]
    # five bracket pairs and three det samples per trial
    assert 5 * rec["core.lie_iso"]["trials"] >= 100 and 3 * rec["core.bar_det"]["trials"] >= 50
    criterion(9, "so(2,4) to su(2,2)", checks)


def test_ac10_determinism():
    cfg = harness.SuiteConfig(suite="all", seed=42, trials=1, points=20)
    first, second = harness.run_suite(cfg), harness.run_suite(cfg)
    same = harness.report_body_json(first) == harness.report_body_json(second)
    ids = [r["id"] for r in first["body"]["properties"]]
    assert ids == list(harness.REGISTRY) and first["body"]["pass"]
    criterion(10, "harness determinism", [("identical_bodies", 0.0 if same else 1.0, None)])


def test_all_properties_pass(report):
    failing = [r["id"] for r in report["body"]["properties"] if not r["pass"]]
    assert not failing
