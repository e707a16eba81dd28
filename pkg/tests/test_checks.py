import json

import pytest

from poncelet_loci import checks, conic
from poncelet_loci.checks import SuiteOptions, check_names, default_grid, run_checks
from poncelet_loci.conic import Ellipse

FAST = SuiteOptions(n_samples=200, n_probes=3, n_random=100)


@pytest.fixture(scope="module")
def report_21():
    return run_checks([Ellipse(2, 1)], FAST)


def test_all_pass(report_21):
    bad = [(r.name, r.max_residual, r.detail) for r in report_21.results if r.status != "PASS"]
    assert bad == []
    assert report_21.passed


def test_every_invariant_reported(report_21):
    names = {r.name for r in report_21.results}
    assert set(check_names()) <= names
    assert any(n.startswith("circle.") for n in names)


def test_json_summary(report_21):
    doc = json.loads(json.dumps(report_21.as_dict()))
    assert doc["status"] == "PASS"
    for r in doc["results"]:
        assert {"name", "max_residual", "tolerance", "status"} <= set(r)


def test_form_checks_are_warn_only():
    warn = {name for name, _, w, _ in checks._CHECKS if w}
    assert warn == {f"locus.form_equivalence.{f}" for f in ("compact", "F_form", "caustic_form")}


def test_grid_shape():
    g = default_grid()
    assert len(g) == 50
    assert g[0].a > 1.01 and g[-1].a == pytest.approx(5.0)


def test_corrupted_caustic_fails(monkeypatch):
    good = conic.caustic_axes

    def flipped(E):
        a1, b1 = good(E)
        return a1, -b1

    monkeypatch.setattr(conic, "caustic_axes", flipped)
    rep = run_checks([Ellipse(2, 1)], FAST)
    assert not rep.passed
    failed = {r.name for r in rep.failures()}
    assert "conic.bilinear_identity" in failed
    assert all("a=2" in r.detail for r in rep.failures() if not r.name.startswith("circle."))


def test_crashing_invariant_is_failure(monkeypatch):
    def boom(E):
        raise RuntimeError("injected")

    monkeypatch.setattr(conic, "caustic_axes", boom)
    rep = run_checks([Ellipse(2, 1)], FAST)
    r = next(r for r in rep.results if r.name == "conic.confocality")
    assert r.status == "FAIL" and "injected" in r.detail


def test_deterministic():
    a = run_checks([Ellipse(1.7, 1)], FAST).as_dict()["results"]
    b = run_checks([Ellipse(1.7, 1)], FAST).as_dict()["results"]
    assert [r["max_residual"] for r in a] == [r["max_residual"] for r in b]
