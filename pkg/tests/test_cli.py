import csv
import io
import json
import math
import subprocess
import sys
import xml.etree.ElementTree as ET

import pytest

from poncelet_loci import cli, conic

SVG_NS = "{http://www.w3.org/2000/svg}"


def run(*argv):
    out = io.StringIO()
    code = cli.main([str(a) for a in argv], out=out)
    return code, out.getvalue()


def test_orbit_report():
    code, text = run("orbit", "--a", 2, "--b", 1, "--t", 0, "--json")
    assert code == 0
    doc = json.loads(text)
    (x1, y1), (x2, y2), (x3, y3) = doc["vertices"]
    assert (x1, y1) == (2.0, 0.0)
    assert x2 == pytest.approx(-1.7370342, abs=1e-7) and x3 == pytest.approx(-1.7370342, abs=1e-7)
    assert sorted([y2, y3]) == pytest.approx([-0.4956592, 0.4956592], abs=1e-7)
    assert max(doc["residuals"].values()) < 1e-10


def test_orbit_circle_equilateral():
    code, text = run("orbit", "--a", 1, "--b", 1, "--t", 0.3, "--json")
    doc = json.loads(text)
    v = doc["vertices"]
    sides = [math.dist(v[i], v[(i + 1) % 3]) for i in range(3)]
    assert code == 0 and max(sides) - min(sides) < 1e-14
    assert "equilateral" in doc["note"]


@pytest.mark.parametrize("argv", [
    ("orbit", "--a", 1, "--b", 2, "--t", 0),
    ("orbit", "--a", -1, "--b", 1),
    ("orbit", "--b", 1),
    ("locus", "--a", 2, "--b", 1, "--n", 4),
    ("locus", "--a", 2, "--b", 1, "--center", "orthocenter"),
    ("curvature", "--a", 2, "--b", 1, "--n", 8),
    ("invert", "--x", 1, "--y", 2),
    ("frobnicate",),
    (),
])
def test_usage_errors(argv, capsys):
    assert run(*argv)[0] == 1
    assert "error" in capsys.readouterr().err


def test_numeric_failure_exit_2(capsys):
    code, _ = run("locus", "--a", 1, "--b", 1, "--n", 16, "--fit")
    assert code == 2
    assert "FitError" in capsys.readouterr().err


@pytest.mark.parametrize("kind, axes", [("bisector", (0.0986122, 1.3027756)),
                                        ("incenter", (1.3027756, 0.3944487))])
def test_locus_fit(kind, axes):
    code, text = run("locus", "--a", 2, "--b", 1, "--center", kind, "--n", 1000, "--fit")
    assert code == 0
    lines = text.splitlines()
    assert lines[0] == "t,x1,y1,xc,yc,residual_canonical"
    assert len(lines) == 1002
    fit = json.loads(lines[-1])
    assert set(fit) == {"sx", "sy", "fit_residual"}
    assert (fit["sx"], fit["sy"]) == pytest.approx(axes, abs=1e-7)


def test_locus_csv_file(tmp_path):
    path = tmp_path / "l.csv"
    assert run("locus", "--a", 2, "--b", 1, "--n", 64, "--csv", path)[0] == 0
    rows = list(csv.reader(path.open()))
    assert rows[0] == ["t", "x1", "y1", "xc", "yc", "residual_canonical"]
    ts = [float(r[0]) for r in rows[1:]]
    assert ts == sorted(ts) and len(ts) == 64
    # at least 12 significant digits survive the round trip
    assert float(rows[2][3]) == pytest.approx(float(rows[2][3]), rel=1e-12)
    assert len(rows[2][3].lstrip("-").replace(".", "").lstrip("0").split("e")[0]) >= 12


def test_locus_csv_byte_stable(tmp_path):
    p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run("locus", "--a", 3, "--b", 1, "--n", 200, "--center", "incenter", "--csv", p1)
    run("locus", "--a", 3, "--b", 1, "--n", 200, "--center", "incenter", "--csv", p2)
    assert p1.read_bytes() == p2.read_bytes()


def test_locus_both_discrepancy_line(tmp_path):
    code, text = run("locus", "--a", 3, "--b", 1, "--center", "both", "--n", 500, "--fit",
                     "--csv", tmp_path / "l.csv")
    assert code == 0
    assert (tmp_path / "l.bisector.csv").exists() and (tmp_path / "l.incenter.csv").exists()
    line = [x for x in text.splitlines() if "center-kind discrepancy" in x][0]
    assert "0.07599" in line and "3.772" in line and "2.51466" in line and "0.45599" in line


def _svg_paths(path):
    root = ET.parse(path).getroot()
    assert root.tag == SVG_NS + "svg"
    return root, {p.get("id"): p for p in root.iter(SVG_NS + "path")}


def test_locus_svg(tmp_path):
    svg = tmp_path / "l.svg"
    assert run("locus", "--a", 2, "--b", 1, "--n", 16, "--center", "both", "--svg", svg)[0] == 0
    root, paths = _svg_paths(svg)
    assert set(paths) == {"table", "caustic", "locus-bisector", "locus-incenter"}
    for p in paths.values():
        assert p.get("d").count("L") >= 511
    # the bisector locus of (2,1) pokes out of the table; the viewBox must hold it
    vx, vy, vw, vh = map(float, root.get("viewBox").split())
    assert -vy > 1.3027756 and vy + vh > 1.3027756


def test_orbit_svg_and_figures(tmp_path):
    svg, png, csvp = tmp_path / "o.svg", tmp_path / "o.png", tmp_path / "o.csv"
    assert run("orbit", "--a", 2, "--b", 1, "--t", 1, "--svg", svg, "--figure", png, "--csv", csvp)[0] == 0
    _, paths = _svg_paths(svg)
    assert set(paths) == {"table", "caustic", "orbit"}
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    assert len(csvp.read_text().splitlines()) == 4


def test_figures_for_locus_and_curvature(tmp_path):
    f1, f2 = tmp_path / "l.svg", tmp_path / "k.png"
    assert run("locus", "--a", 2, "--b", 1, "--n", 32, "--fit", "--figure", f1)[0] == 0
    ET.parse(f1)
    assert run("curvature", "--a", 2, "--b", 1, "--n", 64, "--figure", f2)[0] == 0
    assert f2.stat().st_size > 0


@pytest.mark.parametrize("argv", [
    ("orbit", "--a", 2, "--b", 1),
    ("locus", "--a", 2, "--b", 1, "--n", 8, "--fit"),
    ("caustic", "--a", 2, "--b", 1),
    ("curvature", "--a", 2, "--b", 1, "--n", 32),
    ("covering", "--a", 2, "--b", 1, "--probes", 1),
    ("invert", "--x", 1.7370342, "--y", 0.1314829),
])
def test_every_command_json(argv):
    code, text = run(*argv, "--json")
    assert code == 0
    assert isinstance(json.loads(text), dict)


def test_caustic_and_curvature_values():
    doc = json.loads(run("caustic", "--a", 2, "--b", 1, "--json")[1])
    assert (doc["a1"], doc["b1"]) == pytest.approx((1.7370342, 0.1314829), abs=1e-7)
    doc = json.loads(run("curvature", "--a", 2, "--b", 1, "--json")[1])
    assert doc["mean"] == pytest.approx(3.92766, abs=1e-5) and doc["rel_std"] < 1e-6


def test_covering_and_invert():
    doc = json.loads(run("covering", "--a", 2, "--b", 1, "--t", 0.4, "--json")[1])
    assert doc["probes"][0]["degree"] == 3
    assert (doc["zeros_x"], doc["zeros_y"]) == (6, 6)
    assert doc["winding_angle"] == pytest.approx(6 * math.pi, abs=1e-6)
    doc = json.loads(run("invert", "--x", 2.8290014, "--y", 0.0569995, "--json")[1])
    assert (doc["a"], doc["b"]) == pytest.approx((3, 1), abs=1e-5)


def test_config_and_flag_precedence(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a": 3, "b": 1, "n": 50, "center": "incenter"}))
    code, text = run("locus", "--config", cfg, "--json")
    doc = json.loads(text)
    assert code == 0 and doc["a"] == 3 and doc["n"] == 50 and list(doc["loci"]) == ["incenter"]
    doc = json.loads(run("locus", "--config", cfg, "--n", 20, "--a", 2, "--json")[1])
    assert doc["a"] == 2 and doc["n"] == 20
    doc = json.loads(run("orbit", "--config", cfg, "--json")[1])
    assert doc["a"] == 3


def test_bad_config(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"a": 2, "colour": "red"}))
    assert run("orbit", "--config", cfg)[0] == 1
    cfg.write_text("{not json")
    assert run("orbit", "--config", cfg)[0] == 1
    assert run("orbit", "--config", tmp_path / "missing.json")[0] == 1


def test_check_single_and_output(tmp_path):
    out = tmp_path / "s.json"
    code, text = run("check", "--a", 2, "--b", 1, "--probes", 3, "--random", 100, "--output", out)
    assert code == 0, text
    doc = json.loads(out.read_text())
    assert doc["status"] == "PASS"
    assert "PASS" in text.splitlines()[-1]


def test_check_corrupted_build(monkeypatch):
    good = conic.caustic_axes
    monkeypatch.setattr(conic, "caustic_axes", lambda E: (good(E)[0], -good(E)[1]))
    code, text = run("check", "--a", 2, "--b", 1, "--probes", 2, "--random", 50, "--json")
    doc = json.loads(text)
    assert code == 2 and doc["status"] == "FAIL"
    assert "conic.bilinear_identity" in {r["name"] for r in doc["results"] if r["status"] == "FAIL"}


def test_console_script_entry_point():
    r = subprocess.run([sys.executable, "-m", "poncelet_loci", "caustic", "--a", "3", "--b", "1"],
                       capture_output=True, text=True)
    assert r.returncode == 0 and "2.82900" in r.stdout
    r = subprocess.run([sys.executable, "-m", "poncelet_loci", "orbit", "--a", "1", "--b", "2"],
                       capture_output=True, text=True)
    assert r.returncode == 1
