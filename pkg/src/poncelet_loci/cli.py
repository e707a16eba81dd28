"""
Command-line interface: ``poncelet-loci {orbit|locus|caustic|curvature|covering|invert|check}``.

Exit codes: 0 success, 1 usage error, 2 numeric or invariant failure.
A JSON file given with ``--config`` supplies defaults for any flag; flags
on the command line take precedence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .affine import affine_curvature, constancy_report, ellipse_curve
from .axes_map import forward_map, invert_map, quartic_real_roots, inversion_quartic
from .centers import CenterKind, triangle_center
from .checks import SuiteOptions, default_grid, run_checks
from .conic import Ellipse, caustic_axes, point_at
from .errors import PonceletError
from .locus import (
    LocusForm,
    canonical_axes,
    canonical_circumlocus,
    coordinate_zeros,
    covering_degree,
    fit_axis_aligned_conic,
    incenter_locus_axes,
    locus_curve,
    locus_preimages,
    pipeline_center,
    sample_grid,
    sample_locus,
    winding_angle,
)
from .orbit import closed_form_vertices, orbit_at, orbit_residuals
from .svg import MIN_CURVE_POINTS, render_svg

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2
LOCUS_COLUMNS = ("t", "x1", "y1", "xc", "yc", "residual_canonical")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(v: float) -> str:
    return format(float(v), ".15g")


def _pt(p) -> list[float]:
    return [float(p[0]), float(p[1])]


def _table(args) -> Ellipse:
    if args.a is None or args.b is None:
        raise UsageError("--a and --b are required")
    if not (args.a > 0 and args.b > 0):
        raise UsageError("--a and --b must be positive")
    if args.a < args.b:
        raise UsageError("--a must be the major semi-axis (a >= b)")
    return Ellipse(args.a, args.b)


def _kinds(args) -> list[CenterKind]:
    values = args.center or ["bisector"]
    kinds: list[CenterKind] = []
    for v in values:
        for k in (CenterKind if v == "both" else [CenterKind(v)]):
            if k not in kinds:
                kinds.append(k)
    return kinds


def _write(path, text: str) -> None:
    Path(path).write_text(text, encoding="utf-8")


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _kind_path(path: str, kind, multiple: bool) -> Path:
    p = Path(path)
    return p.with_name(f"{p.stem}.{kind}{p.suffix}") if multiple else p


# -- commands -------------------------------------------------------------

def cmd_orbit(args, out):
    E = _table(args)
    o = orbit_at(E, args.t)
    res = orbit_residuals(E, o)
    q2, q3 = closed_form_vertices(E, o.p1, o.alpha)
    dev = max(abs(u - v) for p, q in ((o.p2, q2), (o.p3, q3)) for u, v in zip(p, q))
    a1, b1 = caustic_axes(E)
    report = {
        "a": E.a, "b": E.b, "t": args.t,
        "vertices": [_pt(p) for p in o.vertices],
        "alpha": o.alpha,
        "cos2_alpha": math.cos(o.alpha) ** 2,
        "caustic": {"a1": a1, "b1": b1},
        "residuals": res,
        "closed_form": {"p2": _pt(q2), "p3": _pt(q3), "max_deviation": dev},
    }
    if E.is_circle:
        report["note"] = "circular table: every 3-periodic orbit is equilateral"
    if args.csv:
        rows = [[f"p{i + 1}", _num(p.x), _num(p.y), _num(res[f"reflection_p{i + 1}"])]
                for i, p in enumerate(o.vertices)]
        _write(args.csv, _csv_text(["vertex", "x", "y", "reflection_residual"], rows))
    if args.svg:
        _write(args.svg, render_svg(E, orbit=o))
    if args.figure:
        from .plotting import orbit_figure

        cs = {k.value: triangle_center(k, *o.vertices) for k in CenterKind}
        orbit_figure(E, o, args.figure, centers=cs)
    if args.json:
        out.write(json.dumps(report, indent=2) + "\n")
        return EXIT_OK
    out.write(f"table a={_num(E.a)} b={_num(E.b)}  caustic a1={_num(a1)} b1={_num(b1)}\n")
    for i, p in enumerate(o.vertices):
        out.write(f"p{i + 1} = ({_num(p.x)}, {_num(p.y)})\n")
    out.write(f"alpha = {_num(o.alpha)} rad  (cos^2 alpha = {_num(report['cos2_alpha'])})\n")
    for k, v in res.items():
        out.write(f"{k:14s} {v:.3e}\n")
    out.write(f"closed-form vs ray-trace max deviation {dev:.3e}\n")
    if "note" in report:
        out.write(report["note"] + "\n")
    return EXIT_OK


def cmd_locus(args, out):
    E = _table(args)
    if args.n < 8:
        raise UsageError("--n must be at least 8")
    kinds = _kinds(args)
    multiple = len(kinds) > 1
    loci, fits, tables = {}, {}, {}
    for kind in kinds:
        samples = sample_locus(E, kind, args.n)
        loci[kind.value] = samples
        tables[kind.value] = [
            [_num(s.t), _num(s.p1.x), _num(s.p1.y), _num(s.center.x), _num(s.center.y),
             _num(s.residual_canonical)]
            for s in samples
        ]
        if args.fit:
            fits[kind.value] = fit_axis_aligned_conic([s.center for s in samples])

    discrepancy = None
    if args.fit and multiple:
        bis, inc = fits["bisector"].as_dict(), fits["incenter"].as_dict()
        discrepancy = (
            f"center-kind discrepancy: bisector locus semi-axes ({bis['sx']:.10g}, {bis['sy']:.10g}) "
            f"vs incenter locus semi-axes ({inc['sx']:.10g}, {inc['sy']:.10g})"
        )

    if args.csv:
        for kind in loci:
            _write(_kind_path(args.csv, kind, multiple), _csv_text(LOCUS_COLUMNS, tables[kind]))
    if args.svg or args.figure:
        m = max(args.n, MIN_CURVE_POINTS)
        curves = {}
        for kind in kinds:
            c = pipeline_center(E, sample_grid(m), kind)
            curves[kind.value] = np.column_stack([c.x, c.y])
        if args.svg:
            _write(args.svg, render_svg(E, loci=curves, n=m))
        if args.figure:
            from .plotting import locus_figure

            locus_figure(E, curves, args.figure, fits=fits)

    if args.json:
        report = {"a": E.a, "b": E.b, "n": args.n, "loci": {}}
        if not E.is_circle:
            A, B = canonical_axes(E)
            report["canonical"] = {"A": A, "B": B}
        for kind, samples in loci.items():
            entry = {"samples": [dict(zip(LOCUS_COLUMNS, (s.t, s.p1.x, s.p1.y, s.center.x, s.center.y,
                                                          s.residual_canonical))) for s in samples]}
            if kind in fits:
                entry["fit"] = fits[kind].as_dict()
            report["loci"][kind] = entry
        if discrepancy:
            report["discrepancy"] = discrepancy
        out.write(json.dumps(report, indent=2) + "\n")
        return EXIT_OK

    for kind in loci:
        if args.csv:
            out.write(f"# {kind}: wrote {len(tables[kind])} rows to {_kind_path(args.csv, kind, multiple)}\n")
        else:
            if multiple:
                out.write(f"# center={kind}\n")
            out.write(_csv_text(LOCUS_COLUMNS, tables[kind]))
        if kind in fits:
            out.write(json.dumps(fits[kind].as_dict()) + "\n")
    if discrepancy:
        out.write(f"# {discrepancy}\n")
    return EXIT_OK


def cmd_caustic(args, out):
    E = _table(args)
    a1, b1 = caustic_axes(E)
    report = {
        "a": E.a, "b": E.b, "a1": a1, "b1": b1,
        "confocality_defect": abs(a1 * a1 - b1 * b1 - E.c2) / max(E.c2, E.a * E.a * 1e-300),
        "bilinear_defect": abs(E.b * a1 + E.a * b1 - E.a * E.b) / (E.a * E.b),
    }
    if not E.is_circle:
        A, B = canonical_axes(E)
        report.update({"A": A, "B": B, "ratio_b1_a1": b1 / a1, "ratio_A_absB": A / abs(B)})
    if args.json:
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        for k, v in report.items():
            out.write(f"{k:20s} {_num(v)}\n")
    return EXIT_OK


def cmd_curvature(args, out):
    E = _table(args)
    if args.n < 16:
        raise UsageError("--n must be at least 16")
    kind = CenterKind(args.center)
    if args.curve == "table":
        curve = ellipse_curve(E.a, E.b)
        expected = (E.a * E.b) ** (-2.0 / 3.0)
        label = "table ellipse"
    else:
        method = args.method
        if kind is CenterKind.INCENTER:
            method = "pipeline"
        curve = locus_curve(E, kind, method, args.form)
        axes = canonical_circumlocus(E) if kind is CenterKind.BISECTOR else incenter_locus_axes(E)
        expected = (axes.sx ** 2 * axes.sy ** 2) ** (-1.0 / 3.0)
        label = f"{kind} locus ({method})"
    rep = constancy_report(curve, args.n)
    report = {"a": E.a, "b": E.b, "curve": label, **rep.as_dict(), "expected": expected,
              "mean_over_expected_cubed": (rep.mean / expected) ** 3}
    if args.figure:
        from .plotting import curvature_figure

        t = sample_grid(args.n)
        curvature_figure(t, affine_curvature(curve, t), args.figure, expected=expected,
                         title=f"affine curvature, {label}")
    if args.json:
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        for k, v in report.items():
            out.write(f"{k:26s} {v if isinstance(v, str) else _num(v)}\n")
    return EXIT_OK


def cmd_covering(args, out):
    E = _table(args)
    kind = CenterKind(args.center)
    if args.t is not None:
        ts = [args.t]
    else:
        ts = np.random.default_rng(args.seed).uniform(0.0, 2.0 * np.pi, args.probes).tolist()
    probes = []
    for s in ts:
        p = pipeline_center(E, float(s), kind)
        pre = [u for u, d in locus_preimages(E, kind, p) if d < 1e-7]
        probes.append({"t": s, "probe": _pt(p), "degree": covering_degree(E, kind, p), "preimages": pre})
    zx, zy = coordinate_zeros(E, kind)
    wind = winding_angle(E, kind)
    report = {"a": E.a, "b": E.b, "center": kind.value, "probes": probes,
              "zeros_x": len(zx), "zeros_y": len(zy), "zeros_x_at": zx, "zeros_y_at": zy,
              "winding_angle": wind, "winding_turns": wind / (2.0 * math.pi)}
    if args.json:
        out.write(json.dumps(report, indent=2) + "\n")
        return EXIT_OK
    for p in probes:
        pre = ", ".join(f"{u:.9f}" for u in p["preimages"])
        out.write(f"probe t={p['t']:.9f} -> degree {p['degree']}  preimages [{pre}]\n")
    out.write(f"coordinate zeros: x_c {len(zx)}, y_c {len(zy)}\n")
    out.write(f"winding angle {wind:.12f} = {wind / math.pi:.12f} pi\n")
    return EXIT_OK


def cmd_invert(args, out):
    if args.x is None or args.y is None:
        raise UsageError("--x and --y are required")
    if not (args.x > args.y > 0):
        raise UsageError("caustic axes must satisfy x > y > 0")
    a, b = invert_map(args.x, args.y)
    q = quartic_real_roots(*inversion_quartic(args.x, args.y))
    x2, y2 = forward_map(a, b)
    report = {"x": args.x, "y": args.y, "a": a, "b": b, "quartic_real_roots": q.roots,
              "discriminant_sign": q.discriminant_sign, "roundtrip": [x2, y2]}
    if args.json:
        out.write(json.dumps(report, indent=2) + "\n")
    else:
        out.write(f"a = {_num(a)}\nb = {_num(b)}\n")
        out.write(f"real roots of p(a): {', '.join(_num(r) for r in q.roots)}\n")
        out.write(f"discriminant sign {q.discriminant_sign:+d}\n")
        out.write(f"forward map of (a, b): ({_num(x2)}, {_num(y2)})\n")
    return EXIT_OK


def cmd_check(args, out):
    if args.grid:
        ellipses = default_grid()
        opt = SuiteOptions(n_probes=5, n_random=200)
    else:
        ellipses = [_table(args)]
        opt = SuiteOptions()
    if args.probes is not None:
        opt.n_probes = args.probes
    if args.random is not None:
        opt.n_random = args.random
    opt.seed = args.seed
    report = run_checks(ellipses, opt)
    doc = report.as_dict()
    if args.output:
        _write(args.output, json.dumps(doc, indent=2) + "\n")
    if args.json:
        out.write(json.dumps(doc, indent=2) + "\n")
    else:
        for r in report.results:
            line = f"{r.status:4s}  {r.name:38s} {r.max_residual:10.3e}  tol {r.tolerance:.0e}"
            out.write(line + (f"  {r.detail}" if r.detail else "") + "\n")
        out.write(f"{report.status}: {len(report.results)} invariants over {len(ellipses)} "
                  f"table(s) in {report.elapsed:.1f} s\n")
    return EXIT_OK if report.passed else EXIT_NUMERIC


# -- parser ---------------------------------------------------------------

def _add_table(p):
    p.add_argument("--a", type=float, help="major semi-axis of the table")
    p.add_argument("--b", type=float, help="minor semi-axis of the table")


def _add_common(p):
    p.add_argument("--json", action="store_true", help="emit the report as one JSON document")
    p.add_argument("--config", help="JSON file with default flag values")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="poncelet-loci",
                     description="3-periodic elliptic billiard orbits and their triangle-center loci.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("orbit", help="orbit through the point of parameter t")
    _add_table(p)
    p.add_argument("--t", type=float, default=0.0, help="table parameter in radians")
    p.add_argument("--csv", help="write one row per vertex")
    p.add_argument("--svg", help="write table, caustic and orbit as SVG")
    p.add_argument("--figure", help="write a matplotlib figure (format from suffix)")
    _add_common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("locus", help="sample a triangle-center locus")
    _add_table(p)
    p.add_argument("--center", action="append", choices=["bisector", "incenter", "both"],
                   help="center kind; repeat or use 'both' for the two kinds")
    p.add_argument("--n", type=int, default=1000, help="number of samples (>= 8)")
    p.add_argument("--fit", action="store_true", help="fit an axis-aligned conic to the samples")
    p.add_argument("--csv", help="write the sample table to this file")
    p.add_argument("--svg", help="write table, caustic and loci as SVG")
    p.add_argument("--figure", help="write a matplotlib figure (format from suffix)")
    _add_common(p)
    p.set_defaults(func=cmd_locus)

    p = sub.add_parser("caustic", help="caustic semi-axes and canonical locus axes")
    _add_table(p)
    _add_common(p)
    p.set_defaults(func=cmd_caustic)

    p = sub.add_parser("curvature", help="affine curvature constancy along a curve")
    _add_table(p)
    p.add_argument("--curve", choices=["locus", "table"], default="locus")
    p.add_argument("--center", choices=["bisector", "incenter"], default="bisector")
    p.add_argument("--method", choices=["closed_form", "pipeline"], default="closed_form")
    p.add_argument("--form", choices=[f.value for f in LocusForm], default="compact")
    p.add_argument("--n", type=int, default=1000)
    p.add_argument("--figure", help="plot the curvature along t")
    _add_common(p)
    p.set_defaults(func=cmd_curvature)

    p = sub.add_parser("covering", help="preimage counts, coordinate zeros and winding")
    _add_table(p)
    p.add_argument("--center", choices=["bisector", "incenter"], default="bisector")
    p.add_argument("--t", type=float, help="probe the locus at center(t)")
    p.add_argument("--probes", type=int, default=10, help="number of random probes")
    p.add_argument("--seed", type=int, default=0)
    _add_common(p)
    p.set_defaults(func=cmd_covering)

    p = sub.add_parser("invert", help="table axes from caustic axes")
    p.add_argument("--x", type=float, help="caustic major semi-axis")
    p.add_argument("--y", type=float, help="caustic minor semi-axis")
    _add_common(p)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("check", help="run the invariant suite")
    _add_table(p)
    p.add_argument("--grid", action="store_true", help="sweep 50 tables with a/b in (1.01, 5]")
    p.add_argument("--probes", type=int, help="covering probes per center kind and table")
    p.add_argument("--random", type=int, help="random orbits per table")
    p.add_argument("--seed", type=int, default=12345)
    p.add_argument("--output", help="also write the JSON summary to this file")
    _add_common(p)
    p.set_defaults(func=cmd_check)
    return parser


def _apply_config(parser, argv) -> None:
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    if not known.config:
        return
    try:
        config = json.loads(Path(known.config).read_text(encoding="utf-8"))
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read config {known.config}: {exc}") from exc
    if not isinstance(config, dict):
        raise UsageError("config file must hold a JSON object")
    config = {k.replace("-", "_"): v for k, v in config.items()}
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    used = set()
    for sp in subparsers.choices.values():
        dests = {a.dest for a in sp._actions}
        values = {k: v for k, v in config.items() if k in dests}
        if "center" in values and isinstance(values["center"], str) and sp.prog.endswith("locus"):
            values["center"] = [values["center"]]
        sp.set_defaults(**values)
        used.update(values)
    unknown = set(config) - used
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")


def main(argv=None, out=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    out = out or sys.stdout
    parser = build_parser()
    try:
        _apply_config(parser, argv)
        args = parser.parse_args(argv)
        return args.func(args, out)
    except UsageError as exc:
        print(f"poncelet-loci: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    except PonceletError as exc:
        print(f"poncelet-loci: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"poncelet-loci: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
