"""Command line interface.

Exit codes: 0 success / PASS, 1 usage or input error, 2 FAIL verdict,
3 inconclusive verdict.
"""
from __future__ import annotations

import argparse
import json
import sys
import time

import numpy as np

from . import constructions as cons
from .errors import Inconclusive, TransversalError
from .family import separating_circles
from .paths import connect_to_separators
from .render import render_sphere_svg
from .scene import analysis_report, load_scene, scene_from_family, scene_to_family, serialize_scene
from .sphere import FAIL, INCONCLUSIVE, PASS, build_mesh, classify, contractibility_report

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FAIL = 2
EXIT_INCONCLUSIVE = 3

_VERDICT_EXIT = {PASS: EXIT_OK, FAIL: EXIT_FAIL, INCONCLUSIVE: EXIT_INCONCLUSIVE}


class _UsageError(Exception):
    pass


def _emit(text, output):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _write_svg(text, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _vector(text):
    try:
        v = np.array([float(t) for t in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}") from None
    if v.shape != (3,) or not np.linalg.norm(v) > 0:
        raise argparse.ArgumentTypeError(f"expected a nonzero x,y,z, got {text!r}")
    return v


def _family(args):
    return scene_to_family(load_scene(args.scene), tau=args.tolerance)


def cmd_analyze(args):
    f = _family(args)
    t0 = time.perf_counter()
    report = contractibility_report(f, level=args.level, ambiguous_limit=args.ambiguous_limit,
                                    raise_inconclusive=False)
    wall = time.perf_counter() - t0
    doc = analysis_report(f, report, args.level, args.mode, wall)
    _emit(json.dumps(doc, indent=1) + "\n", args.output)
    if args.svg:
        _write_svg(render_sphere_svg(report.classification, report.separating_circles), args.svg)
    return _VERDICT_EXIT[report.verdict]


def cmd_path(args):
    f = _family(args)
    path = connect_to_separators(f, args.start)
    _emit(json.dumps(path.to_dict(), indent=1) + "\n", args.output)
    if args.svg:
        _write_svg(render_sphere_svg(circles=separating_circles(f), path=path), args.svg)
    return EXIT_OK


def cmd_construct(args):
    if args.kind == "cantor":
        if args.stage is None or args.stage < 0:
            raise _UsageError("cantor needs --stage >= 0")
        f = cons.cantor_family(cons.CantorSpec(args.stage, args.samples))
        if args.eps is not None:
            f = cons.inflate(f, args.eps)
    else:
        f = cons.random_disjoint_family(args.n, args.seed)
    _emit(serialize_scene(scene_from_family(f)), args.output)
    return EXIT_OK


def cmd_probe_curve(args):
    if args.scene:
        f = _family(args)
        spec = None
    else:
        if args.stage < 0:
            raise _UsageError("--stage must be >= 0")
        spec = cons.CantorSpec(args.stage, args.samples)
        f = cons.cantor_family(spec, tau=args.tolerance)
    grid = np.linspace(args.b_min, args.b_max, args.grid)
    probe = cons.probe_direction_curve(f, grid)
    tau_curve = args.tau_curve if args.tau_curve is not None else cons.curve_tolerance(f)
    if args.gap is not None:
        gap = args.gap
    elif spec is not None and spec.stage > 0:
        gap = 0.5 * spec.min_gap
    else:
        gap = 2.0 * (grid[1] - grid[0]) if grid.size > 1 else 0.0
    doc = {
        "version": 1,
        "tau_curve": tau_curve,
        "gap": gap,
        "clusters": cons.count_clusters(probe, tau_curve, gap),
        "probe": [{"b": b, "depth": d} for b, d in probe],
    }
    _emit(json.dumps(doc, indent=1) + "\n", args.output)
    return EXIT_OK


def cmd_render(args):
    f = _family(args)
    cls = classify(f, build_mesh(args.level))
    _emit(render_sphere_svg(cls, separating_circles(f)), args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="transversals",
                                description="Line transversal directions of disjoint convex bodies.")
    sub = p.add_subparsers(dest="command", required=True)

    def scene_cmd(name, help_):
        s = sub.add_parser(name, help=help_)
        s.add_argument("scene", help="scene JSON file")
        s.add_argument("--tolerance", type=float, default=None,
                       help="depth tolerance tau (default: 1e-7 x scene diameter)")
        s.add_argument("--output", "-o", default=None, help="output file (default: stdout)")
        return s

    a = scene_cmd("analyze", "classify directions and check contractibility")
    a.add_argument("--level", type=int, default=4)
    mode = a.add_mutually_exclusive_group()
    mode.add_argument("--directed", dest="mode", action="store_const", const="directed")
    mode.add_argument("--undirected", dest="mode", action="store_const", const="undirected")
    a.set_defaults(mode="directed", func=cmd_analyze)
    a.add_argument("--ambiguous-limit", type=float, default=0.02)
    a.add_argument("--svg", default=None, help="also write an SVG map here")

    q = scene_cmd("path", "non-transversal path from a direction to a separating circle")
    q.add_argument("--from", dest="start", type=_vector, required=True, metavar="X,Y,Z")
    q.add_argument("--svg", default=None)
    q.set_defaults(func=cmd_path)

    r = scene_cmd("render", "SVG map of the direction sphere")
    r.add_argument("--level", type=int, default=4)
    r.set_defaults(func=cmd_render)

    c = sub.add_parser("construct", help="generate a scene file")
    c.add_argument("kind", choices=["cantor", "random"])
    c.add_argument("--stage", type=int, default=None)
    c.add_argument("--samples", type=int, default=2, help="curve samples per interval")
    c.add_argument("--eps", type=float, default=None, help="inflate every body by eps")
    c.add_argument("--n", type=int, default=3)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--output", "-o", default=None)
    c.set_defaults(func=cmd_construct)

    k = sub.add_parser("probe-curve", help="depth along the directions (1, 0, b)")
    k.add_argument("scene", nargs="?", default=None,
                   help="scene file (default: build the Cantor family)")
    k.add_argument("--stage", type=int, default=0)
    k.add_argument("--samples", type=int, default=8)
    k.add_argument("--grid", type=int, default=2001)
    k.add_argument("--b-min", type=float, default=0.5)
    k.add_argument("--b-max", type=float, default=2.5)
    k.add_argument("--tau-curve", type=float, default=None)
    k.add_argument("--gap", type=float, default=None)
    k.add_argument("--tolerance", type=float, default=None)
    k.add_argument("--output", "-o", default=None)
    k.set_defaults(func=cmd_probe_curve)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except Inconclusive:  # pragma: no cover - analyze reports it as a verdict
        return EXIT_INCONCLUSIVE
    except (TransversalError, _UsageError, ValueError, OSError) as exc:
        print(f"transversals {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
