"""Command-line entry point.

Exit codes: 0 success, 1 usage error, 2 data or validation error, 3 when the
elementary-cycle cap is exceeded. The cap defaults to the value of the
``TEMPLEXKIT_CYCLE_CAP`` environment variable when ``--cap`` is absent.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .cellcomplex import load_complex
from .checks import run_checks
from .errors import CycleCapExceeded, SchemaError, TemplexError
from .fixtures import write_fixtures
from .genex import bonds, generatex_classes, multigraph_view, pushout_report
from .ingest import (REFERENCE_RUNS, build_bramah, delay_embed, lorenz_strip_itinerary, read_trajectory_csv,
                     rossler_strip_itinerary, save_charts, simulate, write_trajectory_csv)
from .report import analysis_report, genex_report, homology_report, render_text, templex_report, tmv_report
from .templex import load_templex, save_templex
from .tmv import label_trajectory, read_itinerary_csv, tipping_timeline, write_itinerary_csv

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract here reserves 2 for data errors
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _emit(obj, as_json: bool, out=None) -> None:
    text = json.dumps(obj, indent=2, ensure_ascii=False) if as_json else render_text(obj)
    if out:
        Path(out).write_text(text + "\n", encoding="utf-8")
    else:
        print(text)


def _load_complex_or_templex(path):
    """A complex file, or the complex of a templex file."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON ({exc.msg})", f"{path}:{exc.lineno}") from exc
    if isinstance(data, dict) and "cells" in data:
        return load_complex(path)
    T = load_templex(path)
    if not T.has_complex:
        raise SchemaError("templex has no complex", str(path))
    return T.complex


def _write_meta(path, command: str, settings: dict) -> Path:
    meta = Path(str(path) + ".meta.json")
    record = {"command": command, "settings": settings,
              "created": datetime.now(timezone.utc).isoformat(timespec="seconds")}
    meta.write_text(json.dumps(record, indent=2) + "\n", encoding="utf-8")
    return meta


def _params(items) -> dict:
    out = {}
    for item in items or ():
        key, sep, value = item.partition("=")
        if not sep:
            raise UsageError(f"--param expects key=value, got {item!r}")
        try:
            out[key] = float(value)
        except ValueError:
            raise UsageError(f"--param {key}: {value!r} is not a number") from None
    return out


# -- commands -----------------------------------------------------------------

def cmd_homology(a) -> int:
    K = _load_complex_or_templex(a.file)
    _emit(homology_report(K, generators=a.generators), a.json)
    return EXIT_OK


def cmd_templex_info(a) -> int:
    _emit(templex_report(load_templex(a.file)), a.json)
    return EXIT_OK


def cmd_genex(a) -> int:
    T = load_templex(a.file)
    classes = generatex_classes(T, a.cap) if len(T.digraph) else []
    if a.dot:
        sys.stdout.write(multigraph_view(classes).to_dot(Path(a.file).stem))
        return EXIT_OK
    rep = genex_report(T, all_subsets=a.all_subsets, classes=classes)
    if a.pushouts:
        rep["pushouts"] = [pushout_report(b, classes) for b in bonds(classes, all_subsets=a.all_subsets)]
    _emit(rep, a.json)
    return EXIT_OK


def cmd_tmv(a) -> int:
    T = load_templex(a.templex)
    it = read_itinerary_csv(a.itinerary)
    classes = generatex_classes(T, a.cap)
    rep = tmv_report(T, it, classes)
    if a.plot:
        d = label_trajectory(it, T, classes)
        if Path(a.plot).suffix.lower() == ".png":
            _plot_chi(d, a.plot)
        else:
            _write_step_series(d, a.plot)
    _emit({"tmv": rep}, a.json)
    return EXIT_OK


def _write_step_series(d, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["time", "label"])
        w.writerows(d.step_series())


def _plot_chi(d, path) -> None:
    try:
        import matplotlib
    except ImportError:
        raise TemplexError("--plot needs matplotlib (pip install templexkit[plot])") from None
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(9, 2.5))
    xs, ys = [], []
    for iv in d.intervals:
        xs += [iv.start, iv.end]
        ys += [iv.label, iv.label]
    ax.plot(xs, ys, drawstyle="steps-post", lw=1)
    ax.set_xlabel("time")
    ax.set_ylabel("class")
    ax.set_yticks(sorted(set(ys)))
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def cmd_tipping(a) -> int:
    T = load_templex(a.templex)
    it = read_itinerary_csv(a.itinerary)
    d = label_trajectory(it, T, generatex_classes(T, a.cap))
    tl = tipping_timeline(d, a.window, a.stride)
    events = [{"time": t, "before": sorted(b), "after": sorted(c)} for t, b, c in tl.events]
    if a.json:
        print(json.dumps({"window": a.window, "stride": a.stride, "events": events}, indent=2))
    else:
        print(f"{len(tl.windows)} windows, {len(events)} tipping events")
        for e in events:
            before = ", ".join(f"G{i}" for i in e["before"]) or "none"
            after = ", ".join(f"G{i}" for i in e["after"]) or "none"
            print(f"  t={e['time']:.6g}: {{{before}}} -> {{{after}}}")
    return EXIT_OK


def cmd_simulate(a) -> int:
    params = _params(a.param)
    run = dict(REFERENCE_RUNS[a.system])
    run.update({k: v for k in run if (v := getattr(a, k)) is not None})
    traj = simulate(a.system, params, run["t_span"], run["dt"], run["transient"], every=run["every"])
    write_trajectory_csv(traj, a.output)
    settings = {"system": a.system, "params": params, **run}
    if a.strip_itinerary:
        chart = rossler_strip_itinerary if a.system == "rossler" else lorenz_strip_itinerary
        write_itinerary_csv(chart(traj), a.strip_itinerary)
        settings["strip_itinerary"] = str(a.strip_itinerary)
    _write_meta(a.output, "simulate", settings)
    print(f"wrote {len(traj)} samples to {a.output}")
    return EXIT_OK


def cmd_embed(a) -> int:
    src = read_trajectory_csv(a.input)
    if not 0 <= a.column < src.dim:
        raise UsageError(f"--column must lie in [0, {src.dim - 1}]")
    dt = float(src.times[1] - src.times[0]) if len(src) > 1 else 1.0
    traj = delay_embed(src.points[:, a.column], a.tau, a.dim, dt)
    write_trajectory_csv(traj, a.output)
    _write_meta(a.output, "embed", {"input": str(a.input), "column": a.column, "tau": a.tau, "dim": a.dim})
    print(f"wrote {len(traj)} points of dimension {a.dim} to {a.output}")
    return EXIT_OK


def cmd_build(a) -> int:
    traj = read_trajectory_csv(a.input)
    res = build_bramah(traj, cell_count=a.cells, landmarks=a.landmarks, min_points=a.min_points,
                       check_dimension=not a.no_dimension_check, min_dwell=a.min_dwell)
    save_templex(res.templex, a.output)
    settings = {"input": str(a.input), "cells": a.cells, "landmarks": a.landmarks,
                "min_points": a.min_points, "min_dwell": a.min_dwell,
                "check_dimension": not a.no_dimension_check}
    if a.charts:
        save_charts(res.charts, a.charts)
    if a.itinerary:
        write_itinerary_csv(res.itinerary, a.itinerary)
    _write_meta(a.output, "build", settings)
    print(f"wrote templex with {len(res.templex.digraph)} nodes to {a.output}")
    return EXIT_OK


def cmd_analyze(a) -> int:
    T = load_templex(a.templex)
    it = read_itinerary_csv(a.itinerary) if a.itinerary else None
    _emit(analysis_report(T, it, a.cap), a.json)
    return EXIT_OK


def cmd_fixtures(a) -> int:
    if a.write:
        for p in write_fixtures(a.write):
            print(p)
        return EXIT_OK
    results = run_checks(a.filter, a.dir)
    if a.json:
        print(json.dumps([r.to_dict() for r in results], indent=2, ensure_ascii=False, default=str))
    else:
        for r in results:
            print(r)
        print(f"{sum(r.passed for r in results)}/{len(results)} checks passed")
    return EXIT_OK if all(r.passed for r in results) else EXIT_DATA


def cmd_export(a) -> int:
    T = load_templex(a.templex)
    classes = generatex_classes(T, a.cap) if len(T.digraph) else []
    if a.dot:
        text = multigraph_view(classes).to_dot(Path(a.templex).stem)
    else:
        text = json.dumps(analysis_report(T, None, a.cap), indent=2, ensure_ascii=False) + "\n"
    if a.output:
        Path(a.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="templexkit", description="Templex analysis of branched-manifold dynamics.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def cap(sp):
        sp.add_argument("--cap", type=int, default=None, help="elementary cycle cap")

    s = sub.add_parser("homology", help="integral homology and orientability of a complex")
    s.add_argument("file")
    s.add_argument("--generators", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_homology)

    s = sub.add_parser("templex", help="templex inspection")
    tsub = s.add_subparsers(dest="action", required=True, parser_class=_Parser)
    i = tsub.add_parser("info", help="digraph, junction loci and Poincaré edges")
    i.add_argument("file")
    i.add_argument("--json", action="store_true")
    i.set_defaults(func=cmd_templex_info)

    s = sub.add_parser("genex", help="generatex classes and bonds")
    s.add_argument("file")
    s.add_argument("--json", action="store_true")
    s.add_argument("--dot", action="store_true", help="print the class multigraph as DOT")
    s.add_argument("--all-subsets", action="store_true", help="report every class subset with common edges")
    s.add_argument("--pushouts", action="store_true", help="include the gluing diagram of each bond")
    cap(s)
    s.set_defaults(func=cmd_genex)

    s = sub.add_parser("tmv", help="label an itinerary by generatex class")
    s.add_argument("templex")
    s.add_argument("itinerary")
    s.add_argument("--json", action="store_true")
    s.add_argument("--plot", metavar="OUT",
                   help="write χ(t) as a time,label step series (CSV), or as an image if OUT ends in .png")
    cap(s)
    s.set_defaults(func=cmd_tmv)

    s = sub.add_parser("tipping", help="changes of the active class set")
    s.add_argument("templex")
    s.add_argument("itinerary")
    s.add_argument("--window", type=float, required=True)
    s.add_argument("--stride", type=float, required=True)
    s.add_argument("--json", action="store_true")
    cap(s)
    s.set_defaults(func=cmd_tipping)

    s = sub.add_parser("simulate", help="integrate the Rössler or Lorenz flow")
    s.add_argument("system", choices=["rossler", "lorenz"])
    s.add_argument("-o", "--output", required=True)
    # unset values fall back to the reference run of the chosen system
    s.add_argument("--t-span", type=float)
    s.add_argument("--dt", type=float)
    s.add_argument("--transient", type=float)
    s.add_argument("--every", type=int)
    s.add_argument("--param", action="append", metavar="KEY=VALUE")
    s.add_argument("--strip-itinerary", metavar="CSV", help="also write the reference-cell itinerary")
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("embed", help="delay embedding of one trajectory column")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--column", type=int, default=0)
    s.add_argument("--tau", type=int, required=True)
    s.add_argument("--dim", type=int, default=3)
    s.set_defaults(func=cmd_embed)

    s = sub.add_parser("build", help="build a templex from a trajectory")
    s.add_argument("input")
    s.add_argument("-o", "--output", required=True)
    s.add_argument("--cells", type=int, default=8)
    s.add_argument("--landmarks", type=int, default=300)
    s.add_argument("--min-points", type=int, default=30)
    s.add_argument("--min-dwell", type=int, default=3)
    s.add_argument("--no-dimension-check", action="store_true")
    s.add_argument("--charts", metavar="JSON")
    s.add_argument("--itinerary", metavar="CSV")
    s.set_defaults(func=cmd_build)

    s = sub.add_parser("analyze", help="full report for a templex, optionally with an itinerary")
    s.add_argument("templex")
    s.add_argument("itinerary", nargs="?")
    s.add_argument("--json", action="store_true")
    cap(s)
    s.set_defaults(func=cmd_analyze)

    s = sub.add_parser("fixtures", help="check the shipped reference fixtures")
    s.add_argument("--filter")
    s.add_argument("--dir", help="read fixtures from this directory instead")
    s.add_argument("--json", action="store_true")
    s.add_argument("--write", metavar="DIR", help="write the fixtures as JSON and exit")
    s.set_defaults(func=cmd_fixtures)

    s = sub.add_parser("export", help="export the class multigraph or the full report")
    s.add_argument("templex")
    fmt = s.add_mutually_exclusive_group(required=True)
    fmt.add_argument("--dot", action="store_true")
    fmt.add_argument("--json", action="store_true")
    s.add_argument("-o", "--output")
    cap(s)
    s.set_defaults(func=cmd_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"templexkit: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CycleCapExceeded as exc:
        print(f"templexkit: {exc}; raise --cap or TEMPLEXKIT_CYCLE_CAP", file=sys.stderr)
        return EXIT_CAP
    except (TemplexError, ValueError, OSError) as exc:
        print(f"templexkit: error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
