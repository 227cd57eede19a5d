"""Command-line front end: verification campaigns, quartic roots and plots."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from . import exact_poly as ep
from .campaigns import REPORT_SCHEMA, TARGETS, RunConfig, UnknownTarget, run_target
from .curves import catalogue, families, pipelines
from .curves.families import VerificationReport

log = logging.getLogger("chazy_lab")

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
LOG_LEVELS = {"quiet": logging.WARNING, "info": logging.INFO, "debug": logging.DEBUG}


class UsageError(Exception):
    pass


def _setup_logging() -> None:
    level = os.environ.get("CHAZY_LAB_LOG", "quiet").lower()
    if level not in LOG_LEVELS:
        raise UsageError(f"CHAZY_LAB_LOG must be one of {sorted(LOG_LEVELS)}")
    logging.basicConfig(level=LOG_LEVELS[level], format="%(levelname)s %(name)s: %(message)s",
                        stream=sys.stderr)


def parse_complex(text: str) -> complex:
    try:
        return complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        raise UsageError(f"not a complex number: {text!r}") from None


# -- report rendering -----------------------------------------------------------------


def _num(v: float):
    if math.isnan(v):
        return None
    if math.isinf(v):
        return "inf"
    return float(f"{v:.6e}")


def structured(reports: list[VerificationReport], cfg: RunConfig, target: str) -> str:
    """Canonical JSON: sorted keys, residuals rounded to 7 significant digits."""
    records = []
    for rep in reports:
        for c in rep.checks:
            rec = c.as_record()
            for key in ("max", "mean", "min", "tolerance"):
                rec[key] = _num(rec[key])
            records.append(rec)
    doc = {
        "schema": REPORT_SCHEMA,
        "version": __version__,
        "target": target,
        "config": {"tolerance": cfg.tolerance, "samples": cfg.samples, "order": cfg.order, "seed": cfg.seed},
        "checks": records,
        "notes": [n for rep in reports for n in rep.notes],
        "pass": all(r.passed for r in reports),
    }
    return json.dumps(doc, sort_keys=True, indent=1, ensure_ascii=False) + "\n"


def text(reports: list[VerificationReport]) -> str:
    lines = []
    for rep in reports:
        lines.append(f"[{'PASS' if rep.passed else 'FAIL'}] {rep.family}")
        for c in rep.checks:
            k = "" if c.k is None else f" k={c.k}"
            cmp = ">" if c.bound == "lower" else "<"
            stat = c.min if c.bound == "lower" else c.max
            lines.append(f"  {'ok  ' if c.passed else 'FAIL'} {c.check}{k}: n={c.samples} "
                         f"max={c.max:.3e} mean={c.mean:.3e} (need {cmp} {c.tol:.0e}, got {stat:.3e})")
        for n in rep.notes:
            lines.append(f"  note: {n}")
    total = sum(len(r.checks) for r in reports)
    failed = sum(not c.passed for r in reports for c in r.checks)
    lines.append(f"{total - failed}/{total} checks passed")
    return "\n".join(lines) + "\n"


def _emit(out: str, path: str | None) -> None:
    if path:
        Path(path).write_text(out)
    else:
        sys.stdout.write(out)


# -- commands ---------------------------------------------------------------------------


def cmd_verify(args) -> int:
    cfg = RunConfig(args.tol, args.samples, args.order, args.seed)
    log.info("verify %s with %s", args.target, cfg)
    try:
        reports = run_target(args.target, cfg)
    except UnknownTarget:
        raise UsageError(f"unknown target {args.target!r}; choose from {', '.join(TARGETS)} "
                         "or family-id=<id>") from None
    out = structured(reports, cfg, args.target) if args.format == "structured" else text(reports)
    _emit(out, args.out)
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_quartic(args) -> int:
    x = parse_complex(args.x)
    roots = ep.quartic_by_radicals(x)
    lines = [f"roots of s^4 - 2s^3 - 4xs + 2x at x = {x}"]
    worst = 0.0
    for s in sorted(roots, key=lambda z: (round(z.real, 12), round(z.imag, 12))):
        r = ep.quartic_residual(s, x)
        worst = max(worst, r)
        lines.append(f"  s = {s.real:+.15g} {s.imag:+.15g}i   residual {r:.2e}")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK if worst < 1e-10 else EXIT_FAIL


def plot_rows(source: str, lo: float, hi: float, points: int) -> tuple[list[str], list[list[float]]]:
    """Real parameter slice of a catalogued family or pipeline.

    Columns are the parameter followed by re/im of each quantity.
    """
    if not hi > lo or points < 2:
        raise UsageError("empty plot range")
    grid = np.linspace(lo, hi, points)
    if source in pipelines.PIPELINES:
        fn, _ = pipelines.PIPELINES[source]
        param = "tau" if source == "lmn" else "s"
        names = None
        rows = []
        for p in grid:
            pl = fn(complex(p), order=8)
            if names is None:
                names = sorted(pl.param)
            rows.append([float(p)] + [v for n in names for v in (pl.param[n].value.real, pl.param[n].value.imag)])
        header = [param] + [f"{n}_{part}" for n in names for part in ("re", "im")]
        return header, rows
    try:
        fam = catalogue.get(source)
    except catalogue.UnknownFamily:
        raise UsageError(f"unknown family {source!r}") from None
    names = ["x"] + [n for n in ("s", "y_param", "F", "H") if getattr(fam, n) is not None]
    rows = []
    for p in grid:
        vals = [complex(families.eval_param(fam, n, complex(p))) for n in names]
        rows.append([float(p)] + [v for z in vals for v in (z.real, z.imag)])
    header = [fam.param] + [f"{n}_{part}" for n in names for part in ("re", "im")]
    return header, rows


def write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(header)
        for r in rows:
            w.writerow([repr(v) for v in r])


def svg_polyline(xs, ys, width: int = 480, height: int = 360, pad: int = 20) -> str:
    """Static SVG 1.1 document with one polyline through the finite points."""
    pts = [(x, y) for x, y in zip(xs, ys) if math.isfinite(x) and math.isfinite(y)]
    if not pts:
        raise UsageError("nothing finite to plot")
    x0, x1 = min(p[0] for p in pts), max(p[0] for p in pts)
    y0, y1 = min(p[1] for p in pts), max(p[1] for p in pts)
    sx = (width - 2 * pad) / ((x1 - x0) or 1.0)
    sy = (height - 2 * pad) / ((y1 - y0) or 1.0)
    coords = " ".join(f"{pad + (x - x0) * sx:.2f},{height - pad - (y - y0) * sy:.2f}" for x, y in pts)
    return ('<?xml version="1.0" encoding="UTF-8"?>\n'
            f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
            f'viewBox="0 0 {width} {height}">\n'
            f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>\n'
            f'<polyline fill="none" stroke="black" stroke-width="1" points="{coords}"/>\n'
            '</svg>\n')


def cmd_plot(args) -> int:
    header, rows = plot_rows(args.source, args.start, args.stop, args.points)
    out = Path(args.out)
    if out.suffix.lower() == ".svg":
        cols = args.axes.split(",") if args.axes else header[1:4:2]
        idx = []
        for c in cols:
            name = c if c.endswith(("_re", "_im")) or c == header[0] else f"{c}_re"
            if name not in header:
                raise UsageError(f"no column {c!r}; have {', '.join(header)}")
            idx.append(header.index(name))
        if len(idx) != 2:
            raise UsageError("--axes needs two columns")
        out.write_text(svg_polyline([r[idx[0]] for r in rows], [r[idx[1]] for r in rows]))
    else:
        write_csv(out, header, rows)
    log.info("wrote %d rows to %s", len(rows), out)
    return EXIT_OK


# -- entry point ---------------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="chazy-lab", description=__doc__)
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run a verification campaign")
    v.add_argument("target", help=f"one of {', '.join(TARGETS)} or family-id=<id>")
    v.add_argument("--tol", type=float, default=1e-8)
    v.add_argument("--samples", type=int, default=64)
    v.add_argument("--order", type=int, default=8)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--format", choices=("text", "structured"), default="text")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    q = sub.add_parser("quartic", help="roots of s^4 - 2s^3 - 4xs + 2x by radicals")
    q.add_argument("x")
    q.add_argument("--out")
    q.set_defaults(func=cmd_quartic)

    pl = sub.add_parser("plot", help="CSV or SVG of a real parameter slice")
    pl.add_argument("source", help="family id or pipeline name (s333, oct, lmn)")
    pl.add_argument("start", type=float)
    pl.add_argument("stop", type=float)
    pl.add_argument("--points", type=int, default=200)
    pl.add_argument("--axes", help="two columns for SVG, e.g. x,F")
    pl.add_argument("--out", required=True, help="path ending in .csv or .svg")
    pl.set_defaults(func=cmd_plot)
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        _setup_logging()
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"chazy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"chazy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"chazy-lab: error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
