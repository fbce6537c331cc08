"""Command-line entry point: ``octachord {table,validate,mc,intensity}``.

Exit codes: 0 success, 1 usage error, 2 I/O error, 3 validation failure.
Every CSV starts with ``#`` comment lines holding the run manifest.
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import math
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from octachord import __version__
from octachord.assembly import QuadratureConfig, density_table, intensity, sum_rules
from octachord.geometry import PairClass, make_octahedron
from octachord.montecarlo import DEFAULT_BLOCK, McConfig
from octachord.validation import compare_chords, compare_pair, compare_stick, continuity_checks

EXIT_OK, EXIT_USAGE, EXIT_IO, EXIT_INVALID = 0, 1, 2, 3

CONTINUITY_TOL = 1e-6


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunManifest:
    command: str
    edge: float
    grid: str | None
    quadrature: dict
    mc: dict | None
    tool_version: str = __version__
    timestamp: str = ""
    extra: dict = field(default_factory=dict)

    def header_lines(self) -> list[str]:
        return ["# octachord run manifest", "# " + json.dumps(asdict(self), sort_keys=True)]


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def parse_grid(text: str, stop_max: float) -> tuple[float, float, int]:
    try:
        start, stop, count = text.split(":")
        start_v = float(start)
        stop_v = stop_max if stop.strip() == "max" else float(stop)
        count_v = int(count)
    except ValueError as exc:
        raise UsageError(f"grid must be start:stop:count, got {text!r}") from exc
    if count_v < 2 or not (math.isfinite(start_v) and math.isfinite(stop_v)) or start_v >= stop_v:
        raise UsageError(f"invalid grid {text!r}")
    return start_v, stop_v, count_v


def _timestamp(args) -> str:
    if args.timestamp:
        return args.timestamp
    return _dt.datetime.now(_dt.timezone.utc).replace(microsecond=0).isoformat()


def _quad(args) -> QuadratureConfig:
    return QuadratureConfig(nodes_per_panel=args.nodes, tolerance=args.tolerance)


def _write_csv(path: str, manifest: RunManifest, columns, rows, comments=()) -> None:
    lines = manifest.header_lines() + [f"# {c}" for c in comments]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(fmt(v) for v in row))
    text = "\n".join(lines) + "\n"
    if path == "-":
        sys.stdout.write(text)
        return
    Path(path).write_text(text, encoding="utf-8")


def cmd_table(args) -> int:
    geom = make_octahedron(args.edge)
    start, stop, count = parse_grid(args.grid or "0:max:1000", geom.diameter)
    if start < 0 or stop > geom.diameter * (1 + 1e-12):
        raise UsageError(f"grid must lie within [0, {geom.diameter!r}]")
    quad = _quad(args)
    table = density_table(start, min(stop, geom.diameter), count, args.edge, quad)
    manifest = RunManifest(
        "table", args.edge, f"{start!r}:{stop!r}:{count}", asdict(quad), None, timestamp=_timestamp(args)
    )
    _write_csv(args.out, manifest, table.COLUMNS, table.rows())
    return EXIT_OK


def cmd_validate(args) -> int:
    quad = _quad(args)
    report = sum_rules(quad, args.edge)
    continuity = continuity_checks()
    tol = args.tolerance
    checks = {f"{k}_within_tolerance": v <= tol for k, v in report.deviations().items()}
    checks["jump_sign_positive"] = report.jump_lhs > 0
    checks["continuity_within_1e-6"] = all(v < CONTINUITY_TOL for v in continuity.values())
    checks["converged"] = report.converged
    passed = all(checks.values())
    manifest = RunManifest("validate", args.edge, None, asdict(quad), None, timestamp=_timestamp(args))
    payload = {
        "report": report.to_dict(),
        "continuity": continuity,
        "checks": checks,
        "tolerance": tol,
        "passed": passed,
        "manifest": asdict(manifest),
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    print(text)
    if args.out:
        Path(args.out).write_text(text + "\n", encoding="utf-8")
    return EXIT_OK if passed else EXIT_INVALID


def _parse_radii(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise UsageError(f"bad --stick-r list {text!r}") from exc


def cmd_mc(args) -> int:
    if args.samples < 10_000:
        raise UsageError("--samples must be >= 10000")
    cfg = McConfig(
        seed=args.seed,
        samples=args.samples,
        bins=args.bins,
        edge=args.edge,
        block_size=args.block_size,
        workers=args.workers,
    )
    radii = _parse_radii(args.stick_r)
    comparisons = [compare_chords(cfg)]
    comparisons += [compare_pair(pc, cfg) for pc in PairClass]
    comparisons.append(compare_stick(radii, cfg))

    summary = {c.name: c.max_abs_z for c in comparisons}
    mc_manifest = {k: v for k, v in asdict(cfg).items() if k != "workers"}
    manifest = RunManifest(
        "mc",
        args.edge,
        None,
        asdict(_quad(args)),
        mc_manifest,
        timestamp=_timestamp(args),
        extra={"stick_r": radii},
    )
    rows = []
    for c in comparisons:
        for i in range(c.z.size):
            rows.append((c.name, c.lo[i], c.hi[i], c.analytic[i], c.estimate[i], c.std_err[i], c.z[i]))
    comments = [f"max_abs_z {k}={fmt(v)}" for k, v in summary.items()]
    _write_csv(args.out, manifest, ("comparison", "lo", "hi", "analytic", "estimate", "std_err", "z"), rows, comments)
    if args.out != "-":
        print(json.dumps({"max_abs_z": summary, "seed": args.seed, "samples": args.samples}, sort_keys=True))
    return EXIT_OK


def cmd_intensity(args) -> int:
    start, stop, count = parse_grid(args.grid or "0:100:501", float("nan"))
    if start < 0:
        raise UsageError("q values must be >= 0")
    quad = _quad(args)
    q = np.linspace(start, stop, count)
    iq = intensity(q, quad, args.edge)
    manifest = RunManifest(
        "intensity", args.edge, f"{start!r}:{stop!r}:{count}", asdict(quad), None, timestamp=_timestamp(args)
    )
    _write_csv(args.out, manifest, ("q", "intensity", "q4_intensity"), zip(q, iq, q**4 * iq))
    return EXIT_OK


def _positive_float(text: str) -> float:
    v = float(text)
    if not (math.isfinite(v) and v > 0):
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _count(text: str) -> int:
    v = float(text)
    if v != int(v) or v < 1:
        raise argparse.ArgumentTypeError(f"must be a positive integer, got {text}")
    return int(v)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="octachord", description="Chord-length density of the regular octahedron.")
    parser.add_argument("--version", action="version", version=f"octachord {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--edge", type=_positive_float, default=1.0, help="edge length")
        p.add_argument("--nodes", type=int, default=32, help="Gauss-Legendre nodes per panel")
        p.add_argument("--tolerance", type=float, default=1e-10)
        p.add_argument("--timestamp", default=None, help="fixed manifest timestamp (default: now, UTC)")

    p = sub.add_parser("table", help="tabulate gamma'' parts, eta, gamma', gamma")
    common(p)
    p.add_argument("--grid", default=None, help="start:stop:count, stop may be 'max' (default 0:max:1000)")
    p.add_argument("--out", default="-", help="output CSV path ('-' for stdout)")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("validate", help="sum rules, jump and continuity checks")
    common(p)
    p.add_argument("--out", default=None, help="also write the JSON report here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("mc", help="Monte Carlo comparisons against the closed forms")
    common(p)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--samples", type=_count, default=1_000_000, help="samples per estimator")
    p.add_argument("--bins", type=_count, default=50)
    p.add_argument("--workers", type=_count, default=1)
    p.add_argument("--block-size", type=_count, default=DEFAULT_BLOCK)
    p.add_argument("--stick-r", default="0.2,0.5,0.9,1.3", help="comma-separated stick lengths")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_mc)

    p = sub.add_parser("intensity", help="scattering intensity I(q)")
    common(p)
    p.add_argument("--grid", default=None, help="q grid start:stop:count (default 0:100:501)")
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_intensity)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.nodes < 8:
            raise UsageError("--nodes must be >= 8")
        return args.func(args)
    except UsageError as exc:
        print(f"octachord: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"octachord: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"octachord: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
