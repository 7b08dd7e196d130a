"""Command-line entry point.

Exit codes: 0 success, 1 precondition violation (a JSON error object goes to
stderr), 2 certification inconclusive at the requested precision or depth,
3 an invariant or acceptance check failed.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

from .config import (SHORTHANDS, ConfigError, RunConfig, default_output_dir,
                     load_sequence_spec, parse_sequence_spec, parse_window)
from .dynamics import InconclusiveError, periodic_points, verify_isolation
from .orbits import (FORWARD_FAMILY, SWAPPED_FAMILY, CandidateForm, accumulation_clusters,
                     certified_separation, make_special_point, orbit_entries)
from .render import render_svg
from .surface import RemovedPointError, SquarePoint

EXIT_OK, EXIT_PRECONDITION, EXIT_INCONCLUSIVE, EXIT_VIOLATION = 0, 1, 2, 3

FAMILIES = {
    "forward": FORWARD_FAMILY,
    "bottom-top": (CandidateForm.BOTTOM, CandidateForm.TOP),
    "swapped": SWAPPED_FAMILY,
}

# options whose values may start with a minus sign
_WINDOW_FLAGS = ("--window", "--orbit-window")


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _seq_arg(text: str) -> dict:
    spec = load_sequence_spec(text)
    parse_sequence_spec(spec)
    return spec


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chamanara", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, precision=128):
        p.add_argument("--seq", help="sequence for both coordinates: a name "
                       f"({', '.join(SHORTHANDS)}), a JSON object or a JSON file")
        p.add_argument("--x-seq", help="sequence for the x coordinate")
        p.add_argument("--y-seq", help="sequence for the y coordinate")
        p.add_argument("--precision", type=int, default=precision, help="digits per coordinate")
        p.add_argument("--out", type=Path, help="output directory (default $CHAMANARA_OUTPUT_DIR or .)")
        p.add_argument("--stem", help="output file name stem (default: the command)")

    p = sub.add_parser("orbit", help="CSV and JSON dump of an orbit window")
    common(p, 64)
    p.add_argument("--window", default="-5:5")

    p = sub.add_parser("separation", help="certified pairwise separation of an orbit window")
    common(p)
    p.add_argument("--window", default="-50:50")
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("accumulation", help="cluster a forward or backward orbit around removed points")
    common(p, 0)
    p.add_argument("--n-max", type=int, default=200)
    p.add_argument("--tol-exponent", type=int, default=20, help="tolerance 2^-t")
    p.add_argument("--direction", choices=("forward", "backward"), default="forward")
    p.add_argument("--family", choices=sorted(FAMILIES), default="forward",
                   help="candidate family the clusters are fitted to")

    p = sub.add_parser("periodic", help="fixed points of phi^n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--isolation", action="store_true", help="also certify pairwise separation")
    p.add_argument("--out", type=Path)
    p.add_argument("--stem")

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--out", type=Path)
    p.add_argument("--stem")

    p = sub.add_parser("render", help="SVG of the square, its edges, removed points and an orbit")
    common(p, 64)
    p.add_argument("--edges", type=int, default=6, help="draw edge pairs with k <= this")
    p.add_argument("--orbit-window", default=None)
    p.add_argument("--scale", type=int, default=512)
    return parser


def _normalise_argv(argv: Sequence[str]) -> list[str]:
    out, it = [], iter(argv)
    for tok in it:
        if tok in _WINDOW_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    kw: dict = {"command": ns.command}
    both = getattr(ns, "seq", None)
    for axis in ("x", "y"):
        spec = getattr(ns, f"{axis}_seq", None) or both
        if spec:
            kw[f"{axis}_spec"] = _seq_arg(spec)
    if getattr(ns, "window", None):
        kw["window"] = parse_window(ns.window)
    for name in ("depth", "workers", "n_max", "tol_exponent", "direction", "edges", "scale", "stem"):
        if getattr(ns, name, None) is not None:
            kw[name] = getattr(ns, name)
    if getattr(ns, "precision", None):
        kw["precision"] = ns.precision
    elif ns.command == "accumulation":
        kw["precision"] = max(64, 3 * ns.tol_exponent)
    if ns.command == "periodic":
        kw["period"] = ns.n
    kw["output_dir"] = ns.out if ns.out is not None else default_output_dir()
    return RunConfig(**kw)


def _special_point(cfg: RunConfig):
    xs, ys = cfg.sequences()
    return make_special_point(xs, ys)


def _write(cfg: RunConfig, suffix: str, text: str) -> str:
    cfg.output_dir.mkdir(parents=True, exist_ok=True)
    path = cfg.output_path(suffix)
    with open(path, "w", newline="") as fh:
        fh.write(text)
    return str(path)


def orbit_csv(entries, precision: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "x_digits", "y_digits", "precision", "truncated"])
    for e in entries:
        w.writerow([e.n, e.x_digits, e.y_digits, precision, "true"])
    return buf.getvalue()


def cmd_orbit(cfg: RunConfig, ns) -> int:
    zeta = _special_point(cfg)
    entries = orbit_entries(zeta, *cfg.window, cfg.precision)
    doc = {"kind": "orbit_dump", "config": cfg.to_dict(), "precision": cfg.precision,
           "orbit": [e.to_dict() for e in entries]}
    paths = [_write(cfg, ".csv", orbit_csv(entries, cfg.precision)), _write(cfg, ".json", dumps(doc))]
    print(dumps({"rows": len(entries), "files": paths}), end="")
    return EXIT_OK


def cmd_separation(cfg: RunConfig, ns) -> int:
    zeta = _special_point(cfg)
    report = certified_separation(zeta, *cfg.window, cfg.precision, cfg.depth, cfg.workers)
    doc = report.to_dict()
    path = _write(cfg, ".json", dumps(doc))
    print(dumps({"certified": report.certified, "min_separation": doc["min_separation"],
                 "min_pair": doc["min_pair"], "inconclusive_pairs": len(report.inconclusive_pairs),
                 "files": [path]}), end="")
    return EXIT_OK if report.certified or report.n_min == report.n_max else EXIT_INCONCLUSIVE


def cmd_accumulation(cfg: RunConfig, ns) -> int:
    zeta = _special_point(cfg)
    report = accumulation_clusters(zeta, cfg.n_max, Fraction(1, 1 << cfg.tol_exponent),
                                   cfg.precision, cfg.direction, FAMILIES[ns.family])
    path = _write(cfg, ".json", dumps(report.to_dict()))
    print(dumps({"clusters": len(report.clusters), "unclustered": len(report.unclustered),
                 "horizon": report.horizon, "violations": report.violations,
                 "finite_horizon_artifacts": len(report.finite_horizon_artifacts),
                 "files": [path]}), end="")
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_periodic(cfg: RunConfig, ns) -> int:
    pts = periodic_points(cfg.period)
    doc: dict = {"kind": "periodic_points", "period": cfg.period,
                 "points": [q.to_dict() for q in pts]}
    if ns.isolation:
        doc["isolation"] = verify_isolation(pts).to_dict()
    text = dumps(doc)
    _write(cfg, ".json", text)
    print(text, end="")
    return EXIT_OK


def cmd_verify(cfg: RunConfig, ns) -> int:
    from .checks import run_all
    results = run_all(lambda r: print(r.line(), flush=True))
    doc = {"kind": "verify", "results": [
        {"criterion": r.criterion, "title": r.title, "passed": r.passed, "detail": r.detail}
        for r in results]}
    _write(cfg, ".json", dumps(doc))
    return EXIT_OK if all(r.passed for r in results) else EXIT_VIOLATION


def cmd_render(cfg: RunConfig, ns) -> int:
    orbit = []
    if ns.orbit_window:
        a, b = parse_window(ns.orbit_window)
        zeta = _special_point(cfg)
        from .orbits import orbit_point
        orbit = [(n, SquarePoint(*orbit_point(zeta, n))) for n in range(a, b + 1)]
    svg = render_svg(cfg.edges, orbit, cfg.scale)
    path = _write(cfg, ".svg", svg)
    print(dumps({"edge_pairs": 2 * (cfg.edges + 1), "dots": len(orbit), "files": [path]}), end="")
    return EXIT_OK


COMMAND_HANDLERS = {
    "orbit": cmd_orbit, "separation": cmd_separation, "accumulation": cmd_accumulation,
    "periodic": cmd_periodic, "verify": cmd_verify, "render": cmd_render,
}


def _error(kind: str, message: str, code: int) -> int:
    sys.stderr.write(dumps({"error": kind, "message": message, "exit_code": code}))
    return code


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = _normalise_argv(sys.argv[1:] if argv is None else argv)
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        return COMMAND_HANDLERS[cfg.command](cfg, ns)
    except InconclusiveError as exc:
        return _error("inconclusive", str(exc), EXIT_INCONCLUSIVE)
    except (ConfigError, RemovedPointError, ValueError, json.JSONDecodeError) as exc:
        return _error(type(exc).__name__, str(exc), EXIT_PRECONDITION)
    except OSError as exc:
        return _error("OSError", str(exc), EXIT_PRECONDITION)


if __name__ == "__main__":
    sys.exit(main())
