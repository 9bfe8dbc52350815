"""Command-line front end.

Usage:
    mubquant analyze CORR1.json CORR2.json [-o OUT] [--format json|csv]
    mubquant simulate CONFIG.json [-o OUT_DIR] [--seed N]
    mubquant scan {dephasing,white} D [-o OUT.csv] [--points N]
    mubquant gme ghz N D [--noise P] [-o OUT.json]
    mubquant gme file STATE.json [-o OUT.json]
    mubquant demo

Set MUBQUANT_LOG=DEBUG (or INFO, WARNING, ...) for diagnostic logging.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import json
import logging
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import camsim, gme, noise
from .errors import MubQuantError
from .io import (
    FormatError,
    coincidence_to_json,
    fmt,
    read_coincidence,
    report_to_csv,
    report_to_json,
    state_from_json,
)
from .qcore import as_density
from .witness import CoincidenceMatrix, witness_b_from_counts

log = logging.getLogger("mubquant")

WORKED_CORR1 = [[1015, 23, 9], [17, 947, 8], [9, 28, 1008]]
WORKED_CORR2 = [[1053, 21, 7], [29, 1017, 25], [5, 15, 1023]]

def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_analyze(args) -> int:
    corr1 = read_coincidence(args.corr1)
    corr2 = read_coincidence(args.corr2)
    if corr1.dim != corr2.dim:
        raise FormatError(f"dimension: {args.corr1} has {corr1.dim}, {args.corr2} has {corr2.dim}")
    report = witness_b_from_counts(corr1, corr2).to_dict()
    log.info("analyzed d=%d, b=%.6g, detected=%s", report["dimension"], report["b"], report["detected"])
    text = report_to_csv(report) if args.format == "csv" else report_to_json(report)
    _emit(text, args.output)
    return 0


def cmd_simulate(args) -> int:
    try:
        config = camsim.CameraConfig.from_json(Path(args.config).read_text())
    except json.JSONDecodeError as exc:
        raise FormatError(f"config is not valid JSON: {exc}") from None
    except TypeError as exc:
        raise FormatError(f"config: {exc}") from None
    if args.seed is not None:
        config = config.replace(seed=args.seed)
    out = Path(args.output or ".")
    out.mkdir(parents=True, exist_ok=True)
    est = camsim.ebit_estimate(config)
    for basis in camsim.Basis:
        cm = camsim.simulate_counts(est.state, basis, config.frames, config.seed)
        (out / f"{basis.value}.json").write_text(coincidence_to_json(cm))
    diag = {"config": config.to_dict(), **est.to_dict()}
    (out / "state.json").write_text(report_to_json(diag))
    log.info("wrote position.json, momentum.json, state.json to %s", out)
    return 0


def scan_csv(scan: noise.NoiseScan, tolerance: float) -> str:
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["p", "b", "detected"])
    for p, b in scan.samples:
        w.writerow([fmt(p), fmt(b), fmt(b > tolerance)])
    w.writerow(["p_crit_direct", fmt(scan.p_crit_direct), ""])
    w.writerow(["p_crit_paper_formula", fmt(scan.p_crit_paper_formula), ""])
    return buf.getvalue()


def cmd_scan(args) -> int:
    scan = noise.noise_scan(args.family, args.d, points=args.points)
    for note in scan.notes:
        log.warning("%s d=%d: %s", args.family, args.d, note)
    _emit(scan_csv(scan, args.tolerance), args.output)
    return 0


def cmd_gme(args) -> int:
    spec = args.state
    if spec[0] == "ghz":
        if len(spec) != 3:
            raise FormatError("state: expected 'ghz N D'")
        try:
            n, d = int(spec[1]), int(spec[2])
        except ValueError:
            raise FormatError(f"state: N and D must be integers, got {spec[1:]}") from None
        rho = gme.noisy_ghz(n, d, args.noise)
    elif spec[0] == "file" and len(spec) == 2:
        rho, n, d = state_from_json(Path(spec[1]).read_text())
    else:
        raise FormatError("state: expected 'ghz N D' or 'file PATH'")
    rho = as_density(rho)
    if (n, d) == (3, 3):
        report = gme.gme_bound_3qutrit(rho, args.tolerance, complete=args.complete)
    else:
        report = gme.gme_report(rho, n, d, args.tolerance)
    _emit(report_to_json(report.to_dict()), args.output)
    return 0


def _demo_lines():
    """Yield (text, ok) pairs for the three-dimensional worked example."""
    corr1 = CoincidenceMatrix(np.array(WORKED_CORR1), "basis1")
    corr2 = CoincidenceMatrix(np.array(WORKED_CORR2), "basis2")
    rep = witness_b_from_counts(corr1, corr2)
    c = corr1.counts
    n1 = int(corr1.total)
    yield f"Corr1 total N = {n1}, diagonal = {int(np.trace(c))}", True
    yield f"C1 = {int(np.trace(c))}/{n1} = {rep.c1:.4f}", abs(rep.c1 - 0.9693) <= 5e-5
    yield f"C2 = {rep.c2:.4f}", abs(rep.c2 - 0.9681) <= 5e-5
    samples = (
        ("M1 term (1,2,2,1)", c[0, 1], c[1, 0], 0.00645),
        ("M1 term (1,2,2,3)", c[0, 1], c[1, 2], 0.0044),
        ("M1 term (1,2,3,1)", c[0, 1], c[2, 0], 0.00470),
        ("M2 term (1,2)", c[0, 1], c[1, 0], 0.00645),
        ("M2 term (1,3)", c[0, 2], c[2, 0], 0.00294),
    )
    for label, a, b, expected in samples:
        v = math.sqrt(a * b) / n1
        yield f"{label}: sqrt({a}*{b})/{n1} = {v:.5f}", abs(v - expected) <= 5e-5
    yield f"M1 = {rep.m1:.4f}  (18 ordered index tuples)", abs(rep.m1 - 0.0852) <= 5e-4
    yield f"M2 = {rep.m2:.5f}", abs(rep.m2 - 0.02856) <= 5e-5
    yield f"B = sqrt(1/3) (3*{rep.c2:.4f} - 1 - {rep.m1:.4f} - {rep.m2:.5f}) = {rep.b:.4f}", (
        abs(rep.b - 1.0338) <= 1e-3
    )
    yield f"EoF >= -log2(1 - B^2/2) = {rep.eof_lower_bound_ebits:.3f} e-bits", (
        abs(rep.eof_lower_bound_ebits - 1.103) <= 5e-3
    )
    yield (
        f"Schmidt number >= ceil(2^EoF) = ceil({2 ** rep.eof_lower_bound_ebits:.2f}) "
        f"= {rep.schmidt_lower_bound}",
        rep.schmidt_lower_bound == 3,
    )


def cmd_demo(args) -> int:
    ok_all = True
    for text, ok in _demo_lines():
        ok_all &= bool(ok)
        print(f"{'ok  ' if ok else 'FAIL'} {text}")
    rep = witness_b_from_counts(WORKED_CORR1, WORKED_CORR2)
    print(f"B = {rep.b:.4f}")
    print("all values match" if ok_all else "MISMATCH against the worked example")
    return 0 if ok_all else 1


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="mubquant",
        description="Quantify entanglement from correlations in two unbiased bases.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="witness report from two coincidence JSON files")
    p.add_argument("corr1", help="first-basis coincidences (JSON)")
    p.add_argument("corr2", help="second-basis coincidences (JSON)")
    p.add_argument("-o", "--output")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("simulate", help="simulate camera coincidences from a CameraConfig JSON")
    p.add_argument("config")
    p.add_argument("-o", "--output", help="output directory (default: current)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("scan", help="noise scan with direct and closed-form thresholds (CSV)")
    p.add_argument("family", choices=[f.value for f in noise.Family])
    p.add_argument("d", type=int)
    p.add_argument("-o", "--output")
    p.add_argument("--points", type=int, default=21)
    p.add_argument("--tolerance", type=float, default=1e-12, help="detected iff b > tolerance")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("gme", help="multipartite report for noisy GHZ or a state file")
    p.add_argument("state", nargs="+", metavar="STATE", help="'ghz N D' or 'file PATH'")
    p.add_argument("--noise", type=float, default=1.0, help="GHZ weight p in p*GHZ + (1-p)*I/d^n")
    p.add_argument("--complete", action="store_true", help="three qutrits: subtract the 001/112 partner too")
    p.add_argument("--tolerance", type=float, default=1e-12, help="detected iff bound > tolerance")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_gme)

    p = sub.add_parser("demo", help="reproduce the three-dimensional worked example")
    p.set_defaults(func=cmd_demo)
    return parser


def main(argv=None) -> int:
    level = os.environ.get("MUBQUANT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(message)s")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (MubQuantError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
