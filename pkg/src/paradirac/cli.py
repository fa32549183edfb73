"""Command-line interface: verification suites and physics emitters.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments.
CSV output uses comma separators, '.' decimals, and LF line ends; JSON
output is a single top-level object per invocation with units metadata.
Identical flags and seed produce byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

import numpy as np

from .algebra import ELECTRON_MASS, FINE_STRUCTURE
from .propagate import free_evolve, influence_conjugation_check
from .radiative import anomaly_record, f2_record, shift_record
from .sampling import random_state
from .scattering import mott_dcs, mott_ratio
from .verify import SUITE_NAMES, all_passed, format_report, run_suites

_STATE_LABELS = {"1s": (1, 0), "2s": (2, 0), "2p": (2, 1)}


def _parse_angles(text: str):
    """Angle grid in degrees: 'start:stop:count' or a comma list."""
    try:
        if ":" in text:
            start, stop, count = text.split(":")
            grid = np.linspace(float(start), float(stop), int(count))
        else:
            grid = np.array([float(v) for v in text.split(",")])
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(f"bad angle grid {text!r}: {exc}") from None
    if grid.size == 0:
        raise argparse.ArgumentTypeError("empty angle grid")
    if np.any(grid <= 0.0) or np.any(grid > 180.0):
        raise argparse.ArgumentTypeError("angles must lie in (0, 180] degrees")
    return grid


def _parse_triple(text: str):
    parts = text.split(",")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected three comma-separated values, got {text!r}")
    try:
        return [float(v) for v in parts]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> float:
    try:
        value = float(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    if not value > 0.0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return value


def _emit(text: str, out_path):
    if out_path is None:
        sys.stdout.write(text)
    else:
        with open(out_path, "w", newline="") as handle:
            handle.write(text)


def _emit_json(record: dict, out_path) -> int:
    _emit(json.dumps(record, sort_keys=True, indent=2) + "\n", out_path)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="paradirac",
        description="Spinor algebra, scattering, and radiative endpoint calculator.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="run the named residual suites")
    p_verify.add_argument("--suite", choices=("all",) + SUITE_NAMES, default="all")
    p_verify.add_argument("--seed", type=int, default=0)
    p_verify.add_argument("--tol", type=_positive, default=None,
                          help="override every per-suite tolerance")

    p_mott = sub.add_parser("mott", help="angular cross-section table (CSV)")
    p_mott.add_argument("--p-mag", type=_positive, default=ELECTRON_MASS,
                        help="momentum magnitude in MeV (default: electron mass)")
    p_mott.add_argument("--Z", type=_positive, default=1.0)
    p_mott.add_argument("--angles", type=_parse_angles, default="3.6:176.4:50",
                        help="degrees, 'start:stop:count' or comma list, in (0, 180]")
    p_mott.add_argument("--out", default=None)

    p_ueh = sub.add_parser("uehling", help="vacuum-polarization level shift (JSON)")
    p_ueh.add_argument("--Z", type=_positive, default=1.0)
    p_ueh.add_argument("--state", choices=sorted(_STATE_LABELS), default="2s")
    p_ueh.add_argument("--out", default=None)

    p_g2 = sub.add_parser("g2", help="anomalous moment endpoint (JSON)")
    p_g2.add_argument("--alpha", type=_positive, default=FINE_STRUCTURE)
    p_g2.add_argument("--out", default=None)

    p_anom = sub.add_parser("anomaly", help="axial anomaly contraction (JSON)")
    p_anom.add_argument("--E", type=_parse_triple, required=True, metavar="Ex,Ey,Ez")
    p_anom.add_argument("--B", type=_parse_triple, required=True, metavar="Bx,By,Bz")
    p_anom.add_argument("--out", default=None)

    p_demo = sub.add_parser("propagate-demo",
                            help="free evolution of a seeded random state (JSON)")
    p_demo.add_argument("--seed", type=int, default=0)
    p_demo.add_argument("--dtau", type=float, default=1.0)
    p_demo.add_argument("--which", type=int, choices=(1, -1), default=1)
    p_demo.add_argument("--modes", type=int, default=4)
    p_demo.add_argument("--out", default=None)

    return parser


def cmd_verify(args) -> int:
    names = SUITE_NAMES if args.suite == "all" else (args.suite,)
    results = run_suites(names, seed=args.seed, tol=args.tol)
    sys.stdout.write(format_report(results))
    return 0 if all_passed(results) else 1


def cmd_mott(args) -> int:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["kappa_deg", "dcs", "ratio_to_rutherford"])
    for kappa_deg in args.angles:
        kappa = float(np.radians(kappa_deg))
        dcs = mott_dcs(args.p_mag, kappa, args.Z)
        ratio = mott_ratio(args.p_mag, kappa, args.Z)
        writer.writerow([f"{kappa_deg:.6f}", f"{dcs:.12e}", f"{ratio:.12e}"])
    _emit(buffer.getvalue(), args.out)
    return 0


def cmd_uehling(args) -> int:
    n, l = _STATE_LABELS[args.state]
    return _emit_json(shift_record(n, l, args.Z), args.out)


def cmd_g2(args) -> int:
    return _emit_json(f2_record(alpha=args.alpha), args.out)


def cmd_anomaly(args) -> int:
    return _emit_json(anomaly_record(args.E, args.B), args.out)


def cmd_propagate_demo(args) -> int:
    rng = np.random.default_rng(args.seed)
    state = random_state(rng, n_modes=args.modes)
    evolved = free_evolve(state, 0.0, args.dtau, args.which)
    survivors = [
        {
            "p": [float(v) for v in mode.p],
            "branch": mode.branch,
            "frequency": float(mode.frequency),
            "coefficient": [float(coeff.real), float(coeff.imag)],
        }
        for coeff, mode in evolved.terms
    ]
    momenta = [mode.p for _, mode in state.terms]
    record = {
        "command": "propagate-demo",
        "which": args.which,
        "dtau": args.dtau,
        "seed": args.seed,
        "modes_in": len(state.terms),
        "modes_out": len(evolved.terms),
        "survivors": survivors,
        "kernel_conjugation_residual": float(
            influence_conjugation_check(np.zeros(4), args.dtau or 1.0, momenta)
        ),
        "units": {
            "p": "MeV",
            "frequency": "MeV",
            "dtau": "MeV^-1",
            "coefficient": "dimensionless",
            "kernel_conjugation_residual": "dimensionless",
        },
    }
    return _emit_json(record, args.out)


_DISPATCH = {
    "verify": cmd_verify,
    "mott": cmd_mott,
    "uehling": cmd_uehling,
    "g2": cmd_g2,
    "anomaly": cmd_anomaly,
    "propagate-demo": cmd_propagate_demo,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if isinstance(args.__dict__.get("angles"), str):
        args.angles = _parse_angles(args.angles)
    try:
        return _DISPATCH[args.command](args)
    except ValueError as exc:
        print(f"paradirac {args.command}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
