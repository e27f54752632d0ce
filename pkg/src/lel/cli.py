"""Command-line front end: ``lel certify|sweep|shoot|pohozaev|bubble-check``.

Exit codes: 0 success, 1 internal failure, 2 refused parameters,
64 malformed flags or out-of-domain values.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

import numpy as np

from .exponents import (
    CertificateError,
    DomainError,
    ProblemParams,
    RefusedError,
    certificate_to_json,
    certify,
    to_rational,
)
from .pohozaev import default_radii, energy_curve, pohozaev_sides
from .radial import IntegrationError, bubble_check, fmt, profile_to_csv, shoot
from .sweep import certify_row, sweep, table_to_csv
from .verify import verify_certificate

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_REFUSED = 2
EXIT_USAGE = 64

DEFAULT_RMAX = 100.0


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise UsageError(message)


# -- flag types --------------------------------------------------------------


def _rational(text: str) -> Fraction:
    try:
        return to_rational(text)
    except (DomainError, TypeError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive_float(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (val > 0 and math.isfinite(val)):
        raise argparse.ArgumentTypeError(f"must be positive and finite: {text!r}")
    return val


def _nonneg_float(text: str) -> float:
    try:
        val = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not (val >= 0 and math.isfinite(val)):
        raise argparse.ArgumentTypeError(f"must be non-negative and finite: {text!r}")
    return val


def _dims(text: str) -> List[int]:
    """``"5..10"`` (inclusive) or ``"3,5,7"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..")
            dims = list(range(int(lo), int(hi) + 1))
        else:
            dims = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad dimension list {text!r}") from None
    if not dims:
        raise argparse.ArgumentTypeError(f"empty dimension list {text!r}")
    return dims


def _radii(text: str) -> List[float]:
    return [_positive_float(t) for t in text.split(",") if t.strip()]


# -- output ------------------------------------------------------------------


def dumps(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with floats at 17 significant digits and non-finite as strings."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_string(str(k))}: {dumps(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + dumps(v, indent, _level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        val = float(obj)
        if math.isfinite(val):
            return fmt(val)
        return _string("nan" if math.isnan(val) else ("inf" if val > 0 else "-inf"))
    return _string(str(obj))


def _string(s: str) -> str:
    return json.dumps(s)


def _emit(text: str, out_path: Optional[str]) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out_path is None or out_path == "-":
        sys.stdout.write(text)
    else:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


# -- commands ----------------------------------------------------------------


def _cmd_certify(args) -> str:
    cert = certify(ProblemParams(args.dim, args.p))
    check = verify_certificate(cert)
    if not check:
        raise CertificateError("constructed certificate fails verification: " + "; ".join(check.violations))
    if args.format == "csv":
        return table_to_csv([certify_row(args.dim, args.p)])
    return dumps(certificate_to_json(cert))


def _cmd_sweep(args) -> str:
    if args.samples < 1:
        raise DomainError("--samples must be at least 1")
    rows = sweep(args.dims, samples=args.samples)
    if args.format == "json":
        return dumps([row.as_record() for row in rows])
    return table_to_csv(rows)


def _shoot(args):
    return shoot(args.dim, float(args.p), args.alpha, args.rmax, args.tol,
                 h_max=args.h_max)


def _cmd_shoot(args) -> str:
    prof = _shoot(args)
    if args.format == "csv":
        return profile_to_csv(prof)
    return dumps({
        "dim": prof.dim,
        "p": str(args.p),
        "alpha": prof.alpha,
        "tol": args.tol,
        "first_zero": prof.first_zero,
        "r_series": prof.r_series,
        "r": prof.grid.tolist(),
        "u": prof.u.tolist(),
        "du": prof.du.tolist(),
    })


def _cmd_pohozaev(args) -> str:
    prof = _shoot(args)
    radii = args.radii if args.radii else default_radii(prof, args.rmax).tolist()
    if args.format == "csv":
        return energy_curve(prof, radii).to_csv()
    return dumps({
        "dim": prof.dim,
        "p": str(args.p),
        "alpha": prof.alpha,
        "first_zero": prof.first_zero,
        "reports": [pohozaev_sides(prof, R).to_json() for R in radii],
    })


def _cmd_bubble(args) -> str:
    res = bubble_check(args.dim, args.t, h=args.h)
    if args.format == "csv":
        return "dim,t,max_residual,grid_spacing\n" + ",".join(
            [str(res["dim"]), fmt(res["t"]), fmt(res["max_residual"]), fmt(res["grid_spacing"])])
    return dumps(res)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--out", default=None, help="output file (default: stdout)")
    common.add_argument("--format", choices=("json", "csv"), default=None)

    parser = _Parser(prog="lel", description="Lane-Emden exponent certificates and radial checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("certify", parents=[common], help="exact (a, b) certificate for one (N, p)")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--p", type=_rational, required=True, help="a/b or a finite decimal")
    c.set_defaults(func=_cmd_certify, default_format="json")

    s = sub.add_parser("sweep", parents=[common], help="certificate table over dimensions")
    s.add_argument("--dims", type=_dims, required=True, help="e.g. 5..10 or 3,5,7")
    s.add_argument("--samples", type=int, default=50)
    s.set_defaults(func=_cmd_sweep, default_format="csv")

    def radial_flags(sp, rmax_default):
        sp.add_argument("--dim", type=int, required=True)
        sp.add_argument("--p", type=_rational, required=True)
        sp.add_argument("--alpha", type=_nonneg_float, required=True)
        sp.add_argument("--rmax", type=_positive_float, default=rmax_default)
        sp.add_argument("--tol", type=_positive_float, default=1e-10)
        sp.add_argument("--h-max", dest="h_max", type=_positive_float, default=None)

    sh = sub.add_parser("shoot", parents=[common], help="integrate a radial profile")
    radial_flags(sh, DEFAULT_RMAX)
    sh.set_defaults(func=_cmd_shoot, default_format="csv")

    pz = sub.add_parser("pohozaev", parents=[common], help="Pohozaev identity on a shot profile")
    radial_flags(pz, DEFAULT_RMAX)
    pz.add_argument("--radii", type=_radii, default=None, help="r1,r2,... (default: 8 log-spaced)")
    pz.set_defaults(func=_cmd_pohozaev, default_format="json")

    b = sub.add_parser("bubble-check", parents=[common], help="PDE residual of the critical bubble")
    b.add_argument("--dim", type=int, required=True)
    b.add_argument("--t", type=_positive_float, required=True)
    b.add_argument("--h", type=_positive_float, default=1e-3, help="grid spacing")
    b.set_defaults(func=_cmd_bubble, default_format="json")
    return parser


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError:
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    args.format = args.format or args.default_format
    try:
        text = args.func(args)
    except RefusedError as exc:
        sys.stderr.write(f"refused: {exc}\n")
        return EXIT_REFUSED
    except (CertificateError, IntegrationError) as exc:
        sys.stderr.write(f"internal error: {exc}\n")
        return EXIT_INTERNAL
    except (DomainError, ValueError) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"lel: error: {exc}\n")
        return EXIT_USAGE
    except Exception as exc:  # noqa: BLE001 - any other failure is a bug
        sys.stderr.write(f"internal error: {type(exc).__name__}: {exc}\n")
        return EXIT_INTERNAL
    try:
        _emit(text, args.out)
    except OSError as exc:
        sys.stderr.write(f"cannot write {args.out}: {exc}\n")
        return EXIT_INTERNAL
    return EXIT_OK


def main() -> None:
    sys.exit(run())
