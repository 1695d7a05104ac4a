"""Command-line front end.

Exit status: 0 on success, 1 when input is rejected, 2 when a mathematical
cross-check fails (method disagreement, violated identity). Errors are
written to stderr as a JSON object. All randomness comes from
``numpy.random.default_rng(seed)`` (PCG64).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from datetime import datetime, timezone

import numpy as np

from .constructors import build_alpha, degree_table, table_to_csv
from .degree import SphereMapEval, degree
from .errors import CrossCheckError, InputError, SphereDegError, _jsonable
from .fields import load_field, suspend_field
from .index import check_lemma21, index_at
from .morse import load_scenario, morse_check

RNG_NAME = "numpy.random.default_rng (PCG64)"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"bad command line: {message}")


def _point(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError as exc:
        raise InputError(f"cannot parse point {text!r}") from exc


def _emit(payload, out):
    out.write(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")


def _report(args, body):
    return {
        "command": args.command,
        "seed": args.seed,
        "rng": RNG_NAME,
        "timestamp": datetime.now(timezone.utc).isoformat(),
        **body,
    }


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for all random choices")
    common.add_argument("--mesh-level", type=int, default=None, help="starting sphere-mesh level")
    common.add_argument("--output", choices=["json", "csv"], default=None,
                        help="report format (degree-table defaults to csv, everything else to json)")

    p = _Parser(prog="spheredeg", description="Sphere-map degrees, vector-field indices and index-formula checks.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("construct-map", parents=[common], help="field of the degree-m map of S^n")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--m", type=int, required=True)

    c = sub.add_parser("degree", parents=[common], help="degree of V/|V| on a sphere")
    c.add_argument("--field", required=True)
    c.add_argument("--center", type=_point, default=None)
    c.add_argument("--radius", type=float, default=1.0)

    c = sub.add_parser("index", parents=[common], help="index of an isolated zero")
    c.add_argument("--field", required=True)
    c.add_argument("--zero", type=_point, required=True)
    c.add_argument("--radius", type=float, default=0.5)

    c = sub.add_parser("suspend", parents=[common], help="append +-x_{n+1} to a field")
    c.add_argument("--field", required=True)
    c.add_argument("--sign", type=int, choices=[1, -1], required=True)

    c = sub.add_parser("lemma21", parents=[common], help="index of a field vs its suspension")
    c.add_argument("--field", required=True)
    c.add_argument("--sign", type=int, choices=[1, -1], required=True)
    c.add_argument("--radius", type=float, default=0.5)

    c = sub.add_parser("morse-check", parents=[common], help="index formula on a bundled or user scenario")
    c.add_argument("--scenario", required=True)
    c.add_argument("--collar-width", type=float, default=None)
    c.add_argument("--no-double", action="store_true", help="skip the doubling check")

    c = sub.add_parser("degree-table", parents=[common], help="degrees of all constructed maps")
    c.add_argument("--n-max", type=int, required=True)
    c.add_argument("--n-min", type=int, default=1)
    c.add_argument("--m-min", type=int, required=True)
    c.add_argument("--m-max", type=int, required=True)
    return p


def _run(args, out) -> int:
    cmd = args.command
    if cmd == "construct-map":
        spec = build_alpha(args.n, args.m)
        out.write(spec.realized_field.to_json(indent=2) + "\n")
        return 0
    if cmd == "suspend":
        out.write(suspend_field(load_field(args.field), args.sign).to_json(indent=2) + "\n")
        return 0
    if cmd == "degree":
        fld = load_field(args.field)
        rep = degree(SphereMapEval(fld, args.center, args.radius), seed=args.seed, level=args.mesh_level)
        _emit(_report(args, {"degree": rep.degree, "report": rep.to_dict()}), out)
        return 0
    if cmd == "index":
        rep = index_at(load_field(args.field), np.asarray(args.zero), args.radius,
                       seed=args.seed, level=args.mesh_level)
        _emit(_report(args, {"index": rep.index, "report": rep.to_dict()}), out)
        return 0
    if cmd == "lemma21":
        rep = check_lemma21(load_field(args.field), args.sign, args.radius, seed=args.seed)
        _emit(_report(args, rep.to_dict()), out)
        if not rep.relation_holds:
            raise CrossCheckError("suspension sign relation failed", report=rep.to_dict())
        return 0
    if cmd == "morse-check":
        sc = load_scenario(args.scenario)
        rep = morse_check(sc, seed=args.seed, double=not args.no_double, collar_width=args.collar_width)
        _emit(_report(args, rep.to_dict()), out)
        if not rep.formula_holds or (rep.doubling_check is not None and not rep.doubling_check[2]):
            raise CrossCheckError("index formula violated", Ind_V=rep.Ind_V, Ind_dminusV=rep.Ind_dminusV,
                                  chi_M=rep.chi_M, doubling=rep.doubling_check)
        return 0
    if cmd == "degree-table":
        rows = degree_table(args.n_max, args.m_min, args.m_max, n_min=args.n_min, seed=args.seed)
        if args.output in (None, "csv"):
            out.write(table_to_csv(rows))
        else:
            _emit(_report(args, {"rows": rows}), out)
        return 0
    raise InputError(f"unknown command {cmd!r}")  # pragma: no cover


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        return _run(args, out)
    except SphereDegError as exc:
        _emit(exc.to_dict(), err)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        _emit({"error": type(exc).__name__, "message": str(exc), "witness": {}}, err)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
