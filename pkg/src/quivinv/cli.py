"""Command line front end.  JSON on stdout, diagnostics on stderr.

Exit codes: 0 success, 1 malformed input (files, flags), 2 violated precondition.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .fields import FieldError, parse_field
from .generators import needs_weight_cap, prepared, setting_generators
from .identities import FAMILIES, check_family
from .invariants import fingerprint, separate
from .io import (
    SchemaError,
    matrices_from_json,
    read_json,
    representation_from_json,
    setting_from_json,
    setting_to_json,
    tableau_from_json,
)
from .matrix import ShapeError
from .quiver import SamplingError, SettingError, normalize_setting, validate_setting
from .tableaux import DIRECT_CELL_CAP, TableauError, bpf

EXIT_OK, EXIT_SCHEMA, EXIT_PRECONDITION = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise SchemaError(f"usage: {message}")


def _common(p, setting=False):
    p.add_argument("--field", default="rational", help="rational or fp:P for an odd prime P")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--verbose", action="store_true")
    if setting:
        p.add_argument("--setting", required=True, metavar="FILE")


def _caps(p):
    p.add_argument("--max-path-len", type=int, required=True, metavar="N")
    p.add_argument("--max-weight", type=int, metavar="N")


def build_parser():
    parser = _Parser(prog="quivinv", description="Exact invariants of (mixed) quiver representations.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("validate", help="check the setting conditions")
    _common(p, setting=True)

    p = sub.add_parser("enumerate", help="list generator descriptors up to the caps")
    _common(p, setting=True)
    _caps(p)

    p = sub.add_parser("eval", help="fingerprint of a representation")
    _common(p, setting=True)
    _caps(p)
    p.add_argument("--rep", required=True, metavar="FILE")

    p = sub.add_parser("compare", help="are two representations separated by the capped generators")
    _common(p, setting=True)
    _caps(p)
    p.add_argument("--rep", required=True, metavar="FILE")
    p.add_argument("--rep2", required=True, metavar="FILE")

    p = sub.add_parser("check-identities", help="randomized exact identity checks")
    _common(p)
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, required=True)

    p = sub.add_parser("bpf-eval", help="bpf of a tableau with substitution")
    _common(p)
    p.add_argument("--tableau", required=True, metavar="FILE")
    p.add_argument("--matrices", required=True, metavar="FILE")
    return parser


def _field(spec):
    try:
        f = parse_field(spec)
    except FieldError as exc:
        raise SchemaError(str(exc)) from exc
    if f.characteristic == 2:
        raise SchemaError("fp:P needs an odd prime P")
    return f


def _threads():
    raw = os.environ.get("QI_THREADS")
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        n = 0
    if n < 1:
        raise SchemaError(f"QI_THREADS must be a positive integer, got {raw!r}")
    return n


def _log(args, msg):
    if args.verbose:
        print(msg, file=sys.stderr)


def _load_setting(args):
    return setting_from_json(read_json(args.setting))


def _descriptors(args, s):
    if args.max_path_len < 1:
        raise ValueError("--max-path-len must be at least 1")
    if needs_weight_cap(s) and args.max_weight is None:
        raise ValueError("this setting has SL or SO vertices: --max-weight is required")
    if args.max_weight is not None and args.max_weight < 0:
        raise ValueError("--max-weight must be non-negative")
    prepared(s)
    caps = {"max_path_len": args.max_path_len}
    if needs_weight_cap(s):
        caps["max_weight"] = args.max_weight
    family = "plain" if s.is_plain() else ("general" if needs_weight_cap(s) else "supermixed")
    return family, caps, setting_generators(s, args.max_path_len, args.max_weight)


def cmd_validate(args, field):
    s = _load_setting(args)
    bad = validate_setting(s, field.characteristic)
    out = {"valid": bad is None,
           "violation": None if bad is None else {"condition": bad.condition, "message": bad.message}}
    if bad is None:
        out["eq_condition"] = s.satisfies_eq_condition()
        out["normalized"] = setting_to_json(normalize_setting(s))
    _log(args, "ok" if bad is None else f"violates condition {bad.condition}): {bad.message}")
    return out


def cmd_enumerate(args, field):
    s = _load_setting(args)
    family, caps, descs = _descriptors(args, s)
    _log(args, f"{len(descs)} {family} descriptors")
    flagged = sorted({f for d in descs for f in getattr(d, "flags", ())})
    out = {"family": family, "caps": caps, "count": len(descs), "descriptors": [d.to_json() for d in descs]}
    if flagged:
        out["flags"] = flagged
    return out


def cmd_eval(args, field):
    s = _load_setting(args)
    rep = representation_from_json(read_json(args.rep), s, field)
    family, caps, descs = _descriptors(args, s)
    fp = fingerprint(rep, descs)
    return {"family": family, "caps": caps, "field": field.name,
            "fingerprint": [{"id": i, "value": field.to_json(v)} for i, v in fp]}


def cmd_compare(args, field):
    s = _load_setting(args)
    rep1 = representation_from_json(read_json(args.rep), s, field)
    rep2 = representation_from_json(read_json(args.rep2), s, field)
    family, caps, descs = _descriptors(args, s)
    verdict = separate(rep1, rep2, descs, caps)
    _log(args, "equal" if verdict.equal else f"distinguished by {verdict.descriptor}")
    out = verdict.to_json(field)
    out["family"] = family
    return out


def cmd_check_identities(args, field):
    if args.trials < 0:
        raise ValueError("--trials must be non-negative")
    report = check_family(args.family, args.n, args.trials, args.seed, field)
    for c in report["checks"]:
        _log(args, f"{c['check']}: {c['passed']}/{c['passed'] + c['failed']}")
    return report


def cmd_bpf_eval(args, field):
    t = tableau_from_json(read_json(args.tableau))
    mats = matrices_from_json(read_json(args.matrices), field)
    if t.cells > DIRECT_CELL_CAP:
        raise ValueError(f"tableau has {t.cells} cells; bpf-eval is capped at {DIRECT_CELL_CAP}")
    value = bpf(t, mats, field=field)
    return {"bpf": field.to_json(value), "cells": t.cells, "c_T": t.c_T(), "cap": DIRECT_CELL_CAP}


COMMANDS = {
    "validate": cmd_validate,
    "enumerate": cmd_enumerate,
    "eval": cmd_eval,
    "compare": cmd_compare,
    "check-identities": cmd_check_identities,
    "bpf-eval": cmd_bpf_eval,
}


def run(argv=None, stdout=None):
    stdout = stdout or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        _threads()
        field = _field(args.field)
        out = COMMANDS[args.command](args, field)
    except SchemaError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except (SettingError, ShapeError, TableauError, SamplingError, ArithmeticError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    json.dump(out, stdout, indent=2)
    stdout.write("\n")
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
