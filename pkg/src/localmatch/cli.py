"""Command-line front end.

Every command writes line-delimited records (``--format json|csv|text``) to
stdout.  Exit codes: 0 all assertions passed, 1 an assertion failed,
2 usage or parse error, 3 a resource budget was exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time
from typing import Sequence

from . import __version__
from .config import load_budgets
from .errors import DomainError, ResourceError, StructuralError
from .field import (
    FieldExt,
    format_elem,
    parse_elem,
    parse_field,
    parse_subspace,
    stabilizer_subfield,
    verify_linear_kneser,
)
from .groups import parse_group, parse_subset
from .linear import (
    BasisMatching,
    compute_mn,
    find_matched_basis,
    free_transversal,
    is_locally_matched_linear,
    is_primitive,
    primitive_sweep,
    space_matched,
)
from .matching import (
    HallWitness,
    MatchingMap,
    counterexample_pair,
    exhaustive_matchability,
    find_matching,
    has_matching_property,
    is_locally_matched,
    verify_kneser,
)
from .report import VerdictReport, verdict_of
from .suite import CRITERIA, ORACLE_CHECKS, run_checks, summary, verify_all

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_RESOURCE = 0, 1, 2, 3


class UnsoundCertificate(RuntimeError):
    pass


def _sound(ok: bool, what: str) -> None:
    if not ok:
        raise UnsoundCertificate(f"{what} failed its soundness re-check")


# -- group commands ---------------------------------------------------------


def _group_pair(args):
    g = parse_group(args.group)
    return g, parse_subset(g, args.A), parse_subset(g, args.B)


def cmd_group_match(args, budgets) -> list[VerdictReport]:
    g, a, b = _group_pair(args)
    res = find_matching(a, b)
    _sound(res.verify(), "matching certificate")
    found = isinstance(res, MatchingMap)
    cert = {"matching": res.to_json()} if found else {"hall_witness": res.to_json()}
    inst = {"group": str(g), "A": a.to_list(), "B": b.to_list()}
    return [VerdictReport("group match", inst, verdict_of(found), cert)]


def cmd_group_local(args, budgets) -> list[VerdictReport]:
    g, a, b = _group_pair(args)
    res = is_locally_matched(a, b, budgets.max_group_order)
    inst = {"group": str(g), "A": a.to_list(), "B": b.to_list()}
    return [VerdictReport("group local", inst, verdict_of(res.holds), res.to_json())]


def cmd_group_kneser(args, budgets) -> list[VerdictReport]:
    g, a, b = _group_pair(args)
    rec = verify_kneser(a, b)
    inst = {"group": str(g), "A": a.to_list(), "B": b.to_list()}
    return [VerdictReport("group kneser", inst, verdict_of(rec.holds, "assert"), rec.to_json())]


def cmd_group_property(args, budgets) -> list[VerdictReport]:
    g = parse_group(args.group)
    return [VerdictReport("group property", {"group": str(g)}, verdict_of(has_matching_property(g)), {"order": g.order})]


def cmd_group_counterexample(args, budgets) -> list[VerdictReport]:
    g = parse_group(args.group)
    a, b = counterexample_pair(g, budgets.max_group_order)
    res = find_matching(a, b)
    _sound(isinstance(res, HallWitness) and res.verify(), "counterexample")
    cert = {"A": a.to_list(), "B": b.to_list(), "hall_witness": res.to_json()}
    return [VerdictReport("group counterexample", {"group": str(g)}, "holds", cert)]


def cmd_group_sweep(args, budgets) -> list[VerdictReport]:
    g = parse_group(args.group)
    rep = exhaustive_matchability(g, args.max_size, budgets.max_group_order, detail=args.instances)
    out = []
    for row in rep.certificate.pop("instances", []):
        inst = {"group": str(g), "A": row["A"], "B": row["B"]}
        out.append(VerdictReport("group sweep", inst, verdict_of(row["agree"], "assert"), {"matched": row["matched"], "local": row["local"]}))
    return out + [rep]


# -- field commands ---------------------------------------------------------


def _field(args) -> FieldExt:
    return parse_field(args.field, args.modulus)


def _field_inst(ext: FieldExt, **spaces) -> dict:
    out = {"field": str(ext), "modulus": list(ext.modulus)}
    out.update({k: v.to_str() for k, v in spaces.items()})
    return out


def cmd_field_match(args, budgets) -> list[VerdictReport]:
    ext = _field(args)
    a, b = parse_subspace(ext, args.A), parse_subspace(ext, args.B)
    res = space_matched(a, b, budgets)
    return [VerdictReport("field match", _field_inst(ext, A=a, B=b), verdict_of(res.holds), res.to_json(ext))]


def cmd_field_basis(args, budgets) -> list[VerdictReport]:
    ext = _field(args)
    a, b = parse_subspace(ext, args.A), parse_subspace(ext, args.B)
    basis = [parse_elem(ext, s) for s in args.basis.split(",")] if args.basis else list(a.basis)
    res = find_matched_basis(basis, a, b)
    found = isinstance(res, BasisMatching)
    if found:
        _sound(res.verify(), "matched basis")
    inst = _field_inst(ext, A=a, B=b) | {"a_basis": [format_elem(ext, x) for x in basis]}
    return [VerdictReport("field basis", inst, verdict_of(found), res.to_json())]


def cmd_field_local(args, budgets) -> list[VerdictReport]:
    ext = _field(args)
    a, b = parse_subspace(ext, args.A), parse_subspace(ext, args.B)
    res = is_locally_matched_linear(a, b, budgets)
    return [VerdictReport("field local", _field_inst(ext, A=a, B=b), verdict_of(res.holds), res.to_json())]


def cmd_field_kneser(args, budgets) -> list[VerdictReport]:
    ext = _field(args)
    a, b = parse_subspace(ext, args.A), parse_subspace(ext, args.B)
    rec = verify_linear_kneser(a, b)
    _sound(stabilizer_subfield(rec.C) == rec.H, "stabilizer")
    cert = rec.to_json() | {"C_str": rec.C.to_str(), "H_str": rec.H.to_str()}
    return [VerdictReport("field kneser", _field_inst(ext, A=a, B=b), verdict_of(rec.holds, "assert"), cert)]


def cmd_field_transversal(args, budgets) -> list[VerdictReport]:
    ext = _field(args)
    family = [parse_subspace(ext, s) for s in args.family.split(";")]
    cert = free_transversal(family)
    _sound(cert.verify(), "transversal certificate")
    body = cert.to_json()
    if cert.exists:
        body["transversal_str"] = [format_elem(ext, x) for x in cert.transversal]
    inst = {"field": str(ext), "modulus": list(ext.modulus), "family": [s.to_str() for s in family]}
    return [VerdictReport("field transversal", inst, verdict_of(cert.exists), body)]


def cmd_field_primitive(args, budgets) -> list[VerdictReport]:
    ext = _field(args)
    b = parse_subspace(ext, args.B)
    return [VerdictReport("field primitive", _field_inst(ext, B=b), verdict_of(is_primitive(b, budgets)), {"dim": b.dim})]


def cmd_field_mn(args, budgets) -> list[VerdictReport]:
    ext = _field(args)
    rep = compute_mn(ext, budgets)
    # the identity is an open question; a false answer is a finding, not a failure
    return [VerdictReport("field mn", {"field": str(ext), "modulus": list(ext.modulus)}, verdict_of(rep.identity_holds), rep.to_json())]


def cmd_field_primitive_sweep(args, budgets) -> list[VerdictReport]:
    return [primitive_sweep(_field(args), args.dim, budgets)]


# -- verify -----------------------------------------------------------------


def cmd_verify(args, budgets) -> list[VerdictReport]:
    if args.oracle:
        reps = run_checks(list(ORACLE_CHECKS), args.seed, budgets, args.workers, args.timing)
        return reps + [summary(reps, "verify oracle", args.seed)]
    if args.target != "all":
        if args.target not in CRITERIA and args.target not in ORACLE_CHECKS:
            raise ValueError(f"unknown check {args.target!r}; expected all, c01-c11 or o01-o07")
        reps = run_checks([args.target], args.seed, budgets, args.workers, args.timing)
        return reps
    reps = verify_all(args.seed, budgets, args.workers, args.timing, determinism=not args.no_determinism)
    return reps + [summary(reps, "verify all", args.seed)]


# -- parser -----------------------------------------------------------------


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--config", help="key=value budget file (overrides the environment variable)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--timing", action="store_true", help="record wall-clock elapsed_ms (breaks byte-identity)")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="localmatch", description="Matchings in abelian groups and field extensions.")
    parser.add_argument("--version", action="version", version=__version__)
    top = parser.add_subparsers(dest="area", required=True)

    grp = top.add_parser("group", help="finite abelian groups").add_subparsers(dest="cmd", required=True)
    for name, fn, pair in (
        ("match", cmd_group_match, True),
        ("local", cmd_group_local, True),
        ("kneser", cmd_group_kneser, True),
        ("property", cmd_group_property, False),
        ("counterexample", cmd_group_counterexample, False),
        ("sweep", cmd_group_sweep, False),
    ):
        sp = grp.add_parser(name, parents=[common])
        sp.add_argument("--group", required=True, help="e.g. Z4 or Z2xZ4")
        if pair:
            sp.add_argument("--A", required=True, help="e.g. {0,2} or {(0,1),(1,0)}")
            sp.add_argument("--B", required=True)
        sp.set_defaults(func=fn)
        if name == "sweep":
            sp.add_argument("--max-size", type=int, default=3)
            sp.add_argument("--instances", action="store_true", help="emit one record per pair")

    fld = top.add_parser("field", help="finite field extensions").add_subparsers(dest="cmd", required=True)
    for name, fn, args in (
        ("match", cmd_field_match, ("A", "B")),
        ("basis", cmd_field_basis, ("A", "B")),
        ("local", cmd_field_local, ("A", "B")),
        ("kneser", cmd_field_kneser, ("A", "B")),
        ("transversal", cmd_field_transversal, ()),
        ("primitive", cmd_field_primitive, ("B",)),
        ("mn", cmd_field_mn, ()),
        ("thm41", cmd_field_primitive_sweep, ()),
    ):
        sp = fld.add_parser(name, parents=[common])
        sp.add_argument("--field", required=True, help='e.g. "GF(2^4)" or "GF(16)"')
        sp.add_argument("--modulus", help="monic modulus coefficients, low to high, e.g. 1,1,0,0,1")
        for a in args:
            sp.add_argument(f"--{a}", required=True, help='subspace, e.g. "<1, t^2+t>"')
        sp.set_defaults(func=fn)
        if name == "basis":
            sp.add_argument("--basis", help="ordered basis of A, comma-separated (default: echelon basis)")
        if name == "transversal":
            sp.add_argument("--family", required=True, help='subspaces separated by ";", e.g. "<1>;<t>"')
        if name == "thm41":
            sp.add_argument("--dim", type=int, default=2, help="largest dimension swept")

    ver = top.add_parser("verify", parents=[common], help="acceptance suite and oracle cross-checks")
    ver.add_argument("target", nargs="?", default="all", help="all, or a single check such as c05 or o03")
    ver.add_argument("--oracle", action="store_true", help="run the oracle cross-checks instead")
    ver.add_argument("--no-determinism", action="store_true", help="skip the worker-count re-run")
    ver.set_defaults(func=cmd_verify)
    return parser


def _exit_code(cmd: str, reports: list[VerdictReport]) -> int:
    if cmd == "mn":
        return EXIT_OK
    assertion = [r for r in reports if r.verdict in ("holds", "fails")]
    return EXIT_FAIL if any(r.verdict == "fails" for r in assertion) else EXIT_OK


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        budgets = load_budgets(args.config, seed=args.seed, workers=args.workers)
    except (OSError, ValueError) as exc:
        print(f"localmatch: config error: {exc}", file=err)
        return EXIT_USAGE
    args.seed, args.workers = budgets.seed, budgets.workers
    t0 = time.perf_counter()
    try:
        reports = args.func(args, budgets)
    except ResourceError as exc:
        print(f"localmatch: resource budget exceeded: {exc}", file=err)
        return EXIT_RESOURCE
    except UnsoundCertificate as exc:
        print(f"localmatch: {exc}", file=err)
        return EXIT_FAIL
    except (StructuralError, DomainError, ValueError) as exc:
        print(f"localmatch: {exc}", file=err)
        return EXIT_USAGE
    if args.timing and args.area != "verify":
        reports[-1].elapsed_ms = int((time.perf_counter() - t0) * 1000)
    for i, r in enumerate(reports):
        r.seed = args.seed
        print(r.render(args.format, header=(i == 0)), file=out)
    return _exit_code(getattr(args, "cmd", args.area), reports)


def main() -> None:
    sys.exit(run())
