"""Criterion suites behind ``verify all`` and ``verify --oracle``.

Each criterion is a zero-argument-besides-settings function returning one
``VerdictReport``.  Reports carry no wall-clock data unless timing is
requested, so streams are byte-identical across runs and worker counts.
"""

from __future__ import annotations

import hashlib
import random
import time
from concurrent.futures import ProcessPoolExecutor
from itertools import combinations, product
from typing import Callable

from . import gfp
from .config import DEFAULT, Budgets
from .errors import DomainError
from .field import (
    FieldExt,
    Subspace,
    intersect_all,
    parse_field,
    random_subspace,
    span,
    stabilizer_subfield,
    subfield,
    subspace_sum,
    subspaces,
    subspaces_of,
    verify_linear_kneser,
)
from .groups import FiniteAbelianGroup, GroupSubset, generators, product_forms
from .linear import (
    PreconditionError,
    basis_matchable,
    compute_mn,
    extend_family,
    find_matched_basis,
    free_transversal,
    is_A_matched,
    is_locally_matched_linear,
    local_counterexample,
    space_matched,
    primitive_sweep,
    BasisMatching,
)
from .matching import (
    MatchingMap,
    counterexample_pair,
    find_c_matching,
    find_matching,
    has_matching_property,
    is_locally_matched,
    kneser_stabilizer,
    verify_kneser,
)
from .oracle import (
    brute_A_matched,
    brute_basis_matchable,
    brute_field_stabilizer,
    brute_group_stabilizer,
    brute_local_matched,
    brute_local_matched_linear,
    brute_mKL,
    brute_matched_basis,
    brute_matching,
    is_matched_basis_pair,
    ordered_bases,
)
from .report import VerdictReport, verdict_of

MAX_LISTED = 20  # failures listed per report; counts are always complete


def _rng(seed: int, tag: str) -> random.Random:
    return random.Random(f"{seed}:{tag}")


def _subsets_upto(elements, k: int):
    for r in range(1, k + 1):
        for c in combinations(elements, r):
            yield c


def _equal_size_pairs(group: FiniteAbelianGroup, max_size: int, b_pool=None):
    b_pool = group.elements[1:] if b_pool is None else b_pool
    for k in range(1, max_size + 1):
        for a in combinations(group.elements, k):
            for b in combinations(b_pool, k):
                yield GroupSubset(group, a), GroupSubset(group, b)


def _report(name: str, title: str, ok: bool, cert: dict, seed: int, instance: dict | None = None) -> VerdictReport:
    inst = {"criterion": name, "title": title}
    inst.update(instance or {})
    return VerdictReport(command=f"verify {name}", instance=inst, verdict=verdict_of(ok, "assert"), certificate=cert, seed=seed)


def _timed(limit_s: float | None, t0: float, cert: dict) -> bool:
    if limit_s is None:
        return True
    cert["time_limit_s"] = limit_s
    return time.perf_counter() - t0 < limit_s


def _pair_json(a, b) -> dict:
    return {"A": a.to_list(), "B": b.to_list(), "group": str(a.group)}


# -- group criteria ---------------------------------------------------------


def c01_matching_property_forward(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    t0 = time.perf_counter()
    failures, pairs = [], 0
    for n in (2, 3, 5, 7, 11):
        g = FiniteAbelianGroup.cyclic(n)
        for a, b in _equal_size_pairs(g, 3):
            pairs += 1
            engine = isinstance(find_matching(a, b), MatchingMap)
            brute = brute_matching(a, b, budgets=budgets)
            if not (engine and brute):
                failures.append(_pair_json(a, b) | {"engine": engine, "brute": brute})
    cert = {"groups": ["Z2", "Z3", "Z5", "Z7", "Z11"], "pairs": pairs, "failures": len(failures), "listed": failures[:MAX_LISTED]}
    ok = _timed(60, t0, cert) and not failures
    return _report("c01", "matching property of prime cyclic groups", ok, cert, seed)


def c02_matching_property_converse(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    rows, bad = [], []
    for g in product_forms(16):
        if has_matching_property(g):
            continue
        a, b = counterexample_pair(g, budgets.max_group_order)
        engine = isinstance(find_matching(a, b), MatchingMap)
        brute = brute_matching(a, b, budgets=budgets)
        local = is_locally_matched(a, b, budgets.max_group_order).holds
        row = {"group": str(g), "A": a.to_list(), "B": b.to_list(), "engine": engine, "brute": brute, "local": local}
        rows.append(row)
        if engine or brute or local or 0 in b.indices:
            bad.append(row)
    cert = {"groups": len(rows), "disagreements": len(bad), "instances": rows}
    return _report("c02", "counterexample pairs for groups without the matching property", not bad, cert, seed)


def c03_generator_matchings(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    failures, pairs = [], 0
    for n in range(3, 11):
        g = FiniteAbelianGroup.cyclic(n)
        gens = generators(g).elements
        for a, b in _equal_size_pairs(g, 3, gens):
            pairs += 1
            if not isinstance(find_matching(a, b), MatchingMap) or not brute_matching(a, b, budgets=budgets):
                failures.append(_pair_json(a, b))
    cert = {"groups": [f"Z{n}" for n in range(3, 11)], "pairs": pairs, "failures": len(failures), "listed": failures[:MAX_LISTED]}
    return _report("c03", "matchings onto sets of generators", not failures, cert, seed)


def c04_local_equivalence(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    t0 = time.perf_counter()
    groups = [(4,), (6,), (8,), (9,), (2, 2), (2, 4)]
    per_group, bad = [], []
    for mods in groups:
        g = FiniteAbelianGroup(mods)
        pairs = unmatched = 0
        for a, b in _equal_size_pairs(g, 3):
            pairs += 1
            matched = isinstance(find_matching(a, b), MatchingMap)
            local = is_locally_matched(a, b, budgets.max_group_order).holds
            unmatched += not matched
            if matched != local:
                bad.append(_pair_json(a, b) | {"matched": matched, "local": local})
        per_group.append({"group": str(g), "pairs": pairs, "unmatched": unmatched})
    cert = {"per_group": per_group, "disagreements": len(bad), "listed": bad[:MAX_LISTED]}
    ok = _timed(600, t0, cert) and not bad
    return _report("c04", "local matchability equals matchability in groups", ok, cert, seed)


def c05_kneser(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    per_group, bad = [], []
    for g in product_forms(12):
        subsets = [GroupSubset(g, s) for s in _subsets_upto(g.elements, 3)]
        stab_checked: dict = {}
        pairs = 0
        for i, a in enumerate(subsets):
            for b in subsets[i:]:
                pairs += 1
                rec = verify_kneser(a, b)
                key = rec.C.indices
                if key not in stab_checked:
                    stab_checked[key] = frozenset(rec.H.elements) == brute_group_stabilizer(rec.C)
                if not rec.holds or not stab_checked[key]:
                    bad.append(_pair_json(a, b) | rec.to_json())
        per_group.append({"group": str(g), "unordered_pairs": pairs, "distinct_sumsets": len(stab_checked)})
    cert = {"per_group": per_group, "failures": len(bad), "listed": bad[:MAX_LISTED]}
    return _report("c05", "Kneser inequality and stabilizer agreement", not bad, cert, seed)


# -- linear criteria --------------------------------------------------------


def _equal_dim_pairs(ext: FieldExt, max_dim: int):
    for k in range(1, min(max_dim, ext.n) + 1):
        subs = list(subspaces(ext, k))
        for a in subs:
            for b in subs:
                yield a, b


def c06_basis_criterion(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    per_field, bad = [], []
    for spec in ("GF(2^2)", "GF(3^2)"):
        ext = parse_field(spec)
        pairs = bases = matchable = 0
        for a, b in _equal_dim_pairs(ext, 2):
            pairs += 1
            for ab in ordered_bases(a):
                bases += 1
                ok, j = basis_matchable(ab, a, b)
                brute = brute_basis_matchable(ab, a, b, budgets)
                res = find_matched_basis(ab, a, b)
                matchable += ok
                literal = isinstance(res, BasisMatching) and is_matched_basis_pair(res.a_basis, res.b_basis, a, b)
                consistent = literal if ok else (not isinstance(res, BasisMatching) and res.J == j)
                if ok != brute or not consistent:
                    bad.append({"field": spec, "A": a.to_str(), "B": b.to_str(), "basis": [list(x) for x in ab], "criterion": ok, "brute": brute})
        per_field.append({"field": spec, "pairs": pairs, "bases": bases, "matchable": matchable})
    cert = {"per_field": per_field, "disagreements": len(bad), "listed": bad[:MAX_LISTED]}
    return _report("c06", "dimension criterion for matchable bases", not bad, cert, seed)


def rado_condition(family) -> bool:
    """dim(sum_{i in J} E_i) >= |J| for every nonempty J, by direct subspace sums."""
    if not family:
        return True
    ext = family[0].ext
    for r in range(1, len(family) + 1):
        for j in combinations(range(len(family)), r):
            total = Subspace.zero(ext)
            for i in j:
                total = subspace_sum(total, family[i])
            if total.dim < r:
                return False
    return True


def extension_precondition(family, within: Subspace) -> bool:
    n = within.dim
    for r in range(1, len(family) + 1):
        for j in combinations(range(len(family)), r):
            if intersect_all([family[i] for i in j], within).dim > n - r:
                return False
    return True


def _check_family(family, within: Subspace) -> dict | None:
    """None when transversal and extension behave; otherwise a failure record."""
    cert = free_transversal(family)
    rado = rado_condition(family)
    if cert.exists != rado or not cert.verify():
        return {"kind": "rado", "exists": cert.exists, "rado": rado}
    n = within.dim
    if extension_precondition(family, within):
        ext_fam = extend_family(family, within)
        if any(not e <= t for e, t in zip(family, ext_fam)):
            return {"kind": "containment"}
        for r in range(1, len(family) + 1):
            for j in combinations(range(len(family)), r):
                if intersect_all([ext_fam[i] for i in j], within).dim != n - r:
                    return {"kind": "dimension", "J": [i + 1 for i in j]}
    else:
        try:
            extend_family(family, within)
            return {"kind": "precondition not rejected"}
        except PreconditionError:
            pass
    return None


def c07_rado(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, counts = [], []
    for n in (1, 2, 3):
        ext = FieldExt(2, n)
        whole = Subspace.whole(ext)
        subs = [s for k in range(n + 1) for s in subspaces(ext, k)]
        count = 0
        for k in (1, 2, 3):
            for fam in product(subs, repeat=k):
                count += 1
                err = _check_family(list(fam), whole)
                if err:
                    bad.append(err | {"field": str(ext), "family": [s.to_str() for s in fam]})
        counts.append({"field": str(ext), "families": count})
    for spec in ("GF(2^4)", "GF(3^2)"):
        ext = parse_field(spec)
        whole = Subspace.whole(ext)
        rng = _rng(seed, f"c07:{spec}")
        for _ in range(1000):
            k = rng.randint(1, 4)
            fam = [random_subspace(ext, rng, min_dim=0) for _ in range(k)]
            err = _check_family(fam, whole)
            if err:
                bad.append(err | {"field": spec, "family": [s.to_str() for s in fam]})
        counts.append({"field": spec, "families": 1000, "random": True})
    cert = {"counts": counts, "failures": len(bad), "listed": bad[:MAX_LISTED]}
    return _report("c07", "free transversals and family extension", not bad, cert, seed)


def c08_linear_kneser(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, counts = [], []
    for spec in ("GF(2^4)", "GF(2^6)", "GF(3^2)"):
        ext = parse_field(spec)
        rng = _rng(seed, f"c08:{spec}")
        stab_checks = 0
        for _ in range(1000):
            a = random_subspace(ext, rng)
            b = random_subspace(ext, rng)
            rec = verify_linear_kneser(a, b)
            agree = True
            if ext.q <= budgets.max_oracle_field_size:
                stab_checks += 1
                agree = brute_field_stabilizer(rec.C, budgets) == rec.H == stabilizer_subfield(rec.C)
            if not rec.holds or not agree:
                bad.append({"field": spec, "A": a.to_str(), "B": b.to_str()} | rec.to_json())
        counts.append({"field": spec, "pairs": 1000, "stabilizer_checks": stab_checks})
    cert = {"counts": counts, "failures": len(bad), "listed": bad[:MAX_LISTED]}
    return _report("c08", "linear Kneser inequality", not bad, cert, seed)


def c09_primitive_matched(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    subs, ok = [], True
    for spec in ("GF(2^2)", "GF(2^3)", "GF(3^2)"):
        rep = primitive_sweep(parse_field(spec), 2, budgets)
        ok &= rep.ok
        subs.append({"field": spec, "verdict": rep.verdict} | rep.certificate)
    return _report("c09", "primitive B is matched from every A", ok, {"fields": subs}, seed)


def c10_linear_local(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    t0 = time.perf_counter()
    ext = parse_field("GF(2^4)", "1,1,0,0,1")
    bad = []
    pairs = unmatched = trig_pass = trig_fail = 0
    for a, b in _equal_dim_pairs(ext, 2):
        if ext.one in b:
            continue
        pairs += 1
        sm = space_matched(a, b, budgets).holds
        loc = is_locally_matched_linear(a, b, budgets)
        unmatched += not sm
        for e in loc.entries:
            trig_pass += e.passed
            trig_fail += not e.passed
        if sm != loc.holds:
            bad.append({"A": a.to_str(), "B": b.to_str(), "matched": sm, "local": loc.holds})
    h = subfield(ext, 2)
    cx_a, cx_b = h, span(ext, ["t^2+t", "t"])
    gen_a, gen_b = local_counterexample(ext)
    cx = {
        "A": cx_a.to_str(),
        "B": cx_b.to_str(),
        "matched": space_matched(cx_a, cx_b, budgets).holds,
        "local": is_locally_matched_linear(cx_a, cx_b, budgets).holds,
        "factory_agrees": (gen_a, gen_b) == (cx_a, cx_b),
    }
    cert = {
        "field": str(ext),
        "pairs": pairs,
        "unmatched": unmatched,
        "triggered_passed": trig_pass,
        "triggered_failed": trig_fail,
        "disagreements": len(bad),
        "listed": bad[:MAX_LISTED],
        "counterexample": cx,
    }
    ok = _timed(900, t0, cert) and not bad and not cx["matched"] and not cx["local"] and cx["factory_agrees"]
    return _report("c10", "linear local matchability equals matchability", ok, cert, seed)


def c11_mn_exploration(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    rows, ok = [], True
    for p, n in product((2, 3), (2, 3, 4)):
        ext = FieldExt(p, n)
        rep = compute_mn(ext, budgets)
        row = rep.to_json()
        if ext.q <= budgets.max_oracle_field_size:
            row["brute_mKL"] = brute_mKL(ext, budgets)
            ok &= row["brute_mKL"] == rep.mKL
        rows.append(row)
    cert = {"fields": rows, "identity_findings": {r["field"]: r["identity_holds"] for r in rows}}
    return _report("c11", "n = n(K,L) + m(K,L) over finite base fields (exploration)", ok, cert, seed)


CRITERIA: dict[str, Callable[..., VerdictReport]] = {
    "c01": c01_matching_property_forward,
    "c02": c02_matching_property_converse,
    "c03": c03_generator_matchings,
    "c04": c04_local_equivalence,
    "c05": c05_kneser,
    "c06": c06_basis_criterion,
    "c07": c07_rado,
    "c08": c08_linear_kneser,
    "c09": c09_primitive_matched,
    "c10": c10_linear_local,
    "c11": c11_mn_exploration,
}


# -- oracle cross-checks ----------------------------------------------------


def o01_matchings(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, n = [], 0
    for g in product_forms(8):
        for a, b in _equal_size_pairs(g, 3, g.elements):
            extras = [e for e in g.elements if e not in a][:2]
            for c in [a] + [g.subset(a.elements + (x,)) for x in extras]:
                n += 1
                engine = isinstance(find_c_matching(a, b, c), MatchingMap)
                if engine != brute_matching(a, b, c, budgets):
                    bad.append(_pair_json(a, b) | {"C": c.to_list()})
    return _report("o01", "matchings and C-matchings vs bijection enumeration", not bad, {"instances": n, "listed": bad[:MAX_LISTED]}, seed)


def o02_stabilizers(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, n = [], 0
    for g in product_forms(10):
        for s in _subsets_upto(g.elements, 4):
            c = GroupSubset(g, s)
            n += 1
            if frozenset(kneser_stabilizer(c).elements) != brute_group_stabilizer(c):
                bad.append({"group": str(g), "C": c.to_list()})
    for spec in ("GF(2^2)", "GF(2^3)", "GF(2^4)", "GF(3^2)"):
        ext = parse_field(spec)
        for k in range(1, ext.n + 1):
            for v in subspaces(ext, k):
                n += 1
                if stabilizer_subfield(v) != brute_field_stabilizer(v, budgets):
                    bad.append({"field": spec, "V": v.to_str()})
    return _report("o02", "stabilizers vs elementwise definition", not bad, {"instances": n, "listed": bad[:MAX_LISTED]}, seed)


def o03_space_matched(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, n = [], 0
    for spec, dmax in (("GF(2^2)", 2), ("GF(2^3)", 3), ("GF(3^2)", 2), ("GF(2^4)", 2)):
        ext = parse_field(spec)
        for a, b in _equal_dim_pairs(ext, dmax):
            n += 1
            if space_matched(a, b, budgets).holds != brute_matched_basis(a, b, budgets):
                bad.append({"field": spec, "A": a.to_str(), "B": b.to_str()})
    return _report("o03", "matched subspaces vs literal basis enumeration", not bad, {"instances": n, "listed": bad[:MAX_LISTED]}, seed)


def o04_mkl(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    rows, ok = [], True
    for p, n in ((2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (2, 5), (3, 4), (2, 6)):
        ext = FieldExt(p, n)
        if ext.q > budgets.max_oracle_field_size:
            continue
        m, b = compute_mn(ext, budgets).mKL, brute_mKL(ext, budgets)
        ok &= m == b
        rows.append({"field": str(ext), "mKL": m, "brute": b})
    return _report("o04", "m(K,L) vs exhaustive subspace scan", ok, {"fields": rows}, seed)


def o05_group_local(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, n = [], 0
    for g in product_forms(9, min_order=4):
        for a, b in _equal_size_pairs(g, 3):
            n += 1
            if is_locally_matched(a, b, budgets.max_group_order).holds != brute_local_matched(a, b):
                bad.append(_pair_json(a, b))
    return _report("o05", "group local matchability vs literal definition", not bad, {"instances": n, "listed": bad[:MAX_LISTED]}, seed)


def o06_linear_local(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, n = [], 0
    for spec, dmax in (("GF(2^3)", 2), ("GF(3^2)", 2), ("GF(2^4)", 2)):
        ext = parse_field(spec)
        for a, b in _equal_dim_pairs(ext, dmax):
            n += 1
            if is_locally_matched_linear(a, b, budgets).holds != brute_local_matched_linear(a, b, budgets):
                bad.append({"field": spec, "A": a.to_str(), "B": b.to_str()})
    return _report("o06", "linear local matchability vs literal definition", not bad, {"instances": n, "listed": bad[:MAX_LISTED]}, seed)


def o07_a_matched(seed: int = 0, budgets: Budgets = DEFAULT) -> VerdictReport:
    bad, n = [], 0
    for spec in ("GF(2^3)", "GF(3^2)", "GF(2^4)"):
        ext = parse_field(spec)
        for a in subspaces(ext, 2):
            for m in (1, 2):
                for at in subspaces_of(a, m):
                    for bt in subspaces(ext, m):
                        n += 1
                        if is_A_matched(at, bt, a, budgets).holds != brute_A_matched(at, bt, a):
                            bad.append({"field": spec, "A": a.to_str(), "A_tilde": at.to_str(), "B_tilde": bt.to_str()})
    return _report("o07", "A-matched subspaces vs literal definition", not bad, {"instances": n, "listed": bad[:MAX_LISTED]}, seed)


ORACLE_CHECKS: dict[str, Callable[..., VerdictReport]] = {
    "o01": o01_matchings,
    "o02": o02_stabilizers,
    "o03": o03_space_matched,
    "o04": o04_mkl,
    "o05": o05_group_local,
    "o06": o06_linear_local,
    "o07": o07_a_matched,
}


# -- runners ----------------------------------------------------------------


def _run_one(args) -> VerdictReport:
    name, seed, budgets, timing = args
    fn = CRITERIA.get(name) or ORACLE_CHECKS[name]
    t0 = time.perf_counter()
    rep = fn(seed, budgets)
    if timing:
        rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
    return rep


def run_checks(names, seed: int = 0, budgets: Budgets = DEFAULT, workers: int = 1, timing: bool = False) -> list[VerdictReport]:
    """Run checks, results in the order of ``names`` whatever the worker count."""
    jobs = [(n, seed, budgets, timing) for n in names]
    if workers <= 1:
        return [_run_one(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_one, jobs))


def stream_digest(reports: list[VerdictReport]) -> str:
    text = "\n".join(r.to_json() for r in reports) + "\n"
    return hashlib.sha256(text.encode()).hexdigest()


def c12_determinism(primary: list[VerdictReport], seed: int, budgets: Budgets, workers: int) -> VerdictReport:
    """Re-run the criteria with a different worker count and compare serialized streams."""
    other = 1 if workers > 1 else 2
    again = run_checks(list(CRITERIA), seed, budgets, other, timing=False)
    stripped = [VerdictReport(**(r.to_dict() | {"elapsed_ms": 0})) for r in primary]
    d1, d2 = stream_digest(stripped), stream_digest(again)
    cert = {"digest_primary": d1, "digest_rerun": d2, "records": len(primary)}
    return _report("c12", "byte-identical reports across worker counts", d1 == d2, cert, seed)


def verify_all(seed: int = 0, budgets: Budgets = DEFAULT, workers: int = 1, timing: bool = False, determinism: bool = True) -> list[VerdictReport]:
    reports = run_checks(list(CRITERIA), seed, budgets, workers, timing)
    if determinism:
        reports.append(c12_determinism(reports, seed, budgets, workers))
    return reports


def summary(reports: list[VerdictReport], command: str, seed: int) -> VerdictReport:
    names = [r.instance.get("criterion", r.command) for r in reports]
    passed = [n for n, r in zip(names, reports) if r.ok]
    failed = [n for n, r in zip(names, reports) if not r.ok]
    return VerdictReport(
        command=command,
        instance={"checks": names},
        verdict=verdict_of(not failed, "assert"),
        certificate={"passed": passed, "failed": failed},
        seed=seed,
    )
