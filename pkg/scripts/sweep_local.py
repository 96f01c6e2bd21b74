"""Sweep local matchability against matchability, in groups and in field extensions.

    python scripts/sweep_local.py --max-order 12 --max-size 3 --fields "GF(2^4),GF(3^3)"
"""

import argparse
import time
from collections import Counter

from localmatch.field import parse_field, subspaces
from localmatch.groups import product_forms
from localmatch.linear import is_locally_matched_linear, space_matched
from localmatch.matching import exhaustive_matchability


def group_sweep(max_order, max_size):
    print(f"{'group':<10} {'pairs':>7} {'unmatched':>9} {'disagree':>8}")
    for g in product_forms(max_order, min_order=3):
        rep = exhaustive_matchability(g, max_size)
        c = rep.certificate
        print(f"{str(g):<10} {c['pairs']:>7} {c['unmatched']:>9} {len(c['disagreements']):>8}")


def field_sweep(spec, max_dim):
    ext = parse_field(spec)
    tally = Counter()
    t0 = time.perf_counter()
    for k in range(1, min(max_dim, ext.n) + 1):
        subs = list(subspaces(ext, k))
        for b in subs:
            if ext.one in b:
                continue
            for a in subs:
                matched = space_matched(a, b).holds
                local = is_locally_matched_linear(a, b).holds
                tally["pairs"] += 1
                tally["unmatched"] += not matched
                tally["disagree"] += matched != local
    secs = time.perf_counter() - t0
    print(f"{spec:<10} pairs={tally['pairs']} unmatched={tally['unmatched']} disagree={tally['disagree']} ({secs:.1f}s)")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=12)
    ap.add_argument("--max-size", type=int, default=3)
    ap.add_argument("--fields", default="GF(2^4),GF(3^2),GF(2^3)")
    ap.add_argument("--max-dim", type=int, default=2)
    args = ap.parse_args()
    group_sweep(args.max_order, args.max_size)
    for spec in args.fields.split(","):
        field_sweep(spec.strip(), args.max_dim)


if __name__ == "__main__":
    main()
