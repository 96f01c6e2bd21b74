"""Tabulate n(K,L), m(K,L) and the identity n = n(K,L) + m(K,L) over small finite fields.

    python scripts/explore_mn.py --max-q 1024 --out mn.jsonl
"""

import argparse
import json
import time

from localmatch.config import load_budgets
from localmatch.errors import ResourceError
from localmatch.field import FieldExt, _is_prime
from localmatch.linear import compute_mn
from localmatch.oracle import brute_mKL


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-q", type=int, default=1024)
    ap.add_argument("--max-p", type=int, default=7)
    ap.add_argument("--out", help="write JSON lines here as well")
    args = ap.parse_args()

    rows = []
    for p in (x for x in range(2, args.max_p + 1) if _is_prime(x)):
        n = 2
        while p**n <= args.max_q:
            budgets = load_budgets(max_space_dim=n, max_field_size=max(4096, p**n))
            t0 = time.perf_counter()
            try:
                rep = compute_mn(FieldExt(p, n), budgets).to_json()
            except ResourceError as exc:
                rep = {"field": f"GF({p}^{n})", "skipped": str(exc)}
            else:
                if p**n <= budgets.max_oracle_field_size:
                    rep["brute_mKL"] = brute_mKL(FieldExt(p, n), budgets)
            rep["seconds"] = round(time.perf_counter() - t0, 3)
            rows.append(rep)
            n += 1

    print(f"{'field':<10} {'nKL':>4} {'mKL':>4} {'brute':>6}  identity")
    for r in rows:
        if "skipped" in r:
            print(f"{r['field']:<10} skipped: {r['skipped']}")
            continue
        print(f"{r['field']:<10} {r['nKL']:>4} {r['mKL']:>4} {str(r.get('brute_mKL', '-')):>6}  {r['identity_holds']}")
    if args.out:
        with open(args.out, "w") as fh:
            for r in rows:
                fh.write(json.dumps(r, sort_keys=True) + "\n")


if __name__ == "__main__":
    main()
