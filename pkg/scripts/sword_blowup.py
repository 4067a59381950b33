"""Monomial count versus behaviour-ARA size on the two-route chain family T_n.

The number of monomials of A0 ⊑ An doubles with n while the ARA stays polynomial.
Usage: python scripts/sword_blowup.py [--max-n N] [--csv out.csv]
"""
import argparse
import csv
import sys
import time

from elprov.behaviour import EngineConfig, Reasoner
from elprov.families import sword_selection, sword_tbox
from elprov.syntax import AtomicGCI


def measure(n: int) -> dict:
    tbox, goal = sword_tbox(n), AtomicGCI("A0", f"A{n}")
    reasoner = Reasoner(tbox, EngineConfig(restrict_to_query=False))
    start = time.perf_counter()
    count = len(reasoner.monomials(goal))
    t_sat = time.perf_counter() - start
    start = time.perf_counter()
    stack = reasoner.stack(goal)
    t_ara = time.perf_counter() - start
    start = time.perf_counter()
    hit = reasoner.entails(goal, sword_selection([k % 2 == 0 for k in range(n)]))
    t_query = time.perf_counter() - start
    return {
        "n": n, "monomials": count, "iterations": stack.iterations, "ara_states": stack.size,
        "ara_automata": len(stack.ara.automata), "saturation_s": round(t_sat, 3),
        "stack_s": round(t_ara, 3), "query_s": round(t_query, 3), "query_ok": hit.entailed,
        "prefix_checks": hit.prefix_checks,
    }


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=10)
    ap.add_argument("--csv", default=None)
    args = ap.parse_args()
    rows = []
    for n in range(1, args.max_n + 1):
        rows.append(measure(n))
        print(" ".join(f"{k}={v}" for k, v in rows[-1].items()), flush=True)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
            writer.writeheader()
            writer.writerows(rows)
    return 0


if __name__ == "__main__":
    sys.exit(main())
