"""Succinctness of recursive automata: 3n states versus 2^n after inlining.

Usage: python scripts/power_family.py [--max-n N] [--cap C]
"""
import argparse
import sys
import time

from elprov.ara import SizeBlowupError, expanded_size, inline_expand, membership, power_family


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-n", type=int, default=14)
    ap.add_argument("--cap", type=int, default=20_000)
    args = ap.parse_args()
    print("n\tara_states\tinlined_states\tmembership_ms\taccepts")
    for n in range(1, args.max_n + 1):
        fam = power_family(n)
        start = time.perf_counter()
        probes = [membership(fam, "a" * k) for k in (2 ** n - 1, 2 ** n, 2 ** n + 1)]
        ms = (time.perf_counter() - start) * 1000
        try:
            inlined = str(len(inline_expand(fam, size_cap=args.cap)))
        except SizeBlowupError:
            inlined = f">{args.cap} (needs {expanded_size(fam)})"
        accepts = "ok" if probes == [False, True, False] else f"WRONG {probes}"
        print(f"{n}\t{fam.size}\t{inlined}\t{ms:.1f}\t{accepts}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
