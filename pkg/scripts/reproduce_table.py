"""Print wt_0..wt_k of the five-axiom running example as a TSV table.

Usage: python scripts/reproduce_table.py [--rows N] [--mode trio|lap] [--all-states]
"""
import argparse
import sys

from elprov.behaviour import saturate
from elprov.families import example_tbox
from elprov.semiring import Mode
from elprov.syntax import TOP, AtomicGCI, ConjGCI, ExistGCI, QualExistGCI
from elprov.wta import BOX

COLUMNS = [
    BOX,
    ConjGCI("B", "C", "D"),
    AtomicGCI(TOP, "B"),
    AtomicGCI("A", "C"),
    ExistGCI("A", "R"),
    QualExistGCI("R", "B", "B"),
    AtomicGCI("A", TOP),
    AtomicGCI("A", "B"),
    AtomicGCI("C", "D"),
    AtomicGCI("A", "D"),
]


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--rows", type=int, default=None, help="last row to print (default: until stable)")
    ap.add_argument("--mode", choices=[m.value for m in Mode], default="trio")
    ap.add_argument("--all-states", action="store_true", help="print every state, not just the example's columns")
    args = ap.parse_args()

    table = saturate(example_tbox(), Mode(args.mode))
    states = table.states if args.all_states else COLUMNS
    text = table.to_tsv(states)
    if args.rows is not None:
        text = "".join(text.splitlines(keepends=True)[: args.rows + 2])
    sys.stdout.write(text)
    print(f"# stable at row {table.stable_at}", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
