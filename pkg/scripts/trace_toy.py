"""Print the class-by-class trace of the anytime ranker on a knowledge base.

    python scripts/trace_toy.py                  # bundled toy.tcpkb
    python scripts/trace_toy.py my.tcpkb --classes 10
"""

from __future__ import annotations

import argparse
import math
from importlib import resources

from tcpel.classes import ClassEnumerator, is_empty, members
from tcpel.oracle import exact_probabilities
from tcpel.rank import AnytimeRanker, unassigned_bound
from tcpel.syntax import parse_kb


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("file", nargs="?")
    ap.add_argument("--classes", type=int, default=8, help="number of classes to show")
    args = ap.parse_args()

    if args.file:
        with open(args.file, encoding="utf-8") as fh:
            text = fh.read()
    else:
        text = resources.files("tcpel").joinpath("data/toy.tcpkb").read_text(encoding="utf-8")
    kb = parse_kb(text).kb
    ranker = AnytimeRanker(kb)
    g = ranker.g
    print(f"{g.n} ground atoms, {len(g.formulas)} ground formulas")
    for j, f in enumerate(g.formulas):
        print(f"  f{j + 1}  {f.weight:>5g}  {f.label(g)}")
    print()

    scores = [c.log_score for c in ClassEnumerator(g)]
    seen = 0
    for k, c in enumerate(ClassEnumerator(g), 1):
        if k > args.classes:
            break
        if is_empty(c):
            print(f"C{k}  {c.bits}  {c.log_score:g}  (empty)")
            continue
        for w in members(c, g):
            cons = sorted(str(a) for a in ranker.consequences(w))
            seen += 1
            print(f"C{k}  {c.bits}  {c.log_score:g}  {{{', '.join(cons)}}}")
        following = scores[k] if k < len(scores) else None
        print(f"     U after C{k}: {unassigned_bound(g.n, seen, following):.6g}")

    print()
    ex = exact_probabilities(kb)
    print("exact probabilities")
    for a in ex.order:
        print(f"  {str(a):<12} {ex.probabilities[a]:.6f}")
    print(f"  Z = {math.exp(ex.log_z):.6g}")


if __name__ == "__main__":
    main()
