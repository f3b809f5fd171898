"""How fast the unassigned-mass bound U shrinks on random knowledge bases.

For each KB the ranker is stepped world by world; we record the fraction of
worlds analyzed when U first drops below a given fraction of Z, and how many
of the oracle's strictly ordered atom pairs are already certified then.
KBs whose atoms are all tied are left out of the pair column.

    python scripts/bound_convergence.py --kbs 50 --tight
"""

from __future__ import annotations

import argparse
import csv
import math
import statistics
import sys

from tcpel.generate import GeneratorConfig, random_kb
from tcpel.oracle import exact_probabilities
from tcpel.rank import AnytimeRanker

THRESHOLDS = (1.0, 0.5, 0.1, 0.01)


def run_one(seed: int, cfg: GeneratorConfig, tight: bool) -> dict[str, float]:
    kb = random_kb(seed, cfg)
    ex = exact_probabilities(kb)
    ranker = AnytimeRanker(kb, tight_bound=tight)
    n_worlds = 2**ranker.g.n
    row: dict[str, float] = {"seed": seed, "n": ranker.g.n, "m": len(ranker.g.formulas)}
    pending = list(THRESHOLDS)
    truth = {(a, b) for a in ex.order for b in ex.order if ex.probabilities[a] > ex.probabilities[b]}
    while True:
        while pending and ranker.log_bound - ex.log_z <= math.log(pending[0]):
            t = pending.pop(0)
            row[f"worlds@{t:g}"] = ranker.worlds / n_worlds
            got = {(p.greater, p.lesser) for p in ranker.result().provable_pairs if p.strict}
            row[f"pairs@{t:g}"] = len(got & truth) / len(truth) if truth else math.nan
        if not ranker.step():
            break
    for t in pending:
        row[f"worlds@{t:g}"] = 1.0
        row[f"pairs@{t:g}"] = 1.0 if truth else math.nan
    return row


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--kbs", type=int, default=50)
    ap.add_argument("--max-atoms", type=int, default=10)
    ap.add_argument("--tight", action="store_true", help="skip empty classes when computing U")
    ap.add_argument("--csv", help="write per-KB rows here")
    args = ap.parse_args()

    cfg = GeneratorConfig(max_atoms=args.max_atoms)
    rows = [run_one(seed, cfg, args.tight) for seed in range(args.kbs)]
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
    ordered = [r for r in rows if not math.isnan(r["pairs@1"])]
    print(f"{len(rows)} KBs ({len(ordered)} with strictly ordered atoms), tight bound: {args.tight}")
    print(f"{'U/Z below':>10} {'worlds (median)':>16} {'certified pairs (mean)':>23}")
    for t in THRESHOLDS:
        worlds = statistics.median(r[f"worlds@{t:g}"] for r in rows)
        pairs = statistics.fmean(r[f"pairs@{t:g}"] for r in ordered) if ordered else math.nan
        print(f"{t:>10g} {worlds:>16.3f} {pairs:>23.3f}")


if __name__ == "__main__":
    sys.exit(main())
