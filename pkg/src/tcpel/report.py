"""JSON and TSV renderings of ranking and exact results.

Floats go through ``repr`` in JSON (shortest string that reads back to the
same double) and ``%.17g`` in TSV, so both re-parse bit-exactly.  Non-finite
values (an overflowed ``U``, the log of zero mass) become ``null`` in JSON.
"""

from __future__ import annotations

import json
import math
from typing import Any

from .oracle import ExactResult
from .rank import RankingResult


def _num(x: float) -> float | None:
    return x if math.isfinite(x) else None


def ranking_to_dict(r: RankingResult) -> dict[str, Any]:
    return {
        "atoms": [{"atom": str(a), "score": _num(r.score(a)), "logScore": r.log_scores[a]} for a in r.order],
        "order": [str(a) for a in r.order],
        "s": r.worlds,
        "t": r.classes,
        "U": _num(r.bound),
        "logU": _num(r.log_bound),
        "provablePairs": [
            {"greater": str(p.greater), "lesser": str(p.lesser), "strict": p.strict} for p in r.provable_pairs
        ],
        "bottomMass": _num(r.bottom_mass),
        "bottomLogScore": _num(r.bottom_log_mass),
        "nAtoms": r.n_atoms,
        "nFormulas": r.n_formulas,
        "exhausted": r.exhausted,
        "config": r.config,
    }


def ranking_json(r: RankingResult) -> str:
    return json.dumps(ranking_to_dict(r), indent=2, ensure_ascii=False, allow_nan=False)


def ranking_tsv(r: RankingResult) -> str:
    lines = [
        f"# U={r.bound:.17g} logU={r.log_bound:.17g} s={r.worlds} t={r.classes} "
        f"bottomMass={r.bottom_mass:.17g}",
        "atom\tscore\tlogScore",
    ]
    for a in r.order:
        lines.append(f"{a}\t{r.score(a):.17g}\t{r.log_scores[a]:.17g}")
    return "\n".join(lines) + "\n"


def parse_tsv(text: str) -> tuple[dict[str, float], list[tuple[str, float, float]]]:
    """Inverse of :func:`ranking_tsv`: (header fields, rows)."""
    header: dict[str, float] = {}
    rows: list[tuple[str, float, float]] = []
    for line in text.splitlines():
        if line.startswith("#"):
            for item in line[1:].split():
                k, v = item.split("=", 1)
                header[k] = float(v)
        elif line and not line.startswith("atom\t"):
            atom, score, log_score = line.split("\t")
            rows.append((atom, float(score), float(log_score)))
    return header, rows


def emit_report(r: RankingResult, fmt: str = "json") -> str:
    if fmt == "json":
        return ranking_json(r)
    if fmt == "tsv":
        return ranking_tsv(r)
    raise ValueError(f"unknown report format {fmt!r}")


def exact_json(res: ExactResult) -> str:
    doc = {
        "atoms": [{"atom": str(a), "probability": res.probabilities[a]} for a in res.order],
        "order": [str(a) for a in res.order],
        "logZ": res.log_z,
        "bottomProbability": res.bottom_probability,
        "nAtoms": res.n_atoms,
    }
    return json.dumps(doc, indent=2, ensure_ascii=False, allow_nan=False)
