"""Exact semantics by exhaustive world enumeration.

Exponential on purpose: this is the ground truth for tests and for exact
answers on small instances.  Worlds are visited in plain numeric order and
scored with numpy, independently of the class machinery.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .binding import Inducer
from .el import BOTTOM_ATOM, atomic_cons
from .kb import Annotation, Atom, TcpKnowledgeBase
from .mln import GroundMln, World, ground_kb, world_log_score
from .rank import rank_order

DEFAULT_ORACLE_CAP = 20


class OracleRefused(Exception):
    def __init__(self, n: int, cap: int) -> None:
        super().__init__(f"{n} ground atoms means 2^{n} worlds; oracle cap is {cap}")
        self.n = n
        self.cap = cap


def _guard(g: GroundMln, cap: int) -> None:
    if g.n > cap:
        raise OracleRefused(g.n, cap)


def all_worlds(n: int) -> Iterator[World]:
    """All ``2^n`` worlds in ascending numeric order (atom 0 most significant)."""
    return itertools.product((False, True), repeat=n)


def log_scores(g: GroundMln, cap: int = DEFAULT_ORACLE_CAP) -> np.ndarray:
    """Log-score of every world, indexed by the world's numeric value."""
    _guard(g, cap)
    n = g.n
    codes = np.arange(2**n, dtype=np.int64)
    bits = ((codes[:, None] >> (n - 1 - np.arange(n))) & 1).astype(bool)
    out = np.zeros(2**n)
    for f in g.formulas:
        out += np.where(bits[:, list(f.atoms)].all(axis=1), f.weight, 0.0)
    return out


def log_partition(g: GroundMln, cap: int = DEFAULT_ORACLE_CAP) -> float:
    scores = log_scores(g, cap)
    top = float(scores.max())
    return top + math.log(math.fsum(np.exp(scores - top)))


def world_probability(w: World, g: GroundMln, cap: int = DEFAULT_ORACLE_CAP) -> float:
    return math.exp(world_log_score(w, g) - log_partition(g, cap))


def marginal_probability(partial: Annotation | Iterable[tuple[Atom, int]], g: GroundMln, cap: int = DEFAULT_ORACLE_CAP) -> float:
    """Probability that every listed ground atom has its listed value."""
    pairs = partial.pairs if isinstance(partial, Annotation) else tuple(partial)
    fixed: dict[int, bool] = {}
    for atom, value in pairs:
        if not atom.is_ground():
            raise ValueError(f"marginal over non-ground atom {atom}")
        if atom not in g.index:
            raise ValueError(f"{atom} is not a ground atom of the network")
        i = g.index[atom]
        if fixed.setdefault(i, bool(value)) != bool(value):
            return 0.0
    scores = log_scores(g, cap)
    logz = log_partition(g, cap)
    n = g.n
    codes = np.arange(2**n, dtype=np.int64)
    keep = np.ones(2**n, dtype=bool)
    for i, v in fixed.items():
        keep &= ((codes >> (n - 1 - i)) & 1).astype(bool) == v
    return math.fsum(np.exp(scores[keep] - logz))


@dataclass
class ExactResult:
    probabilities: dict[Atom, float]
    order: list[Atom]
    log_z: float
    bottom_probability: float
    n_atoms: int


def exact_probabilities(
    kb: TcpKnowledgeBase,
    policy: str = "explode",
    cap: int = DEFAULT_ORACLE_CAP,
    g: GroundMln | None = None,
) -> ExactResult:
    """``Pr(a)`` = total probability of the worlds whose induced ontology entails ``a``."""
    g = g if g is not None else ground_kb(kb)
    scores = log_scores(g, cap)
    top = float(scores.max())
    logz = top + math.log(math.fsum(np.exp(scores - top)))
    probs = np.exp(scores - logz)
    inducer = Inducer(kb, g)
    parts: dict[Atom, list[float]] = {}
    for code, w in enumerate(all_worlds(g.n)):
        p = float(probs[code])
        for a in atomic_cons(inducer(w), policy, kb.signature):
            parts.setdefault(a, []).append(p)
    bottom = math.fsum(parts.pop(BOTTOM_ATOM, ()))
    out = {a: math.fsum(ps) for a, ps in parts.items()}
    order = rank_order({a: math.log(p) for a, p in out.items() if p > 0})
    return ExactResult(out, order, logz, bottom, g.n)


def exact_atom_probability(kb: TcpKnowledgeBase, a: Atom, policy: str = "explode", cap: int = DEFAULT_ORACLE_CAP) -> float:
    return exact_probabilities(kb, policy, cap).probabilities.get(a, 0.0)


def exact_rank(kb: TcpKnowledgeBase, policy: str = "explode", cap: int = DEFAULT_ORACLE_CAP) -> list[tuple[Atom, float]]:
    res = exact_probabilities(kb, policy, cap)
    return [(a, res.probabilities[a]) for a in res.order]
