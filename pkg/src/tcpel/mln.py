"""Grounding of conjunctive MLNs and per-world scores.

Worlds are tuples of booleans over ``GroundMln.atoms``.  Scores stay in log
space; a world's log-score is the (correctly rounded) sum of the weights of
the ground formulas it satisfies, so two worlds satisfying the same formula
set always get bit-identical scores.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .kb import Atom, MlnProgram, formula_atoms, is_variable

World = tuple[bool, ...]

DEFAULT_GROUNDING_CAP = 2_000_000


class GroundingRefused(Exception):
    def __init__(self, projected: int, cap: int, what: str = "ground formula instances") -> None:
        super().__init__(f"grounding would produce {projected} {what}, cap is {cap}")
        self.projected = projected
        self.cap = cap


@dataclass(frozen=True)
class GroundFormula:
    atoms: tuple[int, ...]
    weight: float
    source: int = 0

    def label(self, g: "GroundMln") -> str:
        return " & ".join(str(g.atoms[i]) for i in self.atoms)


@dataclass(frozen=True)
class GroundMln:
    atoms: tuple[Atom, ...]
    formulas: tuple[GroundFormula, ...]
    index: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.index:
            object.__setattr__(self, "index", {a: i for i, a in enumerate(self.atoms)})

    @property
    def n(self) -> int:
        return len(self.atoms)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(f.weight for f in self.formulas)

    def world(self, true_atoms: Iterable[Atom | str]) -> World:
        """The world in which exactly ``true_atoms`` hold."""
        on = set()
        by_name = {str(a): i for i, a in enumerate(self.atoms)}
        for a in true_atoms:
            i = self.index[a] if isinstance(a, Atom) else by_name[a]
            on.add(i)
        return tuple(i in on for i in range(self.n))


def _domains(m: MlnProgram) -> tuple[dict, dict, tuple[str, ...]]:
    sorts = m.sort_members()
    scopes = m.scope_of()
    mentioned = {t for f in m.formulas for a in formula_atoms(f.formula) for t in a.args if not is_variable(t)}
    everything = tuple(sorted(set(m.constants) | mentioned | {c for cs in sorts.values() for c in cs}))
    return sorts, scopes, everything


def _position_domain(pred: str, pos: int, sorts: dict, scopes: dict, everything) -> tuple[str, ...]:
    if pred in scopes:
        return tuple(sorted(sorts.get(scopes[pred][pos], ())))
    return everything


def projected_size(m: MlnProgram, predicates: Iterable[tuple[str, int]] = ()) -> tuple[int, int]:
    """(ground atoms, ground formula instances) before deduplication."""
    sorts, scopes, everything = _domains(m)
    preds = set(predicates) | _program_predicates(m)
    n_atoms = 0
    for pred, k in preds:
        n_atoms += math.prod(len(_position_domain(pred, i, sorts, scopes, everything)) for i in range(k))
    n_formulas = 0
    for f in m.formulas:
        n_formulas += math.prod(len(d) for d in _variable_domains(f.atoms, sorts, scopes, everything).values())
    return n_atoms, n_formulas


def _program_predicates(m: MlnProgram) -> set[tuple[str, int]]:
    preds = {(a.pred, a.arity) for f in m.formulas for a in formula_atoms(f.formula)}
    preds |= {(p, len(s)) for p, s in m.scopes}
    return preds


def _variable_domains(atoms: Sequence[Atom], sorts, scopes, everything) -> dict[str, tuple[str, ...]]:
    doms: dict[str, tuple[str, ...]] = {}
    for atom in atoms:
        for pos, term in enumerate(atom.args):
            if not is_variable(term):
                continue
            allowed = _position_domain(atom.pred, pos, sorts, scopes, everything)
            if term in doms:
                keep = set(allowed)
                doms[term] = tuple(c for c in doms[term] if c in keep)
            else:
                doms[term] = allowed
    return doms


def ground(
    m: MlnProgram,
    predicates: Iterable[tuple[str, int]] = (),
    cap: int = DEFAULT_GROUNDING_CAP,
) -> GroundMln:
    """Ground every formula over the constants, respecting predicate scopes.

    ``predicates`` adds atoms that occur only in annotations to the Herbrand
    base.  Ground formulas are ordered by substitution (constants in order of
    the variables' first occurrence), then by program position.  Duplicate
    atom sets produced by one program formula are merged.
    """
    n_atoms, n_formulas = projected_size(m, predicates)
    if n_formulas > cap:
        raise GroundingRefused(n_formulas, cap)
    if n_atoms > cap:
        raise GroundingRefused(n_atoms, cap, "ground atoms")
    sorts, scopes, everything = _domains(m)
    preds = sorted(set(predicates) | _program_predicates(m))

    base: list[Atom] = []
    for pred, k in preds:
        doms = [_position_domain(pred, i, sorts, scopes, everything) for i in range(k)]
        base.extend(Atom(pred, args) for args in itertools.product(*doms))
    base.sort()
    index = {a: i for i, a in enumerate(base)}

    keyed: list[tuple[tuple[str, ...], int, tuple[int, ...], float]] = []
    for pi, f in enumerate(m.formulas):
        atoms = f.atoms
        doms = _variable_domains(atoms, sorts, scopes, everything)
        names = list(doms)
        seen: set[tuple[int, ...]] = set()
        for values in itertools.product(*(doms[v] for v in names)):
            theta = dict(zip(names, values))
            try:
                idx = tuple(sorted({index[a.substitute(theta)] for a in atoms}))
            except KeyError:
                continue  # out-of-scope constant in the formula
            if idx in seen:
                continue
            seen.add(idx)
            keyed.append((values, pi, idx, float(f.weight)))
    keyed.sort(key=lambda t: (t[0], t[1]))
    formulas = tuple(GroundFormula(idx, w, pi) for _, pi, idx, w in keyed)
    return GroundMln(tuple(base), formulas, index)


def _check(w: World, g: GroundMln) -> None:
    if len(w) != g.n:
        raise ValueError(f"world has {len(w)} atoms, grounding has {g.n}")


def satisfied_formulas(w: World, g: GroundMln) -> frozenset[int]:
    _check(w, g)
    return frozenset(j for j, f in enumerate(g.formulas) if all(w[i] for i in f.atoms))


def world_log_score(w: World, g: GroundMln) -> float:
    """Log of the unnormalized probability of ``w``."""
    return math.fsum(g.formulas[j].weight for j in satisfied_formulas(w, g))


class Comparison(NamedTuple):
    order: str  # "less" | "equal" | "greater"
    log_ratio: float

    @property
    def ratio(self) -> float:
        return math.exp(self.log_ratio)


def compare_worlds(w1: World, w2: World, g: GroundMln) -> Comparison:
    """Compare Pr(w1) with Pr(w2) without the partition function."""
    s1, s2 = world_log_score(w1, g), world_log_score(w2, g)
    d = s1 - s2
    order = "greater" if s1 > s2 else "less" if s1 < s2 else "equal"
    return Comparison(order, d)


def ground_kb(kb, cap: int = DEFAULT_GROUNDING_CAP) -> GroundMln:
    """Ground a knowledge base's MLN, annotation-only predicates included."""
    return ground(kb.mln, kb.signature.mln_predicates, cap)
