"""Annotation matching and the classical ontology induced by a world."""

from __future__ import annotations

from dataclasses import dataclass

from .kb import Annotation, AnnotatedAxiom, Atom, ElAxiom, TcpKnowledgeBase, is_variable
from .mln import GroundMln, World


@dataclass(frozen=True)
class AnnotationMatch:
    substitution: tuple[tuple[str, str], ...]
    instantiated: ElAxiom


def _by_predicate(g: GroundMln) -> dict[str, list[tuple[tuple[str, ...], int]]]:
    cached = g.__dict__.get("_by_pred")
    if cached is None:
        cached = {}
        for i, a in enumerate(g.atoms):
            cached.setdefault(a.pred, []).append((a.args, i))
        object.__setattr__(g, "_by_pred", cached)
    return cached


def match_annotation(ann: Annotation, w: World, g: GroundMln) -> list[dict[str, str]]:
    """Every substitution grounding all pairs to atoms with the required value.

    Ground pairs are looked up directly; pairs with variables are matched
    against the ground atoms of their predicate.  Atoms outside the grounding
    simply fail to match.
    """
    by_pred = _by_predicate(g)
    pairs = sorted(ann.pairs, key=lambda p: len(p[0].variables))
    out: list[dict[str, str]] = []

    def rec(k: int, theta: dict[str, str]) -> None:
        if k == len(pairs):
            out.append(dict(theta))
            return
        atom, value = pairs[k]
        want = bool(value)
        if all(not is_variable(t) or t in theta for t in atom.args):
            i = g.index.get(atom.substitute(theta))
            if i is not None and w[i] == want:
                rec(k + 1, theta)
            return
        for args, i in by_pred.get(atom.pred, ()):
            if w[i] != want or len(args) != atom.arity:
                continue
            new = dict(theta)
            ok = True
            for t, c in zip(atom.args, args):
                if is_variable(t):
                    if new.setdefault(t, c) != c:
                        ok = False
                        break
                elif t != c:
                    ok = False
                    break
            if ok:
                rec(k + 1, new)

    rec(0, {})
    return out


def instances(aa: AnnotatedAxiom, w: World, g: GroundMln) -> set[ElAxiom]:
    axiom_vars = set(aa.axiom.variables)
    out: set[ElAxiom] = set()
    for theta in match_annotation(aa.annotation, w, g):
        bound = {v: c for v, c in theta.items() if v in axiom_vars}
        out.add(aa.axiom.instantiate(bound) if bound else aa.axiom)
    return out


def induce_ontology(kb: TcpKnowledgeBase, w: World, g: GroundMln) -> frozenset[ElAxiom]:
    """The axioms whose annotations hold in ``w``, instantiated by the match."""
    out: set[ElAxiom] = set()
    for aa in kb.axioms:
        out |= instances(aa, w, g)
    return frozenset(out)


def annotation_atoms(kb: TcpKnowledgeBase, g: GroundMln) -> frozenset[int]:
    """Indices of ground atoms any annotation can possibly look at."""
    by_pred = _by_predicate(g)
    out: set[int] = set()
    for aa in kb.axioms:
        for atom, _ in aa.annotation.pairs:
            if atom.is_ground():
                if atom in g.index:
                    out.add(g.index[atom])
            else:
                out.update(i for args, i in by_pred.get(atom.pred, ()) if _fits(atom, args))
    return frozenset(out)


def _fits(atom: Atom, args: tuple[str, ...]) -> bool:
    if len(args) != atom.arity:
        return False
    seen: dict[str, str] = {}
    for t, c in zip(atom.args, args):
        if is_variable(t):
            if seen.setdefault(t, c) != c:
                return False
        elif t != c:
            return False
    return True


class Inducer:
    """``induce_ontology`` memoized on the annotation atoms' truth values.

    The induced ontology depends on a world only through those atoms, so
    worlds that agree on them share one entry.
    """

    def __init__(self, kb: TcpKnowledgeBase, g: GroundMln) -> None:
        self.kb = kb
        self.g = g
        self.watch = tuple(sorted(annotation_atoms(kb, g)))
        self._cache: dict[tuple[bool, ...], frozenset[ElAxiom]] = {}

    def __call__(self, w: World) -> frozenset[ElAxiom]:
        key = tuple(w[i] for i in self.watch)
        hit = self._cache.get(key)
        if hit is None:
            hit = self._cache[key] = induce_ontology(self.kb, w, self.g)
        return hit
