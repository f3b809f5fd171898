"""Classical EL++ reasoning: normalization, completion, atomic consequences.

The calculus is the usual one for EL++ with nominals.  Two details matter:

* Fresh names are structural (``Aux(expr)`` stands for ``expr``), so the
  normal form of a set of axioms does not depend on their order.
* Range restrictions are pushed into the fillers of existentials: an edge
  created by ``A ⊑ ∃r.B`` points at a node for ``B ⊓ ran(r) ⊓ ...`` instead of
  at ``B`` itself.  Adding the range to ``S(B)`` directly would leak it to
  every other use of ``B``.
"""

from __future__ import annotations

import functools
from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Iterable, Union

from .kb import (
    BOTTOM,
    TOP,
    And,
    Atom,
    Atomic,
    Bottom,
    ConceptAssertion,
    ConceptExpr,
    DomainRestriction,
    ElAxiom,
    Exists,
    Gci,
    Nominal,
    RangeRestriction,
    RoleAssertion,
    RoleInclusion,
    Signature,
    Top,
    conj,
    conjuncts,
)

# pseudo-atom marking an inconsistent ontology
BOTTOM_ATOM = Atom("⊥")


@dataclass(frozen=True)
class Aux:
    """Fresh concept name standing for a complex expression."""

    expr: ConceptExpr

    def __str__(self) -> str:
        return f"[{self.expr}]"


@dataclass(frozen=True)
class RangeFiller:
    """Filler node ``base ⊓ ranges`` for edges over a range-restricted role."""

    base: "Basic"
    ranges: frozenset

    def __str__(self) -> str:
        return f"[{self.base}@{'⊓'.join(sorted(map(str, self.ranges)))}]"


Basic = Union[Top, Atomic, Nominal, Aux, RangeFiller]


def _is_basic(c) -> bool:
    return isinstance(c, (Top, Atomic, Nominal, Aux, RangeFiller))


def _key(c) -> str:
    return repr(c)


@dataclass
class NormalOntology:
    # lhs conjunction ⊑ rhs, rhs basic or ⊥
    subsumptions: set = field(default_factory=set)
    # A ⊑ ∃r.B
    exists_rhs: set = field(default_factory=set)
    # ∃r.A ⊑ B, B basic or ⊥
    exists_lhs: set = field(default_factory=set)
    role_inclusions: set = field(default_factory=set)
    chains: set = field(default_factory=set)
    # ran(r) ⊑ B
    ranges: set = field(default_factory=set)

    def fresh(self) -> set[Aux]:
        out: set[Aux] = set()
        for lhs, rhs in self.subsumptions:
            out.update(x for x in (*lhs, rhs) if isinstance(x, Aux))
        for a, _, b in self.exists_rhs:
            out.update(x for x in (a, b) if isinstance(x, Aux))
        for _, a, b in self.exists_lhs:
            out.update(x for x in (a, b) if isinstance(x, Aux))
        out.update(b for _, b in self.ranges if isinstance(b, Aux))
        return out

    def basics(self) -> set:
        out: set = set()
        for lhs, rhs in self.subsumptions:
            out.update(lhs)
            out.add(rhs)
        for a, _, b in self.exists_rhs:
            out.update((a, b))
        for _, a, b in self.exists_lhs:
            out.update((a, b))
        out.update(b for _, b in self.ranges)
        out.discard(BOTTOM)
        return out


class _Normalizer:
    def __init__(self) -> None:
        self.out = NormalOntology()
        self._done: set = set()

    def pos(self, c: ConceptExpr):
        """A basic concept (or ⊥) that is subsumed by ``c``."""
        if _is_basic(c) or isinstance(c, Bottom):
            return c
        aux = Aux(c)
        if ("pos", aux) not in self._done:
            self._done.add(("pos", aux))
            self.gci(aux, c)
        return aux

    def neg(self, c: ConceptExpr):
        """A basic concept (or ⊥) that subsumes ``c``."""
        if _is_basic(c) or isinstance(c, Bottom):
            return c
        aux = Aux(c)
        if ("neg", aux) not in self._done:
            self._done.add(("neg", aux))
            self.gci(c, aux)
        return aux

    def gci(self, lhs: ConceptExpr, rhs: ConceptExpr) -> None:
        left: set = set()
        for part in conjuncts(lhs):
            if isinstance(part, Bottom):
                return
            if isinstance(part, Top):
                continue
            if isinstance(part, Exists):
                filler = self.neg(part.filler)
                if isinstance(filler, Bottom):
                    return
                aux = Aux(part)
                if ("neg", aux) not in self._done:
                    self._done.add(("neg", aux))
                    self.out.exists_lhs.add((part.role, filler, aux))
                left.add(aux)
            elif isinstance(part, And):  # pragma: no cover - conjuncts flattens
                raise AssertionError(part)
            else:
                left.add(part)
        if not left:
            left.add(TOP)
        lhs_set = frozenset(left)
        for part in conjuncts(rhs):
            if isinstance(part, Top):
                continue
            if isinstance(part, Exists):
                filler = self.pos(part.filler)
                if isinstance(filler, Bottom):
                    self.out.subsumptions.add((lhs_set, BOTTOM))
                    continue
                if len(lhs_set) == 1:
                    (a,) = lhs_set
                else:
                    a = Aux(conj(*sorted(lhs_set, key=_key)))
                    self.out.subsumptions.add((lhs_set, a))
                self.out.exists_rhs.add((a, part.role, filler))
            else:
                self.out.subsumptions.add((lhs_set, part))

    def axiom(self, ax: ElAxiom) -> None:
        if isinstance(ax, Gci):
            self.gci(ax.lhs, ax.rhs)
        elif isinstance(ax, ConceptAssertion):
            self.gci(Nominal(ax.individual), ax.concept)
        elif isinstance(ax, RoleAssertion):
            self.out.exists_rhs.add((Nominal(ax.subject), ax.role, Nominal(ax.object)))
        elif isinstance(ax, DomainRestriction):
            self.gci(Exists(ax.role, TOP), ax.concept)
        elif isinstance(ax, RangeRestriction):
            target = self.pos(ax.concept)
            if isinstance(target, Bottom):
                self.out.exists_lhs.add((ax.role, TOP, BOTTOM))
            elif not isinstance(target, Top):
                self.out.ranges.add((ax.role, target))
        elif isinstance(ax, RoleInclusion):
            if len(ax.chain) == 1:
                self.out.role_inclusions.add((ax.chain[0], ax.sup))
            elif len(ax.chain) == 2:
                self.out.chains.add((ax.chain[0], ax.chain[1], ax.sup))
            else:
                raise ValueError(f"role chain longer than 2: {ax}")
        else:
            raise TypeError(f"not an EL++ axiom: {ax!r}")


def normalize(axioms: Iterable[ElAxiom]) -> NormalOntology:
    n = _Normalizer()
    for ax in axioms:
        n.axiom(ax)
    return n.out


@dataclass
class SaturationState:
    S: dict
    R: dict  # role -> set of (C, D)
    reachable: set
    firings: int

    def individuals(self) -> list[str]:
        return sorted(c.individual for c in self.S if isinstance(c, Nominal))

    def subsumers(self, c) -> set:
        return self.S.get(c, set())

    def inconsistent(self) -> bool:
        if BOTTOM in self.S.get(TOP, ()):
            return True
        return any(isinstance(c, Nominal) and BOTTOM in s for c, s in self.S.items())


def _closure(edges: dict[str, set[str]]) -> dict[str, set[str]]:
    out: dict[str, set[str]] = {}
    for r in list(edges):
        seen, todo = {r}, [r]
        while todo:
            for s in edges.get(todo.pop(), ()):
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
        out[r] = seen
    return out


def saturate(o: NormalOntology) -> SaturationState:
    """Least fixpoint of the completion rules."""
    sub_index: dict = defaultdict(list)
    for lhs, rhs in o.subsumptions:
        for x in lhs:
            sub_index[x].append((lhs, rhs))
    ex_rhs: dict = defaultdict(list)
    for a, r, b in o.exists_rhs:
        ex_rhs[a].append((r, b))
    ex_lhs_by_filler: dict = defaultdict(list)
    ex_lhs: dict = defaultdict(list)
    for r, a, b in o.exists_lhs:
        ex_lhs_by_filler[a].append((r, b))
        ex_lhs[(r, a)].append(b)
    supers: dict = defaultdict(set)
    for r, s in o.role_inclusions:
        supers[r].add(s)
    chain_first: dict = defaultdict(list)
    chain_second: dict = defaultdict(list)
    for r1, r2, t in o.chains:
        chain_first[r1].append((r2, t))
        chain_second[r2].append((r1, t))
    told_ranges: dict = defaultdict(set)
    for r, b in o.ranges:
        told_ranges[r].add(b)
    up = _closure({r: set(v) for r, v in supers.items()} | {r: set() for r in told_ranges})
    ranges_of: dict[str, frozenset] = {}

    def qualify(r: str, b):
        if r not in ranges_of:
            ranges_of[r] = frozenset(x for s in up.get(r, {r}) for x in told_ranges.get(s, ()))
        rs = ranges_of[r]
        if not rs or rs <= {b}:
            return b
        return RangeFiller(b, rs)

    S: dict = {}
    succ: dict = defaultdict(lambda: defaultdict(set))
    pred: dict = defaultdict(lambda: defaultdict(set))
    R: dict = defaultdict(set)
    nom_members: dict = defaultdict(set)
    queue: deque = deque()
    firings = 0

    def init(node) -> None:
        if node in S:
            return
        S[node] = set()
        queue.append(("S", node, node))
        queue.append(("S", node, TOP))
        if isinstance(node, RangeFiller):
            queue.append(("S", node, node.base))
            for x in node.ranges:
                queue.append(("S", node, x))

    init(TOP)
    for b in sorted(o.basics(), key=_key):
        init(b)

    def drain() -> None:
        nonlocal firings
        while queue:
            item = queue.popleft()
            if item[0] == "S":
                _, c, x = item
                sc = S[c]
                if x in sc:
                    continue
                firings += 1
                sc.add(x)
                if isinstance(x, Nominal):
                    nom_members[x].add(c)
                for lhs, rhs in sub_index.get(x, ()):
                    if lhs <= sc:
                        queue.append(("S", c, rhs))
                for r, b in ex_rhs.get(x, ()):
                    queue.append(("R", r, c, qualify(r, b)))
                for r, e in ex_lhs_by_filler.get(x, ()):
                    for p in list(pred[c][r]):
                        queue.append(("S", p, e))
                if x == BOTTOM:
                    for ps in pred[c].values():
                        for p in list(ps):
                            queue.append(("S", p, BOTTOM))
            else:
                _, r, c, d = item
                if (c, d) in R[r]:
                    continue
                firings += 1
                init(d)
                R[r].add((c, d))
                succ[c][r].add(d)
                pred[d][r].add(c)
                for x in list(S[d]):
                    for e in ex_lhs.get((r, x), ()):
                        queue.append(("S", c, e))
                if BOTTOM in S[d]:
                    queue.append(("S", c, BOTTOM))
                for s in supers.get(r, ()):
                    queue.append(("R", s, c, d))
                for r2, t in chain_first.get(r, ()):
                    for e in list(succ[d][r2]):
                        queue.append(("R", t, c, e))
                for r1, t in chain_second.get(r, ()):
                    for p in list(pred[c][r1]):
                        queue.append(("R", t, p, d))

    def reach() -> set:
        seen = {n for n in S if isinstance(n, Nominal)}
        todo = list(seen)
        while todo:
            for ds in succ[todo.pop()].values():
                for d in ds:
                    if d not in seen:
                        seen.add(d)
                        todo.append(d)
        return seen

    while True:
        drain()
        reachable = reach()
        # nominal rule: every node known to denote a shares what reachable ones know
        for nom, members in list(nom_members.items()):
            pooled: set = set()
            for d in members:
                if d in reachable:
                    pooled |= S[d]
            for c in list(members):
                for x in pooled - S[c]:
                    queue.append(("S", c, x))
        if not queue:
            break
    return SaturationState(dict(S), {r: set(v) for r, v in R.items()}, reachable, firings)


def _nominals_in(s: Iterable) -> list[str]:
    return [x.individual for x in s if isinstance(x, Nominal)]


def _explode(sig: Signature | None, state: SaturationState, o: NormalOntology) -> set[Atom]:
    concepts = {x.name for x in o.basics() if isinstance(x, Atomic)}
    roles = {r for _, r, _ in o.exists_rhs} | {r for r, _, _ in o.exists_lhs}
    roles |= {x for pair in o.role_inclusions for x in pair} | {x for c in o.chains for x in c}
    individuals = set(state.individuals())
    if sig is not None:
        concepts |= set(sig.concepts)
        roles |= set(sig.roles)
        individuals |= set(sig.individuals)
    out = {Atom(a, (i,)) for a in concepts for i in individuals}
    out |= {Atom(r, (i, j)) for r in roles for i in individuals for j in individuals}
    return out


@functools.lru_cache(maxsize=1 << 16)
def _atomic_cons(axioms: frozenset, policy: str, sig: Signature | None) -> frozenset[Atom]:
    o = normalize(sorted(axioms, key=_key))
    state = saturate(o)
    if state.inconsistent():
        out = {BOTTOM_ATOM}
        if policy == "explode":
            out |= _explode(sig, state, o)
        return frozenset(out)
    out: set[Atom] = set()
    for ind in state.individuals():
        for x in state.S[Nominal(ind)]:
            if isinstance(x, Atomic):
                out.add(Atom(x.name, (ind,)))
    for r, edges in state.R.items():
        for c, d in edges:
            if c not in state.reachable:
                continue
            for a in _nominals_in(state.S[c]):
                for b in _nominals_in(state.S[d]):
                    out.add(Atom(r, (a, b)))
    return frozenset(out)


POLICIES = ("explode", "skip")


def atomic_cons(axioms: Iterable[ElAxiom], policy: str = "explode", signature: Signature | None = None) -> frozenset[Atom]:
    """Ground atoms ``A(a)`` and ``r(a,b)`` entailed over named individuals.

    An inconsistent ontology yields ``{BOTTOM_ATOM}``; under ``"explode"`` it
    also yields every atom over the names of the ontology and ``signature``.
    """
    if policy not in POLICIES:
        raise ValueError(f"unknown inconsistency policy {policy!r}")
    return _atomic_cons(frozenset(axioms), policy, signature if policy == "explode" else None)


def is_consistent(axioms: Iterable[ElAxiom]) -> bool:
    return BOTTOM_ATOM not in _atomic_cons(frozenset(axioms), "skip", None)
