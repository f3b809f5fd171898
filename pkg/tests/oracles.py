"""Independent reference implementations used only by the tests.

Nothing here imports the engines' algorithms: the EL reference is a
depth-bounded Skolem chase over the first-order reading of the axioms, and
the MLN references enumerate every world by brute force.
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict

from tcpel.kb import (
    And,
    Atom,
    Atomic,
    Bottom,
    ConceptAssertion,
    DomainRestriction,
    Exists,
    Gci,
    Nominal,
    RangeRestriction,
    RoleAssertion,
    RoleInclusion,
    Top,
)

BOTTOM = "⊥"


class Chase:
    """Forward chaining on ground facts; existentials get Skolem terms."""

    def __init__(self, axioms, depth: int = 5) -> None:
        self.axioms = list(axioms)
        self.depth = depth
        self.unary: set[tuple[str, object]] = set()
        self.binary: set[tuple[str, object, object]] = set()
        self.terms: set[object] = set()
        self.clash = False

    @staticmethod
    def _depth(t) -> int:
        return 0 if isinstance(t, str) else 1 + Chase._depth(t[1])

    def holds(self, c, t) -> bool:
        if isinstance(c, Top):
            return True
        if isinstance(c, Bottom):
            return False
        if isinstance(c, Atomic):
            return (c.name, t) in self.unary
        if isinstance(c, Nominal):
            return t == c.individual
        if isinstance(c, And):
            return self.holds(c.left, t) and self.holds(c.right, t)
        if isinstance(c, Exists):
            return any(r == c.role and x == t and self.holds(c.filler, y) for r, x, y in list(self.binary))
        raise TypeError(c)

    def add(self, c, t, key) -> bool:
        if isinstance(c, Top):
            return False
        if isinstance(c, Bottom):
            changed = not self.clash
            self.clash = True
            return changed
        if isinstance(c, Atomic):
            if (c.name, t) in self.unary:
                return False
            self.unary.add((c.name, t))
            self.terms.add(t)
            return True
        if isinstance(c, Nominal):
            if t != c.individual:
                raise ValueError("equality between terms is outside this reference")
            return False
        if isinstance(c, And):
            a = self.add(c.left, t, key)
            return self.add(c.right, t, key) or a
        if isinstance(c, Exists):
            if self.holds(c, t):
                return False
            names = [p.individual for p in _conjuncts(c.filler) if isinstance(p, Nominal)]
            if names:
                u = names[0]
            elif self._depth(t) >= self.depth:
                return False
            else:
                u = (key, t)
            self.binary.add((c.role, t, u))
            self.terms.update((t, u))
            self.add(c.filler, u, key)
            return True
        raise TypeError(c)

    def run(self) -> "Chase":
        for k, ax in enumerate(self.axioms):
            if isinstance(ax, ConceptAssertion):
                self.add(ax.concept, ax.individual, k)
                self.terms.add(ax.individual)
            elif isinstance(ax, RoleAssertion):
                self.binary.add((ax.role, ax.subject, ax.object))
                self.terms.update((ax.subject, ax.object))
        changed = True
        while changed and not self.clash:
            changed = False
            for k, ax in enumerate(self.axioms):
                if isinstance(ax, Gci):
                    for t in sorted(self.terms, key=repr):
                        if self.holds(ax.lhs, t):
                            changed |= self.add(ax.rhs, t, k)
                    for name in _nominal_names(ax.lhs):
                        if self.holds(ax.lhs, name):
                            changed |= self.add(ax.rhs, name, k)
                elif isinstance(ax, DomainRestriction):
                    for r, x, _ in list(self.binary):
                        if r == ax.role:
                            changed |= self.add(ax.concept, x, k)
                elif isinstance(ax, RangeRestriction):
                    for r, _, y in list(self.binary):
                        if r == ax.role:
                            changed |= self.add(ax.concept, y, k)
                elif isinstance(ax, RoleInclusion):
                    new = set()
                    if len(ax.chain) == 1:
                        new = {(ax.sup, x, y) for r, x, y in self.binary if r == ax.chain[0]}
                    else:
                        r1, r2 = ax.chain
                        by_src = defaultdict(list)
                        for r, x, y in self.binary:
                            if r == r2:
                                by_src[x].append(y)
                        new = {(ax.sup, x, z) for r, x, y in self.binary if r == r1 for z in by_src[y]}
                    if not new <= self.binary:
                        self.binary |= new
                        changed = True
        return self

    def consequences(self) -> set[Atom]:
        if self.clash:
            return {Atom(BOTTOM)}
        out = {Atom(a, (t,)) for a, t in self.unary if isinstance(t, str)}
        out |= {Atom(r, (x, y)) for r, x, y in self.binary if isinstance(x, str) and isinstance(y, str)}
        return out


def _conjuncts(c):
    if isinstance(c, And):
        yield from _conjuncts(c.left)
        yield from _conjuncts(c.right)
    else:
        yield c


def _nominal_names(c):
    if isinstance(c, Nominal):
        yield c.individual
    elif isinstance(c, And):
        yield from _nominal_names(c.left)
        yield from _nominal_names(c.right)


def chase_consequences(axioms, depth: int = 5) -> set[Atom]:
    """Atomic consequences over named individuals (``{⊥}`` when inconsistent)."""
    return Chase(axioms, depth).run().consequences()


# ---------------------------------------------------------------------------
# brute-force MLN references
# ---------------------------------------------------------------------------


def brute_worlds(n: int):
    return list(itertools.product((False, True), repeat=n))


def brute_mask(w, formulas) -> int:
    """Formula 0 is the most significant bit."""
    m = len(formulas)
    mask = 0
    for j, f in enumerate(formulas):
        if all(w[i] for i in f.atoms):
            mask |= 1 << (m - 1 - j)
    return mask


def brute_classes(g) -> dict[int, set]:
    """mask -> set of member worlds, over all 2^n worlds."""
    out: dict[int, set] = defaultdict(set)
    for w in brute_worlds(g.n):
        out[brute_mask(w, g.formulas)].add(w)
    return out


def brute_log_score(w, g) -> float:
    return math.fsum(f.weight for f in g.formulas if all(w[i] for i in f.atoms))


def sorted_subset_sums(weights) -> list[float]:
    sums = [math.fsum(c) for k in range(len(weights) + 1) for c in itertools.combinations(weights, k)]
    return sorted(sums, reverse=True)


def brute_partition(g) -> float:
    return math.fsum(math.exp(brute_log_score(w, g)) for w in brute_worlds(g.n))
