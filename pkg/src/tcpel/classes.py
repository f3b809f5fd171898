"""Equivalence classes of worlds under "satisfies the same ground formulas".

A class is identified by a mask over the ground formulas.  Masks are ints
with formula 0 in the most significant of ``m`` bits, so the descending
lexicographic order on masks is plain descending integer order.
"""

from __future__ import annotations

import heapq
import math
from collections import deque
from dataclasses import dataclass
from typing import Iterator

from .mln import GroundMln, World, satisfied_formulas


@dataclass(frozen=True)
class EquivalenceClass:
    mask: int
    m: int
    log_score: float
    det: frozenset[int]
    neg: tuple[tuple[int, ...], ...]

    def bit(self, j: int) -> bool:
        return bool(self.mask >> (self.m - 1 - j) & 1)

    @property
    def bits(self) -> str:
        return format(self.mask, f"0{self.m}b") if self.m else ""

    def __str__(self) -> str:
        return f"class {self.bits or '-'} (log-score {self.log_score:g})"


def mask_of(satisfied, m: int) -> int:
    mask = 0
    for j in satisfied:
        mask |= 1 << (m - 1 - j)
    return mask


def make_class(mask: int, g: GroundMln) -> EquivalenceClass:
    m = len(g.formulas)
    true = [j for j in range(m) if mask >> (m - 1 - j) & 1]
    det = frozenset(i for j in true for i in g.formulas[j].atoms)
    neg = tuple(g.formulas[j].atoms for j in range(m) if not mask >> (m - 1 - j) & 1)
    score = math.fsum(g.formulas[j].weight for j in true)
    return EquivalenceClass(mask, m, score, det, neg)


def class_of(w: World, g: GroundMln) -> EquivalenceClass:
    return make_class(mask_of(satisfied_formulas(w, g), len(g.formulas)), g)


def is_empty(c: EquivalenceClass) -> bool:
    """Empty iff some formula required false has all its atoms forced true."""
    return any(all(i in c.det for i in atoms) for atoms in c.neg)


def members(c: EquivalenceClass, g: GroundMln) -> Iterator[World]:
    """Worlds of ``c`` in descending order of their truth vectors.

    Depth-first over atoms, true before false.  A formula that must be false
    is checked when its last undetermined atom is assigned; any partial
    assignment that passes can be completed by setting the rest false, so the
    search never backtracks out of a dead subtree.
    """
    if is_empty(c):
        return
    n = g.n
    clauses = [tuple(i for i in atoms if i not in c.det) for atoms in set(c.neg)]
    closing: dict[int, list[tuple[int, ...]]] = {}
    for cl in clauses:
        closing.setdefault(max(cl), []).append(cl)
    assign = [False] * n

    def rec(i: int) -> Iterator[World]:
        if i == n:
            yield tuple(assign)
            return
        if i in c.det:
            assign[i] = True
            yield from rec(i + 1)
            return
        ok = all(any(not assign[k] for k in cl if k != i) for cl in closing.get(i, ()))
        if ok:
            assign[i] = True
            yield from rec(i + 1)
        assign[i] = False
        yield from rec(i + 1)

    yield from rec(0)


class ClassEnumerator:
    """All ``2^m`` classes in non-increasing log-score, ties by descending mask.

    Each class is the score-maximal mask with a set of formulas flipped;
    flip sets are generated lazily from a heap in order of total flip cost,
    each from a unique parent (extend by the next-cheapest flip, or move the
    last flip one step along).  Whole groups of equal score are drained
    before emitting so the tie order is exact.
    """

    def __init__(self, g: GroundMln) -> None:
        self.g = g
        self.m = m = len(g.formulas)
        self.weights = [f.weight for f in g.formulas]
        self.base = mask_of([j for j in range(m) if self.weights[j] >= 0], m)
        self.flips = sorted(range(m), key=lambda j: (abs(self.weights[j]), j))
        self._heap: list = []
        self._buffer: deque[int] = deque()
        self.emitted = 0
        self._push(())

    def _score(self, mask: int) -> float:
        m = self.m
        return math.fsum(self.weights[j] for j in range(m) if mask >> (m - 1 - j) & 1)

    def _push(self, subset: tuple[int, ...]) -> None:
        mask = self.base
        for p in subset:
            mask ^= 1 << (self.m - 1 - self.flips[p])
        heapq.heappush(self._heap, (-self._score(mask), -mask, subset))

    def _expand(self, subset: tuple[int, ...]) -> None:
        last = subset[-1] if subset else -1
        if last + 1 < self.m:
            self._push(subset + (last + 1,))
            if subset:
                self._push(subset[:-1] + (last + 1,))

    def _fill(self) -> bool:
        if not self._heap:
            return False
        top = self._heap[0][0]
        group: list[int] = []
        while self._heap and self._heap[0][0] == top:
            _, neg_mask, subset = heapq.heappop(self._heap)
            group.append(-neg_mask)
            self._expand(subset)
        group.sort(reverse=True)
        self._buffer.extend(group)
        return True

    def peek_mask(self, k: int = 0) -> int | None:
        while len(self._buffer) <= k:
            if not self._fill():
                return None
        return self._buffer[k]

    def peek(self, k: int = 0) -> EquivalenceClass | None:
        mask = self.peek_mask(k)
        return None if mask is None else make_class(mask, self.g)

    def next(self) -> EquivalenceClass | None:
        if self.peek_mask() is None:
            return None
        self.emitted += 1
        return make_class(self._buffer.popleft(), self.g)

    def __iter__(self) -> Iterator[EquivalenceClass]:
        while (c := self.next()) is not None:
            yield c


def next_best_class(e: ClassEnumerator) -> EquivalenceClass | None:
    return e.next()
