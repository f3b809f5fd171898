"""Anytime ranking of atomic consequences.

Classes of worlds are visited best-first; every member world's induced
ontology is saturated and its class score credited to each entailed atom.
At any point the score still unassigned is bounded by ``U``, which certifies
a partial order on the atoms seen so far.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Any, Hashable, Iterator, Mapping

from .binding import Inducer
from .classes import ClassEnumerator, EquivalenceClass, is_empty, members
from .el import BOTTOM_ATOM, POLICIES, atomic_cons
from .kb import Atom, TcpKnowledgeBase
from .mln import DEFAULT_GROUNDING_CAP, World, ground_kb

log = logging.getLogger(__name__)

NEG_INF = float("-inf")

# log-scores closer than this are ties, ordered by atom
TIE_LOG_TOL = 1e-10

# relative slack below which a certified pair is never reported strict
PAIR_RTOL = 1e-12


def logaddexp(a: float, b: float) -> float:
    if a == NEG_INF:
        return b
    if b == NEG_INF:
        return a
    hi, lo = (a, b) if a >= b else (b, a)
    return hi + math.log1p(math.exp(lo - hi))


def safe_exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class StopCondition:
    max_classes: int | None = None
    max_worlds: int | None = None
    max_seconds: float | None = None
    target_bound: float | None = None

    def __post_init__(self) -> None:
        for name in ("max_classes", "max_worlds", "max_seconds", "target_bound"):
            v = getattr(self, name)
            if v is not None and v < 0:
                raise ValueError(f"{name} must be non-negative, got {v}")

    @classmethod
    def none(cls) -> StopCondition:
        """Run to completion."""
        return cls()

    @property
    def unbounded(self) -> bool:
        return all(v is None for v in asdict(self).values())


@dataclass(frozen=True, order=True)
class ProvablePair:
    """``Pr(greater) >= Pr(lesser)``, or ``>`` when ``strict``."""

    greater: Any
    lesser: Any
    strict: bool


def log_unassigned_bound(n: int, s: int, class_log_score: float | None) -> float:
    if class_log_score is None or s >= 2**n:
        return NEG_INF
    return math.log(2**n - s) + class_log_score


def unassigned_bound(n: int, s: int, class_log_score: float | None) -> float:
    """``(2^n - s) * exp(class_log_score)``; the class is the one being consumed."""
    if s > 2**n:
        raise ValueError(f"{s} worlds analyzed out of {2**n}")
    return safe_exp(log_unassigned_bound(n, s, class_log_score))


def provable_partial_order(scores: Mapping[Hashable, float], bound: float, rtol: float = PAIR_RTOL) -> list[ProvablePair]:
    """Pairs certified by ``s_b + U <= s_a``; strict when ``s_b + U < s_a``.

    Near-equalities within ``rtol`` count as equal: they are reported
    non-strict, never strict.
    """
    items = sorted(scores.items(), key=lambda kv: -kv[1])
    out: list[ProvablePair] = []
    for b, sb in items:
        lhs = sb + bound
        for a, sa in items:
            if a == b:
                continue
            if sa < lhs - rtol * max(abs(lhs), abs(sa)):
                break
            strict = lhs < sa - rtol * max(abs(lhs), abs(sa))
            out.append(ProvablePair(a, b, strict))
    out.sort(key=lambda p: (str(p.greater), str(p.lesser)))
    return out


def provable_pairs_log(log_scores: Mapping[Hashable, float], log_bound: float) -> list[ProvablePair]:
    """``provable_partial_order`` on log-scores, rescaled to avoid overflow."""
    if not log_scores:
        return []
    shift = max(max(log_scores.values()), log_bound)
    scaled = {a: math.exp(v - shift) for a, v in log_scores.items()}
    u = 0.0 if log_bound == NEG_INF else math.exp(log_bound - shift)
    return provable_partial_order(scaled, u)


def rank_order(log_values: Mapping[Atom, float]) -> list[Atom]:
    """Descending by value; values within ``TIE_LOG_TOL`` are ordered by atom."""
    ranked = sorted(log_values, key=lambda a: (-log_values[a], a))
    out: list[Atom] = []
    group: list[Atom] = []
    head = None
    for a in ranked:
        v = log_values[a]
        if group and head - v > TIE_LOG_TOL:
            out.extend(sorted(group))
            group = []
        if not group:
            head = v
        group.append(a)
    out.extend(sorted(group))
    return out


@dataclass
class RankingResult:
    log_scores: dict[Atom, float]
    order: list[Atom]
    worlds: int
    classes: int
    log_bound: float
    provable_pairs: list[ProvablePair]
    bottom_log_mass: float
    n_atoms: int
    n_formulas: int
    exhausted: bool
    config: dict = field(default_factory=dict)

    def score(self, a: Atom | str) -> float:
        if isinstance(a, str):
            a = next((x for x in self.log_scores if str(x) == a), Atom(a))
        return safe_exp(self.log_scores.get(a, NEG_INF))

    @property
    def scores(self) -> dict[Atom, float]:
        return {a: safe_exp(v) for a, v in self.log_scores.items()}

    @property
    def bound(self) -> float:
        return safe_exp(self.log_bound)

    @property
    def bottom_mass(self) -> float:
        return safe_exp(self.bottom_log_mass)


class AnytimeRanker:
    """Stateful anytime ranking; ``step`` performs one unit of work.

    A unit is either analyzing one world or skipping one empty class, so
    stop conditions are only ever evaluated between whole worlds.
    """

    def __init__(
        self,
        kb: TcpKnowledgeBase,
        *,
        policy: str = "explode",
        tight_bound: bool = False,
        grounding_cap: int = DEFAULT_GROUNDING_CAP,
    ) -> None:
        if policy not in POLICIES:
            raise ValueError(f"unknown inconsistency policy {policy!r}")
        self.kb = kb
        self.policy = policy
        self.tight_bound = tight_bound
        self.g = ground_kb(kb, grounding_cap)
        self.enum = ClassEnumerator(self.g)
        self.inducer = Inducer(kb, self.g)
        self.log_scores: dict[Atom, float] = {}
        self.bottom_log_mass = NEG_INF
        self.worlds = 0
        self.classes = 0
        self.last_world: World | None = None
        self._cls: EquivalenceClass | None = None
        self._members: Iterator[World] | None = None
        self._pending: World | None = None

    def consequences(self, w: World) -> frozenset[Atom]:
        return atomic_cons(self.inducer(w), self.policy, self.kb.signature)

    def step(self) -> bool:
        """Do one unit of work; False once every class has been visited."""
        self.last_world = None
        if self._cls is None:
            c = self.enum.next()
            if c is None:
                return False
            if is_empty(c):
                self.classes += 1
                return True
            self._cls = c
            self._members = members(c, self.g)
            self._pending = next(self._members)
        w = self._pending
        ls = self._cls.log_score
        for a in self.consequences(w):
            if a == BOTTOM_ATOM:
                self.bottom_log_mass = logaddexp(self.bottom_log_mass, ls)
            else:
                self.log_scores[a] = logaddexp(self.log_scores.get(a, NEG_INF), ls)
        self.worlds += 1
        self.last_world = w
        self._pending = next(self._members, None)
        if self._pending is None:
            self._cls = self._members = None
            self.classes += 1
        return True

    @property
    def exhausted(self) -> bool:
        return self._cls is None and self.enum.peek(0) is None

    def current_log_score(self) -> float | None:
        """Score bounding every world not analyzed yet (None if there is none)."""
        if self._cls is not None:
            return self._cls.log_score
        if not self.tight_bound:
            c = self.enum.peek(0)
            return None if c is None else c.log_score
        k = 0
        while (c := self.enum.peek(k)) is not None:
            if not is_empty(c):
                return c.log_score
            k += 1
        return None

    @property
    def log_bound(self) -> float:
        return log_unassigned_bound(self.g.n, self.worlds, self.current_log_score())

    def should_stop(self, stop: StopCondition, started: float) -> bool:
        if stop.max_classes is not None and self.classes >= stop.max_classes:
            return True
        if stop.max_worlds is not None and self.worlds >= stop.max_worlds:
            return True
        if stop.max_seconds is not None and time.monotonic() - started >= stop.max_seconds:
            return True
        if stop.target_bound is not None:
            target = math.log(stop.target_bound) if stop.target_bound > 0 else NEG_INF
            if self.log_bound <= target:
                return True
        return False

    def run(self, stop: StopCondition | None = None) -> RankingResult:
        stop = stop or StopCondition.none()
        started = time.monotonic()
        while not self.exhausted and not self.should_stop(stop, started):
            self.step()
        log.debug("stopped after %d worlds, %d classes", self.worlds, self.classes)
        return self.result(stop)

    def result(self, stop: StopCondition | None = None) -> RankingResult:
        lb = self.log_bound
        config: dict[str, Any] = {"policy": self.policy, "tight_bound": self.tight_bound}
        if stop is not None:
            config["stop"] = asdict(stop)
        return RankingResult(
            log_scores=dict(self.log_scores),
            order=rank_order(self.log_scores),
            worlds=self.worlds,
            classes=self.classes,
            log_bound=lb,
            provable_pairs=provable_pairs_log(self.log_scores, lb),
            bottom_log_mass=self.bottom_log_mass,
            n_atoms=self.g.n,
            n_formulas=len(self.g.formulas),
            exhausted=self.exhausted,
            config=config,
        )


def anytime_rank(kb: TcpKnowledgeBase, stop: StopCondition | None = None, **options) -> RankingResult:
    return AnytimeRanker(kb, **options).run(stop)
