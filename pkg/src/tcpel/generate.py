"""Random small knowledge bases for property tests and experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .kb import (
    BOTTOM,
    AnnotatedAxiom,
    Annotation,
    Atom,
    Atomic,
    ConceptAssertion,
    Conj,
    DomainRestriction,
    ElAxiom,
    Exists,
    Gci,
    MlnFormula,
    MlnProgram,
    RangeRestriction,
    RoleAssertion,
    RoleInclusion,
    TcpKnowledgeBase,
    conj,
    validate_kb,
)
from .mln import ground_kb


@dataclass(frozen=True)
class GeneratorConfig:
    max_atoms: int = 10
    max_formulas: int = 6
    max_axioms: int = 8
    concepts: tuple[str, ...] = ("A", "B", "C", "D")
    roles: tuple[str, ...] = ("r", "s", "t")
    unary_preds: tuple[str, ...] = ("m", "n", "k")
    binary_preds: tuple[str, ...] = ("e",)
    constants: tuple[str, ...] = ("a", "b", "c")
    weights: tuple[float, ...] = (-1.0, -0.5, 0.3, 0.8, 1.0, 1.5, 2.0, 2.5)
    bottom_rate: float = 0.08


def _herbrand(rng: random.Random, cfg: GeneratorConfig) -> tuple[tuple[str, ...], list[tuple[str, int]]]:
    consts = tuple(cfg.constants[: rng.randint(1, len(cfg.constants))])
    c = len(consts)
    preds: list[tuple[str, int]] = []
    budget = cfg.max_atoms
    for p in rng.sample(cfg.unary_preds, rng.randint(1, len(cfg.unary_preds))):
        if budget >= c:
            preds.append((p, 1))
            budget -= c
    for p in cfg.binary_preds:
        if budget >= c * c and rng.random() < 0.4:
            preds.append((p, 2))
            budget -= c * c
    return consts, preds


def _random_atom(rng: random.Random, preds, terms) -> Atom:
    p, k = rng.choice(preds)
    return Atom(p, tuple(rng.choice(terms) for _ in range(k)))


def _formulas(rng: random.Random, cfg: GeneratorConfig, consts, preds) -> list[MlnFormula]:
    out: list[MlnFormula] = []
    budget = rng.randint(0, cfg.max_formulas)
    unary = [p for p, k in preds if k == 1]
    while budget > 0:
        w = rng.choice(cfg.weights)
        if unary and len(consts) <= budget and rng.random() < 0.3:
            out.append(MlnFormula(Atom(rng.choice(unary), ("X",)), w))
            budget -= len(consts)
            continue
        atoms = {_random_atom(rng, preds, consts) for _ in range(rng.randint(1, 3))}
        body = sorted(atoms)
        out.append(MlnFormula(body[0] if len(body) == 1 else Conj(tuple(body)), w))
        budget -= 1
    return out


def _concept(rng: random.Random, cfg: GeneratorConfig):
    if rng.random() < 0.25:
        return conj(Atomic(rng.choice(cfg.concepts)), Atomic(rng.choice(cfg.concepts)))
    return Atomic(rng.choice(cfg.concepts))


def _axiom(rng: random.Random, cfg: GeneratorConfig, consts) -> ElAxiom:
    roll = rng.random()
    A = lambda: Atomic(rng.choice(cfg.concepts))  # noqa: E731
    r = lambda: rng.choice(cfg.roles)  # noqa: E731
    if roll < 0.12:
        return Gci(_concept(rng, cfg), A(), ("X",))
    if roll < 0.22:
        return Gci(A(), Exists(r(), A()), ("X", "Y"))
    if roll < 0.30:
        return Gci(conj(Exists(r(), A())), A(), ("X", "Y"))
    if roll < 0.30 + cfg.bottom_rate:
        return Gci(_concept(rng, cfg), BOTTOM, ("X",))
    if roll < 0.45:
        return RoleInclusion((r(),), r())
    if roll < 0.50:
        return RoleInclusion((r(), r()), r())
    if roll < 0.56:
        return DomainRestriction(r(), A())
    if roll < 0.62:
        return RangeRestriction(r(), A())
    if roll < 0.85:
        return ConceptAssertion(A(), rng.choice(consts))
    return RoleAssertion(r(), rng.choice(consts), rng.choice(consts))


def _annotation(rng: random.Random, ax: ElAxiom, consts, preds) -> Annotation:
    k = rng.choices((0, 1, 2), weights=(3, 5, 3))[0]
    bindable = () if isinstance(ax, (RoleInclusion, RangeRestriction)) else ax.variables
    terms = list(consts) + list(bindable) + ["W"]
    pairs: list[tuple[Atom, int]] = []
    for _ in range(k):
        pairs.append((_random_atom(rng, preds, terms), rng.randint(0, 1)))
    return Annotation(tuple(pairs))


def random_kb(rng: random.Random | int, cfg: GeneratorConfig = GeneratorConfig(), tries: int = 200) -> TcpKnowledgeBase:
    """A valid knowledge base within the configured size limits.

    Candidates that fail validation or exceed the limits are redrawn.
    """
    if not isinstance(rng, random.Random):
        rng = random.Random(rng)
    for _ in range(tries):
        consts, preds = _herbrand(rng, cfg)
        formulas = _formulas(rng, cfg, consts, preds)
        axioms = []
        for _ in range(rng.randint(1, cfg.max_axioms)):
            ax = _axiom(rng, cfg, consts)
            axioms.append(AnnotatedAxiom(ax, _annotation(rng, ax, consts, preds)))
        mln = MlnProgram(formulas=tuple(formulas), constants=consts)
        kb = TcpKnowledgeBase.build(axioms, mln)
        if validate_kb(kb):
            continue
        g = ground_kb(kb)
        if g.n <= cfg.max_atoms and len(g.formulas) <= cfg.max_formulas:
            return kb
    raise RuntimeError("could not draw a valid knowledge base")
