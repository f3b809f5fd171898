"""Domain types for tightly coupled probabilistic EL++ knowledge bases.

A knowledge base pairs a set of EL++ axioms, each annotated with a partial
assignment of MLN ground atoms, with a conjunctive Markov logic network.
Everything here is immutable; validation functions are pure and return
lists of :class:`Violation` instead of raising.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Union


def is_variable(term: str) -> bool:
    """Prolog convention: upper-case initial or underscore marks a variable."""
    return bool(term) and (term[0].isupper() or term[0] == "_")


@dataclass(frozen=True, order=True)
class Atom:
    pred: str
    args: tuple[str, ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return self.pred
        return f"{self.pred}({','.join(self.args)})"

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def variables(self) -> tuple[str, ...]:
        return tuple(a for a in self.args if is_variable(a))

    def is_ground(self) -> bool:
        return not any(is_variable(a) for a in self.args)

    def substitute(self, theta: dict[str, str]) -> Atom:
        return Atom(self.pred, tuple(theta.get(a, a) for a in self.args))


# ---------------------------------------------------------------------------
# Concept expressions
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Top:
    def __str__(self) -> str:
        return "⊤"


@dataclass(frozen=True)
class Bottom:
    def __str__(self) -> str:
        return "⊥"


@dataclass(frozen=True)
class Atomic:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Nominal:
    individual: str

    def __str__(self) -> str:
        return "{" + self.individual + "}"


@dataclass(frozen=True)
class And:
    left: "ConceptExpr"
    right: "ConceptExpr"

    def __str__(self) -> str:
        return f"({self.left} ⊓ {self.right})"


@dataclass(frozen=True)
class Exists:
    role: str
    filler: "ConceptExpr"

    def __str__(self) -> str:
        return f"∃{self.role}.{self.filler}"


ConceptExpr = Union[Top, Bottom, Atomic, Nominal, And, Exists]

TOP = Top()
BOTTOM = Bottom()


def conj(*concepts: ConceptExpr) -> ConceptExpr:
    """Right-nested conjunction; ``conj()`` is ⊤."""
    parts = [c for c in concepts if c != TOP]
    if not parts:
        return TOP
    out = parts[-1]
    for c in reversed(parts[:-1]):
        out = And(c, out)
    return out


def conjuncts(c: ConceptExpr) -> Iterator[ConceptExpr]:
    if isinstance(c, And):
        yield from conjuncts(c.left)
        yield from conjuncts(c.right)
    else:
        yield c


def concept_names(c: ConceptExpr) -> Iterator[str]:
    if isinstance(c, Atomic):
        yield c.name
    elif isinstance(c, And):
        yield from concept_names(c.left)
        yield from concept_names(c.right)
    elif isinstance(c, Exists):
        yield from concept_names(c.filler)


def role_names(c: ConceptExpr) -> Iterator[str]:
    if isinstance(c, And):
        yield from role_names(c.left)
        yield from role_names(c.right)
    elif isinstance(c, Exists):
        yield c.role
        yield from role_names(c.filler)


def nominals(c: ConceptExpr) -> Iterator[str]:
    if isinstance(c, Nominal):
        yield c.individual
    elif isinstance(c, And):
        yield from nominals(c.left)
        yield from nominals(c.right)
    elif isinstance(c, Exists):
        yield from nominals(c.filler)


# ---------------------------------------------------------------------------
# Axioms
#
# Each axiom carries the variable names of its first-order reading so that
# annotations can refer to them.  Binding a variable to a constant is done by
# ``instantiate``; see the per-class notes for what a binding means.
# ---------------------------------------------------------------------------


def _exists_slot(c: ConceptExpr) -> bool:
    return isinstance(c, Exists) or sum(isinstance(x, Exists) for x in conjuncts(c)) == 1


def _bind_filler(c: ConceptExpr, individual: str) -> ConceptExpr:
    if isinstance(c, Exists):
        return Exists(c.role, conj(c.filler, Nominal(individual)))
    parts = [_bind_filler(x, individual) if isinstance(x, Exists) else x for x in conjuncts(c)]
    return conj(*parts)


@dataclass(frozen=True)
class Gci:
    """``lhs ⊑ rhs`` read as ``∀X. lhs(X) → rhs(X)``.

    The second variable, when present, is the filler of the single top-level
    existential (on the right if there is one, else on the left).  Binding the
    subject conjoins a nominal to ``lhs``; binding the filler conjoins a
    nominal to the existential's filler, i.e. names the witness.
    """

    lhs: ConceptExpr
    rhs: ConceptExpr
    variables: tuple[str, ...] = ("X",)

    def instantiate(self, theta: dict[str, str]) -> Gci:
        lhs, rhs = self.lhs, self.rhs
        left_vars = list(self.variables)
        if len(self.variables) > 1 and self.variables[1] in theta:
            b = theta[self.variables[1]]
            if isinstance(rhs, Exists):
                rhs = _bind_filler(rhs, b)
            else:
                lhs = _bind_filler(lhs, b)
            left_vars.remove(self.variables[1])
        if self.variables[0] in theta:
            lhs = conj(Nominal(theta[self.variables[0]]), lhs)
            left_vars.remove(self.variables[0])
        if len(left_vars) == len(self.variables):
            return self
        # keep the first-order reading well formed: always expose a subject
        return Gci(lhs, rhs, tuple(left_vars) or ("X",))

    def __str__(self) -> str:
        return f"{self.lhs} ⊑ {self.rhs}"


@dataclass(frozen=True)
class RoleInclusion:
    """``r ⊑ s`` (chain of length 1) or ``r1 ∘ r2 ⊑ s``."""

    chain: tuple[str, ...]
    sup: str
    variables: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.variables:
            names = ("X", "Y", "Z")[: len(self.chain) + 1]
            object.__setattr__(self, "variables", names)

    def instantiate(self, theta: dict[str, str]) -> RoleInclusion:
        return self

    def __str__(self) -> str:
        return f"{' ∘ '.join(self.chain)} ⊑ {self.sup}"


@dataclass(frozen=True)
class DomainRestriction:
    role: str
    concept: ConceptExpr
    variables: tuple[str, ...] = ("X", "Y")

    def instantiate(self, theta: dict[str, str]) -> Union[DomainRestriction, Gci]:
        x, y = self.variables
        if x not in theta and y not in theta:
            return self
        filler: ConceptExpr = Nominal(theta[y]) if y in theta else TOP
        lhs = Exists(self.role, filler)
        if x in theta:
            lhs = conj(Nominal(theta[x]), lhs)
        return Gci(lhs, self.concept, ("X",))

    def __str__(self) -> str:
        return f"dom({self.role}) ⊑ {self.concept}"


@dataclass(frozen=True)
class RangeRestriction:
    role: str
    concept: ConceptExpr
    variables: tuple[str, ...] = ("X", "Y")

    def instantiate(self, theta: dict[str, str]) -> RangeRestriction:
        return self

    def __str__(self) -> str:
        return f"ran({self.role}) ⊑ {self.concept}"


@dataclass(frozen=True)
class ConceptAssertion:
    concept: ConceptExpr
    individual: str
    variables: tuple[str, ...] = ()

    def instantiate(self, theta: dict[str, str]) -> ConceptAssertion:
        return self

    def __str__(self) -> str:
        return f"{self.concept}({self.individual})"


@dataclass(frozen=True)
class RoleAssertion:
    role: str
    subject: str
    object: str
    variables: tuple[str, ...] = ()

    def instantiate(self, theta: dict[str, str]) -> RoleAssertion:
        return self

    def __str__(self) -> str:
        return f"{self.role}({self.subject},{self.object})"


ElAxiom = Union[Gci, RoleInclusion, DomainRestriction, RangeRestriction, ConceptAssertion, RoleAssertion]

# role-level axioms have no EL++ reading once a variable is fixed to a constant
ROLE_LEVEL = (RoleInclusion, RangeRestriction)


def axiom_concept_names(ax: ElAxiom) -> set[str]:
    if isinstance(ax, Gci):
        return set(concept_names(ax.lhs)) | set(concept_names(ax.rhs))
    if isinstance(ax, (DomainRestriction, RangeRestriction, ConceptAssertion)):
        return set(concept_names(ax.concept))
    return set()


def axiom_role_names(ax: ElAxiom) -> set[str]:
    if isinstance(ax, Gci):
        return set(role_names(ax.lhs)) | set(role_names(ax.rhs))
    if isinstance(ax, RoleInclusion):
        return {*ax.chain, ax.sup}
    if isinstance(ax, (DomainRestriction, RangeRestriction)):
        return {ax.role} | set(role_names(ax.concept))
    if isinstance(ax, ConceptAssertion):
        return set(role_names(ax.concept))
    if isinstance(ax, RoleAssertion):
        return {ax.role}
    return set()


def axiom_individuals(ax: ElAxiom) -> set[str]:
    if isinstance(ax, Gci):
        return set(nominals(ax.lhs)) | set(nominals(ax.rhs))
    if isinstance(ax, ConceptAssertion):
        return {ax.individual} | set(nominals(ax.concept))
    if isinstance(ax, RoleAssertion):
        return {ax.subject, ax.object}
    if isinstance(ax, (DomainRestriction, RangeRestriction)):
        return set(nominals(ax.concept))
    return set()


# ---------------------------------------------------------------------------
# Annotations
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Annotation:
    pairs: tuple[tuple[Atom, int], ...] = ()

    @property
    def variables(self) -> tuple[str, ...]:
        seen: dict[str, None] = {}
        for atom, _ in self.pairs:
            for v in atom.variables:
                seen.setdefault(v)
        return tuple(seen)

    def is_ground(self) -> bool:
        return all(a.is_ground() for a, _ in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{a}={x}" for a, x in self.pairs) + "}"


EMPTY = Annotation()


@dataclass(frozen=True)
class AnnotatedAxiom:
    axiom: ElAxiom
    annotation: Annotation = EMPTY

    @property
    def crisp(self) -> bool:
        return not self.annotation.pairs


# ---------------------------------------------------------------------------
# MLN programs.  Formulas are kept as a small first-order AST so that
# non-conjunctive input can be represented and rejected by validation.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class Conj:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Disj:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Implies:
    lhs: "Formula"
    rhs: "Formula"


Formula = Union[Atom, Not, Conj, Disj, Implies]


def formula_atoms(f: Formula) -> Iterator[Atom]:
    if isinstance(f, Atom):
        yield f
    elif isinstance(f, Not):
        yield from formula_atoms(f.body)
    elif isinstance(f, (Conj, Disj)):
        for p in f.parts:
            yield from formula_atoms(p)
    elif isinstance(f, Implies):
        yield from formula_atoms(f.lhs)
        yield from formula_atoms(f.rhs)


def conjunctive_atoms(f: Formula) -> tuple[Atom, ...] | None:
    """The atoms of a positive conjunction, or None for anything else."""
    if isinstance(f, Atom):
        return (f,)
    if isinstance(f, Conj):
        out: list[Atom] = []
        for p in f.parts:
            sub = conjunctive_atoms(p)
            if sub is None:
                return None
            out.extend(sub)
        return tuple(out)
    return None


@dataclass(frozen=True)
class MlnFormula:
    formula: Formula
    weight: float

    @property
    def atoms(self) -> tuple[Atom, ...]:
        atoms = conjunctive_atoms(self.formula)
        if atoms is None:
            raise ValueError("formula is not a conjunction of positive atoms")
        return atoms


@dataclass(frozen=True)
class MlnProgram:
    formulas: tuple[MlnFormula, ...] = ()
    constants: tuple[str, ...] = ()
    sorts: tuple[tuple[str, tuple[str, ...]], ...] = ()
    scopes: tuple[tuple[str, tuple[str, ...]], ...] = ()

    def sort_members(self) -> dict[str, tuple[str, ...]]:
        return dict(self.sorts)

    def scope_of(self) -> dict[str, tuple[str, ...]]:
        return dict(self.scopes)


@dataclass(frozen=True)
class Signature:
    concepts: frozenset[str] = frozenset()
    roles: frozenset[str] = frozenset()
    individuals: frozenset[str] = frozenset()
    mln_predicates: frozenset[tuple[str, int]] = frozenset()
    mln_constants: frozenset[str] = frozenset()

    def arities(self, pred: str) -> frozenset[int]:
        return frozenset(k for name, k in self.mln_predicates if name == pred)

    def arity(self, pred: str) -> int | None:
        """The predicate's arity; None if unknown or used with several."""
        ks = self.arities(pred)
        return next(iter(ks)) if len(ks) == 1 else None


@dataclass(frozen=True)
class TcpKnowledgeBase:
    signature: Signature
    axioms: tuple[AnnotatedAxiom, ...]
    mln: MlnProgram

    @classmethod
    def build(cls, axioms: Iterable[AnnotatedAxiom], mln: MlnProgram) -> TcpKnowledgeBase:
        """Infer the signature from the axioms and the MLN program."""
        axioms = tuple(axioms)
        concepts: set[str] = set()
        roles: set[str] = set()
        individuals: set[str] = set()
        preds: set[tuple[str, int]] = set()
        consts: set[str] = set(mln.constants)
        for _, members in mln.sorts:
            consts.update(members)
        for aa in axioms:
            concepts |= axiom_concept_names(aa.axiom)
            roles |= axiom_role_names(aa.axiom)
            individuals |= axiom_individuals(aa.axiom)
            for atom, _ in aa.annotation.pairs:
                preds.add((atom.pred, atom.arity))
                consts.update(a for a in atom.args if not is_variable(a))
        for f in mln.formulas:
            for atom in formula_atoms(f.formula):
                preds.add((atom.pred, atom.arity))
                consts.update(a for a in atom.args if not is_variable(a))
        for pred, sorts in mln.scopes:
            preds.add((pred, len(sorts)))
        sig = Signature(
            concepts=frozenset(concepts),
            roles=frozenset(roles),
            individuals=frozenset(individuals | consts),
            mln_predicates=frozenset(preds),
            mln_constants=frozenset(consts),
        )
        mln = MlnProgram(mln.formulas, tuple(sorted(consts)), mln.sorts, mln.scopes)
        return cls(sig, axioms, mln)


# ---------------------------------------------------------------------------
# Validation
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: tuple[int, ...] = field(default=(), compare=False)

    def __str__(self) -> str:
        return f"{self.code}: {self.message}"


def unify(a: Atom, b: Atom) -> dict[str, str] | None:
    """Most general unifier of two function-free atoms, or None."""
    if a.pred != b.pred or a.arity != b.arity:
        return None
    theta: dict[str, str] = {}

    def walk(t: str) -> str:
        while t in theta:
            t = theta[t]
        return t

    for s, t in zip(a.args, b.args):
        s, t = walk(s), walk(t)
        if s == t:
            continue
        if is_variable(s):
            theta[s] = t
        elif is_variable(t):
            theta[t] = s
        else:
            return None
    return theta


def validate_annotation(ann: Annotation, sig: Signature | None = None) -> list[Violation]:
    out: list[Violation] = []
    for i, (atom, value) in enumerate(ann.pairs):
        if value not in (0, 1):
            out.append(Violation("bad-value", f"value of {atom} must be 0 or 1, got {value}", (i,)))
        if sig is not None:
            ks = sig.arities(atom.pred)
            if not ks:
                out.append(Violation("unknown-predicate", f"{atom.pred} is not an MLN predicate", (i,)))
            elif len(ks) == 1 and atom.arity not in ks:
                k = next(iter(ks))
                out.append(
                    Violation("arity-mismatch", f"{atom} has arity {atom.arity}, {atom.pred} expects {k}", (i,))
                )
    for i in range(len(ann.pairs)):
        for j in range(i + 1, len(ann.pairs)):
            a, b = ann.pairs[i][0], ann.pairs[j][0]
            # variables of one pair are not renamed apart: they are shared
            if unify(a, b) is not None:
                out.append(
                    Violation(
                        "unifiable-pairs",
                        f"annotation pairs {a} and {b} unify; an annotation may not mention "
                        "the same random variable twice",
                        (i, j),
                    )
                )
    return out


def validate_cmln(m: MlnProgram) -> list[Violation]:
    out: list[Violation] = []
    for i, f in enumerate(m.formulas):
        atoms = conjunctive_atoms(f.formula)
        if atoms is None:
            out.append(Violation("not-conjunctive", f"formula {i} is not a conjunction of positive atoms", (i,)))
        elif not atoms:
            out.append(Violation("empty-conjunction", f"formula {i} is empty", (i,)))
        if not isinstance(f.weight, (int, float)) or not math.isfinite(f.weight):
            out.append(Violation("bad-weight", f"formula {i} has non-finite weight {f.weight!r}", (i,)))
    return out


def _super_roles(axioms: Iterable[ElAxiom]) -> dict[str, set[str]]:
    """Reflexive-transitive closure of the told role hierarchy."""
    edges: dict[str, set[str]] = {}
    for ax in axioms:
        if isinstance(ax, RoleInclusion) and len(ax.chain) == 1:
            edges.setdefault(ax.chain[0], set()).add(ax.sup)
    closure: dict[str, set[str]] = {}
    roles = set(edges) | {s for v in edges.values() for s in v}
    for r in roles:
        seen, todo = {r}, [r]
        while todo:
            for s in edges.get(todo.pop(), ()):
                if s not in seen:
                    seen.add(s)
                    todo.append(s)
        closure[r] = seen
    return closure


def check_el_fragment(ax: ElAxiom, context: Iterable[ElAxiom] = ()) -> list[Violation]:
    """Form check plus the conservative role-inclusion/range interplay check.

    A role that is (reflexively, transitively) above the super-role of a
    composition chain may not carry a range restriction.
    """
    out: list[Violation] = []
    if isinstance(ax, RoleInclusion):
        if not 1 <= len(ax.chain) <= 2:
            out.append(Violation("unsupported-form", f"role chain of length {len(ax.chain)}; split it into binary steps"))
    elif not isinstance(ax, (Gci, DomainRestriction, RangeRestriction, ConceptAssertion, RoleAssertion)):
        out.append(Violation("unsupported-form", f"{type(ax).__name__} is not an EL++ axiom"))
        return out
    if len(set(ax.variables)) != len(ax.variables):
        out.append(Violation("bad-variables", f"repeated variable names {ax.variables}"))

    context = list(context)
    if ax not in context:
        context.append(ax)
    sup = _super_roles(context)
    ranges = [c for c in context if isinstance(c, RangeRestriction)]
    chains = [c for c in context if isinstance(c, RoleInclusion) and len(c.chain) == 2]
    if isinstance(ax, (RangeRestriction, RoleInclusion)):
        for chain in chains:
            above = sup.get(chain.sup, {chain.sup})
            for rr in ranges:
                if rr.role in above and ax in (chain, rr):
                    out.append(
                        Violation(
                            "ri-rr-conflict",
                            f"role {rr.role} is above composition '{chain}' and has range "
                            f"restriction '{rr}'",
                        )
                    )
    return out


def validate_kb(kb: TcpKnowledgeBase) -> list[Violation]:
    """All structural checks: names, annotations, cMLN shape, EL++ fragment."""
    out: list[Violation] = []
    sig = kb.signature
    preds = {p for p, _ in sig.mln_predicates}
    for name in sorted(preds & sig.concepts):
        out.append(Violation("name-clash", f"{name} is both an MLN predicate and a concept name"))
    for name in sorted(preds & sig.roles):
        out.append(Violation("name-clash", f"{name} is both an MLN predicate and a role name"))
    arities: dict[str, set[int]] = {}
    for p, k in sig.mln_predicates:
        arities.setdefault(p, set()).add(k)
        if not p or k < 1:
            out.append(Violation("bad-predicate", f"MLN predicate {p!r}/{k} needs a name and arity >= 1"))
    for p, ks in sorted(arities.items()):
        if len(ks) > 1:
            out.append(Violation("arity-mismatch", f"MLN predicate {p} used with arities {sorted(ks)}"))

    plain = [aa.axiom for aa in kb.axioms]
    seen_conflicts: set[str] = set()
    for i, aa in enumerate(kb.axioms):
        for v in validate_annotation(aa.annotation, sig):
            out.append(Violation(v.code, f"axiom {i}: {v.message}", (i, *v.where)))
        for v in check_el_fragment(aa.axiom, plain):
            if v.code == "ri-rr-conflict":
                if v.message in seen_conflicts:
                    continue
                seen_conflicts.add(v.message)
            out.append(Violation(v.code, f"axiom {i}: {v.message}", (i,)))
        if isinstance(aa.axiom, ROLE_LEVEL):
            bound = set(aa.annotation.variables) & set(aa.axiom.variables)
            if bound:
                out.append(
                    Violation(
                        "unsupported-binding",
                        f"axiom {i}: annotation binds {sorted(bound)} of a role inclusion or range "
                        "restriction, which has no EL++ instance",
                        (i,),
                    )
                )
    for v in validate_cmln(kb.mln):
        out.append(Violation(v.code, f"mln: {v.message}", v.where))
    for f in kb.mln.formulas:
        for atom in formula_atoms(f.formula):
            k = sig.arity(atom.pred)
            if k is not None and k != atom.arity:
                out.append(Violation("arity-mismatch", f"mln: {atom} expects arity {k}"))
    sorts = kb.mln.sort_members()
    for pred, srts in kb.mln.scopes:
        for s in srts:
            if s not in sorts:
                out.append(Violation("unknown-sort", f"scope of {pred} uses undeclared sort {s}"))
    return out
