from __future__ import annotations

import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import chase_consequences
from tcpel.binding import induce_ontology
from tcpel.el import (
    BOTTOM_ATOM,
    Aux,
    atomic_cons,
    is_consistent,
    normalize,
    saturate,
)
from tcpel.generate import random_kb
from tcpel.kb import (
    BOTTOM,
    TOP,
    Atom,
    Atomic,
    ConceptAssertion,
    DomainRestriction,
    Exists,
    Gci,
    Nominal,
    RangeRestriction,
    RoleAssertion,
    RoleInclusion,
    conj,
    axiom_concept_names,
    axiom_individuals,
    axiom_role_names,
)
from tcpel.mln import ground_kb

A, B, C, D, E = (Atomic(x) for x in "ABCDE")


def at(s: str) -> Atom:
    pred, rest = s.split("(")
    return Atom(pred, tuple(rest.rstrip(")").split(",")))


def atoms(*xs: str) -> set[Atom]:
    return {at(x) for x in xs}


# Each case isolates one completion rule.  Expected sets were derived by hand
# from the first-order reading; the derivation is in the comment.
RULE_SUITE = {
    # A(a), A ⊑ B, B ⊑ C  =>  B(a) then C(a)
    "hierarchy": (
        [ConceptAssertion(A, "a"), Gci(A, B), Gci(B, C)],
        atoms("A(a)", "B(a)", "C(a)"),
    ),
    # a has A and B, so A ⊓ B ⊑ C gives C(a); b has only A
    "conjunction": (
        [ConceptAssertion(A, "a"), ConceptAssertion(B, "a"), ConceptAssertion(A, "b"), Gci(conj(A, B), C)],
        atoms("A(a)", "B(a)", "C(a)", "A(b)"),
    ),
    # the witness of ∃r.(B ⊓ {b}) is b itself: r(a,b), B(b)
    "existential-right": (
        [ConceptAssertion(A, "a"), Gci(A, Exists("r", conj(B, Nominal("b"))))],
        atoms("A(a)", "r(a,b)", "B(b)"),
    ),
    # r(a,b), B(b) satisfy ∃r.B at a, so C(a)
    "existential-left": (
        [RoleAssertion("r", "a", "b"), ConceptAssertion(B, "b"), Gci(Exists("r", B), C)],
        atoms("r(a,b)", "B(b)", "C(a)"),
    ),
    # r ⊑ s, s ⊑ t lifts the edge twice
    "role-hierarchy": (
        [RoleAssertion("r", "a", "b"), RoleInclusion(("r",), "s"), RoleInclusion(("s",), "t")],
        atoms("r(a,b)", "s(a,b)", "t(a,b)"),
    ),
    # r(a,b), s(b,c), r∘s ⊑ t  =>  t(a,c)
    "composition": (
        [RoleAssertion("r", "a", "b"), RoleAssertion("s", "b", "c"), RoleInclusion(("r", "s"), "t")],
        atoms("r(a,b)", "s(b,c)", "t(a,c)"),
    ),
    # dom(r) ⊑ D types the subject only
    "domain": (
        [RoleAssertion("r", "a", "b"), DomainRestriction("r", D)],
        atoms("r(a,b)", "D(a)"),
    ),
    # ran(r) ⊑ C types b, and also the anonymous B-successor of a, which
    # then satisfies B ⊓ C, so ∃r.(B ⊓ C) ⊑ E fires at a
    "range": (
        [
            RoleAssertion("r", "a", "b"),
            RangeRestriction("r", C),
            ConceptAssertion(A, "a"),
            Gci(A, Exists("r", B)),
            Gci(Exists("r", conj(B, C)), E),
        ],
        atoms("r(a,b)", "C(b)", "A(a)", "E(a)"),
    ),
    # the successor of a is in B ⊑ ⊥, so a itself is unsatisfiable
    "bottom-propagation": (
        [ConceptAssertion(A, "a"), Gci(A, Exists("r", B)), Gci(B, BOTTOM)],
        {BOTTOM_ATOM},
    ),
    # the anonymous D-successor of a is forced to be b: r(a,b), D(b); since b
    # is C, the successor is C as well and ∃r.C ⊑ E gives E(a)
    "nominal-instance": (
        [
            ConceptAssertion(A, "a"),
            Gci(A, Exists("r", D)),
            Gci(D, Nominal("b")),
            ConceptAssertion(C, "b"),
            Gci(Exists("r", C), E),
        ],
        atoms("A(a)", "r(a,b)", "D(b)", "C(b)", "E(a)"),
    ),
}


@pytest.mark.parametrize("name", sorted(RULE_SUITE))
def test_rule_suite(name):
    axioms, expected = RULE_SUITE[name]
    assert set(atomic_cons(axioms, "skip")) == expected


class TestNormalize:
    def test_nested_conjunction_and_existential(self):
        o = normalize([Gci(conj(A, B), Exists("r", conj(C, D)))])
        lhs = frozenset({A, B})
        aux = [a for (l, a) in o.subsumptions if l == lhs]
        assert len(aux) == 1 and isinstance(aux[0], Aux)
        ((src, role, filler),) = o.exists_rhs
        assert src == aux[0] and role == "r" and isinstance(filler, Aux)
        assert (frozenset({filler}), C) in o.subsumptions
        assert (frozenset({filler}), D) in o.subsumptions

    def test_assertion_is_nominal_inclusion(self):
        o = normalize([ConceptAssertion(Atomic("P"), "a")])
        assert o.subsumptions == {(frozenset({Nominal("a")}), Atomic("P"))}

    def test_role_assertion(self):
        o = normalize([RoleAssertion("r", "a", "b")])
        assert o.exists_rhs == {(Nominal("a"), "r", Nominal("b"))}

    def test_labeling_axioms(self):
        field, text = Atomic("Field"), Atomic("Text")
        o = normalize(
            [
                Gci(field, Exists("label", text)),
                DomainRestriction("label", field),
                Gci(conj(field, text), BOTTOM),
                RangeRestriction("label", text),
            ]
        )
        assert (field, "label", text) in o.exists_rhs
        assert any(r == "label" and f == TOP for r, f, _ in o.exists_lhs)
        assert ("label", text) in o.ranges
        assert (frozenset({field, text}), BOTTOM) in o.subsumptions

    def test_only_normal_forms(self):
        o = normalize([Gci(conj(A, Exists("r", conj(B, Exists("s", C)))), Exists("t", conj(D, E)))])
        for lhs, rhs in o.subsumptions:
            assert 1 <= len(lhs) <= 2 or all(not isinstance(x, Exists) for x in lhs)
            assert not isinstance(rhs, Exists)

    def test_independent_of_axiom_order(self):
        axs = [Gci(A, Exists("r", conj(B, C))), Gci(Exists("r", conj(B, C)), D), ConceptAssertion(A, "a")]
        assert normalize(axs) == normalize(reversed(axs))

    def test_fresh_names_preserve_consequences(self):
        axs = [ConceptAssertion(A, "a"), Gci(A, Exists("r", conj(B, C))), Gci(Exists("r", conj(B, C)), D)]
        flat = [
            ConceptAssertion(A, "a"),
            Gci(A, Atomic("X1")),
            Gci(Atomic("X1"), Exists("r", Atomic("X2"))),
            Gci(Atomic("X2"), B),
            Gci(Atomic("X2"), C),
            Gci(conj(B, C), Atomic("X3")),
            Gci(Exists("r", Atomic("X3")), D),
        ]
        keep = {"A", "B", "C", "D", "r"}
        restricted = {a for a in atomic_cons(flat) if a.pred in keep}
        assert set(atomic_cons(axs)) == restricted == atoms("A(a)", "D(a)")


class TestSaturate:
    def test_transitivity(self):
        st_ = saturate(normalize([Gci(A, B), Gci(B, C)]))
        assert C in st_.S[A]

    def test_composition_over_individuals(self):
        axs = [
            Gci(Nominal("a"), Exists("r", Nominal("b"))),
            Gci(Nominal("b"), Exists("s", Nominal("c"))),
            RoleInclusion(("r", "s"), "t"),
        ]
        st_ = saturate(normalize(axs))
        assert (Nominal("a"), Nominal("c")) in st_.R["t"]

    def test_conjunction_into_bottom(self):
        st_ = saturate(normalize([ConceptAssertion(A, "a"), ConceptAssertion(B, "a"), Gci(conj(A, B), BOTTOM)]))
        assert BOTTOM in st_.S[Nominal("a")]

    def test_contains_self_and_top(self):
        st_ = saturate(normalize([Gci(A, Exists("r", B)), ConceptAssertion(C, "c")]))
        for c, s in st_.S.items():
            assert c in s and TOP in s

    def test_fixpoint_is_stable(self):
        axs = RULE_SUITE["range"][0] + RULE_SUITE["nominal-instance"][0]
        s1, s2 = saturate(normalize(axs)), saturate(normalize(list(reversed(axs))))
        assert s1.S == s2.S and s1.R == s2.R


class TestConsistency:
    field, text, label = Atomic("field"), Atomic("text"), "label"

    def labeling(self):
        return [
            Gci(self.field, Exists(self.label, self.text)),
            DomainRestriction(self.label, self.field),
            RangeRestriction(self.label, self.text),
            Gci(conj(self.field, self.text), BOTTOM),
        ]

    def test_field_and_text_clash(self):
        axs = self.labeling() + [ConceptAssertion(self.field, "f1"), ConceptAssertion(self.text, "f1")]
        assert not is_consistent(axs)

    def test_field_alone_is_fine(self):
        assert is_consistent(self.labeling() + [ConceptAssertion(self.field, "f1")])

    def test_empty(self):
        assert is_consistent([])
        assert atomic_cons([]) == frozenset()


class TestInducedConsequences:
    def test_all_true_world(self, toy_kb, toy_g):
        w = (True,) * toy_g.n
        assert set(atomic_cons(induce_ontology(toy_kb, w, toy_g))) == atoms("p(a)", "p(b)")

    def test_only_nc_false(self, toy_kb, toy_g):
        w = toy_g.world([a for a in toy_g.atoms if str(a) != "n(c)"])
        assert set(atomic_cons(induce_ontology(toy_kb, w, toy_g))) == atoms("p(a)", "p(b)", "p(c)", "q(c)")


class TestInconsistencyPolicy:
    axs = [ConceptAssertion(A, "a"), Gci(A, BOTTOM), RoleAssertion("r", "a", "b")]

    def test_skip(self):
        assert atomic_cons(self.axs, "skip") == frozenset({BOTTOM_ATOM})

    def test_explode_is_every_atom(self):
        got = atomic_cons(self.axs, "explode")
        names = {"a", "b"}
        expected = {Atom(c, (i,)) for c in "A" for i in names} | {Atom("r", (i, j)) for i in names for j in names}
        assert got == expected | {BOTTOM_ATOM}

    def test_unknown_policy(self):
        with pytest.raises(ValueError):
            atomic_cons(self.axs, "ignore")


def _induced(seed: int, k: int):
    kb = random_kb(seed)
    g = ground_kb(kb)
    rng = random.Random(seed * 31 + k)
    w = tuple(rng.random() < 0.5 for _ in range(g.n))
    return induce_ontology(kb, w, g)


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_matches_first_order_chase(seed, k):
    o = _induced(seed, k)
    assert set(atomic_cons(o, "skip")) == chase_consequences(o, depth=6)


@given(st.integers(0, 10**6), st.integers(0, 3), st.randoms())
def test_monotone_in_axioms(seed, k, rnd):
    o = sorted(_induced(seed, k), key=repr)
    sub = [ax for ax in o if rnd.random() < 0.6]
    if is_consistent(o):
        assert atomic_cons(sub, "skip") <= atomic_cons(o, "skip")


@given(st.integers(0, 10**6), st.integers(0, 3), st.randoms())
def test_order_independent(seed, k, rnd):
    o = sorted(_induced(seed, k), key=repr)
    shuffled = list(o)
    rnd.shuffle(shuffled)
    s1, s2 = saturate(normalize(o)), saturate(normalize(shuffled))
    assert s1.S == s2.S and s1.R == s2.R


# measured worst case on generated ontologies is 1.0
FIRING_CONSTANT = 4


@given(st.integers(0, 10**6), st.integers(0, 3))
def test_polynomial_firings(seed, k):
    o = _induced(seed, k)
    names = set()
    for ax in o:
        names |= axiom_concept_names(ax) | axiom_role_names(ax) | axiom_individuals(ax)
    kk = max(len(names), 2)
    assert saturate(normalize(o)).firings <= FIRING_CONSTANT * kk**3
