"""The ``.tcpkb`` text format.

Axioms are written as first-order rules so that annotations can name their
variables::

    # form labeling
    field(X) -> exists Y.(label(X,Y) & text(Y)) @ {canLabel(X,Y)=1}
    label(X,Y) -> field(X)
    field(X) & text(X) -> false
    field(f)

    mln {
      const f l
      const fieldSort: f
      scope canLabel(fieldSort, labelSort)
      9 canLabel(Y,X) & hor(X,Y)
    }

Upper-case initials are variables.  A statement ends at a newline or ``;``,
except inside parentheses or an annotation, after a binary operator, or
before ``&``, ``|``, ``->`` and ``@``.  ``#`` starts a comment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator

from .kb import (
    BOTTOM,
    TOP,
    AnnotatedAxiom,
    Annotation,
    Atom,
    Atomic,
    Bottom,
    Conj,
    ConceptAssertion,
    ConceptExpr,
    Disj,
    DomainRestriction,
    ElAxiom,
    Exists,
    Formula,
    Gci,
    Implies,
    MlnFormula,
    MlnProgram,
    Not,
    RangeRestriction,
    RoleAssertion,
    RoleInclusion,
    TcpKnowledgeBase,
    Top,
    conj,
    conjuncts,
    is_variable,
    validate_kb,
)


@dataclass(frozen=True)
class Diagnostic:
    line: int
    col: int
    code: str
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.col}: {self.code}: {self.message}"


class KbError(Exception):
    def __init__(self, diagnostics: list[Diagnostic]) -> None:
        self.diagnostics = diagnostics
        super().__init__("\n".join(map(str, diagnostics)))


@dataclass(frozen=True)
class KbDocument:
    kb: TcpKnowledgeBase
    axiom_locations: tuple[tuple[int, int], ...]
    formula_locations: tuple[tuple[int, int], ...]

    def diagnostics(self) -> list[Diagnostic]:
        """Validation failures of the knowledge base, with source positions."""
        out = []
        for v in validate_kb(self.kb):
            line, col = 0, 0
            if v.message.startswith("axiom ") and v.where:
                line, col = self.axiom_locations[v.where[0]]
            elif v.message.startswith("mln") and v.where:
                line, col = self.formula_locations[v.where[0]]
            out.append(Diagnostic(line, col, v.code, v.message))
        return out


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------

_ALIASES = {"∧": "&", "∨": "|", "¬": "!", "→": "->", "∀": "forall", "∃": "exists", "⊥": "false"}

_TOKEN = re.compile(
    r"""
    (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<space>[ \t\r]+)
  | (?P<arrow>->|→)
  | (?P<number>-?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[^\W\d]\w*)
  | (?P<sym>[(){},.&|!@=;:∧∨¬∀∃⊥])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # ident | number | sym | nl | eof
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise KbError([Diagnostic(line, pos - start + 1, "syntax", f"unexpected character {text[pos]!r}")])
        kind = m.lastgroup
        col = pos - start + 1
        val = m.group()
        if kind == "newline":
            tokens.append(Token("nl", "\n", line, col))
            line += 1
            start = m.end()
        elif kind in ("arrow", "sym"):
            val = _ALIASES.get(val, val)
            k = "ident" if val in ("forall", "exists", "false") else "sym"
            tokens.append(Token(k, val, line, col))
        elif kind in ("ident", "number"):
            tokens.append(Token(kind, val, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return _drop_continuations(tokens)


_JOIN_AFTER = {"&", "|", "->", ".", "@", ",", "=", "!", ":", "("}
_JOIN_BEFORE = {"&", "|", "->", "@", ")"}


def _drop_continuations(tokens: list[Token]) -> list[Token]:
    out: list[Token] = []
    stack: list[str] = []
    for i, t in enumerate(tokens):
        if t.kind == "nl":
            prev = out[-1] if out else None
            nxt = next((x for x in tokens[i + 1 :] if x.kind != "nl"), None)
            if stack and stack[-1] in ("(", "anno"):
                continue
            if prev is not None and prev.kind == "sym" and prev.text in _JOIN_AFTER:
                continue
            if prev is not None and prev.text in ("forall", "exists"):
                continue
            if nxt is not None and nxt.kind == "sym" and nxt.text in _JOIN_BEFORE:
                continue
            if prev is not None and prev.kind == "nl":
                continue
            out.append(t)
            continue
        if t.kind == "sym":
            if t.text == "(":
                stack.append("(")
            elif t.text == "{":
                stack.append("anno" if out and out[-1].text == "@" else "block")
            elif t.text in (")", "}") and stack:
                stack.pop()
        out.append(t)
    return out


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class _Exists:
    variables: tuple[str, ...]
    body: object


@dataclass(frozen=True)
class _False:
    pass


@dataclass(frozen=True)
class _Forall:
    variables: tuple[str, ...]
    body: object


SHAPES = {
    1: "A1(X) & ... & An(X) -> B(X) | false",
    2: "A(X) -> exists Y.(r(X,Y) & B(Y))",
    3: "r(X,Y) & B(Y) -> A(X)",
    4: "r(X,Y) -> s(X,Y)",
    5: "r(X,Y) & s(Y,Z) -> t(X,Z)",
    6: "r(X,Y) -> C(X)",
    7: "r(X,Y) -> C(Y)",
    8: "A(a) or r(a,b)",
}


class _ShapeError(Exception):
    def __init__(self, message: str, nearest: int) -> None:
        super().__init__(f"{message}; nearest supported shape is ({nearest}) {SHAPES[nearest]}")


class _Parser:
    def __init__(self, text: str) -> None:
        self.tokens = tokenize(text)
        self.i = 0

    # -- token helpers ----------------------------------------------------
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind in ("sym", "ident")

    def advance(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def error(self, message: str, tok: Token | None = None, code: str = "syntax") -> KbError:
        t = tok or self.tok
        return KbError([Diagnostic(t.line, t.col, code, message)])

    def expect(self, text: str) -> Token:
        if not self.at(text):
            found = self.tok.text if self.tok.kind != "eof" else "end of input"
            found = "end of line" if self.tok.kind == "nl" else found
            raise self.error(f"expected {text!r}, found {found!r}")
        return self.advance()

    def ident(self, what: str = "name") -> str:
        if self.tok.kind != "ident" or self.tok.text in ("forall", "exists", "false"):
            raise self.error(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.advance().text

    def end_statement(self) -> None:
        if self.tok.kind == "nl" or self.at(";"):
            self.advance()
        elif self.tok.kind == "eof" or self.at("}"):
            pass
        else:
            raise self.error(f"unexpected {self.tok.text!r}; expected end of statement")

    def skip_blank(self) -> None:
        while self.tok.kind == "nl" or self.at(";"):
            self.advance()

    # -- formulas ---------------------------------------------------------
    def atom(self) -> Atom:
        name = self.ident("predicate")
        args: list[str] = []
        if self.at("("):
            self.advance()
            while True:
                if self.tok.kind not in ("ident", "number"):
                    raise self.error(f"expected a term, found {self.tok.text!r}")
                args.append(self.advance().text)
                if self.at(","):
                    self.advance()
                    continue
                self.expect(")")
                break
        return Atom(name, tuple(args))

    def variables(self) -> tuple[str, ...]:
        out = [self.ident("variable")]
        while self.at(",") or (self.tok.kind == "ident" and is_variable(self.tok.text)):
            if self.at(","):
                self.advance()
            out.append(self.ident("variable"))
        self.expect(".")
        return tuple(out)

    def formula(self):
        lhs = self.disjunction()
        if self.at("->"):
            self.advance()
            return Implies(lhs, self.formula())
        return lhs

    def disjunction(self):
        parts = [self.conjunction()]
        while self.at("|"):
            self.advance()
            parts.append(self.conjunction())
        return parts[0] if len(parts) == 1 else Disj(tuple(parts))

    def conjunction(self):
        parts = [self.unary()]
        while self.at("&"):
            self.advance()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else Conj(tuple(parts))

    def unary(self):
        if self.at("!"):
            self.advance()
            return Not(self.unary())
        if self.at("exists"):
            self.advance()
            vs = self.variables()
            return _Exists(vs, self.disjunction())
        if self.at("forall"):
            self.advance()
            vs = self.variables()
            return _Forall(vs, self.formula())
        if self.at("false"):
            self.advance()
            return _False()
        if self.at("("):
            self.advance()
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def annotation(self) -> Annotation:
        self.expect("{")
        pairs: list[tuple[Atom, int]] = []
        while not self.at("}"):
            t = self.tok
            a = self.atom()
            self.expect("=")
            v = self.tok
            if v.text not in ("0", "1"):
                raise self.error(f"annotation value must be 0 or 1, found {v.text!r}", v)
            self.advance()
            if not a.args:
                raise self.error(f"annotation atom {a} needs arguments", t)
            pairs.append((a, int(v.text)))
            if not self.at("}"):
                self.expect(",")
        self.expect("}")
        return Annotation(tuple(pairs))

    # -- document ---------------------------------------------------------
    def document(self):
        axioms: list[AnnotatedAxiom] = []
        ax_locs: list[tuple[int, int]] = []
        mln_parts: dict = {"formulas": [], "locs": [], "consts": [], "sorts": {}, "scopes": {}}
        errors: list[Diagnostic] = []
        self.skip_blank()
        while self.tok.kind != "eof":
            start = self.tok
            try:
                if self.at("mln") and self.tokens[self.i + 1].text == "{":
                    self.mln_block(mln_parts)
                else:
                    f = self.formula()
                    ann = Annotation()
                    if self.at("@"):
                        self.advance()
                        ann = self.annotation()
                    try:
                        ax = to_axiom(f)
                    except _ShapeError as e:
                        raise self.error(str(e), start, "shape")
                    self.end_statement()
                    axioms.append(AnnotatedAxiom(ax, ann))
                    ax_locs.append((start.line, start.col))
            except KbError as e:
                errors.extend(e.diagnostics)
                self._recover()
            self.skip_blank()
        if errors:
            raise KbError(errors)
        return axioms, ax_locs, mln_parts

    def _recover(self) -> None:
        depth = 0
        while self.tok.kind != "eof":
            if self.at("{") or self.at("("):
                depth += 1
            elif self.at("}") or self.at(")"):
                depth = max(0, depth - 1)
            elif (self.tok.kind == "nl" or self.at(";")) and depth == 0:
                self.advance()
                return
            self.advance()

    def mln_block(self, parts: dict) -> None:
        self.expect("mln")
        self.expect("{")
        self.skip_blank()
        while not self.at("}"):
            if self.tok.kind == "eof":
                raise self.error("unterminated mln block")
            start = self.tok
            if self.at("const"):
                self.advance()
                sort = None
                if self.tok.kind == "ident" and self.tokens[self.i + 1].text == ":":
                    sort = self.advance().text
                    self.advance()
                names = []
                while self.tok.kind in ("ident", "number"):
                    names.append(self.advance().text)
                for c in names:
                    if is_variable(c):
                        raise self.error(f"constant {c!r} must not start upper-case", start)
                if sort is None:
                    parts["consts"].extend(names)
                else:
                    parts["sorts"].setdefault(sort, []).extend(names)
            elif self.at("scope"):
                self.advance()
                pred = self.ident("predicate")
                self.expect("(")
                sorts = [self.ident("sort")]
                while self.at(","):
                    self.advance()
                    sorts.append(self.ident("sort"))
                self.expect(")")
                if pred in parts["scopes"] and parts["scopes"][pred] != tuple(sorts):
                    raise self.error(f"conflicting scopes for {pred}", start)
                parts["scopes"][pred] = tuple(sorts)
            elif self.tok.kind == "number":
                weight = float(self.advance().text)
                f = self.formula()
                parts["formulas"].append(MlnFormula(_strip_formula(f, start, self), weight))
                parts["locs"].append((start.line, start.col))
            else:
                raise self.error(f"expected 'const', 'scope' or a weighted formula, found {self.tok.text!r}")
            self.end_statement()
            self.skip_blank()
        self.expect("}")
        self.end_statement()


def _strip_formula(f, tok: Token, p: _Parser) -> Formula:
    if isinstance(f, (_Exists, _Forall, _False)):
        raise p.error("quantifiers and 'false' are not allowed in MLN formulas", tok, "shape")
    if isinstance(f, Conj):
        return Conj(tuple(_strip_formula(x, tok, p) for x in f.parts))
    if isinstance(f, Disj):
        return Disj(tuple(_strip_formula(x, tok, p) for x in f.parts))
    if isinstance(f, Not):
        return Not(_strip_formula(f.body, tok, p))
    if isinstance(f, Implies):
        return Implies(_strip_formula(f.lhs, tok, p), _strip_formula(f.rhs, tok, p))
    return f


# ---------------------------------------------------------------------------
# Formula -> axiom
# ---------------------------------------------------------------------------


def _flat_atoms(f, nearest: int) -> list[Atom]:
    if isinstance(f, Atom):
        return [f]
    if isinstance(f, Conj):
        return [a for p in f.parts for a in _flat_atoms(p, nearest)]
    if isinstance(f, Disj):
        raise _ShapeError("disjunction is not supported", nearest)
    if isinstance(f, Not):
        raise _ShapeError("negation is not supported (use '-> false')", 1)
    if isinstance(f, (_Exists, _Forall)):
        raise _ShapeError("nested quantifier", nearest)
    if isinstance(f, _False):
        raise _ShapeError("'false' may only appear as a whole right-hand side", 1)
    raise _ShapeError("nested implication", nearest)


def _all_vars(atoms: list[Atom], nearest: int) -> None:
    for a in atoms:
        if a.arity not in (1, 2):
            raise _ShapeError(f"{a} has arity {a.arity}; concepts are unary and roles binary", nearest)
        for t in a.args:
            if not is_variable(t):
                raise _ShapeError(f"constant {t!r} inside a rule; bind it through an annotation instead", nearest)


def _concepts(atoms: list[Atom]) -> ConceptExpr:
    return conj(*(Atomic(a.pred) for a in atoms))


def to_axiom(f) -> ElAxiom:
    """Map a parsed first-order formula onto one of the supported axiom shapes."""
    while isinstance(f, _Forall):
        f = f.body
    if not isinstance(f, Implies):
        if isinstance(f, Atom):
            if not f.is_ground():
                raise _ShapeError(f"{f} is a fact with variables", 8)
            if f.arity == 1:
                return ConceptAssertion(Atomic(f.pred), f.args[0])
            if f.arity == 2:
                return RoleAssertion(f.pred, *f.args)
            raise _ShapeError(f"{f} has arity {f.arity}", 8)
        if isinstance(f, Disj):
            raise _ShapeError("disjunction is not supported", 8)
        raise _ShapeError("statement is neither a rule nor a ground fact", 8)

    lhs = _flat_atoms(f.lhs, 1)
    _all_vars(lhs, 1)
    rhs = f.rhs
    unary = [a for a in lhs if a.arity == 1]
    binary = [a for a in lhs if a.arity == 2]

    if not binary:
        xs = {a.args[0] for a in unary}
        if len(xs) != 1:
            raise _ShapeError("left-hand side concepts must share one variable", 1)
        (x,) = xs
        left = _concepts(unary)
        if isinstance(rhs, _False):
            return Gci(left, BOTTOM, (x,))
        if isinstance(rhs, _Exists):
            body = _flat_atoms(rhs.body, 2)
            _all_vars(body, 2)
            if len(rhs.variables) != 1:
                raise _ShapeError("exactly one existential variable expected", 2)
            (y,) = rhs.variables
            roles = [a for a in body if a.arity == 2]
            fillers = [a for a in body if a.arity == 1]
            if len(roles) != 1 or roles[0].args != (x, y) or any(a.args != (y,) for a in fillers) or x == y:
                raise _ShapeError("existential body must be r(X,Y) plus concepts on Y", 2)
            return Gci(left, Exists(roles[0].pred, _concepts(fillers)), (x, y))
        right = _flat_atoms(rhs, 1)
        _all_vars(right, 1)
        if any(a.arity != 1 or a.args != (x,) for a in right):
            raise _ShapeError("right-hand side must be concepts on the same variable", 1)
        return Gci(left, _concepts(right), (x,))

    if isinstance(rhs, _Exists):
        raise _ShapeError("existential right-hand side needs only concepts on the left", 2)

    if len(binary) == 1:
        (r,) = binary
        x, y = r.args
        if x == y:
            raise _ShapeError(f"{r} repeats a variable", 4)
        on_x = [a for a in unary if a.args == (x,)]
        on_y = [a for a in unary if a.args == (y,)]
        if len(on_x) + len(on_y) != len(unary):
            raise _ShapeError("concept atoms must use the role's variables", 3)
        right = None if isinstance(rhs, _False) else _flat_atoms(rhs, 3)
        if right is not None:
            _all_vars(right, 3)
        if not unary and right is not None and len(right) == 1:
            (c,) = right
            if c.arity == 2:
                if c.args != (x, y):
                    raise _ShapeError(f"{c} must use ({x},{y})", 4)
                return RoleInclusion((r.pred,), c.pred, (x, y))
            if c.args == (x,):
                return DomainRestriction(r.pred, Atomic(c.pred), (x, y))
            if c.args == (y,):
                return RangeRestriction(r.pred, Atomic(c.pred), (x, y))
            raise _ShapeError(f"{c} must use {x} or {y}", 6)
        if right is not None and any(a.arity != 1 or a.args != (x,) for a in right):
            raise _ShapeError("right-hand side must be concepts on the role's subject", 3)
        left = conj(_concepts(on_x), Exists(r.pred, _concepts(on_y)))
        return Gci(left, BOTTOM if right is None else _concepts(right), (x, y))

    if len(binary) == 2 and not unary:
        r1, r2 = binary
        if r1.args[1] != r2.args[0]:
            r1, r2 = r2, r1
        x, y = r1.args
        z = r2.args[1]
        right = None if isinstance(rhs, _False) else _flat_atoms(rhs, 5)
        if (
            r2.args[0] != y
            or len({x, y, z}) != 3
            or right is None
            or len(right) != 1
            or right[0].arity != 2
            or right[0].args != (x, z)
        ):
            raise _ShapeError("role composition must read r(X,Y) & s(Y,Z) -> t(X,Z)", 5)
        return RoleInclusion((r1.pred, r2.pred), right[0].pred, (x, y, z))

    raise _ShapeError("too many role atoms on the left-hand side", 5)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def parse_kb(text: str, *, validate: bool = True) -> KbDocument:
    """Parse a document; raise :class:`KbError` with located diagnostics."""
    p = _Parser(text)
    axioms, ax_locs, parts = p.document()
    mln = MlnProgram(
        formulas=tuple(parts["formulas"]),
        constants=tuple(parts["consts"]),
        sorts=tuple(sorted((s, tuple(sorted(set(cs)))) for s, cs in parts["sorts"].items())),
        scopes=tuple(sorted(parts["scopes"].items())),
    )
    kb = TcpKnowledgeBase.build(axioms, mln)
    doc = KbDocument(kb, tuple(ax_locs), tuple(parts["locs"]))
    if validate:
        diags = doc.diagnostics()
        if diags:
            raise KbError(diags)
    return doc


def load_kb(path) -> TcpKnowledgeBase:
    with open(path, encoding="utf-8") as fh:
        return parse_kb(fh.read()).kb


# ---------------------------------------------------------------------------
# Serializer
# ---------------------------------------------------------------------------


def _unary_list(c: ConceptExpr, var: str) -> list[str]:
    out = []
    for part in conjuncts(c):
        if isinstance(part, Top):
            continue
        if not isinstance(part, Atomic):
            raise ValueError(f"{c} has no surface form")
        out.append(f"{part.name}({var})")
    return out


def format_axiom(ax: ElAxiom) -> str:
    if isinstance(ax, ConceptAssertion):
        if not isinstance(ax.concept, Atomic):
            raise ValueError(f"{ax} has no surface form")
        return f"{ax.concept.name}({ax.individual})"
    if isinstance(ax, RoleAssertion):
        return f"{ax.role}({ax.subject},{ax.object})"
    if isinstance(ax, RoleInclusion):
        v = ax.variables
        if len(ax.chain) == 1:
            return f"{ax.chain[0]}({v[0]},{v[1]}) -> {ax.sup}({v[0]},{v[1]})"
        return f"{ax.chain[0]}({v[0]},{v[1]}) & {ax.chain[1]}({v[1]},{v[2]}) -> {ax.sup}({v[0]},{v[2]})"
    if isinstance(ax, DomainRestriction):
        x, y = ax.variables
        return f"{ax.role}({x},{y}) -> {' & '.join(_unary_list(ax.concept, x))}"
    if isinstance(ax, RangeRestriction):
        x, y = ax.variables
        return f"{ax.role}({x},{y}) -> {' & '.join(_unary_list(ax.concept, y))}"
    if isinstance(ax, Gci):
        x = ax.variables[0]
        rhs_bottom = isinstance(ax.rhs, Bottom)
        exists_left = [p for p in conjuncts(ax.lhs) if isinstance(p, Exists)]
        if exists_left:
            y = ax.variables[1]
            (e,) = exists_left
            plain = conj(*(p for p in conjuncts(ax.lhs) if not isinstance(p, Exists)))
            left = _unary_list(plain, x) + [f"{e.role}({x},{y})"] + _unary_list(e.filler, y)
            right = "false" if rhs_bottom else " & ".join(_unary_list(ax.rhs, x))
            return f"{' & '.join(left)} -> {right}"
        left = _unary_list(ax.lhs, x)
        if not left:
            raise ValueError(f"{ax} has no surface form")
        if rhs_bottom:
            right = "false"
        elif isinstance(ax.rhs, Exists):
            y = ax.variables[1]
            body = [f"{ax.rhs.role}({x},{y})"] + _unary_list(ax.rhs.filler, y)
            right = f"exists {y}.({' & '.join(body)})"
        else:
            right = " & ".join(_unary_list(ax.rhs, x))
        return f"{' & '.join(left)} -> {right}"
    raise ValueError(f"{ax!r} has no surface form")


def format_formula(f: Formula, top: bool = True) -> str:
    if isinstance(f, Atom):
        return str(f)
    if isinstance(f, Not):
        return "!" + format_formula(f.body, False)
    if isinstance(f, Conj):
        s = " & ".join(format_formula(p, False) for p in f.parts)
    elif isinstance(f, Disj):
        s = " | ".join(format_formula(p, False) for p in f.parts)
    else:
        s = f"{format_formula(f.lhs, False)} -> {format_formula(f.rhs, False)}"
    return s if top else f"({s})"


def serialize_kb(kb: TcpKnowledgeBase) -> str:
    lines: list[str] = []
    for aa in kb.axioms:
        line = format_axiom(aa.axiom)
        if aa.annotation.pairs:
            line += " @ {" + ", ".join(f"{a}={x}" for a, x in aa.annotation.pairs) + "}"
        lines.append(line)
    m = kb.mln
    lines.append("")
    lines.append("mln {")
    sorted_consts = {c for _, cs in m.sorts for c in cs}
    loose = [c for c in m.constants if c not in sorted_consts]
    if loose:
        lines.append("  const " + " ".join(loose))
    for s, cs in m.sorts:
        lines.append(f"  const {s}: " + " ".join(cs))
    for pred, sorts in m.scopes:
        lines.append(f"  scope {pred}({', '.join(sorts)})")
    for f in m.formulas:
        lines.append(f"  {f.weight!r} {format_formula(f.formula)}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def iter_statements(text: str) -> Iterator[str]:
    """Non-blank, non-comment source lines (for diagnostics and tooling)."""
    for line in text.splitlines():
        s = line.split("#", 1)[0].strip()
        if s:
            yield s
