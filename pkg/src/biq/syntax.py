"""Formulas of first-order bi-intuitionistic logic: syntax, parsing,
printing, variable analysis, substitution and sentence enumeration.

The connectives are bottom, top, conjunction, disjunction, implication and
co-implication, plus the two quantifiers.  Negation is input sugar only:
``~f`` parses to ``f -> _|_`` and the printer never produces it, so formula
equality stays purely syntactic.

Concrete grammar (ASCII)::

    atom      P(t1,...,tn)   or bare  P  for arity 0
    constants _|_ (bottom), T (top; reserved word)
    binary    &   \\/   ->   -<        (precedence ~ > & > \\/ > -> = -<,
                                        arrows right-associative)
    unary     ~f              sugar for  f -> _|_
    binders   forall x. f     exists x. f   (bodies extend maximally)

In term position an identifier is a constant iff the signature declares it,
otherwise a variable.  ``forall``, ``exists`` and ``T`` are reserved.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping

RESERVED = frozenset({"forall", "exists", "T"})
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class FormulaError(Exception):
    """Parse or well-formedness error, carrying a character position."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        if position is not None:
            message = f"{message} (at position {position})"
        super().__init__(message)


# ---------------------------------------------------------------------------
# signatures and terms


@dataclass(frozen=True)
class Signature:
    """Predicate symbols with arities plus individual constants.

    Stored sorted so signatures compare structurally; construct via `make`.
    """

    predicates: tuple[tuple[str, int], ...]
    constants: tuple[str, ...]

    @staticmethod
    def make(predicates: Mapping[str, int] | Iterable[tuple[str, int]] = (),
             constants: Iterable[str] = ()) -> Signature:
        preds = dict(predicates.items() if isinstance(predicates, Mapping) else predicates)
        consts = frozenset(constants)
        for name, arity in preds.items():
            _check_name(name)
            if arity < 0:
                raise ValueError(f"negative arity for {name}: {arity}")
        for name in consts:
            _check_name(name)
        overlap = set(preds) & consts
        if overlap:
            raise ValueError(f"names used both as predicate and constant: {sorted(overlap)}")
        return Signature(tuple(sorted(preds.items())), tuple(sorted(consts)))

    @staticmethod
    def empty() -> Signature:
        return Signature((), ())

    def arity(self, name: str) -> int | None:
        for pred, ar in self.predicates:
            if pred == name:
                return ar
        return None

    def has_constant(self, name: str) -> bool:
        return name in self.constants

    def merge(self, other: Signature) -> Signature:
        preds = dict(self.predicates)
        for name, ar in other.predicates:
            if preds.setdefault(name, ar) != ar:
                raise ValueError(f"arity clash for {name}: {preds[name]} vs {ar}")
        return Signature.make(preds, set(self.constants) | set(other.constants))

    def extends(self, other: Signature) -> bool:
        """True iff `other` is a subsignature of self."""
        return (all(self.arity(p) == ar for p, ar in other.predicates)
                and set(other.constants) <= set(self.constants))

    def with_constants(self, extra: Iterable[str]) -> Signature:
        return Signature.make(dict(self.predicates), set(self.constants) | set(extra))


def _check_name(name: str) -> None:
    if not _NAME_RE.match(name):
        raise ValueError(f"invalid symbol name {name!r}")
    if name in RESERVED:
        raise ValueError(f"{name!r} is a reserved word")


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Const:
    name: str


Term = Var | Const


# ---------------------------------------------------------------------------
# formulas


class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Atom(Formula):
    pred: str
    args: tuple[Term, ...] = ()


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class CoImplies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Forall(Formula):
    var: str
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    var: str
    body: Formula


BINARY = (And, Or, Implies, CoImplies)
QUANT = (Forall, Exists)


def neg(f: Formula) -> Formula:
    """The defined negation: f -> _|_."""
    return Implies(f, Bottom())


def size(f: Formula) -> int:
    """Number of formula nodes (terms are free)."""
    if isinstance(f, BINARY):
        return 1 + size(f.left) + size(f.right)
    if isinstance(f, QUANT):
        return 1 + size(f.body)
    return 1


@lru_cache(maxsize=None)
def variable_sets(f: Formula) -> tuple[frozenset[str], frozenset[str]]:
    """The (free, bound) variable sets, by the usual induction."""
    if isinstance(f, Atom):
        return frozenset(t.name for t in f.args if isinstance(t, Var)), frozenset()
    if isinstance(f, (Bottom, Top)):
        return frozenset(), frozenset()
    if isinstance(f, BINARY):
        fl, bl = variable_sets(f.left)
        fr, br = variable_sets(f.right)
        return fl | fr, bl | br
    fb, bb = variable_sets(f.body)
    return fb - {f.var}, bb | {f.var}


def free_vars(f: Formula) -> frozenset[str]:
    return variable_sets(f)[0]


@lru_cache(maxsize=None)
def signature_of(f: Formula) -> Signature:
    """The least signature over which f is a formula."""
    if isinstance(f, Atom):
        return Signature.make({f.pred: len(f.args)},
                              (t.name for t in f.args if isinstance(t, Const)))
    if isinstance(f, (Bottom, Top)):
        return Signature.empty()
    if isinstance(f, BINARY):
        return signature_of(f.left).merge(signature_of(f.right))
    return signature_of(f.body)


def substitute(f: Formula, binding: Mapping[str, str]) -> Formula:
    """Simultaneously replace free variable occurrences by constants.

    Quantifiers shield their bound variable; no capture is possible since
    only constants are substituted.
    """
    if not binding:
        return f
    if isinstance(f, Atom):
        args = tuple(
            Const(binding[t.name]) if isinstance(t, Var) and t.name in binding else t
            for t in f.args)
        return Atom(f.pred, args)
    if isinstance(f, (Bottom, Top)):
        return f
    if isinstance(f, BINARY):
        return type(f)(substitute(f.left, binding), substitute(f.right, binding))
    inner = {x: c for x, c in binding.items() if x != f.var}
    return type(f)(f.var, substitute(f.body, inner))


def is_sentence(f: Formula, sig: Signature) -> bool:
    """Sentence test by the inductive characterisation.

    Atoms must be built from declared predicates and constants only; the
    quantifier case substitutes a fresh constant and recurses over the
    extended signature.
    """
    if isinstance(f, Atom):
        ar = sig.arity(f.pred)
        if ar is None or ar != len(f.args):
            return False
        return all(isinstance(t, Const) and sig.has_constant(t.name) for t in f.args)
    if isinstance(f, (Bottom, Top)):
        return True
    if isinstance(f, BINARY):
        return is_sentence(f.left, sig) and is_sentence(f.right, sig)
    c = _fresh_constant(sig)
    return is_sentence(substitute(f.body, {f.var: c}), sig.with_constants({c}))


def _fresh_constant(sig: Signature) -> str:
    for i in itertools.count():
        c = f"c_{i}"
        if sig.arity(c) is None and not sig.has_constant(c):
            return c
    raise AssertionError


# ---------------------------------------------------------------------------
# printing


def format_formula(f: Formula) -> str:
    """Deterministic fully parenthesised rendering; reparses to f."""
    if isinstance(f, Atom):
        if not f.args:
            return f.pred
        return f.pred + "(" + ",".join(t.name for t in f.args) + ")"
    if isinstance(f, Bottom):
        return "_|_"
    if isinstance(f, Top):
        return "T"
    if isinstance(f, And):
        return f"({format_formula(f.left)} & {format_formula(f.right)})"
    if isinstance(f, Or):
        return f"({format_formula(f.left)} \\/ {format_formula(f.right)})"
    if isinstance(f, Implies):
        return f"({format_formula(f.left)} -> {format_formula(f.right)})"
    if isinstance(f, CoImplies):
        return f"({format_formula(f.left)} -< {format_formula(f.right)})"
    if isinstance(f, Forall):
        return f"(forall {f.var}. {format_formula(f.body)})"
    if isinstance(f, Exists):
        return f"(exists {f.var}. {format_formula(f.body)})"
    raise TypeError(f"not a formula: {f!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"""\s*(?:
        (?P<bottom>_\|_)
      | (?P<arrow>->)
      | (?P<coarrow>-<)
      | (?P<orop>\\/)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
      | (?P<punct>[().,&~])
    )""",
    re.VERBOSE,
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            if text[pos:].strip() == "":
                break
            raise FormulaError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                               position=len(text) - len(text[pos:].lstrip()))
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((kind, value, m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, sig: Signature):
        self.tokens = _tokenize(text)
        self.sig = sig
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, val, pos = self.peek()
        if val != value:
            raise FormulaError(f"expected {value!r}, found {val or 'end of input'!r}", pos)
        return self.advance()

    def parse(self) -> Formula:
        f = self.implication()
        kind, val, pos = self.peek()
        if kind != "end":
            raise FormulaError(f"trailing input {val!r}", pos)
        return f

    def implication(self) -> Formula:
        left = self.disjunction()
        kind, val, _ = self.peek()
        if kind == "arrow":
            self.advance()
            return Implies(left, self.implication())
        if kind == "coarrow":
            self.advance()
            return CoImplies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.peek()[0] == "orop":
            self.advance()
            return Or(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        if self.peek()[1] == "&":
            self.advance()
            return And(left, self.conjunction())
        return left

    def unary(self) -> Formula:
        kind, val, pos = self.peek()
        if val == "~":
            self.advance()
            return neg(self.unary())
        if kind == "ident" and val in ("forall", "exists"):
            self.advance()
            vkind, vname, vpos = self.advance()
            if vkind != "ident" or vname in RESERVED:
                raise FormulaError(f"expected a variable after {val}", vpos)
            self._check_var_name(vname, vpos)
            self.expect(".")
            body = self.implication()
            return (Forall if val == "forall" else Exists)(vname, body)
        return self.atom()

    def atom(self) -> Formula:
        kind, val, pos = self.advance()
        if kind == "bottom":
            return Bottom()
        if val == "(":
            f = self.implication()
            self.expect(")")
            return f
        if kind != "ident":
            raise FormulaError(f"expected a formula, found {val or 'end of input'!r}", pos)
        if val == "T":
            return Top()
        arity = self.sig.arity(val)
        if arity is None:
            if self.sig.has_constant(val):
                raise FormulaError(f"constant {val!r} used as a formula", pos)
            raise FormulaError(f"undeclared predicate {val!r}", pos)
        if self.peek()[1] != "(":
            if arity != 0:
                raise FormulaError(f"{val} has arity {arity}, no arguments given", pos)
            return Atom(val, ())
        self.advance()
        args = [self.term()]
        while self.peek()[1] == ",":
            self.advance()
            args.append(self.term())
        self.expect(")")
        if len(args) != arity:
            raise FormulaError(f"{val} has arity {arity}, got {len(args)} arguments", pos)
        return Atom(val, tuple(args))

    def term(self) -> Term:
        kind, val, pos = self.advance()
        if kind != "ident" or val in RESERVED:
            raise FormulaError(f"expected a term, found {val or 'end of input'!r}", pos)
        if self.sig.has_constant(val):
            return Const(val)
        self._check_var_name(val, pos)
        return Var(val)

    def _check_var_name(self, name: str, pos: int) -> None:
        if self.sig.arity(name) is not None:
            raise FormulaError(f"predicate name {name!r} used as a variable", pos)


def parse_formula(text: str, sig: Signature) -> Formula:
    return _Parser(text, sig).parse()


# ---------------------------------------------------------------------------
# enumeration

_KIND_RANK = {Bottom: 0, Top: 1, Atom: 2, And: 3, Or: 4, Implies: 5, CoImplies: 6,
              Forall: 7, Exists: 8}


@lru_cache(maxsize=None)
def sort_key(f: Formula):
    """A total, deterministic structural order on formulas."""
    rank = _KIND_RANK[type(f)]
    if isinstance(f, Atom):
        return (rank, f.pred, tuple((isinstance(t, Const), t.name) for t in f.args))
    if isinstance(f, (Bottom, Top)):
        return (rank,)
    if isinstance(f, BINARY):
        return (rank, sort_key(f.left), sort_key(f.right))
    return (rank, f.var, sort_key(f.body))


def enumerate_sentences(sig: Signature, max_nodes: int, max_vars: int) -> Iterator[Formula]:
    """All sentences over sig with at most max_nodes formula nodes, drawing
    variables from the fixed pool v1..v<max_vars>.

    Deterministic and duplicate-free, ordered by (size, structural order).
    Alpha-variants are enumerated separately; the pool bounds how many
    distinct variable names may occur.
    """
    if max_nodes < 1 or max_vars < 0:
        raise ValueError("max_nodes must be >= 1 and max_vars >= 0")
    pool = tuple(f"v{i}" for i in range(1, max_vars + 1))
    if any(sig.arity(v) is not None or sig.has_constant(v) for v in pool):
        pool = tuple(f"_v{i}" for i in range(1, max_vars + 1))
    terms = tuple(Var(v) for v in pool) + tuple(Const(c) for c in sig.constants)

    # by_size[s] maps a free-variable set to the formulas of size s having
    # exactly that free set; entries with no room left for binders are pruned
    by_size: list[dict[frozenset[str], list[Formula]]] = [dict() for _ in range(max_nodes + 1)]

    def put(s: int, fvs: frozenset[str], f: Formula):
        if s + len(fvs) <= max_nodes:
            by_size[s].setdefault(fvs, []).append(f)

    put(1, frozenset(), Bottom())
    put(1, frozenset(), Top())
    for pred, arity in sig.predicates:
        for args in itertools.product(terms, repeat=arity):
            fvs = frozenset(t.name for t in args if isinstance(t, Var))
            put(1, fvs, Atom(pred, args))

    for s in range(1, max_nodes + 1):
        if s > 1:
            for fvs, bodies in by_size[s - 1].items():
                for x in pool:
                    nf = fvs - {x}
                    for body in bodies:
                        put(s, nf, Forall(x, body))
                        put(s, nf, Exists(x, body))
            for sl in range(1, s - 1):
                sr = s - 1 - sl
                for fvl, lefts in by_size[sl].items():
                    for fvr, rights in by_size[sr].items():
                        nf = fvl | fvr
                        if s + len(nf) > max_nodes:
                            continue
                        for left in lefts:
                            for right in rights:
                                for op in BINARY:
                                    put(s, nf, op(left, right))
        yield from sorted(by_size[s].get(frozenset(), ()), key=sort_key)


# ---------------------------------------------------------------------------
# the fixed counterexample pair


def mints_formulas() -> tuple[Formula, Formula]:
    """The implication whose interpolant hunt this library mechanises:
    phi = forall x exists y (P(y) & (Q(y) -> R(x))) & ~forall x R(x),
    psi = forall x (P(x) -> (Q(x) \\/ S)) -> S.
    """
    x, y = Var("x"), Var("y")
    phi = And(
        Forall("x", Exists("y", And(Atom("P", (y,)), Implies(Atom("Q", (y,)), Atom("R", (x,)))))),
        neg(Forall("x", Atom("R", (x,)))),
    )
    psi = Implies(
        Forall("x", Implies(Atom("P", (x,)), Or(Atom("Q", (x,)), Atom("S")))),
        Atom("S"),
    )
    return phi, psi


# ---------------------------------------------------------------------------
# random generation (test corpora and the fuzz command)


def random_formula(sig: Signature, max_nodes: int, rng: random.Random,
                   scope: tuple[str, ...] = (), free_pool: tuple[str, ...] = ()) -> Formula:
    """A random formula of at most max_nodes nodes.

    Variables come from `scope` (in enclosing binders) or `free_pool`
    (allowed to stay free).  Atom arguments prefer variables when available.
    """
    terms = ([Var(v) for v in scope + free_pool]
             + [Const(c) for c in sig.constants])
    leaves: list[Formula] = [Bottom(), Top()]
    for pred, arity in sig.predicates:
        if arity == 0:
            leaves.append(Atom(pred, ()))
        elif terms:
            args = tuple(rng.choice(terms) for _ in range(arity))
            leaves.append(Atom(pred, args))
    if max_nodes <= 1:
        return rng.choice(leaves)
    roll = rng.random()
    if roll < 0.25 or (roll >= 0.55 and max_nodes < 3):
        return rng.choice(leaves)
    if roll < 0.55:
        x = f"x{rng.randrange(4)}"
        body = random_formula(sig, max_nodes - 1, rng, scope + (x,), free_pool)
        return rng.choice((Forall, Exists))(x, body)
    budget = max_nodes - 1
    split = rng.randint(1, budget - 1)
    left = random_formula(sig, split, rng, scope, free_pool)
    right = random_formula(sig, budget - split, rng, scope, free_pool)
    return rng.choice(BINARY)(left, right)


def random_sentence(sig: Signature, max_nodes: int, rng: random.Random) -> Formula:
    return random_formula(sig, max_nodes, rng)
