"""Finite constant-domain Kripke models and the forcing relation.

A model carries a preorder on worlds, one shared domain, and a monotone
valuation.  The accessibility relation is closed reflexively-transitively
on construction; monotonicity is *not* repaired silently — `validate_model`
reports breaches with witnesses.

Two clause sets are supported for the arrow connectives.  Under
``standard`` (the default and the only mode used by the acceptance suite)
the second operand of an implication is evaluated at the quantified world;
``literal`` evaluates it at the current world instead, which breaks
persistence and exists only for comparison experiments.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping

import yaml

from .syntax import (
    Atom, Bottom, Top, And, Or, Implies, CoImplies, Forall, Exists,
    Var, Formula, Signature, free_vars, signature_of,
)

CLAUSE_SETS = ("standard", "literal")


class ModelError(ValueError):
    """Structurally malformed model data."""


def _closure(worlds: tuple[str, ...], pairs: Iterable[tuple[str, str]]) -> frozenset[tuple[str, str]]:
    succ: dict[str, set[str]] = {w: {w} for w in worlds}
    for a, b in pairs:
        succ[a].add(b)
    changed = True
    while changed:
        changed = False
        for w in worlds:
            extra = set()
            for v in succ[w]:
                extra |= succ[v]
            if not extra <= succ[w]:
                succ[w] |= extra
                changed = True
    return frozenset((w, v) for w in worlds for v in succ[w])


class FiniteModel:
    """Immutable finite Kripke model with one constant domain.

    Domain elements act as constants naming themselves; declared signature
    constants must therefore be domain elements.
    """

    def __init__(self, worlds: Iterable[str], order: Iterable[tuple[str, str]],
                 domain: Iterable[str], valuation: Mapping, signature: Signature):
        self.worlds: tuple[str, ...] = tuple(sorted(set(worlds)))
        self.domain: tuple[str, ...] = tuple(sorted(set(domain)))
        self.signature = signature
        if not self.worlds:
            raise ModelError("a model needs at least one world")
        if not self.domain:
            raise ModelError("a model needs a nonempty domain")
        if set(self.worlds) & set(self.domain):
            raise ModelError("worlds and domain elements must be disjoint")
        missing = [c for c in signature.constants if c not in self.domain]
        if missing:
            raise ModelError(f"constants must name domain elements: {missing}")
        order = list(order)
        for a, b in order:
            if a not in self.worlds or b not in self.worlds:
                raise ModelError(f"order pair ({a},{b}) mentions unknown world")
        self.order: frozenset[tuple[str, str]] = _closure(self.worlds, order)
        val: dict[tuple[str, str], frozenset[tuple[str, ...]]] = {}
        for (pred, ar) in signature.predicates:
            for w in self.worlds:
                val[(pred, w)] = frozenset()
        for (pred, w), tuples in valuation.items():
            ar = signature.arity(pred)
            if ar is None:
                raise ModelError(f"valuation mentions undeclared predicate {pred!r}")
            if w not in self.worlds:
                raise ModelError(f"valuation mentions unknown world {w!r}")
            tset = set()
            for tup in tuples:
                tup = tuple(tup)
                if len(tup) != ar:
                    raise ModelError(f"{pred} has arity {ar}, got tuple {tup}")
                if not set(tup) <= set(self.domain):
                    raise ModelError(f"tuple {tup} for {pred} leaves the domain")
                tset.add(tup)
            val[(pred, w)] = frozenset(tset)
        self.valuation = val
        self.successors: dict[str, tuple[str, ...]] = {
            w: tuple(v for v in self.worlds if (w, v) in self.order) for w in self.worlds}
        self.predecessors: dict[str, tuple[str, ...]] = {
            w: tuple(v for v in self.worlds if (v, w) in self.order) for w in self.worlds}

    def tuples(self, pred: str, world: str) -> frozenset[tuple[str, ...]]:
        return self.valuation[(pred, world)]

    def __repr__(self) -> str:
        return f"FiniteModel(worlds={self.worlds}, domain={self.domain})"


@dataclass(frozen=True)
class PointedModel:
    model: FiniteModel
    world: str

    def __post_init__(self):
        if self.world not in self.model.worlds:
            raise ModelError(f"unknown world {self.world!r}")


@dataclass(frozen=True)
class Violation:
    kind: str  # "reflexivity" | "transitivity" | "monotonicity"
    witness: tuple

    def __str__(self) -> str:
        return f"{self.kind} violated at {self.witness}"


@dataclass
class ValidationReport:
    violations: list[Violation]

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        if self.ok:
            return "model ok"
        return "\n".join(str(v) for v in self.violations)


def validate_model(m: FiniteModel) -> ValidationReport:
    """Diagnose every preorder and monotonicity breach with a witness."""
    out: list[Violation] = []
    for w in m.worlds:
        if (w, w) not in m.order:
            out.append(Violation("reflexivity", (w,)))
    for a, b in sorted(m.order):
        for c in m.successors[b]:
            if (a, c) not in m.order:
                out.append(Violation("transitivity", (a, b, c)))
    for pred, _ in m.signature.predicates:
        for w in m.worlds:
            for v in m.successors[w]:
                missing = m.tuples(pred, w) - m.tuples(pred, v)
                if missing:
                    out.append(Violation("monotonicity", (pred, w, v, min(missing))))
    return ValidationReport(out)


# ---------------------------------------------------------------------------
# forcing


class ForcingEvaluator:
    """Forcing over one model with memoisation shared across formulas.

    The cache key restricts the environment to the subformula's free
    variables, so structurally shared subformulas are evaluated once per
    (world, relevant assignment).
    """

    def __init__(self, model: FiniteModel, clauses: str = "standard"):
        if clauses not in CLAUSE_SETS:
            raise ValueError(f"clauses must be one of {CLAUSE_SETS}")
        self.model = model
        self.literal = clauses == "literal"
        self._cache: dict = {}

    def forces(self, world: str, sentence: Formula) -> bool:
        check_sentence(self.model, sentence)
        return self._eval(world, sentence, {})

    def _eval(self, w: str, f: Formula, env: dict) -> bool:
        fv = free_vars(f)
        key = (f, w, tuple(sorted((x, env[x]) for x in fv)))
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        m = self.model
        if isinstance(f, Atom):
            args = tuple(env[t.name] if isinstance(t, Var) else t.name for t in f.args)
            res = args in m.tuples(f.pred, w)
        elif isinstance(f, Bottom):
            res = False
        elif isinstance(f, Top):
            res = True
        elif isinstance(f, And):
            res = self._eval(w, f.left, env) and self._eval(w, f.right, env)
        elif isinstance(f, Or):
            res = self._eval(w, f.left, env) or self._eval(w, f.right, env)
        elif isinstance(f, Implies):
            if self.literal:
                res = all(not self._eval(v, f.left, env) or self._eval(w, f.right, env)
                          for v in m.successors[w])
            else:
                res = all(not self._eval(v, f.left, env) or self._eval(v, f.right, env)
                          for v in m.successors[w])
        elif isinstance(f, CoImplies):
            if self.literal:
                res = any(self._eval(v, f.left, env) and not self._eval(w, f.right, env)
                          for v in m.predecessors[w])
            else:
                res = any(self._eval(v, f.left, env) and not self._eval(v, f.right, env)
                          for v in m.predecessors[w])
        elif isinstance(f, Forall):
            res = all(self._eval(w, f.body, {**env, f.var: d}) for d in m.domain)
        elif isinstance(f, Exists):
            res = any(self._eval(w, f.body, {**env, f.var: d}) for d in m.domain)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._cache[key] = res
        return res


def check_sentence(m: FiniteModel, f: Formula) -> None:
    """Reject non-sentences and symbols outside signature + domain."""
    fv = free_vars(f)
    if fv:
        raise ModelError(f"free variables present: {sorted(fv)}")
    sig = signature_of(f)
    for pred, ar in sig.predicates:
        if m.signature.arity(pred) != ar:
            raise ModelError(f"undeclared or mismatched predicate {pred}^{ar}")
    names = set(m.signature.constants) | set(m.domain)
    for c in sig.constants:
        if c not in names:
            raise ModelError(f"undeclared constant {c!r}")


def forces(pm: PointedModel, f: Formula, clauses: str = "standard") -> bool:
    return ForcingEvaluator(pm.model, clauses).forces(pm.world, f)


# ---------------------------------------------------------------------------
# classical oracle: a two-sorted translation evaluated brute-force

_W = "?w"  # world variable prefix in the translated form


def _translate(f: Formula, w: str, ctr: list[int], literal: bool):
    """Classical translation with explicit preorder atoms.  Nodes are plain
    tuples; world quantifiers range over all worlds with guards."""
    if isinstance(f, Atom):
        return ("val", f.pred, w, f.args)
    if isinstance(f, Bottom):
        return ("false",)
    if isinstance(f, Top):
        return ("true",)
    if isinstance(f, And):
        return ("and", _translate(f.left, w, ctr, literal), _translate(f.right, w, ctr, literal))
    if isinstance(f, Or):
        return ("or", _translate(f.left, w, ctr, literal), _translate(f.right, w, ctr, literal))
    if isinstance(f, Implies):
        ctr[0] += 1
        v = f"{_W}{ctr[0]}"
        body = ("or",
                ("not", _translate(f.left, v, ctr, literal)),
                _translate(f.right, w if literal else v, ctr, literal))
        return ("allw", v, ("or", ("not", ("prec", w, v)), body))
    if isinstance(f, CoImplies):
        ctr[0] += 1
        v = f"{_W}{ctr[0]}"
        body = ("and",
                _translate(f.left, v, ctr, literal),
                ("not", _translate(f.right, w if literal else v, ctr, literal)))
        return ("exw", v, ("and", ("prec", v, w), body))
    if isinstance(f, Forall):
        return ("alle", f.var, _translate(f.body, w, ctr, literal))
    if isinstance(f, Exists):
        return ("exe", f.var, _translate(f.body, w, ctr, literal))
    raise TypeError(f"not a formula: {f!r}")


def _cl_eval(node, m: FiniteModel, wenv: dict, eenv: dict, memo: dict) -> bool:
    tag = node[0]
    if tag == "true":
        return True
    if tag == "false":
        return False
    if tag == "prec":
        return (wenv[node[1]], wenv[node[2]]) in m.order
    key = (id(node),
           tuple(sorted((k, v) for k, v in wenv.items())),
           tuple(sorted((k, v) for k, v in eenv.items())))
    hit = memo.get(key)
    if hit is not None:
        return hit
    if tag == "val":
        _, pred, wv, args = node
        tup = tuple(eenv[t.name] if isinstance(t, Var) else t.name for t in args)
        res = tup in m.tuples(pred, wenv[wv])
    elif tag == "not":
        res = not _cl_eval(node[1], m, wenv, eenv, memo)
    elif tag == "and":
        res = _cl_eval(node[1], m, wenv, eenv, memo) and _cl_eval(node[2], m, wenv, eenv, memo)
    elif tag == "or":
        res = _cl_eval(node[1], m, wenv, eenv, memo) or _cl_eval(node[2], m, wenv, eenv, memo)
    elif tag == "allw":
        res = all(_cl_eval(node[2], m, {**wenv, node[1]: u}, eenv, memo) for u in m.worlds)
    elif tag == "exw":
        res = any(_cl_eval(node[2], m, {**wenv, node[1]: u}, eenv, memo) for u in m.worlds)
    elif tag == "alle":
        res = all(_cl_eval(node[2], m, wenv, {**eenv, node[1]: d}, memo) for d in m.domain)
    elif tag == "exe":
        res = any(_cl_eval(node[2], m, wenv, {**eenv, node[1]: d}, memo) for d in m.domain)
    else:
        raise AssertionError(node)
    memo[key] = res
    return res


def classical_oracle_eval(pm: PointedModel, f: Formula, clauses: str = "standard") -> bool:
    """Evaluate the two-sorted classical translation by brute force.

    Independent of `forces`: world quantifiers sweep the whole world set
    with explicit preorder guards.  Contract: agrees with `forces`.
    """
    if clauses not in CLAUSE_SETS:
        raise ValueError(f"clauses must be one of {CLAUSE_SETS}")
    check_sentence(pm.model, f)
    node = _translate(f, f"{_W}0", [0], clauses == "literal")
    return _cl_eval(node, pm.model, {f"{_W}0": pm.world}, {}, {})


# ---------------------------------------------------------------------------
# reducts and expansions


def reduct(m: FiniteModel, sig: Signature) -> FiniteModel:
    """Drop valuations outside sig; forcing of sig-sentences is unchanged."""
    if not m.signature.extends(sig):
        raise ModelError("not a subsignature of the model's signature")
    val = {(p, w): m.tuples(p, w) for (p, _a) in sig.predicates for w in m.worlds}
    return FiniteModel(m.worlds, m.order, m.domain, val, sig)


def expand(m: FiniteModel, new_preds: Mapping[str, tuple[int, Mapping[str, Iterable]]]) -> FiniteModel:
    """Add fresh predicates with monotone world-indexed extensions.

    new_preds maps a name to (arity, world -> iterable of tuples); arity-0
    extensions may use truthy values instead of tuple sets.
    """
    preds = dict(m.signature.predicates)
    val = dict(m.valuation)
    for name, (arity, ext) in new_preds.items():
        if m.signature.arity(name) is not None or m.signature.has_constant(name):
            raise ModelError(f"{name!r} already declared")
        preds[name] = arity
        table = {}
        for w in m.worlds:
            raw = ext[w] if not callable(ext) else ext(w)
            if arity == 0 and isinstance(raw, (bool, int)):
                tuples = frozenset({()} if raw else set())
            else:
                tuples = frozenset(tuple(t) for t in raw)
            table[(name, w)] = tuples
        for w in m.worlds:
            for v in m.successors[w]:
                if not table[(name, w)] <= table[(name, v)]:
                    raise ModelError(
                        f"non-monotone extension for {name} at ({w},{v})")
        val.update(table)
    sig = Signature.make(preds, m.signature.constants)
    return FiniteModel(m.worlds, m.order, m.domain, val, sig)


# ---------------------------------------------------------------------------
# random models


def random_model(sig: Signature, max_worlds: int, max_domain: int, seed: int) -> FiniteModel:
    """Seed-deterministic valid model: random generator preorder closed
    reflexively-transitively, random valuation closed upward."""
    if max_worlds < 1 or max_domain < 1:
        raise ValueError("bounds must be >= 1")
    rng = random.Random(seed)
    n_worlds = rng.randint(1, max_worlds)
    n_dom = max(rng.randint(1, max_domain), len(sig.constants))
    worlds = tuple(f"w{i}" for i in range(n_worlds))
    domain = sorted(set(sig.constants) | {f"d{i}" for i in range(n_dom - len(sig.constants))})
    pairs = [(a, b) for a in worlds for b in worlds
             if a != b and rng.random() < 0.4]
    order = _closure(worlds, pairs)
    succ = {w: [v for v in worlds if (w, v) in order] for w in worlds}
    val: dict[tuple[str, str], set] = {(p, w): set() for p, _ in sig.predicates for w in worlds}
    for pred, arity in sig.predicates:
        for w in worlds:
            for tup in itertools.product(domain, repeat=arity):
                if rng.random() < 0.3:
                    for v in succ[w]:  # close upward to restore monotonicity
                        val[(pred, v)].add(tup)
    return FiniteModel(worlds, order, domain, val, sig)


# ---------------------------------------------------------------------------
# model files

_TOP_FIELDS = {"worlds", "order", "domain", "signature", "valuation"}
_SIG_FIELDS = {"preds", "consts"}
_VAL_FIELDS = {"pred", "world", "tuples"}


def parse_model_document(text: str) -> FiniteModel:
    """Parse the documented YAML model format, rejecting unknown fields."""
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as e:
        raise ModelError(f"not valid YAML: {e}") from e
    if not isinstance(doc, dict):
        raise ModelError("model document must be a mapping")
    unknown = set(doc) - _TOP_FIELDS
    if unknown:
        raise ModelError(f"unknown field(s): {sorted(unknown)}")
    for field in ("worlds", "domain", "signature"):
        if field not in doc:
            raise ModelError(f"missing field {field!r}")
    sig_doc = doc["signature"]
    if not isinstance(sig_doc, dict) or set(sig_doc) - _SIG_FIELDS:
        raise ModelError("signature must be a mapping with fields preds/consts")
    sig = Signature.make(sig_doc.get("preds") or {}, sig_doc.get("consts") or ())
    worlds = [str(w) for w in doc["worlds"]]
    domain = [str(d) for d in doc["domain"]]
    order = []
    for pair in doc.get("order") or []:
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ModelError(f"order entries must be pairs, got {pair!r}")
        order.append((str(pair[0]), str(pair[1])))
    val: dict[tuple[str, str], list] = {}
    for entry in doc.get("valuation") or []:
        if not isinstance(entry, dict) or set(entry) - _VAL_FIELDS:
            raise ModelError(f"bad valuation entry {entry!r}")
        pred, world = str(entry["pred"]), str(entry["world"])
        raw = entry.get("tuples", [])
        tuples: list[tuple[str, ...]] = []
        if raw is True:
            tuples = [()]  # arity-0 predicate holds at the world
        elif raw:
            for tup in raw:
                if isinstance(tup, (list, tuple)):
                    tuples.append(tuple(str(x) for x in tup))
                else:
                    tuples.append((str(tup),))
        val.setdefault((pred, world), []).extend(tuples)
    return FiniteModel(worlds, order, domain, val, sig)


def load_model(path: str) -> FiniteModel:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_model_document(fh.read())
