"""Bi-asimulation machinery over finite models.

The six conditions (type, atom, back, forth, left, right) are checked
exactly on a given relation; a bounded game computes the greatest
shrinking family of relations by backward induction; preservation and
separation turn relations into statements about formulas.

Rank counts the nesting of implication, co-implication and the two
quantifiers (conjunction and disjunction are free): each such connective
consumes one game round, so formulas of rank r with n instantiated free
variables are preserved along pairs certified at depth r + n.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from .kripke import FiniteModel, ForcingEvaluator, PointedModel
from .syntax import (
    And, Atom, Bottom, CoImplies, Const, Exists, Forall, Formula, Implies,
    Or, Signature, Top, Var, free_vars, signature_of, substitute,
)

BINARY_OPS = (And, Or, Implies, CoImplies)


@lru_cache(maxsize=None)
def rank(f: Formula) -> int:
    """Nesting depth of ->, -<, forall, exists."""
    if isinstance(f, (Atom, Bottom, Top)):
        return 0
    if isinstance(f, (And, Or)):
        return max(rank(f.left), rank(f.right))
    if isinstance(f, (Implies, CoImplies)):
        return 1 + max(rank(f.left), rank(f.right))
    return 1 + rank(f.body)


@lru_cache(maxsize=None)
def quant_depth(f: Formula) -> int:
    """Nesting depth of quantifiers alone (element moves consumed)."""
    if isinstance(f, (Atom, Bottom, Top)):
        return 0
    if isinstance(f, BINARY_OPS):
        return max(quant_depth(f.left), quant_depth(f.right))
    return 1 + quant_depth(f.body)


@dataclass(frozen=True)
class PointedTuple:
    side: int
    world: str
    elems: tuple[str, ...] = ()


@dataclass(frozen=True)
class AsimRelation:
    pairs: frozenset[tuple[PointedTuple, PointedTuple]]
    max_len: int
    depth: int
    fixpoint: bool = False

    def __post_init__(self):
        for a, b in self.pairs:
            if len(a.elems) != len(b.elems):
                raise ValueError(f"length mismatch in pair {a} ~ {b}")
            if len(a.elems) > self.max_len:
                raise ValueError(f"tuple longer than max_len in {a}")


@dataclass
class CheckReport:
    violations: list[tuple[str, tuple]]
    bounded: int  # left/right demands skipped at the length cap

    @property
    def ok(self) -> bool:
        return not self.violations

    def render(self) -> str:
        lines = [f"{cond} violated: {witness}" for cond, witness in self.violations]
        if not lines:
            lines.append("relation ok")
        if self.bounded:
            lines.append(f"bounded: {self.bounded} left/right demands at the length cap")
        return "\n".join(lines)


def _model_of(side: int, m0: FiniteModel, m1: FiniteModel) -> FiniteModel:
    return m0 if side == 0 else m1


def _atom_respects(ma: FiniteModel, mb: FiniteModel, a: PointedTuple, b: PointedTuple) -> tuple | None:
    """None if (atom) holds, else a witness (pred, indices)."""
    n = len(a.elems)
    for pred, arity in ma.signature.predicates:
        va, vb = ma.tuples(pred, a.world), mb.tuples(pred, b.world)
        for idx in itertools.product(range(n), repeat=arity):
            if tuple(a.elems[j] for j in idx) in va and tuple(b.elems[j] for j in idx) not in vb:
                return (pred, idx)
    return None


def check_bi_asimulation(m0: FiniteModel, m1: FiniteModel, rel: AsimRelation) -> CheckReport:
    """Verify every condition on the given relation, with witnesses.

    Left/right demands at tuples of maximal length cannot be met inside a
    length-capped relation; they are counted as bounded, not violated.
    """
    if m0.signature != m1.signature:
        raise ValueError("models must share a signature")
    if not rel.pairs:
        raise ValueError("relation must be nonempty")
    violations: list[tuple[str, tuple]] = []
    bounded = 0
    pairs = rel.pairs
    for a, b in sorted(pairs, key=lambda p: (p[0].side, p[0].world, p[0].elems,
                                             p[1].world, p[1].elems)):
        ma, mb = _model_of(a.side, m0, m1), _model_of(b.side, m0, m1)
        if a.side == b.side or a.world not in ma.worlds or b.world not in mb.worlds \
                or not set(a.elems) <= set(ma.domain) or not set(b.elems) <= set(mb.domain):
            violations.append(("type", (a, b)))
            continue
        witness = _atom_respects(ma, mb, a, b)
        if witness is not None:
            violations.append(("atom", (a, b) + witness))
        for v0 in mb.successors[b.world]:
            if not any((PointedTuple(a.side, w0, a.elems), PointedTuple(b.side, v0, b.elems)) in pairs
                       and (PointedTuple(b.side, v0, b.elems), PointedTuple(a.side, w0, a.elems)) in pairs
                       for w0 in ma.successors[a.world]):
                violations.append(("back", (a, b, v0)))
        for w0 in ma.predecessors[a.world]:
            if not any((PointedTuple(a.side, w0, a.elems), PointedTuple(b.side, v0, b.elems)) in pairs
                       and (PointedTuple(b.side, v0, b.elems), PointedTuple(a.side, w0, a.elems)) in pairs
                       for v0 in mb.predecessors[b.world]):
                violations.append(("forth", (a, b, w0)))
        if len(a.elems) >= rel.max_len:
            bounded += 1
            continue
        for d in mb.domain:
            if not any((PointedTuple(a.side, a.world, a.elems + (e,)),
                        PointedTuple(b.side, b.world, b.elems + (d,))) in pairs
                       for e in ma.domain):
                violations.append(("left", (a, b, d)))
        for e in ma.domain:
            if not any((PointedTuple(a.side, a.world, a.elems + (e,)),
                        PointedTuple(b.side, b.world, b.elems + (d,))) in pairs
                       for d in mb.domain):
                violations.append(("right", (a, b, e)))
    return CheckReport(violations, bounded)


def _pair_universe(m0: FiniteModel, m1: FiniteModel, max_len: int):
    def tuples_of(m: FiniteModel, n: int):
        return itertools.product(m.domain, repeat=n)

    for n in range(max_len + 1):
        for (i, ma, mb) in ((0, m0, m1), (1, m1, m0)):
            for w in ma.worlds:
                for v in mb.worlds:
                    for ae in tuples_of(ma, n):
                        for be in tuples_of(mb, n):
                            yield (PointedTuple(i, w, ae), PointedTuple(1 - i, v, be))


def bounded_game_relation(m0: FiniteModel, m1: FiniteModel, rounds: int,
                          max_len: int) -> AsimRelation:
    """A_rounds of the shrinking family: A_0 keeps the atom-respecting
    pairs; each round keeps a pair iff its back/forth demands (with both
    orientations) and, below the length cap, its left/right demands can be
    met inside the previous round's relation."""
    if rounds < 0 or max_len < 0:
        raise ValueError("rounds and max_len must be >= 0")
    rel, _ = _frontier(m0, m1, rounds, max_len, to_fixpoint=False)
    return AsimRelation(frozenset(rel), max_len, rounds)


def game_fixpoint(m0: FiniteModel, m1: FiniteModel, max_len: int) -> AsimRelation:
    """Iterate the game to stability: the greatest length-capped relation
    whose pairs meet all demands inside the relation itself.  The reported
    depth is the number of rounds the iteration took."""
    rel, rounds = _frontier(m0, m1, None, max_len, to_fixpoint=True)
    return AsimRelation(frozenset(rel), max_len, rounds, fixpoint=True)


def _frontier(m0, m1, rounds, max_len, to_fixpoint):
    if m0.signature != m1.signature:
        raise ValueError("models must share a signature")
    current = set()
    for a, b in _pair_universe(m0, m1, max_len):
        ma, mb = _model_of(a.side, m0, m1), _model_of(b.side, m0, m1)
        if _atom_respects(ma, mb, a, b) is None:
            current.add((a, b))
    r = 0
    while to_fixpoint or r < rounds:
        nxt = {pair for pair in current if _demands_met(pair, current, m0, m1, max_len)}
        r += 1
        if nxt == current:
            if to_fixpoint:
                return nxt, r
            current = nxt
            continue
        current = nxt
        if to_fixpoint and not current:
            return current, r
    return current, r


def _demands_met(pair, prev, m0, m1, max_len) -> bool:
    a, b = pair
    ma, mb = _model_of(a.side, m0, m1), _model_of(b.side, m0, m1)
    for v0 in mb.successors[b.world]:
        if not any((PointedTuple(a.side, w0, a.elems), PointedTuple(b.side, v0, b.elems)) in prev
                   and (PointedTuple(b.side, v0, b.elems), PointedTuple(a.side, w0, a.elems)) in prev
                   for w0 in ma.successors[a.world]):
            return False
    for w0 in ma.predecessors[a.world]:
        if not any((PointedTuple(a.side, w0, a.elems), PointedTuple(b.side, v0, b.elems)) in prev
                   and (PointedTuple(b.side, v0, b.elems), PointedTuple(a.side, w0, a.elems)) in prev
                   for v0 in mb.predecessors[b.world]):
            return False
    if len(a.elems) < max_len:
        for d in mb.domain:
            if not any((PointedTuple(a.side, a.world, a.elems + (e,)),
                        PointedTuple(b.side, b.world, b.elems + (d,))) in prev
                       for e in ma.domain):
                return False
        for e in ma.domain:
            if not any((PointedTuple(a.side, a.world, a.elems + (e,)),
                        PointedTuple(b.side, b.world, b.elems + (d,))) in prev
                       for d in mb.domain):
                return False
    return True


# ---------------------------------------------------------------------------
# preservation


class DepthError(ValueError):
    """Formula rank exceeds what the relation certifies."""


@dataclass
class PreservationReport:
    checked: int
    violations: list[tuple]  # (pair, formula)

    @property
    def ok(self) -> bool:
        return not self.violations


def preservation_test(m0: FiniteModel, m1: FiniteModel, rel: AsimRelation,
                      sample: Iterable[Formula], rank_bound: int) -> PreservationReport:
    """For every related pair and sampled formula of matching free
    variables: forcing on the first side implies forcing on the second.

    A formula with free variables among v1..vn is tested on pairs of tuple
    length n when rank + n stays within the certified depth and the length
    cap leaves room for its quantifier nesting.
    """
    if not rel.fixpoint and rank_bound > rel.depth:
        raise DepthError(f"rank bound {rank_bound} exceeds relation depth {rel.depth}")
    ev = {0: ForcingEvaluator(m0), 1: ForcingEvaluator(m1)}
    models = {0: m0, 1: m1}
    sample = list(sample)
    checked = 0
    violations = []
    for a, b in rel.pairs:
        n = len(a.elems)
        pool = tuple(f"v{i}" for i in range(1, n + 1))
        for f in sample:
            r = rank(f)
            if r > rank_bound or not free_vars(f) <= set(pool):
                continue
            if not rel.fixpoint and r + n > rel.depth:
                continue
            if quant_depth(f) + n > rel.max_len:
                continue
            fa = substitute(f, dict(zip(pool, a.elems)))
            fb = substitute(f, dict(zip(pool, b.elems)))
            checked += 1
            if ev[a.side].forces(a.world, fa) and not ev[b.side].forces(b.world, fb):
                violations.append(((a, b), f))
    return PreservationReport(checked, violations)


def separation_scan(pm0: PointedModel, pm1: PointedModel,
                    candidates: Iterable[Formula], rank_cap: int) -> list[Formula]:
    """Candidates of rank within the cap that the first pointed model
    forces and the second refutes."""
    shared = shared_signature(pm0.model, pm1.model)
    ev0, ev1 = ForcingEvaluator(pm0.model), ForcingEvaluator(pm1.model)
    out = []
    for f in candidates:
        if not shared.extends(signature_of(f)):
            raise ValueError(f"candidate outside the shared signature: {f}")
        if rank(f) > rank_cap:
            continue
        if ev0.forces(pm0.world, f) and not ev1.forces(pm1.world, f):
            out.append(f)
    return out


def shared_signature(m0: FiniteModel, m1: FiniteModel) -> Signature:
    preds = {p: a for p, a in m0.signature.predicates if m1.signature.arity(p) == a}
    consts = set(m0.signature.constants) & set(m1.signature.constants)
    return Signature.make(preds, consts)


# ---------------------------------------------------------------------------
# exhaustive separator search by semantic equivalence classes
#
# Forcing of a compound formula at (world, assignment) is a function of the
# component forcing tables, so formulas can be explored as equivalence
# classes of (truth table, free-variable set) instead of one by one.  The
# search decides exactly whether separation_scan over the full enumeration
# (same node budget, rank cap and variable pool) would return anything, and
# reconstructs a witness when it would.


class _Side:
    def __init__(self, m: FiniteModel, k: int):
        self.m = m
        self.worlds = list(m.worlds)
        self.windex = {w: i for i, w in enumerate(self.worlds)}
        self.dom = list(m.domain)
        self.k = k
        self.envs = len(self.dom) ** k if k else 1
        self.full = (1 << self.envs) - 1
        self.succ = [[self.windex[v] for v in m.successors[w]] for w in self.worlds]
        self.pred = [[self.windex[v] for v in m.predecessors[w]] for w in self.worlds]
        # axis_sets[j][i] = env indices agreeing with env i off axis j
        self.axis_sets = []
        d = len(self.dom)
        for j in range(k):
            stride = d ** j
            table = []
            for i in range(self.envs):
                base = i - ((i // stride) % d) * stride
                table.append([base + e * stride for e in range(d)])
            self.axis_sets.append(table)

    def env_elem(self, i: int, axis: int) -> str:
        return self.dom[(i // (len(self.dom) ** axis)) % len(self.dom)]

    def atom_masks(self, pred: str, args: tuple) -> list[int]:
        masks = []
        for w in self.worlds:
            val = self.m.tuples(pred, w)
            bits = 0
            for i in range(self.envs):
                tup = tuple(self.env_elem(i, a) if isinstance(a, int) else a for a in args)
                if tup in val:
                    bits |= 1 << i
            masks.append(bits)
        return masks


def _combine(side: _Side, op, fm: list[int], gm: list[int] | None) -> list[int]:
    full = side.full
    if op is And:
        return [a & b for a, b in zip(fm, gm)]
    if op is Or:
        return [a | b for a, b in zip(fm, gm)]
    if op is Implies:
        out = []
        for w in range(len(side.worlds)):
            acc = full
            for v in side.succ[w]:
                acc &= (full & ~fm[v]) | gm[v]
            out.append(acc)
        return out
    if op is CoImplies:
        out = []
        for w in range(len(side.worlds)):
            acc = 0
            for v in side.pred[w]:
                acc |= fm[v] & (full & ~gm[v])
            out.append(acc)
        return out
    raise AssertionError(op)


def _quantify(side: _Side, universal: bool, axis: int, fm: list[int]) -> list[int]:
    out = []
    for wbits in fm:
        bits = 0
        for i in range(side.envs):
            group = side.axis_sets[axis][i]
            vals = [(wbits >> g) & 1 for g in group]
            ok = all(vals) if universal else any(vals)
            if ok:
                bits |= 1 << i
        out.append(bits)
    return out


def exhaustive_separator_search(pm0: PointedModel, pm1: PointedModel,
                                max_nodes: int, rank_cap: int,
                                max_vars: int) -> Formula | None:
    """A sentence of at most max_nodes nodes and rank at most rank_cap over
    the shared signature (variable pool v1..v<max_vars>) forced by pm0 and
    refuted by pm1 — or None, certifying that no such sentence exists."""
    sig = shared_signature(pm0.model, pm1.model)
    pool = tuple(f"v{i}" for i in range(1, max_vars + 1))
    sides = (_Side(pm0.model, max_vars), _Side(pm1.model, max_vars))
    root = (sides[0].windex[pm0.world], sides[1].windex[pm1.world])

    # state: (footprint over both sides, frozen free-var index set)
    # best[state] = {rank: (size, recipe)} Pareto entries
    best: dict = {}
    entries_at: list[list] = [[] for _ in range(max_nodes + 1)]

    def footprint(masks0, masks1):
        return (tuple(masks0), tuple(masks1))

    def register(state, r, s, recipe, found: list):
        table = best.setdefault(state, {})
        for r2, (s2, _) in table.items():
            if r2 <= r and s2 <= s:
                return
        table[r] = (s, recipe)
        entries_at[s].append((state, r))
        fp, fvs = state
        if not fvs:
            if (fp[0][root[0]] & 1) and not (fp[1][root[1]] & 1):
                found.append((state, r))

    def build(state, r) -> Formula:
        _, recipe = best[state][r]
        tag = recipe[0]
        if tag == "leaf":
            return recipe[1]
        if tag == "quant":
            _, op, var, child = recipe
            return op(var, build(*child))
        _, op, c1, c2 = recipe
        return op(build(*c1), build(*c2))

    found: list = []
    # leaves
    leaves: list[tuple[Formula, tuple, frozenset]] = [
        (Bottom(), footprint([0] * len(sides[0].worlds), [0] * len(sides[1].worlds)), frozenset()),
        (Top(), footprint([sides[0].full] * len(sides[0].worlds),
                          [sides[1].full] * len(sides[1].worlds)), frozenset()),
    ]
    for pred, arity in sig.predicates:
        arg_space: list = [list(range(max_vars)) + list(sig.constants)] * arity
        for args in itertools.product(*arg_space):
            fvs = frozenset(a for a in args if isinstance(a, int))
            if 1 + len(fvs) > max_nodes:
                continue
            masks = [side.atom_masks(pred, args) for side in sides]
            terms = tuple(Var(pool[a]) if isinstance(a, int) else Const(a) for a in args)
            leaves.append((Atom(pred, terms), footprint(*masks), fvs))
    for f, fp, fvs in leaves:
        register((fp, fvs), 0, 1, ("leaf", f), found)
    if found:
        return build(*found[0])

    for s in range(2, max_nodes + 1):
        candidates: dict = {}
        for (state, r) in entries_at[s - 1]:
            if r + 1 > rank_cap:
                continue
            fp, fvs = state
            for axis in range(max_vars):
                nf = fvs - {axis}
                if s + len(nf) > max_nodes:
                    continue
                for op, universal in ((Forall, True), (Exists, False)):
                    nfp = footprint(
                        _quantify(sides[0], universal, axis, list(fp[0])),
                        _quantify(sides[1], universal, axis, list(fp[1])))
                    key = ((nfp, nf), r + 1)
                    if key not in candidates:
                        candidates[key] = ("quant", op, pool[axis], (state, r))
        for sl in range(1, s - 1):
            sr = s - 1 - sl
            for (st1, r1) in entries_at[sl]:
                fp1, fv1 = st1
                for (st2, r2) in entries_at[sr]:
                    fp2, fv2 = st2
                    nf = fv1 | fv2
                    if s + len(nf) > max_nodes:
                        continue
                    base = max(r1, r2)
                    for op in BINARY_OPS:
                        r = base + 1 if op in (Implies, CoImplies) else base
                        if r > rank_cap:
                            continue
                        nfp = footprint(
                            _combine(sides[0], op, list(fp1[0]), list(fp2[0])),
                            _combine(sides[1], op, list(fp1[1]), list(fp2[1])))
                        key = ((nfp, nf), r)
                        if key not in candidates:
                            candidates[key] = ("binary", op, (st1, r1), (st2, r2))
        for (state, r), recipe in candidates.items():
            register(state, r, s, recipe, found)
        if found:
            return build(*found[0])
    return None


# ---------------------------------------------------------------------------
# relation dumps


def dump_relation(rel: AsimRelation) -> str:
    lines = []
    for a, b in sorted(rel.pairs, key=lambda p: (len(p[0].elems), p[0].side, p[0].world,
                                                 p[0].elems, p[1].world, p[1].elems)):
        lines.append(f"{a.side} {a.world} [{','.join(a.elems)}] ~ "
                     f"{b.side} {b.world} [{','.join(b.elems)}] @{rel.depth}")
    return "\n".join(lines) + "\n"


def parse_relation(text: str, max_len: int | None = None) -> AsimRelation:
    pairs = set()
    depth = 0
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        try:
            lhs, rhs = line.split("~")
            rhs, at = rhs.rsplit("@", 1)
            depth = int(at)
            pairs.add((_parse_pt(lhs), _parse_pt(rhs)))
        except Exception as e:
            raise ValueError(f"bad relation line {lineno}: {line!r}") from e
    if max_len is None:
        max_len = max((len(a.elems) for a, _ in pairs), default=0)
    return AsimRelation(frozenset(pairs), max_len, depth)


def _parse_pt(text: str) -> PointedTuple:
    side, world, bracket = text.strip().split(" ", 2)
    inner = bracket.strip()[1:-1]
    elems = tuple(x for x in inner.split(",") if x)
    return PointedTuple(int(side), world, elems)
