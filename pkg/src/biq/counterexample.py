"""The symbolic interpolation counterexample, exactly.

Worlds are quasi-partitions (A, B, C) of N: pairwise disjoint covers with
A and C infinite and B empty or infinite.  Two orders live on them: the
inclusion order (A grows, C shrinks) and its refinement with an
infinitude side condition tied to the distinguished world v.  Everything
is represented with ultimately periodic sets, so every claim below is
decided exactly, never sampled numerically; randomness only picks which
instances to decide.

The two fixed starting worlds are v = the three residue classes mod 3 and
w = (evens, empty, odds).  The predicate extensions are derived:
P covers A ∪ B and Q covers A.  The fresh-symbol valuations are sigma_1
(unary, via the surjection n -> 3n - 2 onto v's middle component) and the
sigma_2 bit (set strictly above w); both are monotone.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .upsets import EmptySetError, UPSet

V2_CLASS = UPSet.residue_class(1, 3)


class PreconditionError(ValueError):
    """Witness constructor invoked outside its contract."""


class SampleError(RuntimeError):
    """World sampling failed to satisfy its constraint within retry bounds."""


@dataclass(frozen=True)
class QuasiPartition:
    a: UPSet
    b: UPSet
    c: UPSet

    def components(self) -> tuple[UPSet, UPSet, UPSet]:
        return (self.a, self.b, self.c)

    def __str__(self) -> str:
        return f"({self.a}, {self.b}, {self.c})"


def is_quasi_partition(triple: tuple[UPSet, UPSet, UPSet]) -> bool:
    a, b, c = triple
    if not a.union(b).union(c).complement().is_empty:
        return False
    if not (a.isdisjoint(b) and a.isdisjoint(c) and b.isdisjoint(c)):
        return False
    if not (a.is_infinite and c.is_infinite):
        return False
    return b.is_empty or b.is_infinite


def base_worlds() -> tuple[QuasiPartition, QuasiPartition]:
    v = QuasiPartition(UPSet.residue_class(0, 3), UPSet.residue_class(1, 3),
                       UPSet.residue_class(2, 3))
    w = QuasiPartition(UPSet.residue_class(0, 2), UPSet.empty(),
                       UPSet.residue_class(1, 2))
    return v, w


BASE_V, BASE_W = base_worlds()


def extension(pred: str, p: QuasiPartition) -> UPSet:
    """The derived atom extensions: P holds on A ∪ B, Q holds on A."""
    if pred == "P":
        return p.a.union(p.b)
    if pred == "Q":
        return p.a
    raise KeyError(f"no derived extension for predicate {pred!r}")


@dataclass(frozen=True)
class OrderRelations:
    leq: bool
    strict: bool
    prec1: bool


def order_relations(p: QuasiPartition, q: QuasiPartition) -> OrderRelations:
    """Decide inclusion order, strictness and the refined order exactly."""
    leq = p.a.issubset(q.a) and q.c.issubset(p.c)
    strict = leq and p != q
    premise = (BASE_V.a.issubset(p.a) and p.c.issubset(BASE_V.c)
               and p.b.intersect(V2_CLASS).is_infinite)
    prec1 = leq and ((not premise) or q.b.intersect(V2_CLASS).is_infinite)
    return OrderRelations(leq, strict, prec1)


def sigma(p: QuasiPartition) -> tuple[UPSet, int]:
    """The fresh-symbol valuations: preimage of A under n -> 3n - 2, and
    the bit set exactly strictly above the base world w."""
    r_ext = p.a.affine_preimage(3, -2)
    rel = order_relations(BASE_W, p)
    s_bit = 1 if rel.strict else 0
    return r_ext, s_bit


# ---------------------------------------------------------------------------
# the typed relation on world-tuple pairs


@dataclass(frozen=True)
class RelatedTuplePair:
    left: tuple[QuasiPartition, tuple[int, ...]]
    right: tuple[QuasiPartition, tuple[int, ...]]


def asim_related(pair: RelatedTuplePair) -> bool:
    """Tuples correspond bijectively, A maps into D, B maps into D ∪ E."""
    (p, at), (q, bt) = pair.left, pair.right
    if len(at) != len(bt):
        raise ValueError(f"length mismatch: {at} vs {bt}")
    forward: dict[int, int] = {}
    backward: dict[int, int] = {}
    for a, b in zip(at, bt):
        if forward.setdefault(a, b) != b or backward.setdefault(b, a) != a:
            return False
    for a, b in zip(at, bt):
        if a in p.a and b not in q.a:
            return False
        if a in p.b and not (b in q.a or b in q.b):
            return False
    return True


def mutually_related(p: QuasiPartition, at: tuple[int, ...],
                     q: QuasiPartition, bt: tuple[int, ...]) -> bool:
    return (asim_related(RelatedTuplePair((p, at), (q, bt)))
            and asim_related(RelatedTuplePair((q, bt), (p, at))))


# ---------------------------------------------------------------------------
# world sampling


def sample_world(rng_seed: int, kind: str = "any",
                 anchor: QuasiPartition | None = None) -> QuasiPartition:
    """A seed-deterministic quasi-partition satisfying the constraint.

    kind: "any", "above_leq", "above_prec1" or "below_leq"; the latter
    three are relative to `anchor`.  Results are validated before return.
    """
    rng = random.Random(rng_seed)
    if kind == "any":
        return _sample_any(rng)
    if anchor is None:
        raise ValueError(f"kind {kind!r} needs an anchor world")
    if kind == "above_leq":
        return _sample_above(rng, anchor, want_prec1=False)
    if kind == "above_prec1":
        return _sample_above(rng, anchor, want_prec1=True)
    if kind == "below_leq":
        return _sample_below(rng, anchor)
    raise ValueError(f"unknown sampling kind {kind!r}")


def _sample_any(rng: random.Random, b_mode: str = "mixed",
                rich_a: bool = False) -> QuasiPartition:
    """Assign the residue classes mod 12 to components, then move a few
    elements around.  B gets whole classes or nothing, so the axioms hold
    by construction; the result is still validated."""
    for _ in range(64):
        classes = list(range(12))
        rng.shuffle(classes)
        want_b = {"mixed": rng.random() < 0.6, "empty": False, "infinite": True}[b_mode]
        n_a = rng.randint(1, 6)
        n_b = rng.randint(1, 4) if want_b else 0
        a_cls = classes[:n_a]
        b_cls = classes[n_a:n_a + n_b]
        c_cls = classes[n_a + n_b:]
        if rich_a:
            # force A to meet both residue classes 0 and 1 mod 3 infinitely
            for need in (0, 1):
                if not any(r % 3 == need for r in a_cls):
                    move = next(r for r in c_cls[:-1] if r % 3 == need) if \
                        any(r % 3 == need for r in c_cls[:-1]) else None
                    if move is None:
                        break
                    c_cls.remove(move)
                    a_cls.append(move)
        if not a_cls or not c_cls:
            continue
        union = lambda rs: _class_union(rs)
        p = QuasiPartition(union(a_cls), union(b_cls), union(c_cls))
        p = _finite_tweaks(rng, p)
        if is_quasi_partition(p.components()):
            if rich_a and not (p.a.intersect(UPSet.residue_class(0, 3)).is_infinite
                               and p.a.intersect(V2_CLASS).is_infinite):
                continue
            if b_mode == "empty" and not p.b.is_empty:
                continue
            if b_mode == "infinite" and not p.b.is_infinite:
                continue
            return p
    raise SampleError(f"could not sample a world (mode={b_mode})")


def _class_union(residues) -> UPSet:
    out = UPSet.empty()
    for r in residues:
        out = out.union(UPSet.residue_class(r, 12))
    return out


def _finite_tweaks(rng: random.Random, p: QuasiPartition) -> QuasiPartition:
    """Move up to three single elements; never into an empty middle."""
    comps = {"a": p.a, "b": p.b, "c": p.c}
    for _ in range(rng.randint(0, 3)):
        src, dst = rng.sample(("a", "b", "c"), 2)
        if comps[src].is_empty or (dst == "b" and comps["b"].is_empty):
            continue
        if src == "b" and not comps["b"].is_infinite:
            continue
        n = comps[src].random_element(rng, window=16)
        comps[src] = comps[src].difference(UPSet.from_elements({n}))
        comps[dst] = comps[dst].union(UPSet.from_elements({n}))
    return QuasiPartition(comps["a"], comps["b"], comps["c"])


def _step_up(rng: random.Random, p: QuasiPartition) -> QuasiPartition:
    """One inclusion-order extension step: A grows, C shrinks."""
    a, b, c = p.components()
    moves = []
    if b.is_infinite:
        moves += ["finite_b_to_a", "half_b_to_a", "all_b_to_a"]
    moves += ["finite_c_to_a", "half_c_to_a", "half_c_to_b"]
    if b.is_infinite:
        moves.append("finite_c_to_b")
    move = rng.choice(moves)
    if move == "finite_b_to_a":
        part = _finite_part(rng, b)
        return QuasiPartition(a.union(part), b.difference(part), c)
    if move == "half_b_to_a":
        b1, b2 = b.split_two_infinite()
        return QuasiPartition(a.union(b1), b2, c)
    if move == "all_b_to_a":
        return QuasiPartition(a.union(b), UPSet.empty(), c)
    if move == "finite_c_to_a":
        part = _finite_part(rng, c)
        return QuasiPartition(a.union(part), b, c.difference(part))
    if move == "half_c_to_a":
        c1, c2 = c.split_two_infinite()
        return QuasiPartition(a.union(c1), b, c2)
    if move == "half_c_to_b":
        c1, c2 = c.split_two_infinite()
        return QuasiPartition(a, b.union(c1), c2)
    part = _finite_part(rng, c)
    return QuasiPartition(a, b.union(part), c.difference(part))


def _step_down(rng: random.Random, p: QuasiPartition) -> QuasiPartition:
    """One inclusion-order restriction step: A shrinks, C grows."""
    a, b, c = p.components()
    moves = ["finite_a_to_c", "half_a_to_c", "half_a_to_b"]
    if b.is_infinite:
        moves += ["half_b_to_c", "all_b_to_c", "finite_b_to_c"]
    move = rng.choice(moves)
    if move == "finite_a_to_c":
        part = _finite_part(rng, a)
        return QuasiPartition(a.difference(part), b, c.union(part))
    if move == "half_a_to_c":
        a1, a2 = a.split_two_infinite()
        return QuasiPartition(a2, b, c.union(a1))
    if move == "half_a_to_b":
        a1, a2 = a.split_two_infinite()
        return QuasiPartition(a2, b.union(a1), c)
    if move == "half_b_to_c":
        b1, b2 = b.split_two_infinite()
        return QuasiPartition(a, b2, c.union(b1))
    if move == "all_b_to_c":
        return QuasiPartition(a, UPSet.empty(), c.union(b))
    part = _finite_part(rng, b)
    return QuasiPartition(a, b.difference(part), c.union(part))


def _finite_part(rng: random.Random, s: UPSet) -> UPSet:
    elems = {s.random_element(rng, window=16) for _ in range(rng.randint(1, 3))}
    return UPSet.from_elements(elems)


def _sample_above(rng: random.Random, anchor: QuasiPartition,
                  want_prec1: bool) -> QuasiPartition:
    for _ in range(40):
        q = anchor
        for _ in range(rng.randint(0, 3)):
            q = _step_up(rng, q)
        rel = order_relations(anchor, q)
        if is_quasi_partition(q.components()) and rel.leq and (rel.prec1 or not want_prec1):
            return q
    # moving finite parts of C into A never touches B, so the refined
    # order is preserved unconditionally
    part = _finite_part(rng, anchor.c)
    q = QuasiPartition(anchor.a.union(part), anchor.b, anchor.c.difference(part))
    rel = order_relations(anchor, q)
    if not (is_quasi_partition(q.components()) and rel.leq and rel.prec1):
        raise SampleError("fallback extension step failed")
    return q


def _sample_below(rng: random.Random, anchor: QuasiPartition) -> QuasiPartition:
    for _ in range(40):
        q = anchor
        for _ in range(rng.randint(0, 3)):
            q = _step_down(rng, q)
        if is_quasi_partition(q.components()) and order_relations(q, anchor).leq:
            return q
    raise SampleError("could not sample below the anchor")


def sample_related_tuples(rng: random.Random, p: QuasiPartition, q: QuasiPartition,
                          n: int, mutual: bool = False) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Equal-length tuples related in the typed sense (one-way, or both
    ways when mutual), mixing fresh picks with occasional repeats."""
    at: list[int] = []
    bt: list[int] = []
    used_a: set[int] = set()
    used_b: set[int] = set()
    for _ in range(n):
        if at and rng.random() < 0.15:
            i = rng.randrange(len(at))
            at.append(at[i])
            bt.append(bt[i])
            continue
        comp = rng.choice("abc")
        src = getattr(p, comp)
        if src.is_empty:
            comp = rng.choice("ac")
            src = getattr(p, comp)
        a_k = _fresh(src, used_a, rng)
        if mutual:
            target = getattr(q, comp)
        elif comp == "a":
            target = q.a
        elif comp == "b":
            target = q.a.union(q.b)
        else:
            target = UPSet.naturals()
        if target.is_empty:
            # mutual pick landed in an empty middle on the other side
            comp = "a"
            a_k = _fresh(p.a, used_a, rng)
            target = q.a
        b_k = _fresh(target, used_b, rng)
        used_a.add(a_k)
        used_b.add(b_k)
        at.append(a_k)
        bt.append(b_k)
    return tuple(at), tuple(bt)


def _fresh(s: UPSet, used: set[int], rng: random.Random) -> int:
    for x in s:
        if x not in used and rng.random() < 0.5:
            return x
    for x in s:
        if x not in used:
            return x
    raise EmptySetError("no fresh element available")


# ---------------------------------------------------------------------------
# witness constructors

CLAIM_NAMES = ("coverage", "all_infinite", "pairwise_disjoint", "world_membership",
               "order_extension", "v2_growth", "order_strong", "mutual_relation")


@dataclass
class WitnessReport:
    constructed: QuasiPartition
    case: int
    claims: dict[str, bool]
    steered_split: bool = False  # the empty-middle split avoided the middle class

    @property
    def all_pass(self) -> bool:
        return all(self.claims.values())

    def failed(self) -> list[str]:
        return [name for name, ok in self.claims.items() if not ok]


def _mapped(pairs: list[tuple[int, int]], s: UPSet) -> UPSet:
    """Image of the tuple positions lying in s, under the pair map."""
    return UPSet.from_elements(y for x, y in pairs if x in s)


def back_witness(p: QuasiPartition, at: tuple[int, ...], q: QuasiPartition,
                 bt: tuple[int, ...], succ: QuasiPartition) -> WitnessReport:
    """Answer a successor move above the far side: build the matching
    successor on the near side and decide all eight claims exactly.

    Case 1 extends each component by the pulled-back image of the far
    successor; Case 2 (empty middle) splits C minus the tuple into two
    infinite halves to feed the middle and last components.
    """
    if not asim_related(RelatedTuplePair((p, at), (q, bt))):
        raise PreconditionError("tuple pair is not related")
    if not order_relations(q, succ).leq:
        raise PreconditionError("succ does not extend the far world")
    pull = list(zip(bt, at))  # far element -> near element
    abar = UPSet.from_elements(at) if at else UPSet.empty()
    g, h, i = succ.components()
    if p.b.is_infinite:
        case = 1
        j_set = p.a.difference(abar).union(_mapped(pull, g))
        k_set = p.b.difference(abar).union(_mapped(pull, h))
        l_set = p.c.difference(abar).union(_mapped(pull, i))
    else:
        case = 2
        c1, c2 = p.c.difference(abar).split_two_infinite()
        j_set = p.a.difference(abar).union(_mapped(pull, g))
        k_set = c1.union(_mapped(pull, h))
        l_set = c2.union(_mapped(pull, i))
    new = QuasiPartition(j_set, k_set, l_set)
    claims = _witness_claims(new, anchor=p, far=succ, at=at, bt=bt,
                             v2_old=p.b, v2_new=k_set, toward=True)
    return WitnessReport(new, case, claims)


def forth_witness(p: QuasiPartition, at: tuple[int, ...], q: QuasiPartition,
                  bt: tuple[int, ...], pred: QuasiPartition) -> WitnessReport:
    """Answer a predecessor move below the near side: build the matching
    predecessor on the far side and decide all eight claims exactly.

    In Case 2 (empty far middle), when the far first component meets both
    of the base world's first two residue classes infinitely, the split is
    steered so the middle half avoids the distinguished class entirely.
    """
    if not asim_related(RelatedTuplePair((p, at), (q, bt))):
        raise PreconditionError("tuple pair is not related")
    if not order_relations(pred, p).leq:
        raise PreconditionError("pred does not restrict the near world")
    push = list(zip(at, bt))  # near element -> far element
    bbar = UPSet.from_elements(bt) if bt else UPSet.empty()
    j, k, l = pred.components()
    steered = False
    if q.b.is_infinite:
        case = 1
        g_set = q.a.difference(bbar).union(_mapped(push, j))
        h_set = q.b.difference(bbar).union(_mapped(push, k))
        i_set = q.c.difference(bbar).union(_mapped(push, l))
    else:
        case = 2
        d_rest = q.a.difference(bbar)
        v1_class = UPSet.residue_class(0, 3)
        if q.a.intersect(v1_class).is_infinite and q.a.intersect(V2_CLASS).is_infinite:
            steered = True
            part_v2 = d_rest.intersect(V2_CLASS)
            part_v1 = d_rest.intersect(v1_class)
            rest = d_rest.difference(V2_CLASS).difference(v1_class)
            if rest.is_infinite:
                r1, r2 = rest.split_two_infinite()
            else:
                r1, r2 = rest, UPSet.empty()
            d1 = part_v2.union(r1)
            d2 = part_v1.union(r2)
        else:
            d1, d2 = d_rest.split_two_infinite()
        g_set = d1.union(_mapped(push, j))
        h_set = d2.union(_mapped(push, k))
        i_set = q.c.difference(bbar).union(_mapped(push, l))
    new = QuasiPartition(g_set, h_set, i_set)
    claims = _witness_claims(new, anchor=q, far=pred, at=at, bt=bt,
                             v2_old=q.b, v2_new=h_set, toward=False)
    return WitnessReport(new, case, claims, steered_split=steered)


def _witness_claims(new: QuasiPartition, anchor: QuasiPartition,
                    far: QuasiPartition, at, bt, v2_old: UPSet,
                    v2_new: UPSet, toward: bool) -> dict[str, bool]:
    """The eight exact checks shared by both constructions.

    `toward` distinguishes the successor construction (anchor extends to
    the new world) from the predecessor one (new world extends to anchor).
    """
    a, b, c = new.components()
    claims: dict[str, bool] = {}
    claims["coverage"] = a.union(b).union(c).complement().is_empty
    claims["all_infinite"] = a.is_infinite and b.is_infinite and c.is_infinite
    claims["pairwise_disjoint"] = (a.isdisjoint(b) and a.isdisjoint(c)
                                   and b.isdisjoint(c))
    claims["world_membership"] = is_quasi_partition(new.components())
    lo, hi = (anchor, new) if toward else (new, anchor)
    rel = order_relations(lo, hi)
    claims["order_extension"] = rel.leq
    v_base = BASE_V
    if toward:
        premise = (v_base.a.issubset(anchor.a) and anchor.c.issubset(v_base.c)
                   and v2_old.intersect(V2_CLASS).is_infinite)
        claims["v2_growth"] = (not premise) or v2_new.intersect(V2_CLASS).is_infinite
    else:
        premise = (v_base.a.issubset(new.a) and new.c.issubset(v_base.c)
                   and v2_new.intersect(V2_CLASS).is_infinite)
        claims["v2_growth"] = (not premise) or v2_old.intersect(V2_CLASS).is_infinite
    claims["order_strong"] = rel.prec1
    if toward:
        claims["mutual_relation"] = mutually_related(new, at, far, bt)
    else:
        claims["mutual_relation"] = mutually_related(far, at, new, bt)
    return claims


def element_witness(direction: str, p: QuasiPartition, at: tuple[int, ...],
                    q: QuasiPartition, bt: tuple[int, ...],
                    new_elem: int) -> tuple[int, bool]:
    """Answer an element move: copy the partner at a repeated position,
    otherwise take the least admissible fresh element (from C minus the
    near tuple for a far move, from D minus the far tuple for a near one).
    Returns the partner and whether the extended tuples stay related."""
    if not asim_related(RelatedTuplePair((p, at), (q, bt))):
        raise PreconditionError("tuple pair is not related")
    if direction == "left":
        if new_elem in bt:
            partner = at[bt.index(new_elem)]
        else:
            pool = p.c.difference(UPSet.from_elements(at) if at else UPSet.empty())
            partner = pool.least()
        extended = RelatedTuplePair((p, at + (partner,)), (q, bt + (new_elem,)))
    elif direction == "right":
        if new_elem in at:
            partner = bt[at.index(new_elem)]
        else:
            pool = q.a.difference(UPSet.from_elements(bt) if bt else UPSet.empty())
            partner = pool.least()
        extended = RelatedTuplePair((p, at + (new_elem,)), (q, bt + (partner,)))
    else:
        raise ValueError(f"direction must be left or right, got {direction!r}")
    return partner, asim_related(extended)


# ---------------------------------------------------------------------------
# property campaigns


@dataclass
class PropertyResult:
    name: str
    samples: int
    failures: int
    first_counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failures == 0

    def render(self) -> str:
        line = f"PROPERTY {self.name} samples={self.samples} failures={self.failures}"
        if self.failures and self.first_counterexample:
            line += f" [{self.first_counterexample}]"
        return line


class _Campaign:
    def __init__(self, name: str):
        self.name = name
        self.samples = 0
        self.failures = 0
        self.first: str | None = None

    def record(self, ok: bool, detail: str = ""):
        self.samples += 1
        if not ok:
            self.failures += 1
            if self.first is None:
                self.first = detail

    def result(self) -> PropertyResult:
        return PropertyResult(self.name, self.samples, self.failures, self.first)


def check_phi_at_v(samples: int, rng_seed: int) -> list[PropertyResult]:
    """The constructive content of forcing the first target sentence at v:
    every refined successor leaves a hole in the fresh unary extension,
    and the witness chain P(f(n)), Q(f(n)) -> R(n) goes through."""
    rng = random.Random(rng_seed)
    refute = _Campaign("phi-forall-refuted-above-v")
    chain = _Campaign("phi-witness-chain")
    for _ in range(samples):
        q = _sample_above(rng, BASE_V, want_prec1=True)
        rel = order_relations(BASE_V, q)
        meet = q.b.intersect(V2_CLASS)
        ok = rel.prec1 and meet.is_infinite
        if ok:
            n = meet.random_element(rng, window=32)
            m = (n + 2) // 3
            r_ext, _ = sigma(q)
            ok = 3 * m - 2 == n and not r_ext.member(m)
        refute.record(ok, f"world={q}")

        n = rng.randint(1, 2000)
        fn = 3 * n - 2
        ok = fn in extension("P", BASE_V)
        q2 = _sample_above(rng, BASE_V, want_prec1=True)
        # force the witness element into the first component
        q3 = QuasiPartition(q2.a.union(UPSet.from_elements({fn})),
                            q2.b.difference(UPSet.from_elements({fn})),
                            q2.c.difference(UPSet.from_elements({fn})))
        ok = ok and is_quasi_partition(q3.components())
        ok = ok and order_relations(BASE_V, q3).prec1
        if fn in q2.a:
            r_ext, _ = sigma(q2)
            ok = ok and r_ext.member(n)
        r_ext3, _ = sigma(q3)
        ok = ok and r_ext3.member(n)
        chain.record(ok, f"n={n} world={q3}")
    base = _Campaign("phi-sigma-empty-at-v")
    r_v, _ = sigma(BASE_V)
    base.record(r_v.is_empty, f"sigma_1(v)={r_v}")
    return [refute.result(), chain.result(), base.result()]


def check_psi_fails_at_w(samples: int, rng_seed: int) -> list[PropertyResult]:
    """The constructive content of refuting the second target sentence at
    w: the bit is off at w, and every P-instance above w is answered by Q
    at w itself or by the bit strictly above."""
    rng = random.Random(rng_seed)
    bit = _Campaign("psi-bit-off-at-w")
    _, s_w = sigma(BASE_W)
    bit.record(s_w == 0, f"sigma_2(w)={s_w}")
    premise = _Campaign("psi-premise-forced-above-w")
    for _ in range(samples):
        q = BASE_W if rng.random() < 0.2 else _sample_above(rng, BASE_W, want_prec1=False)
        p_ext = extension("P", q)
        if p_ext.is_empty:
            premise.record(False, f"empty P extension at {q}")
            continue
        n = p_ext.random_element(rng, window=32)
        if q == BASE_W:
            ok = n in extension("Q", BASE_W)
        else:
            _, s_q = sigma(q)
            ok = order_relations(BASE_W, q).strict and s_q == 1
        premise.record(ok, f"n={n} world={q}")
    return [bit.result(), premise.result()]


def check_structure_lemmas(samples: int, rng_seed: int) -> list[PropertyResult]:
    """Order and relation structure: preorder laws for the refined order,
    the inclusion corollary, the three-part corollary at v, monotonicity
    of the fresh-symbol valuations, and the two tuple-relation corollaries."""
    rng = random.Random(rng_seed)
    reflexive = _Campaign("order-prec1-reflexive")
    transitive = _Campaign("order-prec1-transitive")
    inclusion = _Campaign("order-leq-implies-ab-inclusion")
    at_v_1 = _Campaign("order-prec1-at-v-characterised")
    at_v_2 = _Campaign("order-prec1-above-v-is-leq")
    antisym = _Campaign("order-leq-antisymmetric")
    monotone = _Campaign("sigma-monotone")
    contraposed = _Campaign("relation-last-to-last")
    mutual_char = _Campaign("relation-mutual-characterised")
    for i in range(samples):
        p = _sample_any(rng)
        rel_pp = order_relations(p, p)
        reflexive.record(rel_pp.leq and rel_pp.prec1 and not rel_pp.strict, f"p={p}")

        q = _sample_above(rng, p, want_prec1=True)
        r = _sample_above(rng, q, want_prec1=True)
        transitive.record(order_relations(p, r).prec1, f"p={p} r={r}")

        q2 = _sample_above(rng, p, want_prec1=False)
        ok = (not order_relations(p, q2).leq) or \
            extension("P", p).issubset(extension("P", q2))
        inclusion.record(ok, f"p={p} q={q2}")

        q3 = _sample_above(rng, BASE_V, want_prec1=False) if rng.random() < 0.7 \
            else _sample_any(rng)
        rel_v = order_relations(BASE_V, q3)
        expected = rel_v.leq and q3.b.intersect(V2_CLASS).is_infinite
        at_v_1.record(rel_v.prec1 == expected, f"q={q3}")

        pa = _sample_above(rng, BASE_V, want_prec1=True)
        pb = _sample_above(rng, BASE_V, want_prec1=True)
        rel_ab = order_relations(pa, pb)
        at_v_2.record(rel_ab.prec1 == rel_ab.leq, f"pa={pa} pb={pb}")

        rebuilt = QuasiPartition(p.a, p.a.union(p.c).complement(), p.c)
        both = order_relations(p, rebuilt)
        back = order_relations(rebuilt, p)
        antisym.record(both.leq and back.leq and rebuilt == p, f"p={p}")

        r_p, s_p = sigma(p)
        r_q, s_q = sigma(q2)
        ok = (not order_relations(p, q2).leq) or \
            (r_p.issubset(r_q) and s_p <= s_q)
        monotone.record(ok, f"p={p} q={q2}")

        w2 = _sample_any(rng)
        n_t = rng.randint(0, 3)
        at, bt = sample_related_tuples(rng, p, w2, n_t)
        ok = asim_related(RelatedTuplePair((p, at), (w2, bt)))
        for a_k, b_k in zip(at, bt):
            if b_k in w2.c and a_k not in p.c:
                ok = False
        contraposed.record(ok, f"at={at} bt={bt}")

        mutual = rng.random() < 0.5
        at2, bt2 = sample_related_tuples(rng, p, w2, n_t, mutual=mutual)
        direct = mutually_related(p, at2, w2, bt2)
        bij = asim_related(RelatedTuplePair((p, at2), (w2, bt2)))
        characterised = bij and all(
            ((a_k in p.a) == (b_k in w2.a)) and ((a_k in p.c) == (b_k in w2.c))
            for a_k, b_k in zip(at2, bt2))
        mutual_char.record(direct == characterised and (not mutual or direct),
                           f"at={at2} bt={bt2}")
    return [reflexive.result(), transitive.result(), inclusion.result(),
            at_v_1.result(), at_v_2.result(), antisym.result(),
            monotone.result(), contraposed.result(), mutual_char.result()]


def check_witnesses(samples: int, rng_seed: int) -> list[PropertyResult]:
    """Both witness constructors, both cases each, plus element moves;
    every instance decides the eight claims exactly."""
    rng = random.Random(rng_seed)
    campaigns = {
        ("back", 1): _Campaign("back-witness-middle-infinite"),
        ("back", 2): _Campaign("back-witness-middle-empty"),
        ("forth", 1): _Campaign("forth-witness-middle-infinite"),
        ("forth", 2): _Campaign("forth-witness-middle-empty"),
    }
    elements = _Campaign("element-move-preserves-relation")
    per_case = max(1, samples // 4)
    for which in ("back", "forth"):
        for case in (1, 2):
            camp = campaigns[(which, case)]
            attempts = 0
            while camp.samples < per_case:
                attempts += 1
                if attempts > per_case * 50:
                    raise SampleError(f"cannot populate {camp.name}")
                if which == "back":
                    p = _sample_any(rng, b_mode="infinite" if case == 1 else "empty")
                    q = _sample_any(rng)
                else:
                    p = _sample_any(rng)
                    rich = case == 2 and rng.random() < 0.5
                    q = _sample_any(rng, b_mode="infinite" if case == 1 else "empty",
                                    rich_a=rich)
                at, bt = sample_related_tuples(rng, p, q, rng.randint(0, 3))
                try:
                    if which == "back":
                        other = _sample_above(rng, q, want_prec1=rng.random() < 0.5)
                        report = back_witness(p, at, q, bt, other)
                    else:
                        other = _sample_below(rng, p)
                        report = forth_witness(p, at, q, bt, other)
                except SampleError:
                    continue
                assert report.case == case
                camp.record(report.all_pass,
                            f"failed={report.failed()} new={report.constructed}")
    for _ in range(samples):
        p = _sample_any(rng)
        q = _sample_any(rng)
        at, bt = sample_related_tuples(rng, p, q, rng.randint(0, 3))
        direction = rng.choice(("left", "right"))
        tup = bt if direction == "left" else at
        if tup and rng.random() < 0.3:
            new_elem = rng.choice(tup)
        else:
            new_elem = rng.randint(1, 400)
        _, still = element_witness(direction, p, at, q, bt, new_elem)
        elements.record(still, f"dir={direction} new={new_elem} at={at} bt={bt}")
    return [c.result() for c in campaigns.values()] + [elements.result()]


def run_full_suite(samples: int, rng_seed: int) -> list[PropertyResult]:
    out = []
    out += check_structure_lemmas(samples, rng_seed)
    out += check_witnesses(samples, rng_seed + 1)
    out += check_phi_at_v(samples, rng_seed + 2)
    out += check_psi_fails_at_w(samples, rng_seed + 3)
    return out
