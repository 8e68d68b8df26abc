"""Bi-asimulation conditions, the bounded game, preservation and
separation, plus cross-validation of the class-based separator search
against the direct scan."""

from __future__ import annotations

import itertools
import random

import pytest

from biq.asim import (
    AsimRelation, PointedTuple, bounded_game_relation, check_bi_asimulation,
    dump_relation, exhaustive_separator_search, game_fixpoint, parse_relation,
    preservation_test, quant_depth, rank, separation_scan, shared_signature,
)
from biq.kripke import FiniteModel, ForcingEvaluator, PointedModel, random_model
from biq.syntax import (
    Atom, Bottom, Exists, Forall, Implies, Signature, Top, Var,
    enumerate_sentences, mints_formulas, random_formula,
)

PQ = Signature.make({"P": 1, "Q": 1})
PQS = Signature.make({"P": 1, "Q": 1, "S": 0})


def mtoy(sig=PQ, s_at=()):
    val = {("P", "v"): {("d",)}}
    for w in s_at:
        val[("S", w)] = {()}
    return FiniteModel(("w", "v"), [("w", "v")], ("d",), val, sig)


def identity_relation(m: FiniteModel, max_len: int, depth: int = 1) -> AsimRelation:
    pairs = set()
    for n in range(max_len + 1):
        for w in m.worlds:
            for t in itertools.product(m.domain, repeat=n):
                pairs.add((PointedTuple(0, w, t), PointedTuple(1, w, t)))
                pairs.add((PointedTuple(1, w, t), PointedTuple(0, w, t)))
    return AsimRelation(frozenset(pairs), max_len, depth)


# ---- rank ------------------------------------------------------------------


def test_rank_and_quant_depth():
    x, y = Var("x"), Var("y")
    assert rank(Atom("P", (x,))) == 0
    f = Forall("x", Implies(Atom("P", (x,)), Exists("y", Atom("Q", (y,)))))
    assert rank(f) == 3
    assert quant_depth(f) == 2
    # forall x (exists y (... (Q -> R) ...)) nests three rank units
    phi, _ = mints_formulas()
    assert rank(phi) == 3
    assert quant_depth(phi) == 2


# ---- condition checking -------------------------------------------------------


def test_identity_relation_checks_clean():
    m = mtoy()
    rel = identity_relation(m, max_len=2)
    report = check_bi_asimulation(m, m, rel)
    assert report.ok
    assert report.bounded > 0  # length-2 pairs carry no left/right demands


def test_atom_violation_with_witness():
    m = mtoy()
    # relate the P-forcing world's tuple with the non-P world's
    rel = AsimRelation(frozenset({
        (PointedTuple(0, "v", ("d",)), PointedTuple(1, "w", ("d",))),
    }), max_len=1, depth=0)
    report = check_bi_asimulation(m, m, rel)
    conds = [c for c, _ in report.violations]
    assert "atom" in conds
    witness = next(w for c, w in report.violations if c == "atom")
    assert witness[2] == "P"


def test_back_violation_names_successor():
    m = mtoy()
    full = identity_relation(m, max_len=0)
    dropped = frozenset(p for p in full.pairs
                        if p[0].world != "v")
    report = check_bi_asimulation(m, m, AsimRelation(dropped, 0, 0))
    back = [w for c, w in report.violations if c == "back"]
    assert back and back[0][2] == "v"


def test_type_violation():
    m = mtoy()
    rel = AsimRelation(frozenset({
        (PointedTuple(0, "w", ()), PointedTuple(0, "w", ())),
    }), max_len=0, depth=0)
    report = check_bi_asimulation(m, m, rel)
    assert [c for c, _ in report.violations] == ["type"]


def test_check_requires_shared_signature_and_nonempty():
    m = mtoy()
    other = mtoy(sig=PQS)
    with pytest.raises(ValueError):
        check_bi_asimulation(m, other, identity_relation(m, 0))
    with pytest.raises(ValueError):
        check_bi_asimulation(m, m, AsimRelation(frozenset(), 0, 0))


# ---- the bounded game ------------------------------------------------------------


def test_game_on_identical_models_keeps_roots():
    m = mtoy()
    rel = bounded_game_relation(m, m, rounds=4, max_len=2)
    root = (PointedTuple(0, "w", ()), PointedTuple(1, "w", ()))
    assert root in rel.pairs
    assert (root[1], root[0]) in rel.pairs


def test_game_respects_atom_difference_at_root():
    left = mtoy(sig=PQS, s_at=("w", "v"))
    right = mtoy(sig=PQS)
    rel = bounded_game_relation(left, right, rounds=0, max_len=1)
    assert (PointedTuple(0, "w", ()), PointedTuple(1, "w", ())) not in rel.pairs
    # the other orientation is fine: right forces no atoms at all
    assert (PointedTuple(1, "w", ()), PointedTuple(0, "w", ())) in rel.pairs


def test_game_rounds_shrink():
    rng = random.Random(13)
    for trial in range(100):
        m0 = random_model(PQ, 3, 2, rng.randrange(10**6))
        m1 = random_model(PQ, 3, 2, rng.randrange(10**6))
        prev = None
        for r in range(4):
            rel = bounded_game_relation(m0, m1, rounds=r, max_len=2)
            if prev is not None:
                assert rel.pairs <= prev
            prev = rel.pairs


def test_fixpoint_reached_within_universe_size():
    rng = random.Random(15)
    for trial in range(20):
        m0 = random_model(PQ, 3, 2, rng.randrange(10**6))
        m1 = random_model(PQ, 3, 2, rng.randrange(10**6))
        start = bounded_game_relation(m0, m1, rounds=0, max_len=2)
        fix = game_fixpoint(m0, m1, max_len=2)
        assert fix.depth <= max(len(start.pairs), 1)
        assert fix.pairs <= start.pairs


def test_fixpoint_passes_checker():
    rng = random.Random(14)
    accepted = 0
    for trial in range(25):
        m0 = random_model(PQ, 3, 2, rng.randrange(10**6))
        m1 = random_model(PQ, 3, 2, rng.randrange(10**6))
        rel = game_fixpoint(m0, m1, max_len=2)
        if not rel.pairs:
            continue
        accepted += 1
        assert check_bi_asimulation(m0, m1, rel).ok
    assert accepted > 5


def test_isomorphic_models_fully_related():
    m = random_model(PQ, 3, 2, 99)
    relabel = {w: f"u{i}" for i, w in enumerate(m.worlds)}
    iso = FiniteModel(
        [relabel[w] for w in m.worlds],
        [(relabel[a], relabel[b]) for a, b in m.order],
        m.domain,
        {(p, relabel[w]): ts for (p, w), ts in m.valuation.items()},
        m.signature)
    rel = game_fixpoint(m, iso, max_len=2)
    for w in m.worlds:
        for n in range(3):
            for t in itertools.product(m.domain, repeat=n):
                assert (PointedTuple(0, w, t), PointedTuple(1, relabel[w], t)) in rel.pairs


# ---- preservation ------------------------------------------------------------------


def rank_capped_formulas(sig, rank_cap, pool, rng, count):
    out = []
    while len(out) < count:
        f = random_formula(sig, 7, rng, scope=(), free_pool=pool)
        if rank(f) <= rank_cap:
            out.append(f)
    return out


def test_preservation_atomic_on_checked_relation():
    m = mtoy()
    rel = identity_relation(m, max_len=1, depth=1)
    sample = [Atom("P", (Var("v1"),)), Atom("Q", (Var("v1"),)), Top(), Bottom()]
    report = preservation_test(m, m, rel, sample, rank_bound=0)
    assert report.ok and report.checked > 0


def test_preservation_random_campaign_smoke():
    rng = random.Random(17)
    campaigns = 0
    for trial in range(20):
        m0 = random_model(PQ, 3, 2, rng.randrange(10**6))
        m1 = random_model(PQ, 3, 2, rng.randrange(10**6))
        rel = bounded_game_relation(m0, m1, rounds=4, max_len=4)
        if not rel.pairs:
            continue
        sample = rank_capped_formulas(PQ, 2, ("v1", "v2"), rng, 15)
        report = preservation_test(m0, m1, rel, sample, rank_bound=2)
        assert report.ok
        campaigns += report.checked
    assert campaigns > 100


def test_preservation_catches_corrupt_relation():
    left = mtoy(sig=PQS, s_at=("w", "v"))
    right = mtoy(sig=PQS)
    bogus = AsimRelation(frozenset({
        (PointedTuple(0, "w", ()), PointedTuple(1, "w", ())),
    }), max_len=0, depth=2)
    report = preservation_test(left, right, bogus, [Atom("S")], rank_bound=0)
    assert not report.ok
    assert report.violations[0][1] == Atom("S")


def test_preservation_depth_error():
    m = mtoy()
    rel = identity_relation(m, max_len=0, depth=1)
    with pytest.raises(Exception):
        preservation_test(m, m, rel, [Top()], rank_bound=5)


# ---- separation ------------------------------------------------------------------


def one_world_p() -> FiniteModel:
    return FiniteModel(("u",), [], ("d",), {("P", "u"): {("d",)}}, PQ)


def test_separation_scan_finds_exists_p():
    pm0 = PointedModel(one_world_p(), "u")
    pm1 = PointedModel(mtoy(), "w")
    candidates = list(enumerate_sentences(PQ, 3, 1))
    hits = separation_scan(pm0, pm1, candidates, rank_cap=3)
    assert Exists("v1", Atom("P", (Var("v1"),))) in hits


def test_separation_scan_empty_stream():
    pm = PointedModel(mtoy(), "w")
    assert separation_scan(pm, pm, [], rank_cap=3) == []


def test_separation_scan_rejects_wrong_signature():
    pm0 = PointedModel(one_world_p(), "u")
    pm1 = PointedModel(mtoy(), "w")
    with pytest.raises(ValueError):
        separation_scan(pm0, pm1, [Atom("S")], rank_cap=1)


def test_separation_empty_for_identical_pointed_models():
    m = mtoy()
    pm = PointedModel(m, "w")
    candidates = list(enumerate_sentences(PQ, 5, 1))
    assert separation_scan(pm, pm, candidates, rank_cap=2) == []


# ---- exhaustive search vs direct scan ------------------------------------------------


def direct_verdict(pm0, pm1, max_nodes, rank_cap, max_vars):
    candidates = enumerate_sentences(shared_signature(pm0.model, pm1.model),
                                     max_nodes, max_vars)
    ev0, ev1 = ForcingEvaluator(pm0.model), ForcingEvaluator(pm1.model)
    for f in candidates:
        if rank(f) <= rank_cap and ev0.forces(pm0.world, f) and not ev1.forces(pm1.world, f):
            return f
    return None


def test_search_agrees_with_direct_scan():
    rng = random.Random(23)
    agreements = separators = 0
    for trial in range(12):
        m0 = random_model(PQ, 3, 2, rng.randrange(10**6))
        m1 = random_model(PQ, 3, 2, rng.randrange(10**6))
        pm0 = PointedModel(m0, rng.choice(m0.worlds))
        pm1 = PointedModel(m1, rng.choice(m1.worlds))
        direct = direct_verdict(pm0, pm1, 6, 2, 2)
        found = exhaustive_separator_search(pm0, pm1, 6, 2, 2)
        assert (direct is None) == (found is None)
        if found is not None:
            # the reconstructed witness genuinely separates
            assert ForcingEvaluator(m0).forces(pm0.world, found)
            assert not ForcingEvaluator(m1).forces(pm1.world, found)
            assert rank(found) <= 2
            separators += 1
        agreements += 1
    assert agreements == 12 and separators >= 2


def test_search_none_for_identical_models():
    m = mtoy()
    pm = PointedModel(m, "w")
    assert exhaustive_separator_search(pm, pm, 7, 3, 2) is None


def test_search_finds_atomic_separator():
    left = mtoy(sig=PQS, s_at=("w", "v"))
    right = mtoy(sig=PQS)
    f = exhaustive_separator_search(PointedModel(left, "w"), PointedModel(right, "w"), 5, 2, 1)
    assert f is not None
    assert ForcingEvaluator(left).forces("w", f)
    assert not ForcingEvaluator(right).forces("w", f)


# ---- dumps ------------------------------------------------------------------


def test_relation_dump_roundtrip():
    m = mtoy()
    rel = bounded_game_relation(m, m, rounds=2, max_len=2)
    text = dump_relation(rel)
    back = parse_relation(text)
    assert back.pairs == rel.pairs
    assert back.depth == rel.depth
    with pytest.raises(ValueError):
        parse_relation("not a relation line")
