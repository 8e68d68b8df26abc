"""Finite Kripke models: forcing clauses, the classical oracle, reducts,
expansions, random models and the model file format."""

from __future__ import annotations

import random

import pytest

from biq.kripke import (
    FiniteModel, ForcingEvaluator, ModelError, PointedModel,
    classical_oracle_eval, expand, forces, load_model, parse_model_document,
    random_model, reduct, validate_model,
)
from biq.syntax import (
    Atom, Bottom, Const, Exists, Forall, Implies, Signature, Top, Var,
    mints_formulas, neg, parse_formula, random_sentence,
)

P_SIG = Signature.make({"P": 1})
FUZZ_SIG = Signature.make({"P": 1, "Q": 1, "R": 2, "S": 0})


def mtoy() -> FiniteModel:
    """Two worlds w < v, one element d, P(d) true only at v."""
    return FiniteModel(
        worlds=("w", "v"), order=[("w", "v")], domain=("d",),
        valuation={("P", "v"): {("d",)}}, signature=P_SIG)


def pd() -> Atom:
    return Atom("P", (Const("d"),))


# ---- construction and validation -----------------------------------------


def test_constructor_closes_order():
    m = FiniteModel(("a", "b", "c"), [("a", "b"), ("b", "c")], ("d",), {}, P_SIG)
    assert ("a", "c") in m.order and ("a", "a") in m.order
    assert validate_model(m).ok


def test_single_reflexive_world():
    m = FiniteModel(("w",), [], ("d",), {}, P_SIG)
    assert validate_model(m).ok
    assert m.order == frozenset({("w", "w")})


def test_monotonicity_violation_reported():
    m = FiniteModel(("w", "v"), [("w", "v")], ("d",),
                    {("P", "w"): {("d",)}}, P_SIG)
    report = validate_model(m)
    assert not report.ok
    assert report.violations[0].kind == "monotonicity"
    assert report.violations[0].witness == ("P", "w", "v", ("d",))


def test_constructor_shape_errors():
    with pytest.raises(ModelError):
        FiniteModel((), [], ("d",), {}, P_SIG)
    with pytest.raises(ModelError):
        FiniteModel(("w",), [], (), {}, P_SIG)
    with pytest.raises(ModelError):
        FiniteModel(("w",), [], ("w",), {}, P_SIG)  # overlap
    with pytest.raises(ModelError):
        FiniteModel(("w",), [("w", "u")], ("d",), {}, P_SIG)
    with pytest.raises(ModelError):
        FiniteModel(("w",), [], ("d",), {("P", "w"): {("d", "d")}}, P_SIG)
    with pytest.raises(ModelError):
        FiniteModel(("w",), [], ("d",), {}, Signature.make({"P": 1}, {"c"}))


# ---- forcing ----------------------------------------------------------------


def test_forces_mtoy_examples():
    m = mtoy()
    assert not forces(PointedModel(m, "w"), pd())
    assert forces(PointedModel(m, "v"), pd())
    # no successor of w forces ~P(d), so double negation holds at w
    assert forces(PointedModel(m, "w"), neg(neg(pd())))
    # co-implication looks backwards: v has the P-forcing predecessor v itself
    from biq.syntax import CoImplies
    assert forces(PointedModel(m, "v"), CoImplies(pd(), Bottom()))
    assert not forces(PointedModel(m, "w"), CoImplies(pd(), Bottom()))


def test_forces_quantifiers():
    m = mtoy()
    assert forces(PointedModel(m, "v"), Forall("x", Atom("P", (Var("x"),))))
    assert not forces(PointedModel(m, "w"), Exists("x", Atom("P", (Var("x"),))))
    assert forces(PointedModel(m, "w"), Top())


def test_forces_rejects_non_sentences():
    m = mtoy()
    with pytest.raises(ModelError):
        forces(PointedModel(m, "w"), Atom("P", (Var("x"),)))
    with pytest.raises(ModelError):
        forces(PointedModel(m, "w"), Atom("Q", (Const("d"),)))
    with pytest.raises(ModelError):
        forces(PointedModel(m, "w"), Atom("P", (Const("e"),)))


def test_negation_lemma_direct():
    # w forces ~f iff no successor forces f, checked without desugaring
    rng = random.Random(31)
    for seed in range(40):
        m = random_model(FUZZ_SIG, 4, 3, seed)
        ev = ForcingEvaluator(m)
        f = random_sentence(m.signature.with_constants(m.domain), 6, rng)
        for w in m.worlds:
            lhs = ev.forces(w, neg(f))
            rhs = not any(ev.forces(v, f) for v in m.successors[w])
            assert lhs == rhs


def test_literal_clauses_differ_from_standard():
    # S true at v only; standard forces P(d) -> S at w, literal refutes it
    m = FiniteModel(("w", "v"), [("w", "v")], ("d",),
                    {("P", "v"): {("d",)}, ("S", "v"): {()}},
                    Signature.make({"P": 1, "S": 0}))
    f = Implies(pd(), Atom("S"))
    assert forces(PointedModel(m, "w"), f, clauses="standard")
    assert not forces(PointedModel(m, "w"), f, clauses="literal")


# ---- oracle agreement and persistence ----------------------------------------


def test_oracle_agrees_on_mtoy_examples():
    m = mtoy()
    from biq.syntax import CoImplies
    for world, f in [("w", pd()), ("w", neg(neg(pd()))),
                     ("v", CoImplies(pd(), Bottom())), ("w", CoImplies(pd(), Bottom()))]:
        pm = PointedModel(m, world)
        assert classical_oracle_eval(pm, f) == forces(pm, f)


def test_oracle_agreement_random_smoke():
    rng = random.Random(7)
    for seed in range(150):
        m = random_model(FUZZ_SIG, 4, 3, seed)
        ev = ForcingEvaluator(m)
        sig = m.signature.with_constants(m.domain)
        for _ in range(4):
            f = random_sentence(sig, 9, rng)
            w = rng.choice(m.worlds)
            pm = PointedModel(m, w)
            assert ev.forces(w, f) == classical_oracle_eval(pm, f)


def test_oracle_agreement_literal_mode():
    rng = random.Random(8)
    for seed in range(40):
        m = random_model(FUZZ_SIG, 3, 2, seed)
        ev = ForcingEvaluator(m, clauses="literal")
        sig = m.signature.with_constants(m.domain)
        f = random_sentence(sig, 8, rng)
        for w in m.worlds:
            assert ev.forces(w, f) == classical_oracle_eval(PointedModel(m, w), f, "literal")


def test_persistence_random_smoke():
    rng = random.Random(9)
    for seed in range(150):
        m = random_model(FUZZ_SIG, 4, 3, seed)
        ev = ForcingEvaluator(m)
        sig = m.signature.with_constants(m.domain)
        f = random_sentence(sig, 8, rng)
        for (w, v) in m.order:
            if ev.forces(w, f):
                assert ev.forces(v, f)


def test_mints_implication_never_refuted_smoke():
    phi, psi = mints_formulas()
    target = Implies(phi, psi)
    sig = Signature.make({"P": 1, "Q": 1, "R": 1, "S": 0})
    for seed in range(200):
        m = random_model(sig, 4, 3, seed)
        ev = ForcingEvaluator(m)
        for w in m.worlds:
            assert ev.forces(w, target)


# ---- reducts and expansions -----------------------------------------------------


def test_reduct_preserves_forcing():
    rng = random.Random(11)
    sub = Signature.make({"P": 1})
    for seed in range(25):
        m = random_model(Signature.make({"P": 1, "Q": 1}), 4, 3, seed)
        r = reduct(m, sub)
        ev_m, ev_r = ForcingEvaluator(m), ForcingEvaluator(r)
        for _ in range(8):
            f = random_sentence(sub.with_constants(m.domain), 8, rng)
            for w in m.worlds:
                assert ev_m.forces(w, f) == ev_r.forces(w, f)


def test_reduct_edge_cases():
    m = mtoy()
    same = reduct(m, m.signature)
    assert same.valuation == m.valuation
    empty = reduct(m, Signature.empty())
    assert forces(PointedModel(empty, "w"), Top())
    with pytest.raises(ModelError):
        reduct(m, Signature.make({"Q": 1}))


def test_expand_and_roundtrip():
    m = mtoy()
    m2 = expand(m, {"S": (0, {"w": [], "v": [()]})})
    assert not forces(PointedModel(m2, "w"), Atom("S"))
    assert forces(PointedModel(m2, "v"), Atom("S"))
    back = reduct(m2, m.signature)
    assert back.valuation == m.valuation and back.order == m.order
    with pytest.raises(ModelError):
        expand(m, {"S": (0, {"w": [()], "v": []})})  # non-monotone
    with pytest.raises(ModelError):
        expand(m, {"P": (1, {"w": [], "v": []})})  # name clash


# ---- random models ------------------------------------------------------------


def test_random_model_deterministic():
    a = random_model(FUZZ_SIG, 4, 3, 42)
    b = random_model(FUZZ_SIG, 4, 3, 42)
    assert a.worlds == b.worlds and a.order == b.order
    assert a.domain == b.domain and a.valuation == b.valuation


def test_random_model_validity_campaign():
    for seed in range(500):
        m = random_model(FUZZ_SIG, 4, 3, seed)
        assert validate_model(m).ok


def test_random_model_single_world():
    m = random_model(P_SIG, 1, 1, 3)
    assert len(m.worlds) == 1
    assert m.order == frozenset({(m.worlds[0], m.worlds[0])})


# ---- model files ------------------------------------------------------------------

MTOY_DOC = """
worlds: [w, v]
order: [[w, v]]
domain: [d]
signature:
  preds: {P: 1, S: 0}
  consts: [d]
valuation:
  - {pred: P, world: v, tuples: [[d]]}
  - {pred: S, world: v, tuples: true}
"""


def test_parse_model_document():
    m = parse_model_document(MTOY_DOC)
    assert m.worlds == ("v", "w")
    assert m.tuples("P", "v") == frozenset({("d",)})
    assert m.tuples("S", "v") == frozenset({()})
    assert m.signature.has_constant("d")
    f = parse_formula("~~P(d)", m.signature)
    assert forces(PointedModel(m, "w"), f)


def test_parse_model_rejects_unknown_field():
    with pytest.raises(ModelError) as e:
        parse_model_document(MTOY_DOC + "\nextra: 1\n")
    assert "unknown field" in str(e.value)


def test_parse_model_rejects_bad_shapes():
    with pytest.raises(ModelError):
        parse_model_document("worlds: [w]\ndomain: [d]\nsignature: {preds: {P: 1}}\norder: [[w]]")
    with pytest.raises(ModelError):
        parse_model_document("- 1\n- 2")
    with pytest.raises(ModelError):
        parse_model_document("worlds: [w]\nsignature: {preds: {}}")


def test_load_model(tmp_path):
    path = tmp_path / "m.yaml"
    path.write_text(MTOY_DOC, encoding="utf-8")
    m = load_model(str(path))
    assert m.domain == ("d",)
