"""Batch front end: model validation and evaluation, bi-asimulation games
and checks, separation scans, the counterexample suite and differential
fuzzing.

Exit status: 0 when every requested property holds, 1 on property
failures, 2 on input or validation errors.  Reports are byte-identical
for identical inputs, seeds and sample counts.
"""

from __future__ import annotations

import argparse
import random
import sys

from .asim import (
    bounded_game_relation, check_bi_asimulation, dump_relation, parse_relation,
    separation_scan, shared_signature,
)
from .counterexample import PropertyResult, run_full_suite
from .kripke import (
    CLAUSE_SETS, FiniteModel, ForcingEvaluator, ModelError, PointedModel,
    classical_oracle_eval, forces, load_model, random_model, validate_model,
)
from .syntax import (
    FormulaError, Signature, enumerate_sentences, parse_formula, random_sentence,
)

FUZZ_SIGNATURE = Signature.make({"P": 1, "Q": 1, "R": 2, "S": 0})


def load_validated(path: str) -> FiniteModel:
    model = load_model(path)
    report = validate_model(model)
    if not report.ok:
        raise ModelError(f"{path}: {report.render()}")
    return model


def cmd_validate(args) -> int:
    load_validated(args.model)
    print("model ok")
    return 0


def cmd_eval(args) -> int:
    model = load_validated(args.model)
    sig = model.signature.with_constants(model.domain)
    formula = parse_formula(args.formula, sig)
    value = forces(PointedModel(model, args.world), formula, clauses=args.clauses)
    print("true" if value else "false")
    return 0


def cmd_asim(args) -> int:
    left = load_validated(args.left)
    right = load_validated(args.right)
    if args.check:
        with open(args.check, "r", encoding="utf-8") as fh:
            rel = parse_relation(fh.read(), max_len=args.max_len)
        report = check_bi_asimulation(left, right, rel)
        print(report.render())
        return 0 if report.ok else 1
    rel = bounded_game_relation(left, right, args.rounds, args.max_len)
    sys.stdout.write(dump_relation(rel))
    return 0


def cmd_scan(args) -> int:
    left = load_validated(args.left)
    right = load_validated(args.right)
    worlds = args.world.split(",")
    if len(worlds) == 1:
        worlds = worlds * 2
    pm0 = PointedModel(left, worlds[0])
    pm1 = PointedModel(right, worlds[1])
    candidates = enumerate_sentences(shared_signature(left, right),
                                     args.max_size, args.max_len)
    found = separation_scan(pm0, pm1, candidates, rank_cap=args.rounds)
    from .syntax import format_formula
    for f in found:
        print(format_formula(f))
    print(f"separators: {len(found)}")
    return 0


def cmd_counterexample(args) -> int:
    results = run_full_suite(args.samples, args.seed)
    failures = 0
    for result in results:
        print(result.render())
        failures += result.failures
    return 0 if failures == 0 else 1


def cmd_fuzz(args) -> int:
    cases = args.cases if args.cases is not None else args.samples
    rng = random.Random(args.seed)
    agreement = PropertyResult("oracle-agreement", 0, 0)
    persistence = PropertyResult("persistence", 0, 0)
    for _ in range(cases):
        model = random_model(FUZZ_SIGNATURE, 4, 3, rng.randrange(10**9))
        ev = ForcingEvaluator(model, clauses=args.clauses)
        sig = model.signature.with_constants(model.domain)
        sentence = random_sentence(sig, 10, rng)
        values = {w: ev.forces(w, sentence) for w in model.worlds}
        agreement.samples += 1
        world = rng.choice(model.worlds)
        if values[world] != classical_oracle_eval(PointedModel(model, world),
                                                  sentence, args.clauses):
            agreement.failures += 1
            if agreement.first_counterexample is None:
                agreement.first_counterexample = f"seed-case world={world}"
        if args.clauses == "standard":
            persistence.samples += 1
            bad = any(values[w] and not values[v] for (w, v) in model.order)
            if bad:
                persistence.failures += 1
    print(agreement.render())
    if args.clauses == "standard":
        print(persistence.render())
    return 0 if agreement.failures == 0 and persistence.failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="biq",
        description="First-order bi-intuitionistic logic over constant-domain "
                    "Kripke models: evaluation, bi-asimulation, separation "
                    "scans and the counterexample suite.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True, samples=True):
        if seed:
            p.add_argument("--seed", type=int, default=1)
        if samples:
            p.add_argument("--samples", type=int, default=1000)

    p = sub.add_parser("validate", help="validate a model file")
    p.add_argument("--model", required=True)
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("eval", help="evaluate a sentence at a world")
    p.add_argument("--model", required=True)
    p.add_argument("--world", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--clauses", choices=CLAUSE_SETS, default="standard")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("asim", help="compute a bounded game relation, or "
                                    "check a dumped relation with --check")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--rounds", type=int, default=3)
    p.add_argument("--max-len", type=int, default=2)
    p.add_argument("--check", help="relation dump file to verify")
    p.set_defaults(func=cmd_asim)

    p = sub.add_parser("scan", help="scan enumerated shared-signature "
                                    "sentences for separators")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--world", required=True,
                   help="world name, or left,right pair")
    p.add_argument("--max-size", type=int, default=7,
                   help="formula node budget")
    p.add_argument("--rounds", type=int, default=3,
                   help="rank cap for candidates")
    p.add_argument("--max-len", type=int, default=2,
                   help="distinct bound variables in candidates")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("counterexample", help="run the full symbolic "
                                              "counterexample suite")
    common(p)
    p.set_defaults(func=cmd_counterexample)

    p = sub.add_parser("fuzz", help="differential fuzzing: forcing vs the "
                                    "classical oracle, plus persistence")
    common(p)
    p.add_argument("--cases", type=int, default=None,
                   help="number of cases (defaults to --samples)")
    p.add_argument("--clauses", choices=CLAUSE_SETS, default="standard")
    p.set_defaults(func=cmd_fuzz)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ModelError, FormulaError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
