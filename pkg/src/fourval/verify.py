"""Named verification suites wiring the whole library together.

Each suite returns a JSON-friendly report:

    {"suite": ..., "config": {...}, "checks": int, "violations": [...],
     "ok": bool, "timings": {...}}

A suite passes when its violation list is empty.  The known-gaps output
of the completeness-evidence suite is not a violation: syntactic search
is one-sided, so gaps are logged rather than failed.
"""

from __future__ import annotations

import random
import time
from itertools import combinations, product as iproduct
from typing import Callable, Iterable, Sequence

from .algebra import (
    FiniteAlgebra,
    builtin,
    congruences,
    enumerate_dm_lattices,
    enumerate_filters,
    find_isomorphism,
    is_prime_filter,
    mask_iter,
    subalgebra,
)
from .engine import (
    RuleSpaceBounds,
    _embeds_into,
    _match_premises,
    classify_models,
    check_derivation,
    decide,
    derive,
    edge_mutations,
    formulas_within,
    terms_within,
    translate_exact_to_eq,
)
from .leibniz import (
    crosschecked_binary,
    crosschecked_unary,
    leibniz_structure,
    leibniz_unary,
    quotient_structure,
    reduct,
)
from .structures import Structure, holds, is_model, preset_structure, structure
from .syntax import (
    Const,
    Formula,
    Join,
    Meet,
    Neg,
    Rule,
    Var,
    formula_text,
    formula_variables,
    parse_rule,
    print_rule,
    substitute_formula,
)
from .systems import AxiomSystem, all_system_names, soundness_check, system

CLASSIFIED_FAMILIES = ("BDE", "BDNF", "KE", "BD-EQ", "ETL-EQ", "BDNF-EQ", "BDE-EQ", "MC-ETL")
CLASSIFIED_VARIANTS = ("BDE+tnb", "BDNF+tnb", "KE+tb", "BD-EQ+tnb", "ETL-EQ+tnb",
                       "BDNF-EQ+tnb", "BDE-EQ+tnb", "MC-ETL+tnb")
CORE_SINGLE_CONCLUSION = ("BD-base", "ETL-base", "K-base", "LP-base", "BDE", "BDNF",
                          "KE", "TNE-bridge", "EQ-core", "BD-EQ", "ETL-EQ", "BDE-EQ",
                          "BDNF-EQ")
VARIANT_SMOKE = ("BDE+tnb", "BDNF+tnb", "KE+tb", "BD-EQ+tnb", "ETL-EQ+tnb",
                 "BDE-EQ+tnb", "BDNF-EQ+tnb")


def _report(suite: str, config: dict, checks: int, violations: list[str],
            started: float, extra: dict | None = None) -> dict:
    out = {
        "suite": suite,
        "config": config,
        "checks": checks,
        "violations": violations,
        "ok": not violations,
    }
    if extra:
        out.update(extra)
    out["timings"] = {"total_s": round(time.time() - started, 3)}
    return out


# ---------------------------------------------------------------------------
# Suite: soundness.  Every axiom of every registry system is valid in its
# defining preset structure.

def suite_soundness(systems: Sequence[str] | None = None) -> dict:
    started = time.time()
    names = list(systems) if systems else all_system_names()
    violations = []
    checks = 0
    for name in names:
        rep = soundness_check(system(name))
        for axname, verdict in rep["axioms"]:
            checks += 1
            if not verdict.valid:
                violations.append(f"{name}/{axname}: fails in {rep['preset']} at {verdict.valuation}")
    return _report("soundness", {"systems": len(names)}, checks, violations, started)


# ---------------------------------------------------------------------------
# Suite: rule-ledger.  A golden ledger of inference rules with their
# expected verdicts (and, where pinned, the exact counter-valuation).
# Entries: (rule text, preset, expected validity, pinned counter-valuation).

LEDGER_RULES: list[tuple[str, str, bool, dict | None]] = [
    # introductory examples
    (r"E(x), T(~x \/ y) |- T(y)", "BDE", True, None),
    (r"T(x), NF(~x \/ y) |- NF(y)", "BDNF", True, None),
    (r"T(x), T(y) |- ~x \/ y = y", "BD-eq", True, None),
    (r"T(x) |- #b /\ x = #b", "BD-eq+b", True, None),
    (r"#b /\ x = #b |- T(x)", "BD-eq+b", True, None),
    # two- and three-element structures for T(x), T(y) |- x = y
    ("T(x), T(y) |- x = y", "B2-eq", True, None),
    ("T(x), T(y) |- x = y", "BD3-eq", False, {"x": "t", "y": "b"}),
    # constant equations for the expanded variety
    (r"|- #t = x \/ #t", "DM-eq+t", True, None),
    ("|- #n = ~#n", "DM-eq+n", True, None),
    ("|- #b = ~#b", "DM-eq+b", True, None),
    (r"|- #n \/ #b = x \/ #n \/ #b", "DM-eq+nb", True, None),
    # characteristic rules of the four base logics
    (r"T(x /\ (~x \/ y)) |- T(y)", "BD", False, {"x": "b", "y": "f"}),
    (r"E(x /\ (~x \/ y)) |- E(y)", "ETL", True, None),
    (r"T((x /\ ~x) \/ y) |- T(y)", "K", True, None),
    (r"T((x /\ ~x) \/ y) |- T(y)", "BD", False, None),
    (r"|- T(x \/ ~x)", "LP", True, None),
    (r"|- T(x \/ ~x)", "BD", False, None),
    # combined truth / exact truth
    ("E(x) |- T(x)", "BDE", True, None),
    (r"E(x), T(~x \/ y) |- T(y)", "BDE", True, None),
    (r"T(x), T(y), E(~x \/ y) |- E(y)", "BDE", True, None),
    (r"E(x /\ (~x \/ y)) |- E(y)", "BDE", True, None),
    # constants for truth / exact truth
    ("|- E(#t)", "BDE+t", True, None),
    (r"|- T(#b /\ ~#b)", "BDE+b", True, None),
    (r"T(#n \/ x) |- T(x)", "BDE+n", True, None),
    (r"T(~#n \/ x) |- T(x)", "BDE+n", True, None),
    (r"T(x) |- E(#n \/ x)", "BDE+n", True, None),
    (r"T(x) |- E(~#n \/ x)", "BDE+n", True, None),
    # combined truth / non-falsity
    (r"T(x), NF(~x \/ y) |- NF(y)", "BDNF", True, None),
    (r"NF(x), T(~x \/ y) |- T(y)", "BDNF", True, None),
    ("|- T(#t)", "BDNF+t", True, None),
    ("|- NF(#t)", "BDNF+t", True, None),
    ("|- T(#b)", "BDNF+b", True, None),
    ("|- T(~#b)", "BDNF+b", True, None),
    ("|- NF(#n)", "BDNF+n", True, None),
    ("|- NF(~#n)", "BDNF+n", True, None),
    # three-valued truth / exact truth
    (r"|- T(x \/ ~x)", "KE", True, None),
    ("E(x) |- T(x)", "KE", True, None),
    (r"E(x), T(~x \/ y) |- T(y)", "KE", True, None),
    (r"T(x), E(~x \/ y) |- E(y)", "KE", True, None),
    ("|- E(#t)", "KE+t", True, None),
    ("|- T(#b)", "KE+b", True, None),
    ("|- T(~#b)", "KE+b", True, None),
    # definability of E from T and NF
    ("T(x), NF(x) |- E(x)", "TNE", True, None),
    ("E(x) |- T(x)", "TNE", True, None),
    ("E(x) |- NF(x)", "TNE", True, None),
    # equality core displayed in the equality section
    ("|- x = x", "DM-eq", True, None),
    ("x = y |- y = x", "DM-eq", True, None),
    ("x = y, y = z |- x = z", "DM-eq", True, None),
    (r"x = y, z = u |- x /\ z = y /\ u", "DM-eq", True, None),
    (r"x = y, z = u |- x \/ z = y \/ u", "DM-eq", True, None),
    ("x = y |- ~x = ~y", "DM-eq", True, None),
    ("x = y, x = z, y = u |- z = u", "DM-eq", True, None),
    ("T(x), x = y |- T(y)", "BD-eq", True, None),
    ("E(x), x = y |- E(y)", "ETL-eq", True, None),
    ("NF(x), x = y |- NF(y)", "BDNF-eq", True, None),
    ("|- ~~x = x", "DM-eq", True, None),
    (r"|- ~(x \/ y) = ~x /\ ~y", "DM-eq", True, None),
    (r"|- ~(x /\ y) = ~x \/ ~y", "DM-eq", True, None),
    # truth with equality
    (r"T(x), T(y) |- T(x /\ y)", "BD-eq", True, None),
    (r"T(x), T(y) |- ~x \/ y = y", "BD-eq", True, None),
    (r"T(z), x /\ z = y /\ z, ~y /\ z = ~x /\ z |- x = y", "BD-eq", True, None),
    (r"|- #t = #t \/ x", "BD-eq+t", True, None),
    ("|- #n = ~#n", "BD-eq+n", True, None),
    (r"|- #b \/ #n = #t", "BD-eq+tnb", True, None),
    ("|- T(#t)", "BD-eq+t", True, None),
    ("|- T(#b)", "BD-eq+b", True, None),
    (r"T(#n \/ x) |- T(x)", "BD-eq+n", True, None),
    ("T(~#t) |- x = y", "BD-eq+t", True, None),
    ("|- T(~#b)", "BD-eq+b", True, None),
    (r"T(x) |- #n \/ x \/ y = #n \/ x", "BD-eq+n", True, None),
    # exact truth with equality
    (r"E(x) |- x \/ y = x", "ETL-eq", True, None),
    ("|- E(#t)", "ETL-eq+t", True, None),
    (r"|- E(#n \/ #b)", "ETL-eq+nb", True, None),
    ("|- #b = ~#b", "ETL-eq+b", True, None),
    ("|- #n = ~#n", "ETL-eq+n", True, None),
    # truth and exact truth with equality
    (r"E(x) |- x \/ y = x", "BDE-eq", True, None),
    ("E(x) |- T(x)", "BDE-eq", True, None),
    ("|- E(#t)", "BDE-eq+t", True, None),
    (r"|- E(#n \/ #b)", "BDE-eq+nb", True, None),
    ("|- #n = ~#n", "BDE-eq+n", True, None),
    (r"|- T(#b /\ ~#b)", "BDE-eq+b", True, None),
    (r"T(#n \/ x) |- T(x)", "BDE-eq+n", True, None),
    (r"T(x) |- E(#n \/ x)", "BDE-eq+n", True, None),
    # truth and non-falsity with equality (fifth rule as corrected; see notes)
    (r"T(x), T(y) |- ~x \/ y = y", "BDNF-eq", True, None),
    (r"NF(x), T(~x \/ y) |- T(y)", "BDNF-eq", True, None),
    (r"T(x), NF(~x \/ y) |- NF(y)", "BDNF-eq", True, None),
    (r"NF(x), T(y), T(z), x /\ y <= z |- y <= z", "BDNF-eq", True, None),
    (r"T(x), NF(y), x /\ u <= ~y \/ v, x /\ ~v <= ~y \/ ~u |- u <= v", "BDNF-eq", True, None),
    ("|- T(#t)", "BDNF-eq+t", True, None),
    ("|- NF(#t)", "BDNF-eq+t", True, None),
    ("|- T(#b)", "BDNF-eq+b", True, None),
    ("|- T(~#b)", "BDNF-eq+b", True, None),
    ("|- NF(#n)", "BDNF-eq+n", True, None),
    ("|- NF(~#n)", "BDNF-eq+n", True, None),
    # definability of the predicates from equality with a constant
    (r"NF(x) |- x /\ #n = #n", "BDNF-eq+n", True, None),
    (r"x /\ #n = #n |- NF(x)", "BDNF-eq+n", True, None),
    # multiple-conclusion section
    (r"NF(x \/ y) |- NF(x) | NF(y)", "NF", True, None),
    ("T(~x), NF(x) |-", "BDNF", True, None),
    ("E(x) |- T(x)", "TNE", True, None),
    ("T(~x), E(x) |-", "TNE", True, None),
    ("T(x) |- E(x) | T(~x)", "TNE", True, None),
    ("|- T(x) | NF(~x)", "TNE", True, None),
    ("T(x), NF(~x) |-", "TNE", True, None),
    (r"T(x \/ y) |- T(x) | T(y)", "BD", True, None),
    (r"E(x \/ y) |- E(~x \/ ~y) | E(x) | E(y)", "ETL", True, None),
    (r"E(x \/ y) |- E(~x \/ y) | E(x) | E(y)", "ETL", True, None),
    (r"E((u /\ ~u) \/ x), E((u /\ ~u) \/ y), E(v \/ x) |- E(v \/ y) | E(x) | E(y)", "ETL", True, None),
    (r"E((u /\ ~u) \/ x), E((u /\ ~u) \/ y), E(v \/ ~x) |- E(v \/ ~y) | E(x) | E(y)", "ETL", True, None),
    (r"x \/ y = #t, x = x /\ ~x, y = y /\ ~y |- x = x \/ ~x", "DM-eq+t", True, None),
    ("|- E(#t)", "ETL+t", True, None),
    (r"|- E(#n \/ #b)", "ETL+nb", True, None),
    ("E(#n) |-", "ETL+n", True, None),
    ("E(~#n) |-", "ETL+n", True, None),
    ("E(#b) |-", "ETL+b", True, None),
    ("E(~#b) |-", "ETL+b", True, None),
]


def suite_rule_ledger() -> dict:
    started = time.time()
    violations = []
    for text, preset, expected, pinned in LEDGER_RULES:
        st = preset_structure(preset)
        r = parse_rule(text, st.signature())
        verdict = holds(st, r)
        if verdict.valid != expected:
            violations.append(f"{preset}: {text!r} decided {verdict.valid}, stated {expected}")
            continue
        if pinned is not None:
            got = {k: st.algebra.element_name(v) for k, v in verdict.valuation.items()}
            if got != pinned:
                violations.append(f"{preset}: {text!r} counter-valuation {got}, stated {pinned}")
    return _report("rule-ledger", {"rules": len(LEDGER_RULES)}, len(LEDGER_RULES),
                   violations, started)


# ---------------------------------------------------------------------------
# Suite: leibniz-crosscheck.

def _binary_relation_family(alg: FiniteAlgebra) -> list[tuple[str, tuple[int, ...]]]:
    n = alg.size
    full = (1 << n) - 1
    fams: list[tuple[str, tuple[int, ...]]] = [
        ("identity", tuple(1 << a for a in range(n))),
        ("total", tuple(full for _ in range(n))),
        ("leq", tuple(sum(1 << b for b in range(n) if alg.leq(a, b)) for a in range(n))),
    ]
    for i, cong in enumerate(congruences(alg)):
        rows = tuple(sum(1 << b for b in range(n) if cong.rep[a] == cong.rep[b])
                     for a in range(n))
        fams.append((f"congruence{i}", rows))
    for f in enumerate_filters(alg):
        rows = tuple((full & f) if (f >> a) & 1 else 0 for a in range(n))
        fams.append((f"square{f}", rows))
    return fams


def suite_leibniz_crosscheck(max_size: int = 5, binary_max_size: int = 4) -> dict:
    started = time.time()
    violations = []
    checks = 0
    algebras: list[tuple[str, FiniteAlgebra]] = [(name, builtin(name)) for name in ("B2", "K3", "DM4")]
    for n in range(1, max_size + 1):
        algebras += [(f"census{n}.{i}", a) for i, a in enumerate(enumerate_dm_lattices(n))]
    for name, alg in algebras:
        for f in enumerate_filters(alg):
            checks += 1
            a, b = crosschecked_unary(alg, f)
            if a.congruence.rep != b.congruence.rep:
                violations.append(f"unary {name} F={f:#x}: {a.method} {a.congruence.rep}"
                                  f" vs {b.method} {b.congruence.rep}")
        if alg.size <= binary_max_size:
            for relname, rows in _binary_relation_family(alg):
                checks += 1
                a, b = crosschecked_binary(alg, rows)
                if a.congruence.rep != b.congruence.rep:
                    violations.append(f"binary {name} {relname}: {a.method} {a.congruence.rep}"
                                      f" vs {b.method} {b.congruence.rep}")
    return _report("leibniz-crosscheck",
                   {"max_size": max_size, "binary_max_size": binary_max_size},
                   checks, violations, started)


# ---------------------------------------------------------------------------
# Suite: facts.  The finitely checkable content of the structural facts.

def _census_upto(n: int) -> list[FiniteAlgebra]:
    out = []
    for k in range(1, n + 1):
        out.extend(enumerate_dm_lattices(k))
    return out


def _bd_base_for(pred: str) -> list[tuple[str, Rule]]:
    base = system("BD-base")
    if pred == "T":
        return base.named_rules()
    from .syntax import rename_predicate

    return [(name, rename_predicate(r, "T", pred)) for name, r in base.named_rules()]


def suite_facts(max_size: int = 5, pair_size: int = 4) -> dict:
    started = time.time()
    violations = []
    checks = 0
    bd_rules = _bd_base_for("T")

    # model intersection: filters are exactly the truth-base models, and
    # intersections of models stay models
    for alg in _census_upto(max_size):
        filters = enumerate_filters(alg)
        subsets_that_model = [m for m in range(1 << alg.size)
                              if is_model(structure(alg, {"T": m}), bd_rules)[0]]
        if sorted(subsets_that_model) != sorted(filters):
            violations.append(f"|A|={alg.size}: truth-base models differ from lattice filters")
        for f1, f2 in iproduct(filters, repeat=2):
            checks += 1
            ok, _ = is_model(structure(alg, {"T": f1 & f2}), bd_rules)
            if not ok:
                violations.append(f"|A|={alg.size}: intersection {f1:#x}&{f2:#x} not a model")

    # intersection for two-relation models (truth / exact truth)
    bde = system("BDE")
    for alg in _census_upto(pair_size):
        models = []
        for t in range(1 << alg.size):
            for e in range(1 << alg.size):
                s = structure(alg, {"T": t, "E": e})
                if is_model(s, bde.named_rules())[0]:
                    models.append((t, e))
        for (t1, e1), (t2, e2) in combinations(models, 2):
            checks += 1
            s = structure(alg, {"T": t1 & t2, "E": e1 & e2})
            if not is_model(s, bde.named_rules())[0]:
                violations.append(f"|A|={alg.size}: BDE model intersection fails")

    # reduct invariance: S is a model iff S/theta is, for theta below the
    # Leibniz congruence; and the reduct is reduced
    for alg in _census_upto(max_size):
        congs = congruences(alg)
        for t in range(1 << alg.size):
            s = structure(alg, {"T": t})
            theta_l = leibniz_structure(s)
            was_model = is_model(s, bd_rules)[0]
            for theta in congs:
                if not theta.refines(theta_l):
                    continue
                checks += 1
                q, _ = quotient_structure(s, theta)
                if is_model(q, bd_rules)[0] != was_model:
                    violations.append(f"|A|={alg.size} T={t:#x}: model status changes under quotient")
            red, _ = quotient_structure(s, theta_l)
            if not leibniz_structure(red).is_identity:
                violations.append(f"|A|={alg.size} T={t:#x}: reduct not reduced")
            red2, _ = reduct(red)
            if red2 != red:
                violations.append(f"|A|={alg.size} T={t:#x}: reduct not idempotent")

    # explicit description of the Leibniz congruence of a truth-filter model
    for alg in _census_upto(max_size):
        for t in enumerate_filters(alg):
            checks += 1
            omega = leibniz_unary(alg, t)
            n = alg.size
            for a in range(n):
                for b in range(n):
                    described = all(
                        (((t >> alg.join[a][c]) & 1) == ((t >> alg.join[b][c]) & 1))
                        and (((t >> alg.join[alg.neg[a]][c]) & 1)
                             == ((t >> alg.join[alg.neg[b]][c]) & 1))
                        for c in range(n))
                    if described != omega.relates(a, b):
                        violations.append(
                            f"|A|={n} T={t:#x}: join/negation description differs at ({a},{b})")

    # model invariance under reducts, for every core catalogued system
    for sys_name in CORE_SINGLE_CONCLUSION + ("MC-BD", "MC-bridges", "MC-ETL"):
        sysd = system(sys_name)
        rules = sysd.named_rules()
        for alg in _census_upto(3):
            from .engine import candidate_structures

            for cand in candidate_structures(sysd, alg):
                checks += 1
                was_model = is_model(cand, rules)[0]
                red, _ = reduct(cand)
                if is_model(red, rules)[0] != was_model:
                    violations.append(
                        f"{sys_name} on |A|={alg.size}: reduct changes model status")

    # prime-filter reducts embed into the four-element targets
    dm4_t = structure(builtin("DM4"), {"T": (0, 1)})
    dm4_tnf = structure(builtin("DM4"), {"T": (0, 1), "NF": (0, 3)})
    for alg in _census_upto(max_size):
        full = (1 << alg.size) - 1
        for t in enumerate_filters(alg, prime_only=True):
            checks += 1
            s = structure(alg, {"T": t})
            red, _ = reduct(s)
            if not _embeds_into(red, dm4_t):
                violations.append(f"|A|={alg.size} prime T={t:#x}: reduct does not embed")
            nf = full & ~sum(1 << alg.neg[a] for a in mask_iter(t))
            if not is_prime_filter(alg, nf):
                violations.append(f"|A|={alg.size} prime T={t:#x}: complement of ~[T] not prime")
                continue
            if leibniz_unary(alg, t).rep != leibniz_unary(alg, nf).rep:
                violations.append(f"|A|={alg.size} prime T={t:#x}: Leibniz of T and NF differ")
            s2 = structure(alg, {"T": t, "NF": nf})
            red2, _ = reduct(s2)
            if not _embeds_into(red2, dm4_tnf):
                violations.append(f"|A|={alg.size} prime T={t:#x}: two-predicate reduct does not embed")

    return _report("facts", {"max_size": max_size, "pair_size": pair_size},
                   checks, violations, started)


# ---------------------------------------------------------------------------
# Suite: subdirect.

def suite_subdirect(max_size: int = 6) -> dict:
    started = time.time()
    violations = []
    checks = 0
    from .algebra import subdirect_embedding

    targets = {name: builtin(name) for name in ("B2", "K3", "DM4")}
    for n in range(1, max_size + 1):
        for i, alg in enumerate(enumerate_dm_lattices(n)):
            checks += 1
            emb = subdirect_embedding(alg)
            if not emb.is_injective:
                violations.append(f"census{n}.{i}: embedding not injective")
            for hom in emb.homs:
                ok, witness = hom.check(include_constants=False)
                if not ok:
                    violations.append(f"census{n}.{i}: coordinate not a homomorphism ({witness})")
                image = hom.image()
                sub, _ = subalgebra(builtin("DM4"), image)
                if not any(find_isomorphism(sub, t) for t in targets.values()):
                    violations.append(
                        f"census{n}.{i}: coordinate image {image} not one of the three generators")
    return _report("subdirect", {"max_size": max_size}, checks, violations, started)


# ---------------------------------------------------------------------------
# Suites: classification and mc-classification.

def _classify_one(args: tuple[str, int]) -> dict:
    name, size = args
    return classify_models(system(name), size).to_json()


def _classification(names: Sequence[str], size: int, suite: str, jobs: int = 1) -> dict:
    started = time.time()
    violations = []
    checks = 0
    details = {}
    tasks = [(name, size) for name in names]
    if jobs > 1:
        import multiprocessing

        with multiprocessing.Pool(jobs) as pool:
            reports = pool.map(_classify_one, tasks)
    else:
        reports = [_classify_one(t) for t in tasks]
    for rep in reports:  # pool.map preserves task order, so merging is deterministic
        checks += rep["structures"]
        violations.extend(f"{rep['system']}: {v}" for v in rep["violations"])
        details[rep["system"]] = {"structures": rep["structures"], "models": rep["models"]}
    return _report(suite, {"systems": list(names), "size": size, "jobs": jobs},
                   checks, violations, started, {"systems": details})


def suite_classification(size: int = 4, include_variants: bool = True, jobs: int = 1) -> dict:
    names = [f for f in CLASSIFIED_FAMILIES if f != "MC-ETL"]
    if include_variants:
        names += [v for v in CLASSIFIED_VARIANTS if not v.startswith("MC-ETL")]
    return _classification(names, size, "classification", jobs)


def suite_mc_classification(size: int = 4, jobs: int = 1) -> dict:
    return _classification(["MC-ETL", "MC-ETL+tnb"], size, "mc-classification", jobs)


# ---------------------------------------------------------------------------
# Suite: translation.  The exact-truth-to-equation device preserves and
# reflects validity between its two presets, over the full bounded rule
# space (a superset of the renaming-deduplicated stream, which can only
# make the check stronger).

def _formula_bitmap(st: Structure, f: Formula, names: Sequence[str]) -> int:
    var_ix = {v: i for i, v in enumerate(names)}
    from .structures import compile_formula

    fn = compile_formula(st, f, var_ix)
    bits = 0
    for k, v in enumerate(iproduct(range(st.algebra.size), repeat=len(names))):
        if fn(v):
            bits |= 1 << k
    return bits


def suite_translation(max_premises: int = 2, sample: int = 500, seed: int = 0) -> dict:
    started = time.time()
    bounds = RuleSpaceBounds(2, 1, max_premises, 1, frozenset({"T", "E", "eq"}))
    formulas = formulas_within(bounds)
    names = ("x", "y")
    src = preset_structure("BDE-eq")
    tgt = preset_structure("BD-eq+t")
    src_bm = [_formula_bitmap(src, f, names) for f in formulas]
    tgt_bm = [_formula_bitmap(tgt, translate_exact_to_eq_formula(f), names) for f in formulas]
    all_vals = (1 << (src.algebra.size ** 2)) - 1
    violations = []
    checks = 0
    idx = range(len(formulas))
    for k in range(max_premises + 1):
        for prem in combinations(idx, k):
            pm_src = all_vals
            pm_tgt = all_vals
            for p in prem:
                pm_src &= src_bm[p]
                pm_tgt &= tgt_bm[p]
            for c in idx:
                checks += 1
                v_src = (pm_src & ~src_bm[c]) == 0
                v_tgt = (pm_tgt & ~tgt_bm[c]) == 0
                if v_src != v_tgt:
                    r = Rule(frozenset(formulas[p] for p in prem), frozenset({formulas[c]}))
                    violations.append(f"mismatch on {print_rule(r)}")
    # bind the bitmap sweep to decide() on a seeded sample
    rng = random.Random(seed)
    for _ in range(sample):
        k = rng.randint(0, max_premises)
        prem = tuple(rng.sample(idx, k)) if k else ()
        c = rng.choice(idx)
        r = Rule(frozenset(formulas[p] for p in prem), frozenset({formulas[c]}))
        v_src = decide(src, r).valid
        v_tgt = decide(tgt, translate_exact_to_eq(r)).valid
        pm = all_vals
        for p in prem:
            pm &= src_bm[p]
        if v_src != v_tgt:
            violations.append(f"sample mismatch on {print_rule(r)}")
        if v_src != ((pm & ~src_bm[c]) == 0):
            violations.append(f"bitmap/decide disagreement on {print_rule(r)}")
    return _report("translation", {"max_premises": max_premises, "sample": sample, "seed": seed},
                   checks, violations, started)


def translate_exact_to_eq_formula(f: Formula) -> Formula:
    if f.pred == "E":
        return Formula("eq", (Const("#t"), f.args[0]))
    return f


# ---------------------------------------------------------------------------
# Suite: derivability (certificates for the documented derivations, plus
# certificate-checker mutation coverage).

def suite_derivability(depth: int = 8, mutations_needed: int = 100, seed: int = 0) -> dict:
    started = time.time()
    violations = []
    checks = 0
    goals = [
        ("BDE", r"E(x /\ (~x \/ y)) |- E(y)"),
        ("TNE-bridge", "T(x), NF(x) |- E(x)"),
        ("TNE-bridge", "E(x) |- T(x)"),
        ("TNE-bridge", "E(x) |- NF(x)"),
    ]
    certificates = []
    for sys_name, text in goals:
        sysd = system(sys_name)
        r = parse_rule(text, sysd.signature)
        d = derive(sysd, r, depth)
        checks += 1
        if d is None or d.depth > depth:
            violations.append(f"{sys_name}: no certificate for {text!r} within depth {depth}")
            continue
        ok, msg = check_derivation(sysd, d, r)
        if not ok:
            violations.append(f"{sys_name}: emitted certificate rejected: {msg}")
        certificates.append((sysd, d, r))

    # harvest further certificates until at least `mutations_needed` edges exist
    rng = random.Random(seed)
    bde = system("BDE")
    bounds = RuleSpaceBounds(2, 1, 2, 1, frozenset({"T", "E"}))
    pool = [r for r in _rule_sample(bounds, rng, 400) if decide("BDE", r).valid]
    edges = sum(len(edge_mutations(d)) for _, d, _ in certificates)
    for r in pool:
        if edges >= mutations_needed:
            break
        d = derive(bde, r, 4)
        if d is not None and check_derivation(bde, d, r)[0]:
            certificates.append((bde, d, r))
            edges += len(edge_mutations(d))

    mutated = 0
    for sysd, d, r in certificates:
        for m in edge_mutations(d):
            if mutated >= mutations_needed:
                break
            mutated += 1
            checks += 1
            if check_derivation(sysd, m, r)[0]:
                violations.append(f"{sysd.name}: a single-edge mutation was accepted")
    if mutated < mutations_needed:
        violations.append(f"only {mutated} mutations available, needed {mutations_needed}")
    return _report("derivability", {"depth": depth, "mutations": mutations_needed},
                   checks, violations, started, {"mutations_rejected": mutated})


def _rule_sample(bounds: RuleSpaceBounds, rng: random.Random, count: int) -> list[Rule]:
    formulas = formulas_within(bounds)
    out = []
    for _ in range(count):
        k = rng.randint(0, bounds.max_premises)
        prem = rng.sample(formulas, k) if k else []
        conc = rng.choice(formulas)
        out.append(Rule(frozenset(prem), frozenset({conc})))
    return out


# ---------------------------------------------------------------------------
# Suite: engine-soundness.  Saturate every bounded premise set with ground
# scheme instances over the shared bounded term universe (a superset of
# every per-goal universe at these bounds, and saturation is monotone in
# the universe, so this covers each derive() call on the space); every
# fact reached within the depth must be semantically valid.

def _ground_program(sysd: AxiomSystem, formulas: list[Formula], universe) -> list[tuple[tuple[int, ...], int]]:
    findex = {f: i for i, f in enumerate(formulas)}
    by_pred: dict[str, list[Formula]] = {}
    for f in formulas:
        by_pred.setdefault(f.pred, []).append(f)
    ground: set[tuple[tuple[int, ...], int]] = set()
    for scheme in sysd.schemes:
        prems = sorted(scheme.rule.premises, key=formula_text)
        concl = scheme.rule.conclusion
        prem_vars: set[str] = set()
        for p in prems:
            prem_vars |= formula_variables(p)
        free = sorted(formula_variables(concl) - prem_vars)
        for binding in _match_premises(prems, by_pred, {}):
            inst_prems = tuple(sorted({findex[substitute_formula(p, binding)] for p in prems}))
            for extra in iproduct(universe, repeat=len(free)):
                b = dict(binding)
                b.update(zip(free, extra))
                c = substitute_formula(concl, b)
                ci = findex.get(c)
                if ci is not None and ci not in inst_prems:
                    ground.add((inst_prems, ci))
    return sorted(ground)


def _horn_closure(ground, by_premise, zero_rules: Sequence[int],
                  base_missing: Sequence[int], seeds: Iterable[int], depth: int) -> set[int]:
    """BFS saturation; a fact's round is one past its latest premise."""
    facts = set(seeds)
    frontier = list(facts)
    seen_dec: dict[int, int] = {}
    for rnd in range(1, depth + 1):
        ready: list[int] = []
        for f in frontier:
            for rid in by_premise.get(f, ()):
                d = seen_dec.get(rid, 0) + 1
                seen_dec[rid] = d
                if d == base_missing[rid]:
                    ready.append(rid)
        if rnd == 1:
            ready.extend(zero_rules)
        new: list[int] = []
        for rid in ready:
            concl = ground[rid][1]
            if concl not in facts:
                facts.add(concl)
                new.append(concl)
        if not new:
            break
        frontier = new
    return facts


def suite_engine_soundness(depth: int = 4, systems_run: Sequence[str] | None = None) -> dict:
    started = time.time()
    violations = []
    checks = 0
    # (system, max premises, term depth); constant variants run at term
    # depth 0, where the space stays desk-scale but constants are exercised
    runs: list[tuple[str, int, int]] = [(n, 2, 1) for n in (systems_run or CORE_SINGLE_CONCLUSION)]
    if systems_run is None:
        runs += [(n, 2, 0) for n in VARIANT_SMOKE]
    for sys_name, max_prem, term_depth in runs:
        sysd = system(sys_name)
        bounds = RuleSpaceBounds(2, term_depth, max_prem, 1, sysd.signature.relations,
                                 sysd.signature.constants)
        formulas = formulas_within(bounds)
        universe = terms_within(bounds)
        ground = _ground_program(sysd, formulas, universe)
        by_premise: dict[int, list[int]] = {}
        base_missing = [len(prems) for prems, _ in ground]
        zero_rules = [rid for rid, m in enumerate(base_missing) if m == 0]
        for rid, (prems, _) in enumerate(ground):
            for p in prems:
                by_premise.setdefault(p, []).append(rid)
        st = preset_structure(sysd.preset)
        names = ("x", "y")
        bitmaps = [_formula_bitmap(st, f, names) for f in formulas]
        all_vals = (1 << (st.algebra.size ** 2)) - 1
        idx = range(len(formulas))
        for k in range(max_prem + 1):
            for prem in combinations(idx, k):
                pm = all_vals
                for p in prem:
                    pm &= bitmaps[p]
                derived = _horn_closure(ground, by_premise, zero_rules, base_missing,
                                        prem, depth)
                for c in derived:
                    if c in prem:
                        continue
                    checks += 1
                    if (pm & ~bitmaps[c]) != 0:
                        r = Rule(frozenset(formulas[p] for p in prem),
                                 frozenset({formulas[c]}))
                        violations.append(f"{sys_name}: derived but invalid: {print_rule(r)}")
    return _report("engine-soundness", {"depth": depth, "runs": [r[0] for r in runs]},
                   checks, violations, started)


# ---------------------------------------------------------------------------
# Suite: extension.  Every truth rule valid in the four-valued base logic
# stays valid in its three catalogued extensions.

def suite_extension(max_premises: int = 2) -> dict:
    started = time.time()
    bounds = RuleSpaceBounds(2, 1, max_premises, 1, frozenset({"T"}))
    formulas = formulas_within(bounds)
    names = ("x", "y")
    from .syntax import rename_predicate

    presets = {
        "BD": (preset_structure("BD"), lambda f: f),
        "ETL": (preset_structure("ETL"), lambda f: Formula("E", f.args) if f.pred == "T" else f),
        "K": (preset_structure("K"), lambda f: f),
        "LP": (preset_structure("LP"), lambda f: f),
    }
    bitmaps = {}
    sizes = {}
    for name, (st, conv) in presets.items():
        sizes[name] = (1 << (st.algebra.size ** 2)) - 1
        bitmaps[name] = [_formula_bitmap(st, conv(f), names) for f in formulas]
    violations = []
    checks = 0
    idx = range(len(formulas))
    for k in range(max_premises + 1):
        for prem in combinations(idx, k):
            masks = {name: sizes[name] for name in presets}
            for p in prem:
                for name in presets:
                    masks[name] &= bitmaps[name][p]
            for c in idx:
                if (masks["BD"] & ~bitmaps["BD"][c]) == 0:
                    checks += 1
                    for name in ("ETL", "K", "LP"):
                        if (masks[name] & ~bitmaps[name][c]) != 0:
                            r = Rule(frozenset(formulas[p] for p in prem),
                                     frozenset({formulas[c]}))
                            violations.append(f"{name} loses base-valid rule {print_rule(r)}")
    return _report("extension", {"max_premises": max_premises}, checks, violations, started)


# ---------------------------------------------------------------------------
# Suite: completeness-evidence (bounded; gaps are logged, never failed).

def suite_completeness_evidence(system_name: str = "BDE", max_depth_terms: int = 1,
                                max_premises: int = 2, derive_depth: int = 6,
                                max_terms: int = 120) -> dict:
    """Try to re-derive every semantically valid rule in a bounded space.

    One-sided by construction: a miss lands in known_gaps, never in the
    violation list.  The default space (two variables, term depth 1, up
    to two premises) sweeps in seconds; term depth 2 is feasible with
    max_premises=1 and is exposed through the parameters.
    """
    started = time.time()
    sysd = system(system_name)
    bounds = RuleSpaceBounds(2, max_depth_terms, max_premises, 1,
                             sysd.signature.relations, sysd.signature.constants)
    from .engine import enumerate_rules

    gaps = []
    checks = 0
    confirmed = 0
    for r in enumerate_rules(bounds):
        if not r.is_single_conclusion:
            continue
        if not decide(sysd.preset, r).valid:
            continue
        checks += 1
        d = derive(sysd, r, derive_depth, max_terms=max_terms)
        if d is None:
            gaps.append(print_rule(r))
        else:
            confirmed += 1
    return _report("completeness-evidence",
                   {"system": system_name, "term_depth": max_depth_terms,
                    "max_premises": max_premises, "derive_depth": derive_depth,
                    "max_terms": max_terms},
                   checks, [], started,
                   {"confirmed": confirmed, "known_gaps": gaps})


# ---------------------------------------------------------------------------
# Suite: roundtrip.

def random_term(rng: random.Random, variables: Sequence[str], constants: Sequence[str],
                depth: int):
    if depth == 0 or rng.random() < 0.3:
        if constants and rng.random() < 0.2:
            return Const(rng.choice(constants))
        return Var(rng.choice(variables))
    op = rng.randrange(3)
    if op == 0:
        return Neg(random_term(rng, variables, constants, depth - 1))
    left = random_term(rng, variables, constants, depth - 1)
    right = random_term(rng, variables, constants, depth - 1)
    return Meet(left, right) if op == 1 else Join(left, right)


def random_formula(rng: random.Random, preds: Sequence[str], variables, constants, depth):
    pred = rng.choice(preds)
    if pred == "eq":
        return Formula("eq", (random_term(rng, variables, constants, depth),
                              random_term(rng, variables, constants, depth)))
    return Formula(pred, (random_term(rng, variables, constants, depth),))


def random_rule(rng: random.Random, max_vars: int = 3, max_depth: int = 3,
                max_premises: int = 3, max_conclusions: int = 2) -> Rule:
    variables = ["x", "y", "z", "w"][:max(1, max_vars)]
    constants = ["#t", "#n", "#b"]
    preds = ["T", "E", "NF", "eq"]
    prems = [random_formula(rng, preds, variables, constants, rng.randint(0, max_depth))
             for _ in range(rng.randint(0, max_premises))]
    concs = [random_formula(rng, preds, variables, constants, rng.randint(0, max_depth))
             for _ in range(rng.randint(0, max_conclusions))]
    return Rule(frozenset(prems), frozenset(concs))


def golden_corpus() -> list[str]:
    """Canonical texts of every catalogued axiom plus the displayed rules."""
    texts = []
    for name in all_system_names():
        for _, r in system(name).named_rules():
            texts.append(print_rule(r))
    for text, preset, _, _ in LEDGER_RULES:
        st = preset_structure(preset)
        texts.append(print_rule(parse_rule(text, st.signature())))
    return sorted(set(texts))


def suite_roundtrip(count: int = 10000, seed: int = 0) -> dict:
    started = time.time()
    rng = random.Random(seed)
    violations = []
    checks = 0
    for i in range(count):
        r = random_rule(rng)
        checks += 1
        text = print_rule(r)
        back = parse_rule(text)
        if back != r:
            violations.append(f"parse(print) changed rule #{i}: {text!r}")
    for text in golden_corpus():
        checks += 1
        again = print_rule(parse_rule(text))
        if again != text:
            violations.append(f"print(parse) not idempotent on {text!r} -> {again!r}")
    return _report("roundtrip", {"count": count, "seed": seed}, checks, violations, started)


# ---------------------------------------------------------------------------
# Registry and runner.

SUITES: dict[str, Callable[..., dict]] = {
    "soundness": suite_soundness,
    "rule-ledger": suite_rule_ledger,
    "leibniz-crosscheck": suite_leibniz_crosscheck,
    "facts": suite_facts,
    "subdirect": suite_subdirect,
    "classification": suite_classification,
    "mc-classification": suite_mc_classification,
    "translation": suite_translation,
    "derivability": suite_derivability,
    "engine-soundness": suite_engine_soundness,
    "extension": suite_extension,
    "completeness-evidence": suite_completeness_evidence,
    "roundtrip": suite_roundtrip,
}


def run_suite(name: str, **kwargs) -> dict:
    fn = SUITES.get(name)
    if fn is None:
        raise KeyError(f"unknown verification suite {name!r}")
    return fn(**kwargs)
