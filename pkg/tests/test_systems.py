import pytest

from fourval.structures import holds, preset_structure
from fourval.syntax import parse_rule, print_rule, sig
from fourval.systems import (
    AxiomSystem,
    Scheme,
    all_system_names,
    export_rule_text,
    soundness_check,
    system,
)


def canonical(text, sigspec):
    return print_rule(parse_rule(text, sigspec))


def test_registry_has_every_family():
    names = all_system_names()
    for family in ("BD-base", "ETL-base", "K-base", "LP-base", "BDE", "BDNF", "KE",
                   "TNE-bridge", "EQ-core", "BD-EQ", "ETL-EQ", "BDE-EQ", "BDNF-EQ",
                   "MC-BD", "MC-bridges", "MC-ETL"):
        assert family in names
    # constant families expand to every supported subset
    assert {"BDE+t", "BDE+n", "BDE+b", "BDE+tn", "BDE+tb", "BDE+nb", "BDE+tnb"} <= set(names)
    assert {"KE+t", "KE+b", "KE+tb"} <= set(names)
    assert not any(n.startswith("KE+") and "n" in n.split("+")[1] for n in names)
    assert len(names) == len(set(names))


def test_unknown_system():
    with pytest.raises(KeyError):
        system("XYZ")
    with pytest.raises(KeyError):
        system("KE+n")  # unsupported constant for this family


def test_bde_interaction_rules_exactly():
    bde = system("BDE")
    got = {print_rule(s.rule) for s in bde.rules_by_role("interaction")}
    expect = {canonical(t, bde.signature) for t in (
        "E(x) |- T(x)",
        r"E(x), T(~x \/ y) |- T(y)",
        r"T(x), T(y), E(~x \/ y) |- E(y)",
    )}
    assert got == expect
    # the exact-truth side uses the plain truth base (the conjunctive modus
    # ponens rule must remain derivable, not axiomatic)
    char = parse_rule(r"E(x /\ (~x \/ y)) |- E(y)", bde.signature)
    assert all(s.rule != char for s in bde.schemes)


def test_etl_eq_non_core_rules_exactly():
    etl_eq = system("ETL-EQ")
    got = {print_rule(s.rule) for s in etl_eq.rules_by_role("interaction")}
    assert got == {canonical(r"E(x) |- x \/ y = x", etl_eq.signature)}


def test_mc_etl_contains_wrapped_rule():
    mc = system("MC-ETL")
    texts = {print_rule(s.rule) for s in mc.schemes}
    assert canonical(r"E(x \/ y) |- E(~x \/ ~y) | E(x) | E(y)", mc.signature) in texts
    assert mc.kind == "multiple-conclusion"


def test_kinds_and_presets():
    assert system("BDE").kind == "single-conclusion"
    assert system("MC-BD").preset == "BD"
    assert system("BDE+tn").preset == "BDE+tn"
    assert system("EQ-core").preset == "DM-eq"


def test_constant_rules_filtered_by_subset():
    plus_t = system("BDE+t")
    assert {s.name for s in plus_t.rules_by_role("constant")} == {"c-exact-top"}
    plus_n = system("BDE+n")
    assert {s.name for s in plus_n.rules_by_role("constant")} == {
        "c-neither-true-l", "c-neither-true-r", "c-neither-exact-l", "c-neither-exact-r"}
    # the rule mentioning all three constants appears only with all present
    bd_eq_nb = system("BD-EQ+nb")
    assert "c-both-neither-top" not in {s.name for s in bd_eq_nb.schemes}
    bd_eq_tnb = system("BD-EQ+tnb")
    assert "c-both-neither-top" in {s.name for s in bd_eq_tnb.schemes}


def test_every_registry_system_is_sound():
    for name in all_system_names():
        report = soundness_check(system(name))
        assert report["ok"], (name, [a for a, v in report["axioms"] if not v.valid])


def test_corrupt_system_fails_soundness():
    bde = system("BDE")
    swapped = parse_rule("T(x) |- E(x)", bde.signature)  # converse of exact-true
    corrupt = AxiomSystem("corrupt", bde.signature,
                          bde.schemes + (Scheme("bad", swapped, "interaction"),),
                          bde.kind, bde.preset)
    report = soundness_check(corrupt)
    assert not report["ok"]
    bad = [a for a, v in report["axioms"] if not v.valid]
    assert bad == ["bad"]


def test_redundancy_rule_is_valid_but_not_an_axiom():
    bde = system("BDE")
    rule = parse_rule(r"E(x /\ (~x \/ y)) |- E(y)", bde.signature)
    assert holds(preset_structure("BDE"), rule).valid
    assert all(s.rule != rule for s in bde.schemes)


def test_tne_bridge_semantic_interderivability():
    tne = preset_structure("TNE")
    s = sig({"T", "E", "NF"})
    assert holds(tne, parse_rule("T(x), NF(x) |- E(x)", s)).valid
    assert holds(tne, parse_rule("E(x) |- T(x)", s)).valid
    assert holds(tne, parse_rule("E(x) |- NF(x)", s)).valid


def test_rule_text_export_reparses():
    from fourval.syntax import parse_rule_lines

    for name in ("BDE", "BD-EQ+tnb", "MC-ETL"):
        sysd = system(name)
        text = export_rule_text(sysd)
        rules = parse_rule_lines(text, sysd.signature)
        assert frozenset(rules) == frozenset(s.rule for s in sysd.schemes)


def test_scheme_names_unique_per_system():
    for name in all_system_names():
        sysd = system(name)
        names = [s.name for s in sysd.schemes]
        assert len(names) == len(set(names)), name
