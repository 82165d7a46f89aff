import json

import pytest

from fourval.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--output", "json")
    return code, json.loads(out) if out else None, err


def test_decide_valid_exits_zero(capsys):
    code, report, _ = run_json(capsys, "decide", "--logic", "BDNF",
                               r"T(x), NF(~x \/ y) |- NF(y)")
    assert code == 0
    assert report["schema"] == 1
    assert report["valid"] is True


def test_decide_signature_error_exits_two(capsys):
    code, _, err = run(capsys, "decide", "--logic", "BD", "T(x), T(y) |- x = y")
    assert code == 2
    assert "eq" in err


def test_decide_mc_rule(capsys):
    code, report, _ = run_json(capsys, "decide", "--logic", "MC-ETL",
                               r"E(x \/ y) |- E(~x \/ ~y) | E(x) | E(y)")
    assert code == 0 and report["preset"] == "ETL"


def test_decide_invalid_reports_counter_valuation(capsys):
    code, report, _ = run_json(capsys, "decide", "--logic", "BD",
                               r"T(x /\ (~x \/ y)) |- T(y)")
    assert code == 1
    assert report["results"][0]["counter_valuation"] == {"x": "b", "y": "f"}


def test_decide_rule_file(capsys, tmp_path):
    path = tmp_path / "rules.txt"
    path.write_text("# two displayed rules\nE(x) |- T(x)\nE(x), T(~x \\/ y) |- T(y)\n")
    code, report, _ = run_json(capsys, "decide", "--logic", "BDE", "--file", str(path))
    assert code == 0 and len(report["results"]) == 2


def test_derive_certificate(capsys):
    code, report, _ = run_json(capsys, "derive", "--system", "BDE", "--depth", "6",
                               r"E(x /\ (~x \/ y)) |- E(y)")
    assert code == 0
    assert report["status"] == "derived" and report["certificate_checked"] is True


def test_derive_trivial_certificate(capsys):
    code, report, _ = run_json(capsys, "derive", "--system", "BDE", "E(x) |- E(x)")
    assert code == 0 and report["depth"] == 0


def test_derive_refuted_exits_one(capsys):
    code, report, _ = run_json(capsys, "derive", "--system", "BD-base", "T(x) |- T(~x)")
    assert code == 1
    assert report["status"] == "invalid" and "counter_valuation" in report


def test_derive_inconclusive_exits_three(capsys):
    # valid rule, depth too small for the search to reach it
    code, report, _ = run_json(capsys, "derive", "--system", "BDE", "--depth", "1",
                               r"E(x /\ (~x \/ y)) |- E(y)")
    assert code == 3 and report["status"] == "inconclusive"


def test_verify_unknown_suite_exits_two(capsys):
    code, _, err = run(capsys, "verify", "nope")
    assert code == 2 and "unknown verification suite" in err


def test_verify_soundness(capsys):
    code, report, _ = run_json(capsys, "verify", "soundness")
    assert code == 0
    assert report["ok"] is True
    assert report["suites"][0]["suite"] == "soundness"


def test_systems_list_and_show(capsys):
    code, report, _ = run_json(capsys, "systems", "list")
    assert code == 0 and "BDE" in report["systems"]
    code, report, _ = run_json(capsys, "systems", "show", "BDE")
    assert code == 0
    roles = {s["role"] for s in report["schemes"]}
    assert roles == {"base", "interaction"}
    code, out, _ = run(capsys, "systems", "show", "BDE", "--rules")
    assert code == 0 and "|-" in out


def test_systems_show_unknown_exits_two(capsys):
    code, _, err = run(capsys, "systems", "show", "XYZ")
    assert code == 2


def test_algebra_dump_and_census(capsys):
    code, report, _ = run_json(capsys, "algebra", "dump", "DM4", "--constants", "tn")
    assert code == 0
    assert report["algebra"]["ops"]["const"] == {"#n": 3, "#t": 0}
    code, report, _ = run_json(capsys, "algebra", "census", "--max-size", "4")
    assert code == 0 and report["count"] == 6


def test_algebra_dump_preset_includes_relations(capsys):
    code, report, _ = run_json(capsys, "algebra", "dump", "BDE-eq")
    assert code == 0 and set(report["algebra"]["rels"]) == {"T", "E", "eq"}


def test_leibniz_subcommand(capsys):
    code, report, _ = run_json(capsys, "leibniz", "--preset", "BDE")
    assert code == 0
    assert report["reduced"] is True
    assert report["leibniz_congruence"] == [0, 1, 2, 3]


def test_config_file_merged_under_flags(capsys, tmp_path):
    cfg = tmp_path / "fourval.cfg"
    cfg.write_text("depth=1\noutput=json\n")
    code, out, _ = run(capsys, "derive", "--system", "BDE", "--config", str(cfg),
                       r"E(x /\ (~x \/ y)) |- E(y)")
    report = json.loads(out)
    assert code == 3 and report["config"]["depth"] == 1
    # explicit flag wins over the config file
    code, out, _ = run(capsys, "derive", "--system", "BDE", "--config", str(cfg),
                       "--depth", "6", r"E(x /\ (~x \/ y)) |- E(y)")
    assert code == 0


def test_json_reports_deterministic_modulo_timings(capsys):
    def grab():
        code, report, _ = run_json(capsys, "verify", "roundtrip", "--seed", "7")
        _strip_timings(report)
        return code, json.dumps(report, sort_keys=True)

    code1, text1 = grab()
    code2, text2 = grab()
    assert code1 == code2 == 0
    assert text1 == text2


def _strip_timings(obj):
    if isinstance(obj, dict):
        obj.pop("timings", None)
        for v in obj.values():
            _strip_timings(v)
    elif isinstance(obj, list):
        for v in obj:
            _strip_timings(v)
