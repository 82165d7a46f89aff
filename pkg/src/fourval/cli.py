"""Command-line front end.

Subcommands: decide, derive, verify, systems {list,show}, algebra
{dump,census}, leibniz.  Reports are plain text or JSON (schema 1); with
identical configuration (including the seed) the JSON output is
byte-identical apart from the "timings" block.

Exit codes: 0 success/valid, 1 invalid or violations found, 2 usage or
parse/signature error, 3 inconclusive derivation search.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass

from .algebra import BoundExceededError, algebra_to_json, builtin, enumerate_dm_lattices
from .engine import (
    DeriveBudgetError,
    check_derivation,
    decide,
    derivation_to_json,
    derive,
)
from .leibniz import leibniz_binary, leibniz_structure, leibniz_unary, reduct
from .structures import (
    SignatureMismatchError,
    VariableLimitError,
    preset_structure,
    structure_to_json,
)
from .syntax import ParseError, formula_text, parse_rule, parse_rule_lines, print_rule
from .systems import all_system_names, export_rule_text, system
from . import verify as verify_mod

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_INCONCLUSIVE = 3


@dataclass
class RunConfig:
    command: str
    logic: str | None = None
    system: str | None = None
    rule: str | None = None
    rules_file: str | None = None
    depth: int = 8
    size: int = 4
    max_size: int = 6
    var_limit: int = 8
    seed: int = 0
    jobs: int = 1
    output: str = "text"

    def to_json(self) -> dict:
        return asdict(self)


def _load_config_file(path: str) -> dict:
    """key=value lines; '#' starts a comment; flags override these."""
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {line!r}")
            key, value = line.split("=", 1)
            out[key.strip().replace("-", "_")] = value.strip()
    return out


def _emit(report: dict, cfg: RunConfig, out=None):
    out = out if out is not None else sys.stdout
    if cfg.output == "json":
        json.dump(report, out, indent=2, sort_keys=True)
        out.write("\n")
    else:
        _emit_text(report, out)


def _emit_text(report: dict, out):
    for key, value in report.items():
        if key in ("schema", "config", "timings"):
            continue
        if isinstance(value, (list, dict)):
            out.write(f"{key}:\n")
            text = json.dumps(value, indent=2, sort_keys=True)
            for line in text.splitlines():
                out.write(f"  {line}\n")
        else:
            out.write(f"{key}: {value}\n")


def _envelope(cfg: RunConfig, result: dict) -> dict:
    return {"schema": SCHEMA_VERSION, "command": cfg.command,
            "config": cfg.to_json(), **result}


def _resolve_preset(name: str):
    """A --logic value may be a preset name or an axiom-system name."""
    try:
        return name, preset_structure(name)
    except KeyError:
        pass
    sysd = system(name)  # may raise KeyError
    return sysd.preset, preset_structure(sysd.preset)


def cmd_decide(cfg: RunConfig) -> int:
    preset_name, st = _resolve_preset(cfg.logic)
    sigspec = st.signature()
    if cfg.rules_file:
        with open(cfg.rules_file) as fh:
            rules = parse_rule_lines(fh.read(), sigspec)
    else:
        rules = [parse_rule(cfg.rule, sigspec)]
    results = []
    all_valid = True
    for r in rules:
        verdict = decide(st, r, cfg.var_limit)
        entry = {"rule": print_rule(r), "valid": verdict.valid}
        if not verdict.valid:
            all_valid = False
            entry["counter_valuation"] = {
                v: st.algebra.element_name(e) for v, e in sorted(verdict.valuation.items())}
            entry["failed_conclusions"] = [formula_text(c) for c in verdict.failed_conclusions]
        results.append(entry)
    report = _envelope(cfg, {"preset": preset_name, "results": results, "valid": all_valid})
    _emit(report, cfg)
    return EXIT_OK if all_valid else EXIT_INVALID


def cmd_derive(cfg: RunConfig) -> int:
    sysd = system(cfg.system)
    r = parse_rule(cfg.rule, sysd.signature)
    if not r.is_single_conclusion:
        raise ParseError("derive needs a single-conclusion rule", 0)
    verdict = decide(sysd.preset, r, cfg.var_limit)
    if not verdict.valid:
        st = preset_structure(sysd.preset)
        report = _envelope(cfg, {
            "system": sysd.name,
            "rule": print_rule(r),
            "status": "invalid",
            "counter_valuation": {v: st.algebra.element_name(e)
                                  for v, e in sorted(verdict.valuation.items())},
        })
        _emit(report, cfg)
        return EXIT_INVALID
    d = derive(sysd, r, cfg.depth)
    if d is None:
        report = _envelope(cfg, {"system": sysd.name, "rule": print_rule(r),
                                 "status": "inconclusive", "depth": cfg.depth})
        _emit(report, cfg)
        return EXIT_INCONCLUSIVE
    ok, msg = check_derivation(sysd, d, r)
    report = _envelope(cfg, {
        "system": sysd.name,
        "rule": print_rule(r),
        "status": "derived",
        "certificate": derivation_to_json(d),
        "certificate_checked": ok,
        "depth": d.depth,
    })
    _emit(report, cfg)
    return EXIT_OK if ok else EXIT_INVALID


_SUITE_ARGS = {
    "soundness": lambda cfg: {},
    "rule-ledger": lambda cfg: {},
    "leibniz-crosscheck": lambda cfg: {"max_size": min(cfg.max_size, 5)},
    "facts": lambda cfg: {},
    "subdirect": lambda cfg: {"max_size": cfg.max_size},
    "classification": lambda cfg: {"size": cfg.size, "jobs": cfg.jobs},
    "mc-classification": lambda cfg: {"size": cfg.size, "jobs": cfg.jobs},
    "translation": lambda cfg: {"seed": cfg.seed},
    "derivability": lambda cfg: {"depth": cfg.depth, "seed": cfg.seed},
    "engine-soundness": lambda cfg: {},
    "extension": lambda cfg: {},
    "completeness-evidence": lambda cfg: {"derive_depth": cfg.depth},
    "roundtrip": lambda cfg: {"seed": cfg.seed},
}


def cmd_verify(cfg: RunConfig, suites: list[str]) -> int:
    if suites == ["all"]:
        suites = list(_SUITE_ARGS)
    reports = []
    ok = True
    for name in suites:
        if name not in _SUITE_ARGS:
            raise KeyError(f"unknown verification suite {name!r}")
        rep = verify_mod.run_suite(name, **_SUITE_ARGS[name](cfg))
        reports.append(rep)
        ok = ok and rep["ok"]
    report = _envelope(cfg, {"ok": ok, "suites": reports})
    _emit(report, cfg)
    return EXIT_OK if ok else EXIT_INVALID


def cmd_systems(cfg: RunConfig, action: str, name: str | None, as_rules: bool) -> int:
    if action == "list":
        report = _envelope(cfg, {"systems": all_system_names()})
        _emit(report, cfg)
        return EXIT_OK
    sysd = system(name)
    if as_rules:
        sys.stdout.write(export_rule_text(sysd))
        return EXIT_OK
    report = _envelope(cfg, {
        "name": sysd.name,
        "kind": sysd.kind,
        "preset": sysd.preset,
        "notes": sysd.notes,
        "signature": {"relations": sorted(sysd.signature.relations),
                      "constants": sorted(sysd.signature.constants)},
        "schemes": [{"name": s.name, "role": s.role, "rule": print_rule(s.rule)}
                    for s in sysd.schemes],
    })
    _emit(report, cfg)
    return EXIT_OK


def cmd_algebra(cfg: RunConfig, action: str, name: str | None, constants: str,
                kleene: bool) -> int:
    if action == "dump":
        consts = {f"#{c}" for c in constants}
        try:
            st = preset_structure(name if not consts else
                                  name + "+" + "".join(sorted(constants)))
            data = structure_to_json(st)
        except KeyError:
            data = algebra_to_json(builtin(name, consts))
        report = _envelope(cfg, {"algebra": data})
        _emit(report, cfg)
        return EXIT_OK
    census = []
    for n in range(1, cfg.max_size + 1):
        for alg in enumerate_dm_lattices(n, kleene_only=kleene):
            census.append(algebra_to_json(alg))
    report = _envelope(cfg, {"count": len(census), "census": census,
                             "kleene_only": kleene, "max_size": cfg.max_size})
    _emit(report, cfg)
    return EXIT_OK


def cmd_leibniz(cfg: RunConfig) -> int:
    st = preset_structure(cfg.logic)
    theta = leibniz_structure(st)
    per_relation = {}
    for rel, mask in sorted(st.unary.items()):
        per_relation[rel] = list(leibniz_unary(st.algebra, mask).rep)
    for rel, rows in sorted(st.binary.items()):
        per_relation[rel] = list(leibniz_binary(st.algebra, rows).rep)
    red, proj = reduct(st)
    report = _envelope(cfg, {
        "preset": cfg.logic,
        "per_relation": per_relation,
        "leibniz_congruence": list(theta.rep),
        "reduced": theta.is_identity,
        "reduct": structure_to_json(red),
        "projection": list(proj),
    })
    _emit(report, cfg)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key=value config file merged under explicit flags")
    common.add_argument("--output", choices=("text", "json"), default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--jobs", type=int, default=None)

    parser = argparse.ArgumentParser(
        prog="fourval",
        parents=[common],
        description="Four-valued relational logics over finite De Morgan lattices.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = add_parser("decide", help="decide a rule against a preset structure")
    p.add_argument("--logic", required=True,
                   help="preset or system name, e.g. BD, BDE+n, MC-ETL")
    p.add_argument("--var-limit", type=int, default=None)
    p.add_argument("--file", dest="rules_file",
                   help="rule file: one rule per line, # comments")
    p.add_argument("rule", nargs="?", help="rule text, e.g. 'E(x) |- T(x)'")

    p = add_parser("derive", help="search for a derivation certificate")
    p.add_argument("--system", required=True)
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("rule")

    p = add_parser("verify", help="run named verification suites")
    p.add_argument("suites", nargs="+",
                   help="suite names or 'all'; see fourval verify --list")
    p.add_argument("--size", type=int, default=None)
    p.add_argument("--max-size", type=int, default=None)
    p.add_argument("--depth", type=int, default=None)

    p = add_parser("systems", help="catalogue of axiom systems")
    ss = p.add_subparsers(dest="systems_action", required=True)
    ss.add_parser("list", parents=[common])
    q = ss.add_parser("show", parents=[common])
    q.add_argument("name")
    q.add_argument("--rules", action="store_true", help="plain rule-per-line export")

    p = add_parser("algebra", help="dump builtin algebras or run the census")
    aa = p.add_subparsers(dest="algebra_action", required=True)
    q = aa.add_parser("dump", parents=[common])
    q.add_argument("name", help="builtin or preset name (B2, K3, DM4, BD, BDE-eq, ...)")
    q.add_argument("--constants", default="", help="subset of tnb")
    q = aa.add_parser("census", parents=[common])
    q.add_argument("--max-size", type=int, default=None)
    q.add_argument("--kleene", action="store_true")

    p = add_parser("leibniz", help="Leibniz congruence and reduct of a preset")
    p.add_argument("--preset", dest="logic", required=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    merged: dict = {}
    if args.config:
        try:
            merged.update(_load_config_file(args.config))
        except (OSError, ValueError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_USAGE

    def pick(name, default, cast=lambda x: x):
        flag = getattr(args, name, None)
        if flag is not None:
            return flag
        if name in merged:
            return cast(merged[name])
        return default

    cfg = RunConfig(
        command=args.command,
        logic=getattr(args, "logic", None),
        system=getattr(args, "system", None),
        rule=getattr(args, "rule", None),
        rules_file=pick("rules_file", None),
        depth=pick("depth", 8, int),
        size=pick("size", 4, int),
        max_size=pick("max_size", 6, int),
        var_limit=pick("var_limit", 8, int),
        seed=pick("seed", 0, int),
        jobs=pick("jobs", 1, int),
        output=pick("output", "text"),
    )
    try:
        if args.command == "decide":
            if not cfg.rule and not cfg.rules_file:
                print("error: decide needs a rule or --file", file=sys.stderr)
                return EXIT_USAGE
            return cmd_decide(cfg)
        if args.command == "derive":
            return cmd_derive(cfg)
        if args.command == "verify":
            return cmd_verify(cfg, args.suites)
        if args.command == "systems":
            return cmd_systems(cfg, args.systems_action, getattr(args, "name", None),
                               getattr(args, "rules", False))
        if args.command == "algebra":
            return cmd_algebra(cfg, args.algebra_action, getattr(args, "name", None),
                               getattr(args, "constants", ""), getattr(args, "kleene", False))
        if args.command == "leibniz":
            return cmd_leibniz(cfg)
        print(f"error: unknown command {args.command}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, SignatureMismatchError, VariableLimitError, KeyError,
            BoundExceededError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except DeriveBudgetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INCONCLUSIVE


if __name__ == "__main__":
    sys.exit(main())
