"""Decision procedures, proof search, rule enumeration, model sweeps.

decide() is the semantic oracle: exhaustive valuation checking against a
preset structure.  derive() is a one-sided syntactic search: it forward
chains axiom-scheme instances over a bounded term universe and returns a
checkable certificate, or nothing at exhaustion; invalidity claims always
come from decide().
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations, product as iproduct
from typing import Iterator, Mapping, Sequence

from .algebra import (
    FiniteAlgebra,
    builtin,
    check_demorgan,
    check_kleene,
    congruences,
    enumerate_dm_lattices,
    is_filter,
)
from .leibniz import leibniz_structure, quotient_structure
from .structures import Structure, Verdict, holds, is_model, preset_structure, structure
from .syntax import (
    Const,
    Formula,
    Join,
    Meet,
    Neg,
    Rule,
    SigSpec,
    Term,
    Var,
    formula_text,
    formula_variables,
    print_rule,
    substitute_formula,
    substitute_term,
    subterms,
    term_depth,
    term_text,
)
from .systems import AxiomSystem


class DeriveBudgetError(RuntimeError):
    """Fact or term budget exhausted (distinct from depth exhaustion)."""


class RuleSpaceBudgetError(RuntimeError):
    pass


def decide(preset: str | Structure, r: Rule, var_limit: int = 8) -> Verdict:
    """Validity of a rule in a preset structure (the derivability oracle)."""
    st = preset_structure(preset) if isinstance(preset, str) else preset
    return holds(st, r, var_limit)


# ---------------------------------------------------------------------------
# Derivations.

@dataclass(frozen=True)
class DerivationNode:
    formula: Formula
    scheme: str | None  # None marks a premise
    subst: tuple[tuple[str, Term], ...] = ()
    parents: tuple[int, ...] = ()


@dataclass(frozen=True)
class Derivation:
    nodes: tuple[DerivationNode, ...]
    root: int

    @property
    def depth(self) -> int:
        depths: list[int] = []
        for node in self.nodes:
            if node.scheme is None:
                depths.append(0)
            else:
                depths.append(1 + max((depths[p] for p in node.parents), default=0))
        return depths[self.root]

    def rename_variables(self, mapping: Mapping[str, str]) -> "Derivation":
        ren = {old: Var(new) for old, new in mapping.items()}
        nodes = []
        for node in self.nodes:
            subst = tuple((v, substitute_term(t, ren)) for v, t in node.subst)
            nodes.append(DerivationNode(substitute_formula(node.formula, ren),
                                        node.scheme, subst, node.parents))
        return Derivation(tuple(nodes), self.root)


def derivation_to_json(d: Derivation) -> dict:
    nodes = []
    for node in d.nodes:
        if node.scheme is None:
            nodes.append({"formula": formula_text(node.formula), "by": "premise"})
        else:
            nodes.append({
                "formula": formula_text(node.formula),
                "by": {
                    "scheme": node.scheme,
                    "subst": {v: term_text(t) for v, t in sorted(node.subst)},
                    "parents": list(node.parents),
                },
            })
    return {"nodes": nodes, "root": d.root}


# -- one-way term matching --------------------------------------------------

def _match_term(pat: Term, t: Term, binding: dict[str, Term]) -> dict[str, Term] | None:
    if isinstance(pat, Var):
        bound = binding.get(pat.name)
        if bound is None:
            out = dict(binding)
            out[pat.name] = t
            return out
        return binding if bound == t else None
    if isinstance(pat, Const):
        return binding if pat == t else None
    if isinstance(pat, Neg):
        return _match_term(pat.arg, t.arg, binding) if isinstance(t, Neg) else None
    if isinstance(pat, Meet):
        if not isinstance(t, Meet):
            return None
        b = _match_term(pat.left, t.left, binding)
        return _match_term(pat.right, t.right, b) if b is not None else None
    if not isinstance(t, Join):
        return None
    b = _match_term(pat.left, t.left, binding)
    return _match_term(pat.right, t.right, b) if b is not None else None


def _match_formula(pat: Formula, f: Formula, binding: dict[str, Term]) -> dict[str, Term] | None:
    if pat.pred != f.pred:
        return None
    b: dict[str, Term] | None = binding
    for pt, t in zip(pat.args, f.args):
        b = _match_term(pt, t, b)
        if b is None:
            return None
    return b


def _match_premises(patterns: Sequence[Formula], facts_by_pred: dict[str, list[Formula]],
                    binding: dict[str, Term]) -> Iterator[dict[str, Term]]:
    if not patterns:
        yield binding
        return
    head, rest = patterns[0], patterns[1:]
    for fact in facts_by_pred.get(head.pred, ()):
        b = _match_formula(head, fact, binding)
        if b is not None:
            yield from _match_premises(rest, facts_by_pred, b)


def _term_universe(r: Rule, sigspec: SigSpec, layers: int, max_terms: int) -> list[Term]:
    universe: set[Term] = set()
    for t in r.terms():
        universe |= subterms(t)
    for c in sorted(sigspec.constants):
        universe.add(Const(c))
    for _ in range(layers):
        with_negs = universe | {Neg(t) for t in universe}
        extra = with_negs | {Join(s, t) for s in with_negs for t in with_negs}
        new = sorted(extra - universe, key=lambda t: (term_depth(t), term_text(t)))
        for t in new:
            if len(universe) >= max_terms:
                break
            universe |= subterms(t)
    return sorted(universe, key=lambda t: (term_depth(t), term_text(t)))


@dataclass
class _FactInfo:
    scheme: str | None
    subst: tuple[tuple[str, Term], ...]
    parents: tuple[Formula, ...]
    round: int


def derive(sys: AxiomSystem, r: Rule, depth: int, term_layers: int = 1,
           max_terms: int = 120, max_facts: int = 20000) -> Derivation | None:
    """Forward-chaining saturation from the premises of r.

    Substitutions map scheme variables into a term universe: the subterm
    closure of r, its constants, and `term_layers` rounds of negation/join
    combinations (capped at max_terms).  Returns a minimal-depth
    certificate, or None when the goal is not reached within `depth`
    rounds; None is inconclusive, never a refutation.
    """
    if sys.kind != "single-conclusion":
        raise ValueError("derive only searches single-conclusion systems")
    if not r.is_single_conclusion:
        raise ValueError("derive needs a single-conclusion goal")
    goal = r.conclusion
    facts: dict[Formula, _FactInfo] = {}
    for f in r.premises:
        facts[f] = _FactInfo(None, (), (), 0)
    if goal in facts:
        return _extract(facts, goal)

    universe = _term_universe(r, sys.signature, term_layers, max_terms)
    uset = set(universe)
    prepared = []
    for scheme in sys.schemes:
        prems = sorted(scheme.rule.premises, key=formula_text)
        concl = scheme.rule.conclusion
        prem_vars: set[str] = set()
        for p in prems:
            prem_vars |= formula_variables(p)
        free = sorted(formula_variables(concl) - prem_vars)
        prepared.append((scheme.name, prems, concl, free))

    for rnd in range(1, depth + 1):
        facts_by_pred: dict[str, list[Formula]] = {}
        for f in facts:
            facts_by_pred.setdefault(f.pred, []).append(f)
        new: dict[Formula, _FactInfo] = {}
        for name, prems, concl, free in prepared:
            for binding in _match_premises(prems, facts_by_pred, {}):
                for extra in iproduct(universe, repeat=len(free)):
                    b = dict(binding)
                    b.update(zip(free, extra))
                    inst = substitute_formula(concl, b)
                    if inst in facts or inst in new:
                        continue
                    if any(t not in uset for t in inst.args):
                        continue
                    parents = tuple(sorted({substitute_formula(p, b) for p in prems},
                                           key=formula_text))
                    new[inst] = _FactInfo(name, tuple(sorted(b.items())), parents, rnd)
        if not new:
            return None
        facts.update(new)
        if len(facts) > max_facts:
            raise DeriveBudgetError(f"fact budget exceeded ({len(facts)} > {max_facts})")
        if goal in facts:
            return _extract(facts, goal)
    return None


def _extract(facts: dict[Formula, _FactInfo], goal: Formula) -> Derivation:
    needed: list[Formula] = []
    seen: set[Formula] = set()

    def visit(f: Formula):
        if f in seen:
            return
        seen.add(f)
        for p in facts[f].parents:
            visit(p)
        needed.append(f)

    visit(goal)
    needed.sort(key=lambda f: (facts[f].round, formula_text(f)))
    index = {f: i for i, f in enumerate(needed)}
    nodes = []
    for f in needed:
        info = facts[f]
        nodes.append(DerivationNode(f, info.scheme, info.subst,
                                    tuple(index[p] for p in info.parents)))
    return Derivation(tuple(nodes), index[goal])


def check_derivation(sys: AxiomSystem, d: Derivation, r: Rule) -> tuple[bool, str | None]:
    """Replay a certificate: scheme lookup, substitution, parent matching."""
    if not r.is_single_conclusion:
        return False, "goal rule is not single-conclusion"
    for i, node in enumerate(d.nodes):
        if any(p >= i for p in node.parents):
            return False, f"node {i}: parent does not precede child"
        if node.scheme is None:
            if node.formula not in r.premises:
                return False, f"node {i}: premise node not among the rule's premises"
            continue
        try:
            scheme = sys.scheme(node.scheme)
        except KeyError:
            return False, f"node {i}: unknown scheme {node.scheme!r}"
        subst = dict(node.subst)
        inst_prems = {substitute_formula(p, subst) for p in scheme.rule.premises}
        inst_concl = substitute_formula(scheme.rule.conclusion, subst)
        parent_formulas = {d.nodes[p].formula for p in node.parents}
        if parent_formulas != inst_prems:
            return False, f"node {i}: parents do not match the instantiated premises"
        if len(node.parents) != len(inst_prems):
            return False, f"node {i}: duplicate or missing parent edges"
        if node.formula != inst_concl:
            return False, f"node {i}: formula differs from the instantiated conclusion"
    if d.nodes[d.root].formula != r.conclusion:
        return False, "root formula is not the rule's conclusion"
    return True, None


def edge_mutations(d: Derivation) -> list[Derivation]:
    """All certificates obtained by deleting one parent edge."""
    out = []
    for i, node in enumerate(d.nodes):
        for k in range(len(node.parents)):
            parents = node.parents[:k] + node.parents[k + 1:]
            nodes = list(d.nodes)
            nodes[i] = DerivationNode(node.formula, node.scheme, node.subst, parents)
            out.append(Derivation(tuple(nodes), d.root))
    return out


# ---------------------------------------------------------------------------
# Rule translation (exact truth into equations with the #t constant).

def translate_exact_to_eq(r: Rule) -> Rule:
    """Replace each E(u) by  #t = u;  everything else is unchanged."""

    def tr(f: Formula) -> Formula:
        if f.pred == "E":
            return Formula("eq", (Const("#t"), f.args[0]))
        return f

    return Rule(frozenset(tr(f) for f in r.premises),
                frozenset(tr(f) for f in r.conclusions))


# ---------------------------------------------------------------------------
# Rule-space enumeration.

_VAR_POOL = ("x", "y", "z", "u", "v", "w", "x1", "x2")


@dataclass(frozen=True)
class RuleSpaceBounds:
    max_variables: int
    max_depth: int
    max_premises: int
    max_conclusions: int
    predicates: frozenset[str]
    constants: frozenset[str] = frozenset()

    def __post_init__(self):
        if min(self.max_variables, self.max_depth, self.max_premises,
               self.max_conclusions) < 0:
            raise ValueError("bounds must be non-negative")
        if self.max_variables > len(_VAR_POOL):
            raise ValueError(f"at most {len(_VAR_POOL)} variables supported")


def terms_within(bounds: RuleSpaceBounds) -> list[Term]:
    atoms: list[Term] = [Var(v) for v in _VAR_POOL[:bounds.max_variables]]
    atoms += [Const(c) for c in sorted(bounds.constants)]
    layers: set[Term] = set(atoms)
    for _ in range(bounds.max_depth):
        fresh: set[Term] = {Neg(t) for t in layers}
        fresh.update(Meet(s, t) for s in layers for t in layers)
        fresh.update(Join(s, t) for s in layers for t in layers)
        layers |= fresh
    return sorted(layers, key=lambda t: (term_depth(t), term_text(t)))


def formulas_within(bounds: RuleSpaceBounds) -> list[Formula]:
    terms = terms_within(bounds)
    out: list[Formula] = []
    for pred in ("T", "E", "NF"):
        if pred in bounds.predicates:
            out.extend(Formula(pred, (t,)) for t in terms)
    if "eq" in bounds.predicates:
        out.extend(Formula("eq", (s, t)) for s in terms for t in terms)
    return out


def canonical_rule(r: Rule) -> Rule:
    """Least variant of r under bijective variable renaming."""
    names = sorted(r.variables())
    if not names:
        return r
    pool = _VAR_POOL[:len(names)]
    best = None
    best_text = None
    for perm in _permute(names, pool):
        candidate = apply_rename(r, perm)
        text = print_rule(candidate)
        if best_text is None or text < best_text:
            best, best_text = candidate, text
    return best


def _permute(names: Sequence[str], pool: Sequence[str]) -> Iterator[dict[str, str]]:
    from itertools import permutations as perms

    for p in perms(pool):
        yield dict(zip(names, p))


def apply_rename(r: Rule, mapping: Mapping[str, str]) -> Rule:
    sub = {old: Var(new) for old, new in mapping.items()}
    return Rule(frozenset(substitute_formula(f, sub) for f in r.premises),
                frozenset(substitute_formula(f, sub) for f in r.conclusions))


def count_rule_space(bounds: RuleSpaceBounds) -> int:
    """Upper bound on the raw (pre-dedup) stream length."""
    from math import comb

    f = len(formulas_within(bounds))
    prem = sum(comb(f, k) for k in range(bounds.max_premises + 1))
    conc = sum(comb(f, k) for k in range(bounds.max_conclusions + 1))
    return prem * conc


def enumerate_rules(bounds: RuleSpaceBounds, budget: int = 2_000_000) -> Iterator[Rule]:
    """Deterministic, duplicate-free (up to renaming) stream of rules."""
    if count_rule_space(bounds) > budget:
        raise RuleSpaceBudgetError("rule space exceeds the configured budget")
    formulas = formulas_within(bounds)
    seen: set[Rule] = set()
    for psize in range(bounds.max_premises + 1):
        for prems in combinations(formulas, psize):
            for csize in range(bounds.max_conclusions + 1):
                for concs in combinations(formulas, csize):
                    r = Rule(frozenset(prems), frozenset(concs))
                    canon = canonical_rule(r)
                    if canon not in seen:
                        seen.add(canon)
                        yield canon


# ---------------------------------------------------------------------------
# Classification sweeps.

@dataclass
class ClassificationReport:
    system: str
    size: int
    algebras: int = 0
    structures: int = 0
    models: int = 0
    violations: list[str] = None

    def __post_init__(self):
        if self.violations is None:
            self.violations = []

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "system": self.system,
            "size": self.size,
            "algebras": self.algebras,
            "structures": self.structures,
            "models": self.models,
            "violations": list(self.violations),
            "ok": self.ok,
        }


def census_pool(size: int) -> list[FiniteAlgebra]:
    pool: list[FiniteAlgebra] = []
    for n in range(1, size + 1):
        pool.extend(enumerate_dm_lattices(n))
    return pool


def _constant_assignments(alg: FiniteAlgebra, consts: frozenset[str]) -> Iterator[FiniteAlgebra]:
    if not consts:
        yield alg
        return
    names = sorted(consts)
    for values in iproduct(range(alg.size), repeat=len(names)):
        yield alg.with_constants(dict(zip(names, values)))


def _congruence_rows(cong) -> tuple[int, ...]:
    rows = [0] * len(cong.rep)
    for a in range(len(cong.rep)):
        for b in range(len(cong.rep)):
            if cong.rep[a] == cong.rep[b]:
                rows[a] |= 1 << b
    return tuple(rows)


def candidate_structures(sys: AxiomSystem, alg: FiniteAlgebra) -> Iterator[Structure]:
    """All relation interpretations worth checking on one algebra.

    Unary relations range over all subsets.  The equality predicate only
    ranges over congruence relations: the reflexivity, symmetry,
    transitivity, congruence, and compatibility axioms in every catalogued
    eq-system reject anything else, so non-congruence interpretations can
    never be models (the test suite spot-checks this).
    """
    unary_names = sorted(p for p in sys.signature.relations if p != "eq")
    has_eq = "eq" in sys.signature.relations
    eq_choices = [_congruence_rows(c) for c in congruences(alg)] if has_eq else [None]
    for masks in iproduct(range(1 << alg.size), repeat=len(unary_names)):
        for eq_rows in eq_choices:
            unary = dict(zip(unary_names, masks))
            binary = {"eq": eq_rows} if has_eq else {}
            yield Structure(alg, unary, binary)


def _top_element(alg: FiniteAlgebra) -> int:
    for t in range(alg.size):
        if all(alg.leq(a, t) for a in range(alg.size)):
            return t
    raise ValueError("finite lattice without a top element")


def _unary_ok_exact(alg: FiniteAlgebra, mask: int) -> bool:
    """{top} or empty."""
    if mask == 0:
        return True
    return mask == 1 << _top_element(alg)


def _embeds_into(s: Structure, target: Structure) -> bool:
    """Is s isomorphic to a substructure of target (constants respected)?"""
    n, m = s.algebra.size, target.algebra.size
    if n > m:
        return False
    from itertools import permutations as perms

    for image in perms(range(m), n):
        hom_ok = True
        a = s.algebra
        t = target.algebra
        for c in set(a.constants) & set(t.constants):
            if image[a.constants[c]] != t.constants[c]:
                hom_ok = False
                break
        if hom_ok:
            for x in range(n):
                if t.neg[image[x]] != image[a.neg[x]]:
                    hom_ok = False
                    break
                for y in range(n):
                    if t.meet[image[x]][image[y]] != image[a.meet[x][y]]:
                        hom_ok = False
                        break
                    if t.join[image[x]][image[y]] != image[a.join[x][y]]:
                        hom_ok = False
                        break
                if not hom_ok:
                    break
        if not hom_ok:
            continue
        rel_ok = True
        for name, mask in s.unary.items():
            tmask = target.unary[name]
            for x in range(n):
                if ((mask >> x) & 1) != ((tmask >> image[x]) & 1):
                    rel_ok = False
                    break
            if not rel_ok:
                break
        if rel_ok:
            for name, rows in s.binary.items():
                trows = target.binary[name]
                for x in range(n):
                    for y in range(n):
                        if ((rows[x] >> y) & 1) != ((trows[image[x]] >> image[y]) & 1):
                            rel_ok = False
                            break
                    if not rel_ok:
                        break
                if not rel_ok:
                    break
        if rel_ok:
            return True
    return False


def shape_violations(family: str, reduct: Structure) -> list[str]:
    """Check a reduced model against its family's documented shape."""
    alg = reduct.algebra
    out: list[str] = []
    ok, witness = check_demorgan(alg)
    if not ok:
        out.append(f"reduct algebra is not a De Morgan lattice: {witness}")
        return out
    if family == "KE":
        ok, witness = check_kleene(alg)
        if not ok:
            out.append(f"reduct algebra is not a Kleene lattice: {witness}")
    if family in ("BDE", "BDNF", "KE", "BD-EQ", "BDE-EQ", "BDNF-EQ"):
        if not is_filter(alg, reduct.unary.get("T", 0)):
            out.append("T is not a lattice filter on the reduct")
    if family in ("BDNF", "BDNF-EQ"):
        if not is_filter(alg, reduct.unary.get("NF", 0)):
            out.append("NF is not a lattice filter on the reduct")
        inter = reduct.unary["T"] & reduct.unary["NF"]
        if not _unary_ok_exact(alg, inter):
            out.append("T and NF intersect in more than the top element")
    if family in ("BDE", "KE", "ETL-EQ", "BDE-EQ"):
        if not _unary_ok_exact(alg, reduct.unary["E"]):
            out.append("E is neither empty nor the top singleton")
    if family in ("BD-EQ", "ETL-EQ", "BDE-EQ", "BDNF-EQ"):
        from .structures import identity_relation

        if reduct.binary["eq"] != identity_relation(alg):
            out.append("eq is not the identity relation on the reduct")
    if family == "MC-ETL":
        if not reduct.is_trivial():
            consts = frozenset(alg.constants)
            target = structure(builtin("DM4", consts), {"E": (0,)})
            if not _embeds_into(reduct, target):
                out.append("non-trivial reduced model does not embed into the expanded DM4 target")
    return out


def classify_models(sys: AxiomSystem, size: int) -> ClassificationReport:
    """Sweep all candidate structures over the census, reduce the models,
    and check each reduct against the family's documented shape."""
    family = sys.name.partition("+")[0]
    report = ClassificationReport(sys.name, size)
    ordered_rules = sorted(sys.named_rules(),
                           key=lambda nr: (len(nr[1].variables()), len(nr[1].premises)))
    for base_alg in census_pool(size):
        for alg in _constant_assignments(base_alg, sys.signature.constants):
            report.algebras += 1
            for cand in candidate_structures(sys, alg):
                report.structures += 1
                ok, _ = is_model(cand, ordered_rules)
                if not ok:
                    continue
                report.models += 1
                theta = leibniz_structure(cand)
                red, _ = quotient_structure(cand, theta)
                if not leibniz_structure(red).is_identity:
                    report.violations.append(
                        f"{_describe(cand)}: reduct is not reduced")
                    continue
                for v in shape_violations(family, red):
                    report.violations.append(f"{_describe(cand)}: {v}")
    return report


def _describe(s: Structure) -> str:
    alg = s.algebra
    parts = [f"|A|={alg.size}"]
    for name, mask in sorted(s.unary.items()):
        elems = ",".join(alg.element_name(i) for i in range(alg.size) if (mask >> i) & 1)
        parts.append(f"{name}={{{elems}}}")
    for name, rows in sorted(s.binary.items()):
        pairs = sum(bin(r).count("1") for r in rows)
        parts.append(f"{name}:{pairs} pairs")
    if alg.constants:
        parts.append("consts=" + ",".join(f"{c}->{alg.element_name(v)}"
                                          for c, v in sorted(alg.constants.items())))
    return " ".join(parts)
