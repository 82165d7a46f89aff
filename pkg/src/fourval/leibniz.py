"""Leibniz congruences of relations and structures, reducedness, reducts.

Two independent algorithms are implemented and cross-checked:

* congruence search: join of all congruences compatible with the relation
  (the largest compatible congruence exists because joins of compatible
  congruences stay compatible);
* polynomial test: a ~ b iff every unary polynomial (pointwise closure of
  the identity and all constant functions under meet/join/neg) agrees on
  membership at a and b.

The search method is the primary one; the polynomial method is retained
purely as an oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .algebra import (
    Congruence,
    FiniteAlgebra,
    congruence_meet,
    congruences,
    identity_congruence,
    quotient,
)
from .structures import Structure


@dataclass(frozen=True)
class LeibnizResult:
    congruence: Congruence
    method: str  # "by-congruence-search" | "by-polynomials"


def crosschecked_unary(alg: "FiniteAlgebra", mask: int,
                       bound: int = 10) -> tuple[LeibnizResult, LeibnizResult]:
    """Both methods side by side, for cross-check reporting."""
    return (LeibnizResult(leibniz_unary(alg, mask, bound), "by-congruence-search"),
            LeibnizResult(leibniz_unary_poly(alg, mask), "by-polynomials"))


def crosschecked_binary(alg: "FiniteAlgebra", rows: Sequence[int],
                        bound: int = 10) -> tuple[LeibnizResult, LeibnizResult]:
    return (LeibnizResult(leibniz_binary(alg, rows, bound), "by-congruence-search"),
            LeibnizResult(leibniz_binary_poly(alg, rows), "by-polynomials"))


# ---------------------------------------------------------------------------
# Congruence-search method.

def leibniz_unary(alg: FiniteAlgebra, mask: int, bound: int = 10) -> Congruence:
    """Largest congruence theta with a in F and (a,b) in theta => b in F."""
    best = identity_congruence(alg)
    for cong in congruences(alg, bound):
        if cong.compatible_with_unary(mask):
            best = _join(best, cong)
    if not best.compatible_with_unary(mask):
        raise AssertionError("join of compatible congruences lost compatibility")
    return best


def leibniz_binary(alg: FiniteAlgebra, rows: Sequence[int], bound: int = 10) -> Congruence:
    """Largest congruence compatible with a binary relation (two-sided)."""
    best = identity_congruence(alg)
    for cong in congruences(alg, bound):
        if cong.compatible_with_binary(rows):
            best = _join(best, cong)
    if not best.compatible_with_binary(rows):
        raise AssertionError("join of compatible congruences lost compatibility")
    return best


def _join(c1: Congruence, c2: Congruence) -> Congruence:
    from .algebra import congruence_join

    return congruence_join(c1, c2)


# ---------------------------------------------------------------------------
# Polynomial method.

def unary_polynomials(alg: FiniteAlgebra) -> list[tuple[int, ...]]:
    """Value tables of all unary polynomials, via pointwise closure.

    Every term function t(x, c1..ck) decomposes into pointwise meet/join/neg
    of the identity and constant functions, so the pointwise closure is
    exactly the set of unary polynomials.
    """
    n = alg.size
    funcs: set[tuple[int, ...]] = {tuple(range(n))}
    funcs.update(tuple(c for _ in range(n)) for c in range(n))
    frontier = list(funcs)
    while frontier:
        f = frontier.pop()
        candidates = [tuple(alg.neg[v] for v in f)]
        for g in list(funcs):
            candidates.append(tuple(alg.meet[f[i]][g[i]] for i in range(n)))
            candidates.append(tuple(alg.join[f[i]][g[i]] for i in range(n)))
            candidates.append(tuple(alg.meet[g[i]][f[i]] for i in range(n)))
            candidates.append(tuple(alg.join[g[i]][f[i]] for i in range(n)))
        for h in candidates:
            if h not in funcs:
                funcs.add(h)
                frontier.append(h)
    return sorted(funcs)


def leibniz_unary_poly(alg: FiniteAlgebra, mask: int) -> Congruence:
    polys = unary_polynomials(alg)
    signature = [tuple((mask >> p[a]) & 1 for p in polys) for a in range(alg.size)]
    return _partition_from_signature(alg, signature)


def leibniz_binary_poly(alg: FiniteAlgebra, rows: Sequence[int]) -> Congruence:
    """a ~ b iff R(p(a),q(a)) <=> R(p(b),q(b)) for all polynomial pairs.

    Only the value pairs (p(a), p(b)) matter, so the quantifier over the
    polynomial set collapses to its image in A x A.
    """
    polys = unary_polynomials(alg)
    n = alg.size
    rep = list(range(n))
    for a in range(n):
        for b in range(a + 1, n):
            if rep[b] != b:
                continue
            pairs = {(p[a], p[b]) for p in polys}
            if _binary_agrees(rows, pairs):
                rep[b] = rep[a]
    return Congruence(alg, _canon(rep))


def _binary_agrees(rows: Sequence[int], pairs: set[tuple[int, int]]) -> bool:
    for (u, u2) in pairs:
        for (v, v2) in pairs:
            if ((rows[u] >> v) & 1) != ((rows[u2] >> v2) & 1):
                return False
    return True


def _partition_from_signature(alg: FiniteAlgebra, signature: list) -> Congruence:
    first: dict = {}
    rep = []
    for a in range(alg.size):
        rep.append(first.setdefault(signature[a], a))
    return Congruence(alg, _canon(rep))


def _canon(rep: Sequence[int]) -> tuple[int, ...]:
    least: dict[int, int] = {}
    for i, r in enumerate(rep):
        if r not in least:
            least[r] = i
    return tuple(least[r] for r in rep)


# ---------------------------------------------------------------------------
# Whole structures.

def leibniz_structure(s: Structure, bound: int = 10) -> Congruence:
    """Intersection of the Leibniz congruences of all relations."""
    result = None
    for _, mask in sorted(s.unary.items()):
        cong = leibniz_unary(s.algebra, mask, bound)
        result = cong if result is None else congruence_meet(result, cong)
    for _, rows in sorted(s.binary.items()):
        cong = leibniz_binary(s.algebra, rows, bound)
        result = cong if result is None else congruence_meet(result, cong)
    if result is None:
        raise ValueError("structure has no relations")
    return result


def is_reduced(s: Structure, bound: int = 10) -> bool:
    return leibniz_structure(s, bound).is_identity


def reduct(s: Structure, bound: int = 10) -> tuple[Structure, tuple[int, ...]]:
    """Quotient the algebra and all relations by the Leibniz congruence."""
    theta = leibniz_structure(s, bound)
    return quotient_structure(s, theta)


def quotient_structure(s: Structure, theta: Congruence) -> tuple[Structure, tuple[int, ...]]:
    """Quotient by any congruence compatible with all relations."""
    alg2, proj = quotient(s.algebra, theta)
    unary = {}
    for name, mask in s.unary.items():
        if not theta.compatible_with_unary(mask):
            raise ValueError(f"congruence not compatible with relation {name}")
        m2 = 0
        for a in range(s.algebra.size):
            if (mask >> a) & 1:
                m2 |= 1 << proj[a]
        unary[name] = m2
    binary = {}
    for name, rows in s.binary.items():
        if not theta.compatible_with_binary(rows):
            raise ValueError(f"congruence not compatible with relation {name}")
        rows2 = [0] * alg2.size
        for a in range(s.algebra.size):
            for b in range(s.algebra.size):
                if (rows[a] >> b) & 1:
                    rows2[proj[a]] |= 1 << proj[b]
        binary[name] = tuple(rows2)
    return Structure(alg2, unary, binary), proj
