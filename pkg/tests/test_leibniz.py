from itertools import product as iproduct

import pytest

from fourval.algebra import (
    builtin,
    congruences,
    enumerate_dm_lattices,
    enumerate_filters,
    is_congruence_partition,
    iter_partitions,
    mask_of,
    product,
)
from fourval.leibniz import (
    is_reduced,
    leibniz_binary,
    leibniz_binary_poly,
    leibniz_structure,
    leibniz_unary,
    leibniz_unary_poly,
    quotient_structure,
    reduct,
    unary_polynomials,
)
from fourval.structures import identity_relation, preset_structure, structure

DM4 = builtin("DM4")
B2 = builtin("B2")
K3 = builtin("K3")
T, B, F, N = 0, 1, 2, 3


def brute_force_largest_compatible(alg, mask):
    """Oracle: scan every congruence partition, keep the largest compatible."""
    best = tuple(range(alg.size))
    best_classes = alg.size
    for rep in iter_partitions(alg.size):
        if not is_congruence_partition(alg, rep):
            continue
        if all(((mask >> a) & 1) == ((mask >> rep[a]) & 1) for a in range(alg.size)):
            classes = len(set(rep))
            if classes < best_classes:
                best, best_classes = rep, classes
    return best


def test_leibniz_unary_examples():
    assert leibniz_unary(DM4, mask_of([T])).is_identity
    assert leibniz_unary(DM4, mask_of([T, B])).is_identity
    assert leibniz_unary(B2, mask_of([0, 1])).is_total
    # oracle comparison
    for mask in range(16):
        assert leibniz_unary(DM4, mask).rep == brute_force_largest_compatible(DM4, mask)


def test_leibniz_unary_poly_agrees():
    cases = [(DM4, mask_of([T, B])), (K3, mask_of([0])),
             (product([B2, B2]), mask_of([0]))]
    for alg, mask in cases:
        assert leibniz_unary(alg, mask).rep == leibniz_unary_poly(alg, mask).rep
        assert leibniz_unary_poly(alg, mask).is_identity


def test_polynomial_closure_contains_constants_and_identity():
    polys = set(unary_polynomials(DM4))
    assert tuple(range(4)) in polys
    for c in range(4):
        assert tuple(c for _ in range(4)) in polys
    # closed under pointwise negation
    for p in polys:
        assert tuple(DM4.neg[v] for v in p) in polys


def test_leibniz_binary_examples():
    assert leibniz_binary(DM4, identity_relation(DM4)).is_identity
    assert leibniz_binary(DM4, tuple(15 for _ in range(4))).is_total
    p = product([B2, B2])
    kernel = tuple(sum(1 << b for b in range(4) if b // 2 == a // 2) for a in range(4))
    out = leibniz_binary(p, kernel)
    assert out.rep == (0, 0, 2, 2)
    assert leibniz_binary_poly(p, kernel).rep == (0, 0, 2, 2)


def test_leibniz_structure_and_reducts():
    assert is_reduced(preset_structure("BDE"))
    assert is_reduced(preset_structure("BDNF"))
    assert is_reduced(preset_structure("KE"))

    s = structure(B2, {"T": (0, 1)})
    theta = leibniz_structure(s)
    assert theta.is_total
    red, proj = reduct(s)
    assert red.algebra.size == 1 and red.unary["T"] == 1

    # product structure whose relations only see the first coordinate: the
    # Leibniz congruence collapses the second one
    p = product([DM4, DM4])
    t_mask = mask_of(i for i, (a, b) in enumerate(iproduct(range(4), repeat=2))
                     if a in (T, B))
    kernel = tuple(sum(1 << j for j in range(16) if j // 4 == i // 4) for i in range(16))
    s2 = structure(p, {"T": t_mask}, {"eq": kernel})
    theta = leibniz_structure(s2, bound=16)
    assert theta.num_classes == 4
    assert all(theta.relates(i, j) == (i // 4 == j // 4) for i in range(16) for j in range(16))
    # with T = {t,b} x {t,b} instead, both relation congruences are the
    # identity already (brute force over Con(DM4^2)), so the structure is
    # reduced and nothing collapses
    s3 = structure(p, {"T": mask_of(i for i, (a, b) in enumerate(iproduct(range(4), repeat=2))
                                    if a in (T, B) and b in (T, B))}, {"eq": kernel})
    assert leibniz_structure(s3, bound=16).is_identity


def test_reduct_idempotent():
    for t_mask in range(16):
        s = structure(DM4, {"T": t_mask})
        red, _ = reduct(s)
        red2, _ = reduct(red)
        assert red2 == red


def test_leibniz_intersection_inclusion_on_builtins():
    # meet of the relation-wise congruences is below the congruence of the meet
    from fourval.algebra import congruence_meet

    for alg in (B2, K3, DM4):
        filters = enumerate_filters(alg)
        for f1 in filters:
            for f2 in filters:
                lhs = congruence_meet(leibniz_unary(alg, f1), leibniz_unary(alg, f2))
                rhs = leibniz_unary(alg, f1 & f2)
                assert lhs.refines(rhs)


def test_crosscheck_all_builtins_and_census():
    for alg in (B2, K3, DM4):
        for mask in range(1 << alg.size):
            assert leibniz_unary(alg, mask).rep == leibniz_unary_poly(alg, mask).rep
    for n in range(1, 6):
        for alg in enumerate_dm_lattices(n):
            for mask in enumerate_filters(alg):
                assert leibniz_unary(alg, mask).rep == leibniz_unary_poly(alg, mask).rep


def test_binary_crosscheck_on_congruence_relations():
    for alg in (B2, K3, DM4, product([B2, B2])):
        for cong in congruences(alg):
            rows = tuple(sum(1 << b for b in range(alg.size)
                             if cong.rep[a] == cong.rep[b]) for a in range(alg.size))
            assert leibniz_binary(alg, rows).rep == leibniz_binary_poly(alg, rows).rep


def test_quotient_structure_requires_compatibility():
    s = structure(DM4, {"T": mask_of([T])})
    from fourval.algebra import total_congruence

    with pytest.raises(ValueError):
        quotient_structure(s, total_congruence(DM4))
