import pytest

from fourval.algebra import (
    AlgebraError,
    BoundExceededError,
    FiniteAlgebra,
    algebra_from_json,
    algebra_to_json,
    builtin,
    canonical_key,
    check_demorgan,
    check_kleene,
    congruences,
    enumerate_dm_lattices,
    enumerate_filters,
    enumerate_ideals,
    find_isomorphism,
    hom_to_dm4,
    identity_congruence,
    is_congruence_partition,
    is_filter,
    is_prime_filter,
    iter_partitions,
    mask_of,
    pair_extension,
    product,
    quotient,
    subalgebra,
    subdirect_embedding,
)

DM4 = builtin("DM4")
K3 = builtin("K3")
B2 = builtin("B2")
T, B, F, N = 0, 1, 2, 3  # DM4 element indices


def test_dm4_tables():
    assert DM4.neg[N] == N and DM4.neg[B] == B
    assert DM4.meet[N][B] == F
    assert DM4.join[N][B] == T
    assert DM4.neg[T] == F and DM4.neg[F] == T


def test_builtin_constants():
    alg = builtin("DM4", {"#t", "#n", "#b"})
    assert alg.constants == {"#t": T, "#n": N, "#b": B}
    assert builtin("B2", {"#t"}).constants == {"#t": 0}
    assert builtin("K3", {"#n"}).labels[1] == "n"
    assert builtin("K3", {"#b"}).labels[1] == "b"
    with pytest.raises(AlgebraError):
        builtin("K3", {"#n", "#b"})
    with pytest.raises(AlgebraError):
        builtin("B2", {"#n"})
    with pytest.raises(AlgebraError):
        builtin("DM5")


def test_check_demorgan_builtins():
    for name in ("B2", "K3", "DM4"):
        ok, witness = check_demorgan(builtin(name))
        assert ok, witness


def test_kleene_check():
    assert check_kleene(DM4)[0] is False
    assert check_kleene(K3)[0] is True
    assert check_kleene(B2)[0] is True


def test_check_demorgan_detects_corruption():
    neg = list(DM4.neg)
    neg[T] = T  # break the involution/order-reversal
    bad = FiniteAlgebra(4, DM4.meet, DM4.join, neg)
    ok, witness = check_demorgan(bad)
    assert not ok and witness


# -- constructions -----------------------------------------------------------

def test_product_b2_b2_not_isomorphic_to_dm4():
    p = product([B2, B2])
    assert p.size == 4
    assert check_demorgan(p)[0]
    # oracle: isomorphism search fails (no negation fixpoint in B2xB2)
    assert find_isomorphism(p, DM4) is None
    assert find_isomorphism(p, p) is not None


def test_subalgebra_closure_of_neither_is_singleton():
    sub, embed = subalgebra(DM4, {N})
    assert embed == (N,)
    assert sub.size == 1
    # oracle: closure by exhaustive fixpoint over the op tables
    closure = {N}
    changed = True
    while changed:
        changed = False
        for a in list(closure):
            for b in list(closure):
                for v in (DM4.meet[a][b], DM4.join[a][b], DM4.neg[a]):
                    if v not in closure:
                        closure.add(v)
                        changed = True
    assert closure == {N}


def test_subalgebra_generates():
    sub, embed = subalgebra(DM4, {B})
    assert set(embed) == {B}
    sub2, embed2 = subalgebra(DM4, {T})
    assert set(embed2) == {T, F}


def test_quotient_by_identity_is_isomorphic():
    q, proj = quotient(DM4, identity_congruence(DM4))
    assert q.size == 4 and proj == (0, 1, 2, 3)
    assert find_isomorphism(q, DM4) is not None


def test_quotient_counts_classes_and_projection_is_hom():
    p = product([B2, B2])
    for cong in congruences(p):
        q, proj = quotient(p, cong)
        assert q.size == cong.num_classes
        assert set(proj) == set(range(q.size))  # surjective
        for a in range(p.size):
            for b in range(p.size):
                assert proj[p.meet[a][b]] == q.meet[proj[a]][proj[b]]
                assert proj[p.join[a][b]] == q.join[proj[a]][proj[b]]
                # kernel of the projection is the congruence itself
                assert (proj[a] == proj[b]) == cong.relates(a, b)
            assert proj[p.neg[a]] == q.neg[proj[a]]


# -- congruences -------------------------------------------------------------

def brute_force_congruences(alg):
    """Oracle: filter every partition of the universe."""
    return sorted(rep for rep in iter_partitions(alg.size)
                  if is_congruence_partition(alg, rep))


def test_congruences_dm4_simple():
    assert [c.rep for c in congruences(DM4)] == [(0, 0, 0, 0), (0, 1, 2, 3)]
    # oracle agrees: brute force over all 15 partitions of a 4-set
    assert len(list(iter_partitions(4))) == 15
    assert brute_force_congruences(DM4) == [(0, 0, 0, 0), (0, 1, 2, 3)]


def test_congruences_k3_simple():
    assert len(list(iter_partitions(3))) == 5
    assert [c.rep for c in congruences(K3)] == brute_force_congruences(K3) == [
        (0, 0, 0), (0, 1, 2)]


def test_congruences_product_has_projection_kernels():
    p = product([B2, B2])
    reps = {c.rep for c in congruences(p)}
    assert reps == set(brute_force_congruences(p))
    # kernels of the two projections: first coordinate, second coordinate
    first = tuple(0 if a < 2 else 2 for a in range(4))
    second = tuple(a % 2 for a in range(4))
    assert first in reps and second in reps


def test_congruence_lattice_closure_properties():
    for alg in (B2, K3, DM4, product([B2, B2]), product([B2, K3])):
        congs = congruences(alg)
        reps = {c.rep for c in congs}
        from fourval.algebra import congruence_join, congruence_meet

        for c1 in congs:
            for c2 in congs:
                assert congruence_meet(c1, c2).rep in reps
                assert congruence_join(c1, c2).rep in reps


def test_principal_closure_agrees_with_brute_force_on_size_8():
    big = product([B2, B2, K3])  # 12 elements is over the default bound
    with pytest.raises(BoundExceededError):
        congruences(big)
    mid = product([B2, product([B2, B2])])  # 8 elements: principal-closure path
    fast = {c.rep for c in congruences(mid)}
    slow = set(brute_force_congruences(mid))
    assert fast == slow


def test_congruence_bound_exceeded():
    with pytest.raises(BoundExceededError):
        congruences(product([DM4, K3]))  # 12 elements


# -- filters, ideals, pair extension ----------------------------------------

def test_filter_enumeration_dm4():
    prime = {frozenset(i for i in range(4) if (m >> i) & 1)
             for m in enumerate_filters(DM4, prime_only=True)}
    assert prime == {frozenset(), frozenset({T, B}), frozenset({T, N}),
                     frozenset({T, B, F, N})}
    allf = {frozenset(i for i in range(4) if (m >> i) & 1)
            for m in enumerate_filters(DM4)}
    assert allf == prime | {frozenset({T})}
    # oracle: exhaustive subset check straight from the definitions
    for m in range(16):
        up = all(DM4.meet[a][b] != a or (m >> b) & 1
                 for a in range(4) if (m >> a) & 1 for b in range(4))
        closed = all(not ((m >> a) & 1 and (m >> b) & 1) or (m >> DM4.meet[a][b]) & 1
                     for a in range(4) for b in range(4))
        assert is_filter(DM4, m) == (up and closed)


def test_filter_enumeration_b2():
    assert [sorted(i for i in range(2) if (m >> i) & 1)
            for m in enumerate_filters(B2, prime_only=True)] == [[], [0], [0, 1]]


def test_ideals_dual_to_filters():
    for alg in (B2, K3, DM4):
        flip = {}
        for m in enumerate_ideals(alg):
            # the negation image of an ideal is a filter
            image = mask_of(alg.neg[a] for a in range(alg.size) if (m >> a) & 1)
            assert is_filter(alg, image)


def test_pair_extension_examples():
    # least solution in increasing bitset order
    g, j = pair_extension(DM4, mask_of([T]), mask_of([F]))
    assert g == mask_of([T, B]) and j == mask_of([F, N])
    g, j = pair_extension(B2, mask_of([0]), mask_of([1]))
    assert g == mask_of([0]) and j == mask_of([1])
    g, j = pair_extension(DM4, 0, 0)
    assert g == 0 and j == mask_of([T, B, F, N])
    # oracle: exhaustive search over all prime pairs
    for alg in (B2, K3, DM4):
        full = (1 << alg.size) - 1
        for fm in enumerate_filters(alg):
            for im in enumerate_ideals(alg):
                if fm & im:
                    with pytest.raises(AlgebraError):
                        pair_extension(alg, fm, im)
                    continue
                g, j = pair_extension(alg, fm, im)
                assert is_prime_filter(alg, g) and fm & ~g == 0
                assert g & j == 0 and g | j == full and im & ~j == 0
                firsts = [g2 for g2 in range(1 << alg.size)
                          if is_prime_filter(alg, g2) and fm & ~g2 == 0 and g2 & im == 0]
                assert g == firsts[0]


def test_pair_extension_properties_on_census():
    for alg in enumerate_dm_lattices(5):
        for fm in enumerate_filters(alg):
            for im in enumerate_ideals(alg):
                if fm & im:
                    continue
                g, j = pair_extension(alg, fm, im)
                assert is_prime_filter(alg, g)
                assert fm & ~g == 0 and im & ~j == 0 and g & j == 0


# -- homomorphisms into DM4 --------------------------------------------------

def test_hom_to_dm4_cases():
    assert hom_to_dm4(DM4, mask_of([T, B])).mapping == (0, 1, 2, 3)
    assert hom_to_dm4(DM4, mask_of([T, N])).mapping == (0, 3, 2, 1)
    assert hom_to_dm4(K3, mask_of([0])).mapping == (0, 3, 2)  # t, n, f
    with pytest.raises(AlgebraError):
        hom_to_dm4(DM4, mask_of([T]))  # {t} is not prime


def test_hom_to_dm4_always_homomorphism_on_census():
    for n in range(1, 6):
        for alg in enumerate_dm_lattices(n):
            for t in enumerate_filters(alg, prime_only=True):
                hom = hom_to_dm4(alg, t)
                ok, witness = hom.check(include_constants=False)
                assert ok, witness


def test_subdirect_embedding_examples():
    emb = subdirect_embedding(DM4)
    assert list(emb.filters) == [mask_of([T, B])]
    p = product([B2, K3])
    emb = subdirect_embedding(p)
    assert emb.is_injective and len(emb.filters) <= 2


# -- census ------------------------------------------------------------------

def naive_census(n):
    """Oracle: all posets on n labelled points, then involutions, then dedupe."""
    import itertools

    found = {}
    elems = range(n)
    pairs = [(a, b) for a in elems for b in elems if a != b]
    for bits in itertools.product((False, True), repeat=len(pairs)):
        rel = {(a, a) for a in elems}
        rel.update(p for p, keep in zip(pairs, bits) if keep)
        if any((a, b) in rel and (b, a) in rel and a != b for a, b in pairs):
            continue
        if any((a, b) in rel and (b, c) in rel and (a, c) not in rel
               for a in elems for b in elems for c in elems):
            continue
        leq = [[(a, b) in rel for b in elems] for a in elems]
        meet = [[None] * n for _ in elems]
        join = [[None] * n for _ in elems]
        is_lattice = True
        for a in elems:
            for b in elems:
                lower = [c for c in elems if leq[c][a] and leq[c][b]]
                glb = [c for c in lower if all(leq[d][c] for d in lower)]
                upper = [c for c in elems if leq[a][c] and leq[b][c]]
                lub = [c for c in upper if all(leq[c][d] for d in upper)]
                if len(glb) != 1 or len(lub) != 1:
                    is_lattice = False
                    break
                meet[a][b], join[a][b] = glb[0], lub[0]
            if not is_lattice:
                break
        if not is_lattice:
            continue
        if any(meet[a][join[b][c]] != join[meet[a][b]][meet[a][c]]
               for a in elems for b in elems for c in elems):
            continue
        for perm in itertools.permutations(elems):
            if any(perm[perm[a]] != a for a in elems):
                continue
            if any(leq[a][b] != leq[perm[b]][perm[a]] for a in elems for b in elems):
                continue
            alg = FiniteAlgebra(n, meet, join, perm)
            if check_demorgan(alg)[0]:
                found[canonical_key(alg)] = alg
    return found


@pytest.mark.parametrize("n,expected", [(1, 1), (2, 1), (3, 1), (4, 3)])
def test_census_counts_against_naive_oracle(n, expected):
    census = enumerate_dm_lattices(n)
    assert len(census) == expected
    assert set(map(canonical_key, census)) == set(naive_census(n))


def test_census_four_contains_the_three_known_algebras():
    keys = {canonical_key(a) for a in enumerate_dm_lattices(4)}
    assert canonical_key(DM4.without_constants()) in keys
    assert canonical_key(product([B2, B2])) in keys
    # the four-element Kleene chain
    chain = FiniteAlgebra(
        4,
        [[min(a, b) for b in range(4)] for a in range(4)],
        [[max(a, b) for b in range(4)] for a in range(4)],
        [3, 2, 1, 0],
    )
    assert canonical_key(chain) in keys


def test_census_members_are_de_morgan_and_pairwise_nonisomorphic():
    for n in range(1, 7):
        census = enumerate_dm_lattices(n)
        for alg in census:
            assert check_demorgan(alg)[0]
        keys = [canonical_key(a) for a in census]
        assert len(keys) == len(set(keys))
        assert keys == sorted(keys)  # deterministic order


def test_census_kleene_subset():
    for n in range(1, 7):
        all_k = {canonical_key(a) for a in enumerate_dm_lattices(n, kleene_only=True)}
        via_filter = {canonical_key(a) for a in enumerate_dm_lattices(n)
                      if check_kleene(a)[0]}
        assert all_k == via_filter


def test_census_bound_behaviour():
    with pytest.raises(BoundExceededError):
        enumerate_dm_lattices(7)
    assert len(enumerate_dm_lattices(7, allow_slow=True)) == 2
    with pytest.raises(BoundExceededError):
        enumerate_dm_lattices(9, allow_slow=True)


def test_json_roundtrip():
    alg = builtin("DM4", {"#t", "#b"})
    data = algebra_to_json(alg)
    back = algebra_from_json(data)
    assert back == alg and back.labels == alg.labels
