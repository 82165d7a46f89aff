"""Finite algebras in the lattice signature (meet, join, neg, constants).

Elements are integer indices 0..n-1; subsets of the universe are int
bitmasks (bit i = element i).  The builtin algebras index their elements
top-first:

    B2:  t=0, f=1
    K3:  t=0, i=1, f=2       (middle element relabelled n/b on request)
    DM4: t=0, b=1, f=2, n=3

This fixed order is what makes "first in increasing bitset order" and
"lexicographically least valuation" reproducible across runs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from itertools import permutations, product as iproduct
from typing import Iterable, Iterator, Sequence


class AlgebraError(ValueError):
    pass


class BoundExceededError(AlgebraError):
    """An enumeration was requested above its configured size bound."""


class FiniteAlgebra:
    """Universe {0..n-1} with full operation tables; immutable by convention."""

    __slots__ = ("size", "meet", "join", "neg", "constants", "labels", "_key")

    def __init__(self, size, meet, join, neg, constants=None, labels=None):
        self.size = size
        self.meet = tuple(tuple(row) for row in meet)
        self.join = tuple(tuple(row) for row in join)
        self.neg = tuple(neg)
        self.constants = dict(constants or {})
        self.labels = tuple(labels) if labels else None
        self._validate()
        self._key = (self.size, self.meet, self.join, self.neg,
                     tuple(sorted(self.constants.items())))

    def _validate(self):
        n = self.size
        if len(self.meet) != n or len(self.join) != n or len(self.neg) != n:
            raise AlgebraError("operation table shape does not match universe size")
        for table in (self.meet, self.join):
            for row in table:
                if len(row) != n or any(not (0 <= v < n) for v in row):
                    raise AlgebraError("table entry out of range")
        if any(not (0 <= v < n) for v in self.neg):
            raise AlgebraError("neg entry out of range")
        for c, v in self.constants.items():
            if not (0 <= v < n):
                raise AlgebraError(f"constant {c} out of range")
        if self.labels and len(self.labels) != n:
            raise AlgebraError("label count does not match universe size")

    def leq(self, a: int, b: int) -> bool:
        return self.meet[a][b] == a

    def element_name(self, i: int) -> str:
        return self.labels[i] if self.labels else str(i)

    def with_constants(self, constants: dict[str, int]) -> "FiniteAlgebra":
        merged = dict(self.constants)
        merged.update(constants)
        return FiniteAlgebra(self.size, self.meet, self.join, self.neg, merged, self.labels)

    def without_constants(self) -> "FiniteAlgebra":
        return FiniteAlgebra(self.size, self.meet, self.join, self.neg, {}, self.labels)

    def __eq__(self, other):
        return isinstance(other, FiniteAlgebra) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        names = ",".join(self.element_name(i) for i in range(self.size))
        return f"FiniteAlgebra({names})"


# ---------------------------------------------------------------------------
# Builtins.

def builtin(name: str, constants: Iterable[str] = (), middle_label: str | None = None) -> FiniteAlgebra:
    """One of B2, K3, DM4, optionally expanded by constants #t/#n/#b.

    On K3 the single middle element can interpret either #n or #b (but not
    both); `middle_label` relabels it without adding a constant.
    """
    constants = set(constants)
    bad = constants - {"#t", "#n", "#b"}
    if bad:
        raise AlgebraError(f"unknown constants {sorted(bad)}")
    if name == "B2":
        if constants - {"#t"}:
            raise AlgebraError("B2 only supports the constant #t")
        alg = FiniteAlgebra(2, [[0, 1], [1, 1]], [[0, 0], [0, 1]], [1, 0],
                            {c: 0 for c in constants}, ("t", "f"))
        return alg
    if name == "K3":
        if {"#n", "#b"} <= constants:
            raise AlgebraError("K3 has a single middle element; request #n or #b, not both")
        label = middle_label or ("n" if "#n" in constants else "b" if "#b" in constants else "i")
        consts = {}
        if "#t" in constants:
            consts["#t"] = 0
        if "#n" in constants:
            consts["#n"] = 1
        if "#b" in constants:
            consts["#b"] = 1
        return FiniteAlgebra(
            3,
            [[0, 1, 2], [1, 1, 2], [2, 2, 2]],
            [[0, 0, 0], [0, 1, 1], [0, 1, 2]],
            [2, 1, 0],
            consts,
            ("t", label, "f"),
        )
    if name == "DM4":
        consts = {}
        if "#t" in constants:
            consts["#t"] = 0
        if "#b" in constants:
            consts["#b"] = 1
        if "#n" in constants:
            consts["#n"] = 3
        return FiniteAlgebra(
            4,
            [[0, 1, 2, 3], [1, 1, 2, 2], [2, 2, 2, 2], [3, 2, 2, 3]],
            [[0, 0, 0, 0], [0, 1, 1, 0], [0, 1, 2, 3], [0, 0, 3, 3]],
            [2, 1, 0, 3],
            consts,
            ("t", "b", "f", "n"),
        )
    raise AlgebraError(f"unknown builtin algebra {name!r}")


# ---------------------------------------------------------------------------
# Equational checks.

def check_demorgan(alg: FiniteAlgebra) -> tuple[bool, str | None]:
    """Distributive lattice + involutive order-inverting negation.

    Returns (True, None) or (False, first violated instance).
    """
    n = alg.size
    meet, join, neg = alg.meet, alg.join, alg.neg
    for x in range(n):
        if neg[neg[x]] != x:
            return False, f"~~{x} = {neg[neg[x]]} != {x}"
        for y in range(n):
            if meet[x][y] != meet[y][x]:
                return False, f"{x}/\\{y} != {y}/\\{x}"
            if join[x][y] != join[y][x]:
                return False, f"{x}\\/{y} != {y}\\/{x}"
            if meet[x][join[x][y]] != x:
                return False, f"absorption fails at {x},{y}"
            if join[x][meet[x][y]] != x:
                return False, f"dual absorption fails at {x},{y}"
            if neg[meet[x][y]] != join[neg[x]][neg[y]]:
                return False, f"~({x}/\\{y}) != ~{x}\\/~{y}"
            for z in range(n):
                if meet[x][meet[y][z]] != meet[meet[x][y]][z]:
                    return False, f"/\\ not associative at {x},{y},{z}"
                if join[x][join[y][z]] != join[join[x][y]][z]:
                    return False, f"\\/ not associative at {x},{y},{z}"
                if meet[x][join[y][z]] != join[meet[x][y]][meet[x][z]]:
                    return False, f"distributivity fails at {x},{y},{z}"
    return True, None


def check_kleene(alg: FiniteAlgebra) -> tuple[bool, str | None]:
    """De Morgan plus x /\\ ~x <= y \\/ ~y."""
    ok, witness = check_demorgan(alg)
    if not ok:
        return ok, witness
    meet, join, neg = alg.meet, alg.join, alg.neg
    for x in range(alg.size):
        lo = meet[x][neg[x]]
        for y in range(alg.size):
            hi = join[y][neg[y]]
            if meet[lo][hi] != lo:
                return False, f"x/\\~x <= y\\/~y fails at x={x}, y={y}"
    return True, None


# ---------------------------------------------------------------------------
# Congruences.

@dataclass(frozen=True, slots=True)
class Congruence:
    """Partition of the universe, stored as least-representative map."""

    algebra: FiniteAlgebra
    rep: tuple[int, ...]

    def relates(self, a: int, b: int) -> bool:
        return self.rep[a] == self.rep[b]

    @property
    def is_identity(self) -> bool:
        return self.rep == tuple(range(self.algebra.size))

    @property
    def is_total(self) -> bool:
        return all(r == 0 for r in self.rep)

    def classes(self) -> tuple[tuple[int, ...], ...]:
        byrep: dict[int, list[int]] = {}
        for i, r in enumerate(self.rep):
            byrep.setdefault(r, []).append(i)
        return tuple(tuple(v) for _, v in sorted(byrep.items()))

    @property
    def num_classes(self) -> int:
        return len(set(self.rep))

    def refines(self, other: "Congruence") -> bool:
        """True when every class of self is contained in a class of other."""
        return all(other.rep[a] == other.rep[self.rep[a]] for a in range(len(self.rep)))

    def compatible_with_unary(self, mask: int) -> bool:
        # a in F & a ~ b  =>  b in F, i.e. F is a union of classes
        for a in range(self.algebra.size):
            if ((mask >> a) & 1) != ((mask >> self.rep[a]) & 1):
                return False
        return True

    def compatible_with_binary(self, rows: Sequence[int]) -> bool:
        # (a,b) in R, a~c, b~d  =>  (c,d) in R
        classes = self.classes()
        for a in range(self.algebra.size):
            for b in range(self.algebra.size):
                if (rows[a] >> b) & 1:
                    for c in classes[_class_index(self.rep, a)]:
                        for d in classes[_class_index(self.rep, b)]:
                            if not (rows[c] >> d) & 1:
                                return False
        return True


def _class_index(rep: tuple[int, ...], a: int) -> int:
    reps = sorted(set(rep))
    return reps.index(rep[a])


def _canon(rep: Sequence[int]) -> tuple[int, ...]:
    least: dict[int, int] = {}
    for i, r in enumerate(rep):
        if r not in least:
            least[r] = i
    return tuple(least[r] for r in rep)


def identity_congruence(alg: FiniteAlgebra) -> Congruence:
    return Congruence(alg, tuple(range(alg.size)))


def total_congruence(alg: FiniteAlgebra) -> Congruence:
    return Congruence(alg, tuple(0 for _ in range(alg.size)))


def is_congruence_partition(alg: FiniteAlgebra, rep: Sequence[int]) -> bool:
    """One argument varied at a time suffices, by transitivity."""
    n = alg.size
    meet, join, neg = alg.meet, alg.join, alg.neg
    for a in range(n):
        for b in range(a + 1, n):
            if rep[a] != rep[b]:
                continue
            if rep[neg[a]] != rep[neg[b]]:
                return False
            for c in range(n):
                if rep[meet[a][c]] != rep[meet[b][c]]:
                    return False
                if rep[join[a][c]] != rep[join[b][c]]:
                    return False
    return True


def iter_partitions(n: int) -> Iterator[tuple[int, ...]]:
    """All partitions of {0..n-1} as least-representative maps."""
    rep = [0] * n

    def rec(i: int, blocks: list[int]):
        if i == n:
            yield tuple(rep)
            return
        for b in blocks:
            rep[i] = b
            yield from rec(i + 1, blocks)
        rep[i] = i
        yield from rec(i + 1, blocks + [i])

    if n == 0:
        yield ()
        return
    yield from rec(1, [0])


def _merge_pairs(alg: FiniteAlgebra, pairs: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    """Smallest congruence relating all given pairs (union-find closure)."""
    n = alg.size
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = list(pairs)
    while work:
        a, b = work.pop()
        ra, rb = find(a), find(b)
        if ra == rb:
            continue
        if ra > rb:
            ra, rb = rb, ra
        parent[rb] = ra
        for c in range(n):
            work.append((alg.meet[a][c], alg.meet[b][c]))
            work.append((alg.join[a][c], alg.join[b][c]))
        work.append((alg.neg[a], alg.neg[b]))
    return _canon([find(i) for i in range(n)])


def principal_congruence(alg: FiniteAlgebra, a: int, b: int) -> Congruence:
    return Congruence(alg, _merge_pairs(alg, [(a, b)]))


def congruence_join(c1: Congruence, c2: Congruence) -> Congruence:
    pairs = [(i, c1.rep[i]) for i in range(len(c1.rep))]
    pairs += [(i, c2.rep[i]) for i in range(len(c2.rep))]
    return Congruence(c1.algebra, _merge_pairs(c1.algebra, pairs))


def congruence_meet(c1: Congruence, c2: Congruence) -> Congruence:
    keys = {}
    rep = []
    for i in range(len(c1.rep)):
        k = (c1.rep[i], c2.rep[i])
        rep.append(keys.setdefault(k, i))
    return Congruence(c1.algebra, tuple(rep))


def congruences(alg: FiniteAlgebra, bound: int = 10) -> list[Congruence]:
    """The full congruence lattice, in a deterministic order.

    Brute force over all partitions up to size 7; principal-congruence
    join closure above that (the two agree on small sizes, which the test
    suite checks).
    """
    n = alg.size
    if n > bound:
        raise BoundExceededError(f"|A| = {n} exceeds congruence bound {bound}")
    if n <= 7:
        found = [Congruence(alg, rep) for rep in iter_partitions(n)
                 if is_congruence_partition(alg, rep)]
    else:
        principals = {principal_congruence(alg, a, b).rep
                      for a in range(n) for b in range(a + 1, n)}
        known = {tuple(range(n))} | set(principals)
        frontier = list(known)
        while frontier:
            rep = frontier.pop()
            for p in principals:
                joined = _merge_pairs(alg, [(i, rep[i]) for i in range(n)] +
                                      [(i, p[i]) for i in range(n)])
                if joined not in known:
                    known.add(joined)
                    frontier.append(joined)
        found = [Congruence(alg, rep) for rep in known]
    return sorted(found, key=lambda c: c.rep)


# ---------------------------------------------------------------------------
# Products, subalgebras, quotients.

def _same_constant_names(algs: Sequence[FiniteAlgebra]):
    names = {frozenset(a.constants) for a in algs}
    if len(names) > 1:
        raise AlgebraError("signature mismatch: factors declare different constants")


def product(algs: Sequence[FiniteAlgebra]) -> FiniteAlgebra:
    """Componentwise product; element i encodes a tuple in mixed radix."""
    if not algs:
        raise AlgebraError("empty product not supported")
    _same_constant_names(algs)
    tuples = list(iproduct(*[range(a.size) for a in algs]))
    index = {t: i for i, t in enumerate(tuples)}
    n = len(tuples)

    def lift(op):
        return [[index[tuple(op(a)[x[k]][y[k]] for k, a in enumerate(algs))]
                 for y in tuples] for x in tuples]

    meet = lift(lambda a: a.meet)
    join = lift(lambda a: a.join)
    neg = [index[tuple(a.neg[x[k]] for k, a in enumerate(algs))] for x in tuples]
    constants = {c: index[tuple(a.constants[c] for a in algs)] for c in algs[0].constants}
    labels = ["(" + ",".join(a.element_name(x[k]) for k, a in enumerate(algs)) + ")"
              for x in tuples]
    return FiniteAlgebra(n, meet, join, neg, constants, labels)


def subalgebra(alg: FiniteAlgebra, gens: Iterable[int]) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """Closure of gens (plus constants) under the operations.

    Returns the subalgebra and the embedding new-index -> old-element.
    """
    closure = set(gens) | set(alg.constants.values())
    if not closure:
        raise AlgebraError("subalgebra needs at least one generator or constant")
    frontier = list(closure)
    while frontier:
        a = frontier.pop()
        candidates = [alg.neg[a]]
        for b in list(closure):
            candidates += [alg.meet[a][b], alg.join[a][b]]
        for c in candidates:
            if c not in closure:
                closure.add(c)
                frontier.append(c)
    elems = sorted(closure)
    back = {e: i for i, e in enumerate(elems)}
    meet = [[back[alg.meet[a][b]] for b in elems] for a in elems]
    join = [[back[alg.join[a][b]] for b in elems] for a in elems]
    neg = [back[alg.neg[a]] for a in elems]
    constants = {c: back[v] for c, v in alg.constants.items()}
    labels = [alg.element_name(e) for e in elems] if alg.labels else None
    return FiniteAlgebra(len(elems), meet, join, neg, constants, labels), tuple(elems)


def quotient(alg: FiniteAlgebra, cong: Congruence) -> tuple[FiniteAlgebra, tuple[int, ...]]:
    """Quotient by a congruence; returns (algebra, projection old -> new)."""
    if cong.algebra is not alg and cong.algebra != alg:
        raise AlgebraError("congruence belongs to a different algebra")
    if not is_congruence_partition(alg, cong.rep):
        raise AlgebraError("partition is not a congruence")
    reps = sorted(set(cong.rep))
    back = {r: i for i, r in enumerate(reps)}
    proj = tuple(back[cong.rep[a]] for a in range(alg.size))
    meet = [[proj[alg.meet[a][b]] for b in reps] for a in reps]
    join = [[proj[alg.join[a][b]] for b in reps] for a in reps]
    neg = [proj[alg.neg[a]] for a in reps]
    constants = {c: proj[v] for c, v in alg.constants.items()}
    if alg.labels:
        classes = cong.classes()
        labels = ["|".join(alg.element_name(e) for e in cls) for cls in classes]
    else:
        labels = None
    return FiniteAlgebra(len(reps), meet, join, neg, constants, labels), proj


# ---------------------------------------------------------------------------
# Filters and ideals (as bitmasks).  Empty and full sets are admitted, and
# count as prime.

def mask_of(elems: Iterable[int]) -> int:
    m = 0
    for e in elems:
        m |= 1 << e
    return m


def mask_iter(mask: int) -> Iterator[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def is_filter(alg: FiniteAlgebra, mask: int) -> bool:
    for a in mask_iter(mask):
        for b in range(alg.size):
            if alg.leq(a, b) and not (mask >> b) & 1:
                return False
            if (mask >> b) & 1 and not (mask >> alg.meet[a][b]) & 1:
                return False
    return True


def is_ideal(alg: FiniteAlgebra, mask: int) -> bool:
    for a in mask_iter(mask):
        for b in range(alg.size):
            if alg.leq(b, a) and not (mask >> b) & 1:
                return False
            if (mask >> b) & 1 and not (mask >> alg.join[a][b]) & 1:
                return False
    return True


def is_prime_filter(alg: FiniteAlgebra, mask: int) -> bool:
    if not is_filter(alg, mask):
        return False
    for a in range(alg.size):
        for b in range(alg.size):
            if (mask >> alg.join[a][b]) & 1 and not ((mask >> a) & 1 or (mask >> b) & 1):
                return False
    return True


def is_prime_ideal(alg: FiniteAlgebra, mask: int) -> bool:
    if not is_ideal(alg, mask):
        return False
    for a in range(alg.size):
        for b in range(alg.size):
            if (mask >> alg.meet[a][b]) & 1 and not ((mask >> a) & 1 or (mask >> b) & 1):
                return False
    return True


def enumerate_filters(alg: FiniteAlgebra, prime_only: bool = False) -> list[int]:
    check = is_prime_filter if prime_only else is_filter
    return [m for m in range(1 << alg.size) if check(alg, m)]


def enumerate_ideals(alg: FiniteAlgebra, prime_only: bool = False) -> list[int]:
    check = is_prime_ideal if prime_only else is_ideal
    return [m for m in range(1 << alg.size) if check(alg, m)]


def pair_extension(alg: FiniteAlgebra, filter_mask: int, ideal_mask: int) -> tuple[int, int]:
    """Extend a disjoint filter/ideal pair to a complementary prime pair.

    Scans prime filters in increasing bitset order and returns the first G
    with F <= G and G disjoint from I, together with J = complement(G).
    """
    if not is_filter(alg, filter_mask):
        raise AlgebraError("first argument is not a filter")
    if not is_ideal(alg, ideal_mask):
        raise AlgebraError("second argument is not an ideal")
    if filter_mask & ideal_mask:
        raise AlgebraError("filter and ideal are not disjoint")
    full = (1 << alg.size) - 1
    for g in range(1 << alg.size):
        if g & filter_mask == filter_mask and g & ideal_mask == 0 and is_prime_filter(alg, g):
            j = full & ~g
            if not is_prime_ideal(alg, j):
                raise AlgebraError("internal error: complement of prime filter not a prime ideal")
            return g, j
    raise AlgebraError("internal error: no prime extension found on a finite distributive lattice")


# ---------------------------------------------------------------------------
# Homomorphisms.

@dataclass(frozen=True, slots=True)
class Homomorphism:
    source: FiniteAlgebra
    target: FiniteAlgebra
    mapping: tuple[int, ...]

    def check(self, include_constants: bool = True) -> tuple[bool, str | None]:
        h = self.mapping
        s, t = self.source, self.target
        for a in range(s.size):
            if t.neg[h[a]] != h[s.neg[a]]:
                return False, f"neg not preserved at {a}"
            for b in range(s.size):
                if t.meet[h[a]][h[b]] != h[s.meet[a][b]]:
                    return False, f"meet not preserved at {a},{b}"
                if t.join[h[a]][h[b]] != h[s.join[a][b]]:
                    return False, f"join not preserved at {a},{b}"
        if include_constants:
            for c in set(s.constants) & set(t.constants):
                if h[s.constants[c]] != t.constants[c]:
                    return False, f"constant {c} not preserved"
        return True, None

    @property
    def is_injective(self) -> bool:
        return len(set(self.mapping)) == len(self.mapping)

    def image(self) -> tuple[int, ...]:
        return tuple(sorted(set(self.mapping)))


def hom_to_dm4(alg: FiniteAlgebra, prime_filter_mask: int) -> Homomorphism:
    """The four-case membership-pattern map into DM4 induced by a prime filter.

    a maps to t/b/n/f according to whether a and ~a lie in the filter.
    """
    if not is_prime_filter(alg, prime_filter_mask):
        raise AlgebraError("mask is not a prime filter")
    dm4 = builtin("DM4")
    mapping = []
    for a in range(alg.size):
        in_t = (prime_filter_mask >> a) & 1
        neg_in_t = (prime_filter_mask >> alg.neg[a]) & 1
        if in_t and not neg_in_t:
            mapping.append(0)  # t
        elif in_t and neg_in_t:
            mapping.append(1)  # b
        elif not in_t and neg_in_t:
            mapping.append(2)  # f
        else:
            mapping.append(3)  # n
    hom = Homomorphism(alg.without_constants(), dm4, tuple(mapping))
    ok, witness = hom.check(include_constants=False)
    if not ok:
        raise AlgebraError(f"internal error: induced map is not a homomorphism ({witness})")
    return hom


@dataclass(frozen=True, slots=True)
class SubdirectEmbedding:
    algebra: FiniteAlgebra
    filters: tuple[int, ...]
    homs: tuple[Homomorphism, ...]

    def vector(self, a: int) -> tuple[int, ...]:
        return tuple(h.mapping[a] for h in self.homs)

    @property
    def is_injective(self) -> bool:
        vecs = {self.vector(a) for a in range(self.algebra.size)}
        return len(vecs) == self.algebra.size


def subdirect_embedding(alg: FiniteAlgebra) -> SubdirectEmbedding:
    """A separating prime-filter family embedding alg into a power of DM4.

    Filters are scanned in increasing bitset order; one is kept whenever it
    separates a still-unseparated pair.
    """
    pairs = {(a, b) for a in range(alg.size) for b in range(a + 1, alg.size)}
    chosen: list[int] = []
    homs: list[Homomorphism] = []
    for g in range(1 << alg.size):
        if not pairs:
            break
        if not is_prime_filter(alg, g):
            continue
        hom = hom_to_dm4(alg, g)
        separated = {(a, b) for (a, b) in pairs if hom.mapping[a] != hom.mapping[b]}
        if separated:
            chosen.append(g)
            homs.append(hom)
            pairs -= separated
    if pairs:
        raise AlgebraError("internal error: no separating family; input is not a De Morgan lattice?")
    return SubdirectEmbedding(alg, tuple(chosen), tuple(homs))


# ---------------------------------------------------------------------------
# Isomorphism and canonical forms.

def _conjugate_key(alg: FiniteAlgebra, perm: Sequence[int]) -> tuple:
    inv = [0] * alg.size
    for i, p in enumerate(perm):
        inv[p] = i
    meet = tuple(tuple(perm[alg.meet[inv[a]][inv[b]]] for b in range(alg.size))
                 for a in range(alg.size))
    join = tuple(tuple(perm[alg.join[inv[a]][inv[b]]] for b in range(alg.size))
                 for a in range(alg.size))
    neg = tuple(perm[alg.neg[inv[a]]] for a in range(alg.size))
    consts = tuple(sorted((c, perm[v]) for c, v in alg.constants.items()))
    return (meet, join, neg, consts)


def canonical_key(alg: FiniteAlgebra) -> tuple:
    return min(_conjugate_key(alg, perm) for perm in permutations(range(alg.size)))


def find_isomorphism(a: FiniteAlgebra, b: FiniteAlgebra) -> tuple[int, ...] | None:
    """An isomorphism a -> b respecting shared constants, or None."""
    if a.size != b.size:
        return None
    for perm in permutations(range(a.size)):
        hom = Homomorphism(a, b, perm)
        ok, _ = hom.check()
        if ok:
            return tuple(perm)
    return None


# ---------------------------------------------------------------------------
# Census of De Morgan lattices up to isomorphism.
#
# Labelled posets are generated with labels forming a linear extension
# (each new element is maximal, its strict down-set is a down-set of the
# part built so far).  For a lattice we can additionally force element 0
# to be the bottom and element n-1 the top.  Two prunes keep the recursion
# small: meets of existing pairs must already exist (new elements never
# create lower bounds), and no pair may have two minimal upper bounds
# among the existing elements (new elements cannot get below them).

def _downsets(below: list[int], size: int) -> list[int]:
    out = []
    for m in range(1 << size):
        ok = True
        mm = m
        while mm:
            j = (mm & -mm).bit_length() - 1
            if (below[j] & ~(1 << j)) & ~m:
                ok = False
                break
            mm &= mm - 1
        if ok:
            out.append(m)
    return out


def _lattice_tables(below: list[int], n: int):
    """Meet/join tables from the order, or None if some pair lacks one."""
    leq = [[bool((below[b] >> a) & 1) or a == b for b in range(n)] for a in range(n)]
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            lower = [c for c in range(n) if leq[c][a] and leq[c][b]]
            glb = [c for c in lower if all(leq[d][c] for d in lower)]
            if len(glb) != 1:
                return None
            meet[a][b] = glb[0]
            upper = [c for c in range(n) if leq[a][c] and leq[b][c]]
            lub = [c for c in upper if all(leq[c][d] for d in upper)]
            if len(lub) != 1:
                return None
            join[a][b] = lub[0]
    return meet, join


def _poset_prune_ok(below: list[int], size: int) -> bool:
    for a in range(size):
        for b in range(a + 1, size):
            lower = [c for c in range(size)
                     if ((below[a] >> c) & 1 or c == a) and ((below[b] >> c) & 1 or c == b)]
            glb = [c for c in lower
                   if all((below[c] >> d) & 1 or d == c for d in lower)]
            if len(glb) != 1:
                return False
            upper = [c for c in range(size)
                     if ((below[c] >> a) & 1 or c == a) and ((below[c] >> b) & 1 or c == b)]
            minimal_ubs = [c for c in upper
                           if not any((below[c] >> d) & 1 and d in upper and d != c for d in upper)]
            if upper and len(minimal_ubs) > 1:
                return False
    return True


def _gen_posets(n: int) -> Iterator[list[int]]:
    """Strict down-set masks (self bit excluded) of bottomed, topped posets."""

    def rec(below: list[int]):
        size = len(below)
        if size == n:
            if below[n - 1] == (1 << (n - 1)) - 1:
                yield below
            return
        for ds in _downsets(below, size):
            if size >= 1 and not (ds & 1):
                continue  # element 0 must be the bottom
            closure = ds
            for j in mask_iter(ds):
                closure |= below[j]
            new = below + [closure]
            if _poset_prune_ok(new, size + 1):
                yield from rec(new)

    if n == 1:
        yield [0]
        return
    yield from rec([0])


def enumerate_dm_lattices(n: int, kleene_only: bool = False, bound: int = 6,
                          allow_slow: bool = False) -> list[FiniteAlgebra]:
    """All De Morgan (or Kleene) lattices of exactly size n, up to isomorphism.

    Deterministic order (sorted by canonical table encoding).  Sizes 7-8
    work but are slow; they sit behind allow_slow.
    """
    if n < 1:
        raise BoundExceededError("size must be at least 1")
    if n > bound and not allow_slow:
        raise BoundExceededError(f"size {n} above census bound {bound}; pass allow_slow to force")
    if n > 8:
        raise BoundExceededError("census above size 8 is not supported")
    seen: dict[tuple, FiniteAlgebra] = {}
    for below in _gen_posets(n):
        tables = _lattice_tables(below, n)
        if tables is None:
            continue
        meet, join = tables
        if not _is_distributive(meet, join, n):
            continue
        leq = [[meet[a][b] == a for b in range(n)] for a in range(n)]
        for perm in _involutions(n):
            if not _order_reversing(leq, perm, n):
                continue
            alg = FiniteAlgebra(n, meet, join, perm)
            ok, _ = check_demorgan(alg)
            if not ok:
                continue
            if kleene_only:
                ok, _ = check_kleene(alg)
                if not ok:
                    continue
            key = canonical_key(alg)
            if key not in seen:
                seen[key] = alg
    return [seen[k] for k in sorted(seen)]


def _is_distributive(meet, join, n: int) -> bool:
    for x in range(n):
        mx = meet[x]
        for y in range(n):
            for z in range(n):
                if mx[join[y][z]] != join[mx[y]][mx[z]]:
                    return False
    return True


def _involutions(n: int) -> Iterator[tuple[int, ...]]:
    def rec(remaining: list[int], perm: dict[int, int]):
        if not remaining:
            yield tuple(perm[i] for i in range(n))
            return
        a = remaining[0]
        yield from rec(remaining[1:], {**perm, a: a})
        for j, b in enumerate(remaining[1:], start=1):
            yield from rec(remaining[1:j] + remaining[j + 1:], {**perm, a: b, b: a})

    yield from rec(list(range(n)), {})


def _order_reversing(leq, perm, n: int) -> bool:
    for a in range(n):
        for b in range(n):
            if leq[a][b] != leq[perm[b]][perm[a]]:
                return False
    return True


# ---------------------------------------------------------------------------
# Interchange format.

def algebra_to_json(alg: FiniteAlgebra) -> dict:
    out = {
        "size": alg.size,
        "labels": list(alg.labels) if alg.labels else [str(i) for i in range(alg.size)],
        "ops": {
            "meet": [list(row) for row in alg.meet],
            "join": [list(row) for row in alg.join],
            "neg": list(alg.neg),
            "const": dict(sorted(alg.constants.items())),
        },
    }
    return out


def algebra_from_json(data: dict) -> FiniteAlgebra:
    ops = data["ops"]
    return FiniteAlgebra(data["size"], ops["meet"], ops["join"], ops["neg"],
                         ops.get("const", {}), data.get("labels"))


def algebra_to_json_text(alg: FiniteAlgebra) -> str:
    return json.dumps(algebra_to_json(alg), indent=2, sort_keys=True)
