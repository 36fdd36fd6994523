"""Finite groups as multiplication tables, homomorphisms and right actions.

Elements are the integers ``0..order-1``.  Products are read left to right:
``g.mul[a][b]`` is ``a*b``.  Actions are on the right, ``act[m][p] = m^p``
with ``(m^p)^q = m^(pq)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .errors import BoundExceeded, NotAHomomorphism, NotASubgroup, NotNormal
from .report import Check

DEFAULT_AUT_BOUND = 12


@dataclass(frozen=True, eq=True)
class FiniteGroup:
    order: int
    mul: tuple
    identity: int
    inv: tuple
    label: str = field(default="", compare=False)

    @classmethod
    def from_table(cls, mul, label=""):
        """Build from a square table, locating the identity and inverses.

        No associativity check is made here; see :func:`validate_group`.
        """
        mul = tuple(tuple(int(x) for x in row) for row in mul)
        n = len(mul)
        if n == 0 or any(len(row) != n for row in mul):
            raise ValueError("multiplication table must be square and nonempty")
        identity = None
        for e in range(n):
            if all(mul[e][x] == x and mul[x][e] == x for x in range(n)):
                identity = e
                break
        if identity is None:
            raise ValueError("table has no two-sided identity")
        inv = []
        for x in range(n):
            row = mul[x]
            try:
                y = row.index(identity)
            except ValueError:
                raise ValueError(f"element {x} has no inverse") from None
            inv.append(y)
        return cls(n, mul, identity, tuple(inv), label)

    def __repr__(self):
        return f"FiniteGroup({self.label or '?'}, order={self.order})"

    def __hash__(self):
        return hash((self.order, self.mul))

    @property
    def elements(self):
        return range(self.order)

    def m(self, *xs):
        r = self.identity
        for x in xs:
            r = self.mul[r][x]
        return r

    def power(self, x, k):
        if k < 0:
            x, k = self.inv[x], -k
        r = self.identity
        for _ in range(k):
            r = self.mul[r][x]
        return r

    def conj(self, x, g):
        """Right conjugate ``g^-1 x g``."""
        return self.mul[self.mul[self.inv[g]][x]][g]

    @cached_property
    def element_orders(self):
        out = []
        for x in range(self.order):
            k, y = 1, x
            while y != self.identity:
                y = self.mul[y][x]
                k += 1
            out.append(k)
        return tuple(out)

    def element_order(self, x):
        return self.element_orders[x]

    @cached_property
    def is_abelian(self):
        mul = self.mul
        return all(mul[a][b] == mul[b][a] for a in range(self.order) for b in range(a))

    @cached_property
    def center(self):
        mul = self.mul
        return frozenset(
            z for z in range(self.order) if all(mul[z][x] == mul[x][z] for x in range(self.order))
        )

    @cached_property
    def generators(self):
        """Greedy generating set: smallest element outside the current closure."""
        gens = []
        closure = frozenset([self.identity])
        for x in range(self.order):
            if x not in closure:
                gens.append(x)
                closure = subgroup_closure(self, gens)
        return tuple(gens)

    def invariants(self):
        """Cheap isomorphism invariants: order, abelian flag, sorted element orders."""
        return (self.order, self.is_abelian, tuple(sorted(self.element_orders)))


def validate_group(g):
    n = g.order
    mul = g.mul
    if len(mul) != n or any(len(row) != n for row in mul):
        return Check.failed("table shape")
    for a in range(n):
        for b in range(n):
            if not 0 <= mul[a][b] < n:
                return Check.failed("closure", a, b)
    e = g.identity
    for x in range(n):
        if mul[e][x] != x or mul[x][e] != x:
            return Check.failed("identity", x)
    for x in range(n):
        y = g.inv[x]
        if mul[x][y] != e or mul[y][x] != e:
            return Check.failed("inverse", x)
    for a in range(n):
        ma = mul[a]
        for b in range(n):
            ab = ma[b]
            mb = mul[b]
            mab = mul[ab]
            for c in range(n):
                if mab[c] != ma[mb[c]]:
                    return Check.failed("associativity", a, b, c)
    return Check.passed()


# constructors

def group_from_elements(elements, op, label=""):
    """Table group on a finite list of hashable elements closed under ``op``."""
    elements = list(elements)
    index = {x: i for i, x in enumerate(elements)}
    mul = [[index[op(a, b)] for b in elements] for a in elements]
    return FiniteGroup.from_table(mul, label)


def generate_permutation_group(gens, degree, label=""):
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    gens = [tuple(s) for s in gens]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = tuple(s[x[i]] for i in range(degree))
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    elements = sorted(seen)
    # left-to-right: apply a, then b
    return group_from_elements(elements, lambda a, b: tuple(b[a[i]] for i in range(degree)), label)


def cyclic_group(n):
    return FiniteGroup.from_table([[(a + b) % n for b in range(n)] for a in range(n)], f"C{n}")


def trivial_group():
    return FiniteGroup((1), ((0,),), 0, (0,), "C1")


def direct_product(g, h, label=None):
    """Elements ``(a, b)`` encoded as ``a*h.order + b``."""
    n, k = g.order, h.order
    mul = []
    for a in range(n):
        for b in range(k):
            mul.append([g.mul[a][c] * k + h.mul[b][d] for c in range(n) for d in range(k)])
    return FiniteGroup.from_table(mul, label or f"{g.label}x{h.label}")


def symmetric_group(n):
    if n == 1:
        return trivial_group()
    gens = [tuple([1, 0] + list(range(2, n))), tuple(list(range(1, n)) + [0])]
    return generate_permutation_group(gens, n, f"S{n}")


def alternating_group(n):
    if n < 3:
        return trivial_group()
    gens = []
    for i in range(2, n):
        c = list(range(n))
        c[0], c[1], c[i] = 1, i, 0
        gens.append(tuple(c))
    return generate_permutation_group(gens, n, f"A{n}")


def dihedral_group(n):
    """Symmetries of the n-gon, order 2n."""
    if n == 2:
        return klein_group()
    rot = tuple((i + 1) % n for i in range(n))
    ref = tuple((-i) % n for i in range(n))
    return generate_permutation_group([rot, ref], n, f"D{2 * n}")


def klein_group():
    return direct_product(cyclic_group(2), cyclic_group(2), "V4")


def quaternion_group():
    # elements +-1, +-i, +-j, +-k as (sign, unit), unit in 1,i,j,k
    table = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elements = [(s, u) for s in (1, -1) for u in "1ijk"]

    def op(a, b):
        s, u = table[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    return group_from_elements(elements, op, "Q8")


def relabel(g, perm, label=None):
    """Isomorphic copy where old element ``x`` becomes ``perm[x]``."""
    n = g.order
    inv = [0] * n
    for x, y in enumerate(perm):
        inv[y] = x
    mul = [[perm[g.mul[inv[a]][inv[b]]] for b in range(n)] for a in range(n)]
    return FiniteGroup.from_table(mul, label or g.label)


# morphisms

@dataclass(frozen=True)
class GroupMorphism:
    source: FiniteGroup
    target: FiniteGroup
    map: tuple

    def __call__(self, x):
        return self.map[x]

    def __repr__(self):
        return f"GroupMorphism({self.source.label}->{self.target.label}, {list(self.map)})"

    def then(self, other):
        """Composite: apply ``self`` first, then ``other``."""
        return GroupMorphism(self.source, other.target, tuple(other.map[y] for y in self.map))

    @cached_property
    def kernel(self):
        e = self.target.identity
        return frozenset(x for x in self.source.elements if self.map[x] == e)

    @cached_property
    def image(self):
        return frozenset(self.map)

    @property
    def is_injective(self):
        return len(self.kernel) == 1

    @property
    def is_surjective(self):
        return len(self.image) == self.target.order

    @property
    def is_isomorphism(self):
        return self.is_injective and self.is_surjective

    def inverse(self):
        if not self.is_isomorphism:
            raise ValueError("not an isomorphism")
        out = [0] * self.target.order
        for x, y in enumerate(self.map):
            out[y] = x
        return GroupMorphism(self.target, self.source, tuple(out))


def homomorphism_check(src, tgt, fmap):
    if len(fmap) != src.order or any(not 0 <= y < tgt.order for y in fmap):
        return Check.failed("map not total")
    for a in src.elements:
        fa = fmap[a]
        row = src.mul[a]
        trow = tgt.mul[fa]
        for b in src.elements:
            if fmap[row[b]] != trow[fmap[b]]:
                return Check.failed("homomorphism", a, b)
    return Check.passed()


def make_morphism(src, tgt, fmap):
    fmap = tuple(int(y) for y in fmap)
    chk = homomorphism_check(src, tgt, fmap)
    if not chk:
        raise NotAHomomorphism(f"map {src.label}->{tgt.label} fails: {chk.failure}", chk.witness)
    return GroupMorphism(src, tgt, fmap)


def identity_morphism(g):
    return GroupMorphism(g, g, tuple(g.elements))


def extend_to_homomorphism(src, tgt, gens, images):
    """The unique homomorphism sending ``gens[i] -> images[i]``, or None."""
    fmap = [None] * src.order
    fmap[src.identity] = tgt.identity
    frontier = [src.identity]
    while frontier:
        nxt = []
        for x in frontier:
            fx = fmap[x]
            for s, t in zip(gens, images):
                y = src.mul[x][s]
                fy = tgt.mul[fx][t]
                if fmap[y] is None:
                    fmap[y] = fy
                    nxt.append(y)
                elif fmap[y] != fy:
                    return None
        frontier = nxt
    if any(v is None for v in fmap):
        raise ValueError("gens do not generate the source")
    return tuple(fmap)


def all_homomorphisms(src, tgt):
    gens = src.generators
    orders = src.element_orders
    torders = tgt.element_orders
    cands = [[y for y in tgt.elements if orders[s] % torders[y] == 0] for s in gens]
    out = []
    for imgs in itertools.product(*cands):
        fmap = extend_to_homomorphism(src, tgt, gens, imgs)
        if fmap is not None:
            out.append(GroupMorphism(src, tgt, fmap))
    out.sort(key=lambda f: f.map)
    return out


def find_isomorphism(g, h):
    """Some isomorphism g -> h, or None (brute force on generator images)."""
    if g.invariants() != h.invariants():
        return None
    gens = g.generators
    cands = [[y for y in h.elements if h.element_orders[y] == g.element_orders[s]] for s in gens]
    for imgs in itertools.product(*cands):
        fmap = extend_to_homomorphism(g, h, gens, imgs)
        if fmap is not None and len(set(fmap)) == h.order:
            return GroupMorphism(g, h, fmap)
    return None


# subgroups and quotients

def subgroup_closure(g, gens):
    sub = {g.identity}
    frontier = [g.identity]
    gens = list(gens)
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul[x][s]
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    return frozenset(sub)


def is_subgroup(g, subset):
    subset = frozenset(subset)
    if g.identity not in subset:
        return False
    return all(g.mul[a][b] in subset for a in subset for b in subset)


def is_normal(g, subset):
    subset = frozenset(subset)
    if not is_subgroup(g, subset):
        return False
    return all(g.conj(n, x) in subset for n in subset for x in g.elements)


def all_subgroups(g):
    """Every subgroup, as frozensets, sorted by (size, sorted elements)."""
    found = {frozenset([g.identity])}
    frontier = list(found)
    while frontier:
        nxt = []
        for h in frontier:
            for x in g.elements:
                if x not in h:
                    k = subgroup_closure(g, set(h) | {x})
                    if k not in found:
                        found.add(k)
                        nxt.append(k)
        frontier = nxt
    return sorted(found, key=lambda s: (len(s), sorted(s)))


def cosets(g, subset):
    """Right cosets ``N x``, each a sorted tuple, ordered by smallest element."""
    subset = sorted(subset)
    seen = set()
    out = []
    for x in g.elements:
        if x in seen:
            continue
        c = tuple(sorted(g.mul[n][x] for n in subset))
        seen.update(c)
        out.append(c)
    return out


def quotient_group(g, subset):
    subset = frozenset(subset)
    if not is_subgroup(g, subset):
        raise NotASubgroup("subset is not a subgroup", tuple(sorted(subset)))
    if not is_normal(g, subset):
        bad = next((n, x) for n in subset for x in g.elements if g.conj(n, x) not in subset)
        raise NotNormal("subgroup is not normal", bad)
    cs = cosets(g, subset)
    which = [0] * g.order
    for i, c in enumerate(cs):
        for x in c:
            which[x] = i
    mul = [[which[g.mul[c[0]][d[0]]] for d in cs] for c in cs]
    q = FiniteGroup.from_table(mul, f"{g.label}/{len(subset)}")
    return q, GroupMorphism(g, q, tuple(which))


def subgroup_as_group(g, subset, label=None):
    """The subgroup as its own table group plus the inclusion morphism."""
    subset = frozenset(subset)
    if not is_subgroup(g, subset):
        raise NotASubgroup("subset is not a subgroup", tuple(sorted(subset)))
    elts = sorted(subset)
    index = {x: i for i, x in enumerate(elts)}
    mul = [[index[g.mul[a][b]] for b in elts] for a in elts]
    h = FiniteGroup.from_table(mul, label or f"{g.label}<{len(elts)}>")
    return h, GroupMorphism(h, g, tuple(elts))


# actions

@dataclass(frozen=True)
class RightGroupAction:
    group: FiniteGroup
    carrier: FiniteGroup
    act: tuple

    def __call__(self, m, p):
        return self.act[m][p]


def validate_action(a):
    P, M, act = a.group, a.carrier, a.act
    if len(act) != M.order or any(len(row) != P.order for row in act):
        return Check.failed("action table shape")
    for m in M.elements:
        if act[m][P.identity] != m:
            return Check.failed("identity acts trivially", m)
    for p in P.elements:
        for q in P.elements:
            pq = P.mul[p][q]
            for m in M.elements:
                if act[act[m][p]][q] != act[m][pq]:
                    return Check.failed("(m^p)^q = m^(pq)", m, p, q)
    for p in P.elements:
        col = [act[m][p] for m in M.elements]
        if len(set(col)) != M.order:
            return Check.failed("not bijective", p)
        for m in M.elements:
            for n in M.elements:
                if col[M.mul[m][n]] != M.mul[col[m]][col[n]]:
                    return Check.failed("not an automorphism", p, m, n)
    return Check.passed()


def trivial_action(P, M):
    return RightGroupAction(P, M, tuple(tuple(m for _ in P.elements) for m in M.elements))


def conjugation_action(g):
    return RightGroupAction(g, g, tuple(tuple(g.conj(x, p) for p in g.elements) for x in g.elements))


def action_from_homomorphism(P, M, rho, auts):
    """Right action from ``rho: P -> Aut(M)`` where ``auts[k]`` is the k-th map."""
    return RightGroupAction(
        P, M, tuple(tuple(auts[rho.map[p]][m] for p in P.elements) for m in M.elements)
    )


# automorphisms

def automorphism_group(g, bound=DEFAULT_AUT_BOUND):
    """Aut(g) with product ``a*b`` = apply a, then b; also the list of maps.

    The identity map is element 0.
    """
    if g.order > bound:
        raise BoundExceeded(f"|{g.label}| = {g.order} exceeds automorphism bound {bound}")
    gens = g.generators
    orders = g.element_orders
    cands = [[y for y in g.elements if orders[y] == orders[s]] for s in gens]
    maps = []
    for imgs in itertools.product(*cands):
        fmap = extend_to_homomorphism(g, g, gens, imgs)
        if fmap is not None and len(set(fmap)) == g.order:
            maps.append(fmap)
    maps.sort()
    index = {f: i for i, f in enumerate(maps)}
    mul = [[index[tuple(b[a[x]] for x in g.elements)] for b in maps] for a in maps]
    aut = FiniteGroup.from_table(mul, f"Aut({g.label})")
    return aut, maps
