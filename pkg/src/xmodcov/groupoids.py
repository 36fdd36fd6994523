"""Finite groupoids, covering morphisms and the coset construction of coverings.

Objects and arrows are integer indices.  Composition is diagrammatic:
``compose[(g, h)]`` is ``g∘h``, defined exactly when ``tgt(g) == src(h)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import MissingComponentChoice, NotACovering, NotASubgroup, NotTransitive, UnknownObject
from .groups import FiniteGroup, is_normal
from .report import Check


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    num_objects: int
    arrows: tuple       # arrow -> (src, tgt)
    compose: dict       # (g, h) -> g∘h on composable pairs
    identities: tuple   # object -> identity arrow
    inverse: tuple      # arrow -> inverse arrow
    object_labels: tuple = field(default=None)
    arrow_labels: tuple = field(default=None)

    def __repr__(self):
        return f"FiniteGroupoid(objects={self.num_objects}, arrows={len(self.arrows)})"

    @property
    def objects(self):
        return range(self.num_objects)

    @property
    def num_arrows(self):
        return len(self.arrows)

    def src(self, g):
        return self.arrows[g][0]

    def tgt(self, g):
        return self.arrows[g][1]

    def comp(self, g, h):
        if self.arrows[g][1] != self.arrows[h][0]:
            raise ValueError(f"arrows {g}, {h} are not composable")
        return self.compose[(g, h)]

    def is_loop(self, g):
        s, t = self.arrows[g]
        return s == t

    @cached_property
    def _stars(self):
        star = [[] for _ in self.objects]
        costar = [[] for _ in self.objects]
        for g, (s, t) in enumerate(self.arrows):
            star[s].append(g)
            costar[t].append(g)
        return tuple(map(tuple, star)), tuple(map(tuple, costar))

    def _check_object(self, x):
        if not 0 <= x < self.num_objects:
            raise UnknownObject(f"no object {x}", (x,))

    def star(self, x):
        self._check_object(x)
        return self._stars[0][x]

    def costar(self, x):
        self._check_object(x)
        return self._stars[1][x]

    def hom(self, x, y):
        return tuple(g for g in self.star(x) if self.arrows[g][1] == y)

    def loops(self, x):
        return self.hom(x, x)


def validate_groupoid(G):
    n = G.num_objects
    arrows = G.arrows
    for g, (s, t) in enumerate(arrows):
        if not (0 <= s < n and 0 <= t < n):
            return Check.failed("arrow endpoints", g)
    for (g, h), c in G.compose.items():
        if arrows[g][1] != arrows[h][0]:
            return Check.failed("composition defined on non-composable pair", g, h)
    star = G._stars[0]
    for g, (s, t) in enumerate(arrows):
        for h in star[t]:
            c = G.compose.get((g, h))
            if c is None:
                return Check.failed("composition missing", g, h)
            if arrows[c][0] != s or arrows[c][1] != arrows[h][1]:
                return Check.failed("composite endpoints", g, h)
    for x in G.objects:
        e = G.identities[x]
        if arrows[e] != (x, x):
            return Check.failed("identity is not a loop", x)
        for g in star[x]:
            if G.compose[(e, g)] != g:
                return Check.failed("left identity", x, g)
        for g in G._stars[1][x]:
            if G.compose[(g, e)] != g:
                return Check.failed("right identity", x, g)
    for g, (s, t) in enumerate(arrows):
        gi = G.inverse[g]
        if arrows[gi] != (t, s) or G.compose[(g, gi)] != G.identities[s] or G.compose[(gi, g)] != G.identities[t]:
            return Check.failed("inverse", g)
    comp = G.compose
    for g, (s, t) in enumerate(arrows):
        for h in star[t]:
            gh = comp[(g, h)]
            for k in star[arrows[h][1]]:
                if comp[(gh, k)] != comp[(g, comp[(h, k)])]:
                    return Check.failed("associativity", g, h, k)
    return Check.passed()


def groupoid_from_group(g):
    """One-object groupoid whose arrows are the elements of ``g``."""
    arrows = tuple((0, 0) for _ in g.elements)
    compose = {(a, b): g.mul[a][b] for a in g.elements for b in g.elements}
    return FiniteGroupoid(1, arrows, compose, (g.identity,), g.inv)


def transitive_groupoid(g, n):
    """Objects ``0..n-1``, arrows ``(i, j, x)`` with ``(i,j,x)∘(j,k,y) = (i,k,xy)``."""
    k = g.order
    keys = [(i, j, x) for i in range(n) for j in range(n) for x in g.elements]
    index = {key: a for a, key in enumerate(keys)}
    arrows = tuple((i, j) for i, j, _ in keys)
    compose = {}
    for i, j, x in keys:
        for l in range(n):
            for y in g.elements:
                compose[(index[(i, j, x)], index[(j, l, y)])] = index[(i, l, g.mul[x][y])]
    identities = tuple(index[(i, i, g.identity)] for i in range(n))
    inverse = tuple(index[(j, i, g.inv[x])] for i, j, x in keys)
    return FiniteGroupoid(n, arrows, compose, identities, inverse, None, tuple(keys))


def disjoint_union(*groupoids):
    """Disjoint union; also returns per-summand (object offset, arrow offset)."""
    arrows, compose, identities, inverse = [], {}, [], []
    offsets = []
    no = na = 0
    for G in groupoids:
        offsets.append((no, na))
        arrows.extend((s + no, t + no) for s, t in G.arrows)
        compose.update({(g + na, h + na): c + na for (g, h), c in G.compose.items()})
        identities.extend(e + na for e in G.identities)
        inverse.extend(i + na for i in G.inverse)
        no += G.num_objects
        na += G.num_arrows
    return FiniteGroupoid(no, tuple(arrows), compose, tuple(identities), tuple(inverse)), offsets


def full_subgroupoid(G, objs):
    """Full subgroupoid on ``objs``; returns it with the arrow embedding list."""
    objs = sorted(objs)
    oindex = {x: i for i, x in enumerate(objs)}
    emb = [g for g, (s, t) in enumerate(G.arrows) if s in oindex and t in oindex]
    aindex = {g: i for i, g in enumerate(emb)}
    arrows = tuple((oindex[G.arrows[g][0]], oindex[G.arrows[g][1]]) for g in emb)
    compose = {(aindex[g], aindex[h]): aindex[c] for (g, h), c in G.compose.items() if g in aindex and h in aindex}
    identities = tuple(aindex[G.identities[x]] for x in objs)
    inverse = tuple(aindex[G.inverse[g]] for g in emb)
    H = FiniteGroupoid(len(objs), arrows, compose, identities, inverse)
    return H, GroupoidMorphism(H, G, tuple(objs), tuple(emb))


def object_group(G, x):
    """The loop group ``G(x)``; element ``k`` is the arrow ``loops[k]``."""
    loops = G.loops(x)
    index = {g: k for k, g in enumerate(loops)}
    mul = [[index[G.compose[(a, b)]] for b in loops] for a in loops]
    return FiniteGroup.from_table(mul, f"G({x})"), loops


def transitive_components(G):
    """Components as sorted object lists, ordered by smallest object."""
    parent = list(G.objects)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for s, t in G.arrows:
        a, b = find(s), find(t)
        if a != b:
            parent[max(a, b)] = min(a, b)
    comps = {}
    for x in G.objects:
        comps.setdefault(find(x), []).append(x)
    return [comps[r] for r in sorted(comps)]


def component_index(G):
    out = [0] * G.num_objects
    for i, comp in enumerate(transitive_components(G)):
        for x in comp:
            out[x] = i
    return out


def is_transitive(G):
    return len(transitive_components(G)) <= 1


def transitivity(G):
    """Flags (transitive, simply transitive, 1-transitive)."""
    n = G.num_objects
    counts = {}
    for st in G.arrows:
        counts[st] = counts.get(st, 0) + 1
    full = len(counts) == n * n
    simple = all(c <= 1 for c in counts.values())
    return full, simple, full and simple


# morphisms

@dataclass(frozen=True, eq=False)
class GroupoidMorphism:
    source: FiniteGroupoid
    target: FiniteGroupoid
    object_map: tuple
    arrow_map: tuple

    def then(self, other):
        return GroupoidMorphism(
            self.source,
            other.target,
            tuple(other.object_map[x] for x in self.object_map),
            tuple(other.arrow_map[g] for g in self.arrow_map),
        )

    @property
    def is_isomorphism(self):
        return (
            len(set(self.object_map)) == self.target.num_objects
            and len(set(self.arrow_map)) == self.target.num_arrows
            and self.source.num_objects == self.target.num_objects
            and self.source.num_arrows == self.target.num_arrows
        )


def identity_groupoid_morphism(G):
    return GroupoidMorphism(G, G, tuple(G.objects), tuple(range(G.num_arrows)))


def validate_groupoid_morphism(f):
    H, G = f.source, f.target
    if len(f.object_map) != H.num_objects or len(f.arrow_map) != H.num_arrows:
        return Check.failed("maps not total")
    for a, (s, t) in enumerate(H.arrows):
        if G.arrows[f.arrow_map[a]] != (f.object_map[s], f.object_map[t]):
            return Check.failed("source/target not preserved", a)
    for x in H.objects:
        if f.arrow_map[H.identities[x]] != G.identities[f.object_map[x]]:
            return Check.failed("identity not preserved", x)
    for (a, b), c in H.compose.items():
        if f.arrow_map[c] != G.compose[(f.arrow_map[a], f.arrow_map[b])]:
            return Check.failed("composition not preserved", a, b)
    return Check.passed()


def is_covering_morphism(p):
    """Star restrictions ``H^x -> G^{px}`` all bijective; witness on failure."""
    H, G = p.source, p.target
    for x in H.objects:
        seen = {}
        for a in H.star(x):
            img = p.arrow_map[a]
            if img in seen:
                return Check.failed("duplicated", x, seen[img], a)
            seen[img] = a
        for g in G.star(p.object_map[x]):
            if g not in seen:
                return Check.failed("missed", x, g)
        if len(seen) != len(G.star(p.object_map[x])):
            return Check.failed("star image leaves target star", x)
    return Check.passed()


def _require_covering(p):
    chk = is_covering_morphism(p)
    if not chk:
        raise NotACovering(f"not a covering morphism: {chk.failure}", chk.witness)


def is_regular_covering(p):
    """Preimages of each loop are all loops or all non-loops."""
    _require_covering(p)
    H = p.source
    kinds = {}
    for a in range(H.num_arrows):
        g = p.arrow_map[a]
        if p.target.is_loop(g):
            kinds.setdefault(g, set()).add(H.is_loop(a))
    return all(len(k) == 1 for k in kinds.values())


def is_regular_by_normality(p):
    """Every ``p(H(y))`` normal in ``G(py)``; an independent regularity test."""
    _require_covering(p)
    H, G = p.source, p.target
    for y in H.objects:
        grp, loops = object_group(G, p.object_map[y])
        index = {g: k for k, g in enumerate(loops)}
        image = {index[p.arrow_map[a]] for a in H.loops(y)}
        if not is_normal(grp, image):
            return False
    return True


def is_pi0_proper(p):
    _require_covering(p)
    H, G = p.source, p.target
    hc = component_index(H)
    gc = component_index(G)
    induced = {}
    for x in H.objects:
        induced.setdefault(hc[x], set()).add(gc[p.object_map[x]])
    if any(len(v) != 1 for v in induced.values()):
        return False
    images = [next(iter(v)) for v in induced.values()]
    return len(set(images)) == len(images) == len(transitive_components(G))


def is_universal_covering(p):
    """π0-proper with every object group of the cover trivial."""
    return is_pi0_proper(p) and all(len(p.source.loops(y)) == 1 for y in p.source.objects)


def lift_morphism(p, q, h0, k0):
    """Morphism ``h`` over the base with ``q∘h = p`` and ``h(h0) = k0``, or None.

    Only objects in the component of ``h0`` are mapped; the source should be
    transitive.
    """
    H, K = p.source, q.source
    if p.object_map[h0] != q.object_map[k0]:
        return None
    # q restricted to each star of K is a bijection onto the base star
    lift = {}
    for k in K.objects:
        for b in K.star(k):
            lift[(k, q.arrow_map[b])] = b
    omap = {h0: k0}
    amap = {}
    frontier = [h0]
    while frontier:
        nxt = []
        for x in frontier:
            for a in H.star(x):
                b = lift.get((omap[x], p.arrow_map[a]))
                if b is None:
                    return None
                amap[a] = b
                y, ky = H.tgt(a), K.tgt(b)
                if y in omap:
                    if omap[y] != ky:
                        return None
                else:
                    omap[y] = ky
                    nxt.append(y)
        frontier = nxt
    if len(omap) != H.num_objects:
        return None
    h = GroupoidMorphism(H, K, tuple(omap[x] for x in H.objects), tuple(amap[a] for a in range(H.num_arrows)))
    if not validate_groupoid_morphism(h):
        return None
    return h


# actions on sets

@dataclass(frozen=True, eq=False)
class GroupoidActionOnSet:
    groupoid: FiniteGroupoid
    size: int
    anchor: tuple   # element -> object
    act: dict       # (element, arrow) -> element, when anchor[element] == src(arrow)
    labels: tuple = None


def validate_set_action(A):
    G = A.groupoid
    for a in range(A.size):
        x = A.anchor[a]
        if A.act.get((a, G.identities[x])) != a:
            return Check.failed("a∘1 = a", a)
        for g in G.star(x):
            b = A.act.get((a, g))
            if b is None:
                return Check.failed("action undefined", a, g)
            if A.anchor[b] != G.tgt(g):
                return Check.failed("w(a∘g) = tg", a, g)
            for h in G.star(G.tgt(g)):
                if A.act[(b, h)] != A.act[(a, G.compose[(g, h)])]:
                    return Check.failed("a∘(g∘h) = (a∘g)∘h", a, g, h)
    for (a, g) in A.act:
        if A.anchor[a] != G.src(g):
            return Check.failed("defined off the anchor", a, g)
    return Check.passed()


def action_groupoid(A):
    """The groupoid ``A ⋊ G`` and its covering projection ``(a, g) -> g``."""
    G = A.groupoid
    keys = [(a, g) for a in range(A.size) for g in G.star(A.anchor[a])]
    index = {k: i for i, k in enumerate(keys)}
    arrows = tuple((a, A.act[(a, g)]) for a, g in keys)
    compose = {}
    for a, g in keys:
        b = A.act[(a, g)]
        for h in G.star(G.tgt(g)):
            compose[(index[(a, g)], index[(b, h)])] = index[(a, G.compose[(g, h)])]
    identities = tuple(index[(a, G.identities[A.anchor[a]])] for a in range(A.size))
    inverse = tuple(index[(A.act[(a, g)], G.inverse[g])] for a, g in keys)
    H = FiniteGroupoid(A.size, arrows, compose, identities, inverse, A.labels, tuple(keys))
    p = GroupoidMorphism(H, G, tuple(A.anchor), tuple(g for _, g in keys))
    chk = is_covering_morphism(p)
    assert chk, chk
    return H, p


@dataclass(frozen=True, eq=False)
class PointedCovering:
    morphism: GroupoidMorphism
    point: int
    cosets: tuple = ()
    universal: bool = False


def _check_loop_subgroup(G, x, N):
    N = frozenset(N)
    loops = set(G.loops(x))
    if not N <= loops or G.identities[x] not in N:
        raise NotASubgroup(f"not a subgroup of G({x})", tuple(sorted(N)))
    for a in N:
        for b in N:
            if G.compose[(a, b)] not in N:
                raise NotASubgroup(f"not closed in G({x})", (a, b))
    return N


def covering_from_subgroup(G, x, N):
    """Covering determined by a subgroup ``N`` of ``G(x)`` for transitive ``G``.

    Objects of the cover are the cosets ``N∘g`` (``g`` out of ``x``), ordered by
    their smallest arrow; the point is the coset ``N`` itself.
    """
    G._check_object(x)
    if not is_transitive(G):
        raise NotTransitive("groupoid is not transitive")
    N = _check_loop_subgroup(G, x, N)
    coset_of = {}
    cos = []
    for g in sorted(G.star(x)):
        if g in coset_of:
            continue
        c = tuple(sorted(G.compose[(n, g)] for n in N))
        for a in c:
            coset_of[a] = len(cos)
        cos.append(c)
    anchor = tuple(G.tgt(c[0]) for c in cos)
    act = {}
    for i, c in enumerate(cos):
        g = c[0]
        for h in G.star(G.tgt(g)):
            act[(i, h)] = coset_of[G.compose[(g, h)]]
    A = GroupoidActionOnSet(G, len(cos), anchor, act, tuple(cos))
    H, p = action_groupoid(A)
    point = coset_of[G.identities[x]]
    return PointedCovering(p, point, tuple(cos), is_universal_covering(p))


def covering_from_transversal(G, choices):
    """Disjoint union of per-component coverings.

    ``choices`` is a list of ``(object, subgroup)``, one per component.
    """
    comps = transitive_components(G)
    cidx = component_index(G)
    chosen = {}
    for x, N in choices:
        G._check_object(x)
        if cidx[x] in chosen:
            raise MissingComponentChoice(f"two choices for component {cidx[x]}", (x,))
        chosen[cidx[x]] = (x, N)
    missing = [i for i in range(len(comps)) if i not in chosen]
    if missing:
        raise MissingComponentChoice(f"no choice for components {missing}", tuple(missing))
    parts = []
    for i, comp in enumerate(comps):
        x, N = chosen[i]
        C, inc = full_subgroupoid(G, comp)
        local = {g: k for k, g in enumerate(inc.arrow_map)}
        xl = comp.index(x)
        cov = covering_from_subgroup(C, xl, [local[n] for n in N])
        parts.append((cov, inc))
    H, offsets = disjoint_union(*(c.morphism.source for c, _ in parts))
    omap, amap = [], []
    for cov, inc in parts:
        p = cov.morphism
        omap.extend(inc.object_map[y] for y in p.object_map)
        amap.extend(inc.arrow_map[a] for a in p.arrow_map)
    p = GroupoidMorphism(H, G, tuple(omap), tuple(amap))
    return PointedCovering(p, offsets[0][0] + parts[0][0].point if parts else 0, (), is_universal_covering(p))


def conjugate_cover_isomorphism(G, x, N, a):
    """Isomorphism between the coverings built from ``N`` and ``a^-1∘N∘a``.

    ``a`` runs from ``x`` to ``y``.  The returned ``h`` satisfies ``q∘h = p``
    and sends the end of the lift of ``a`` at the point of the first cover to
    the point of the second; it is checked to be the only such morphism.
    Returns ``(h, first covering, second covering)``.
    """
    if G.src(a) != x:
        raise ValueError(f"arrow {a} does not start at {x}")
    y = G.tgt(a)
    ai = G.inverse[a]
    first = covering_from_subgroup(G, x, N)
    conj = [G.compose[(G.compose[(ai, n)], a)] for n in N]
    second = covering_from_subgroup(G, y, conj)
    p, q = first.morphism, second.morphism
    H, K = p.source, q.source
    # object N∘g of H goes to a^-1∘N∘g = N(y)∘a^-1∘g of K
    kindex = {}
    for i, c in enumerate(second.cosets):
        for arr in c:
            kindex[arr] = i
    omap = tuple(kindex[G.compose[(ai, c[0])]] for c in first.cosets)
    keys_k = {key: i for i, key in enumerate(K.arrow_labels)}
    amap = tuple(keys_k[(omap[c], g)] for c, g in H.arrow_labels)
    h = GroupoidMorphism(H, K, omap, amap)
    assert validate_groupoid_morphism(h)
    assert h.then(q).arrow_map == p.arrow_map and h.then(q).object_map == p.object_map
    end = H.tgt(next(b for b in H.star(first.point) if p.arrow_map[b] == a))
    assert omap[end] == second.point
    # uniqueness: every morphism over G is a lift determined by the image of the point
    candidates = []
    for k in K.objects:
        lifted = lift_morphism(p, q, first.point, k)
        if lifted is not None and lifted.object_map[end] == second.point:
            candidates.append(lifted)
    assert len(candidates) == 1 and candidates[0].arrow_map == amap
    return h, first, second
