"""Group-groupoids, crossed modules and the functors between them.

For a crossed module ``mu: M -> P`` the group-groupoid ``beta`` has objects
``P`` and arrows ``(p, m)`` (index ``p*|M| + m``) from ``p`` to ``p*mu(m)``,
with ``(p,m)(q,n) = (pq, m^q n)`` and ``(p,m)∘(q,n) = (p, mn)``.  ``delta``
goes back through the costar of the identity object with ``mu = src``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from .errors import HypothesisViolated, InterchangeViolated
from .groupoids import (
    FiniteGroupoid,
    GroupoidActionOnSet,
    GroupoidMorphism,
    action_groupoid,
    component_index,
    is_covering_morphism,
    transitive_components,
    transitivity,
    validate_groupoid,
    validate_groupoid_morphism,
    validate_set_action,
)
from .groups import (
    FiniteGroup,
    GroupMorphism,
    RightGroupAction,
    automorphism_group,
    conjugation_action,
    homomorphism_check,
    is_normal,
    quotient_group,
    subgroup_as_group,
    validate_action,
    validate_group,
    DEFAULT_AUT_BOUND,
)
from .report import Check


# group-groupoids

@dataclass(frozen=True, eq=False)
class GroupGroupoid:
    underlying: FiniteGroupoid
    object_group: FiniteGroup
    arrow_group: FiniteGroup
    label: str = ""

    @property
    def e(self):
        return self.object_group.identity

    def bar(self, g):
        """Group inverse of an arrow."""
        return self.arrow_group.inv[g]

    def unit(self, x):
        return self.underlying.identities[x]


def _composable_pairs(G):
    return [(g, h) for g in range(G.num_arrows) for h in G.star(G.tgt(g))]


def validate_group_groupoid(G):
    U, O, A = G.underlying, G.object_group, G.arrow_group
    if U.num_objects == 0:
        return Check.failed("a group-groupoid needs an identity object")
    if O.order != U.num_objects or A.order != U.num_arrows:
        return Check.failed("group orders do not match the groupoid")
    for name, chk in (("groupoid", validate_groupoid(U)), ("object group", validate_group(O)), ("arrow group", validate_group(A))):
        if not chk:
            return Check.failed(f"{name}: {chk.failure}", *chk.witness)
    src = tuple(U.src(g) for g in range(U.num_arrows))
    tgt = tuple(U.tgt(g) for g in range(U.num_arrows))
    for name, fmap in (("source", src), ("target", tgt)):
        chk = homomorphism_check(A, O, fmap)
        if not chk:
            return Check.failed(f"{name} map is not a homomorphism", *chk.witness)
    chk = homomorphism_check(O, A, U.identities)
    if not chk:
        return Check.failed("1_(pq) = 1_p 1_q", *chk.witness)
    pairs = _composable_pairs(U)
    comp, mul = U.compose, A.mul
    for a, g in pairs:
        ag = comp[(a, g)]
        for b, h in pairs:
            if mul[ag][comp[(b, h)]] != comp[(mul[a][b], mul[g][h])]:
                return Check.failed("interchange", a, g, b, h)
    return Check.passed()


def prop21_identities(G):
    """Scan the identities recovering composition from the group law.

    ``a∘b = a·bar(1_y)·b``; for loops ``g`` at ``e``,
    ``a∘(1_y g)∘a^-1 = 1_x g`` and ``a g bar(a) = 1_x g bar(1_x)``; ``G(e)``
    abelian.
    """
    U, A = G.underlying, G.arrow_group
    m = A.m
    for a, b in _composable_pairs(U):
        y = U.tgt(a)
        if U.compose[(a, b)] != m(a, G.bar(G.unit(y)), b):
            return Check.failed("a∘b = a 1̄_y b", a, b)
    loops_e = U.loops(G.e)
    for a in range(U.num_arrows):
        x, y = U.src(a), U.tgt(a)
        ainv = U.inverse[a]
        for g in loops_e:
            lhs = U.compose[(U.compose[(a, m(G.unit(y), g))], ainv)]
            if lhs != m(G.unit(x), g):
                return Check.failed("a∘(1_y g)∘a^-1 = 1_x g", a, g)
            if m(a, g, G.bar(a)) != m(G.unit(x), g, G.bar(G.unit(x))):
                return Check.failed("a g ā = 1_x g 1̄_x", a, g)
    for g in loops_e:
        for h in loops_e:
            if U.compose[(g, h)] != U.compose[(h, g)]:
                return Check.failed("G(e) abelian", g, h)
    return Check.passed()


def normal_subgroupoid_from_subgroup(G, Ne):
    """The family ``N(x) = 1_x N(e)``, verified to be a normal subgroupoid."""
    U, A = G.underlying, G.arrow_group
    Ne = frozenset(Ne)
    if not Ne <= set(U.loops(G.e)) or G.unit(G.e) not in Ne or any(U.compose[(a, b)] not in Ne for a in Ne for b in Ne):
        from .errors import NotASubgroup
        raise NotASubgroup("not a subgroup of G(e)", tuple(sorted(Ne)))
    fam = {x: frozenset(A.mul[G.unit(x)][n] for n in Ne) for x in U.objects}
    for x, Nx in fam.items():
        assert Nx <= set(U.loops(x))
        assert all(U.compose[(a, b)] in Nx for a in Nx for b in Nx)
    for a in range(U.num_arrows):
        x, y = U.src(a), U.tgt(a)
        conj = {U.compose[(U.compose[(U.inverse[a], n)], a)] for n in fam[x]}
        assert conj == fam[y], (a, x, y)
    return fam


@dataclass(frozen=True, eq=False)
class GroupGroupoidMorphism:
    source: GroupGroupoid
    target: GroupGroupoid
    object_map: tuple
    arrow_map: tuple

    @property
    def groupoid_morphism(self):
        return GroupoidMorphism(self.source.underlying, self.target.underlying, self.object_map, self.arrow_map)

    def then(self, other):
        g = self.groupoid_morphism.then(other.groupoid_morphism)
        return GroupGroupoidMorphism(self.source, other.target, g.object_map, g.arrow_map)


def validate_group_groupoid_morphism(f):
    chk = validate_groupoid_morphism(f.groupoid_morphism)
    if not chk:
        return chk
    chk = homomorphism_check(f.source.object_group, f.target.object_group, f.object_map)
    if not chk:
        return Check.failed("object map not a homomorphism", *chk.witness)
    chk = homomorphism_check(f.source.arrow_group, f.target.arrow_group, f.arrow_map)
    if not chk:
        return Check.failed("arrow map not a homomorphism", *chk.witness)
    return Check.passed()


def is_group_groupoid_isomorphism(f):
    return bool(validate_group_groupoid_morphism(f)) and f.groupoid_morphism.is_isomorphism


# crossed modules

@dataclass(frozen=True, eq=False)
class CrossedModule:
    M: FiniteGroup
    P: FiniteGroup
    mu: GroupMorphism
    action: RightGroupAction
    label: str = ""

    def __repr__(self):
        return f"CrossedModule({self.label or self.M.label + '->' + self.P.label})"

    def act(self, m, p):
        return self.action.act[m][p]

    @cached_property
    def kernel(self):
        """``A = Ker mu`` as a set of M-elements."""
        return self.mu.kernel

    @cached_property
    def image(self):
        return self.mu.image

    @cached_property
    def cokernel(self):
        """``(Q, q)`` with ``q: P -> Q = P / mu(M)``."""
        return quotient_group(self.P, self.image)

    @cached_property
    def preimages(self):
        """``p -> sorted list of m with mu(m) = p``."""
        out = [[] for _ in self.P.elements]
        for m in self.M.elements:
            out[self.mu.map[m]].append(m)
        return tuple(map(tuple, out))


def validate_crossed_module(X):
    M, P, mu, act = X.M, X.P, X.mu, X.action.act
    for name, chk in (("M", validate_group(M)), ("P", validate_group(P))):
        if not chk:
            return Check.failed(f"{name}: {chk.failure}", *chk.witness)
    if X.action.group != P or X.action.carrier != M:
        return Check.failed("action is not an action of P on M")
    chk = homomorphism_check(M, P, mu.map)
    if not chk:
        return Check.failed("mu not a homomorphism", *chk.witness)
    chk = validate_action(X.action)
    if not chk:
        return Check.failed(f"action: {chk.failure}", *chk.witness)
    for m in M.elements:
        for p in P.elements:
            if mu.map[act[m][p]] != P.conj(mu.map[m], p):
                return Check.failed("CM1", m, p)
    for m in M.elements:
        for n in M.elements:
            if act[n][mu.map[m]] != M.conj(n, m):
                return Check.failed("CM2", m, n)
    # consequences, rechecked directly
    if not is_normal(P, mu.image):
        return Check.failed("mu(M) not normal")
    A = mu.kernel
    for a in A:
        if a not in M.center:
            return Check.failed("Ker mu not central", a)
        for m in M.elements:
            if act[a][mu.map[m]] != a:
                return Check.failed("mu(M) acts nontrivially on Ker mu", a, m)
    return Check.passed()


def make_crossed_module(M, P, mu_map, act, label=""):
    X = CrossedModule(M, P, GroupMorphism(M, P, tuple(mu_map)), RightGroupAction(P, M, tuple(map(tuple, act))), label)
    chk = validate_crossed_module(X)
    if not chk:
        raise HypothesisViolated(f"not a crossed module: {chk.failure}", chk.witness)
    return X


def normal_inclusion(P, N, label=""):
    """Inclusion of a normal subgroup with the conjugation action."""
    N = frozenset(N)
    if not is_normal(P, N):
        bad = next(((n, p) for n in N for p in P.elements if P.conj(n, p) not in N), ())
        raise HypothesisViolated("subgroup is not normal", bad)
    M, inc = subgroup_as_group(P, N)
    index = {x: i for i, x in enumerate(inc.map)}
    act = [[index[P.conj(inc.map[m], p)] for p in P.elements] for m in M.elements]
    return make_crossed_module(M, P, inc.map, act, label or f"{M.label}<|{P.label}")


def module_zero(P, action, label=""):
    """Zero morphism ``M -> P`` for a P-module ``M``."""
    M = action.carrier
    if not M.is_abelian:
        bad = next((a, b) for a in M.elements for b in M.elements if M.mul[a][b] != M.mul[b][a])
        raise HypothesisViolated("module must be abelian", bad)
    chk = validate_action(action)
    if not chk:
        raise HypothesisViolated(f"not a P-module: {chk.failure}", chk.witness)
    return make_crossed_module(M, P, [P.identity] * M.order, action.act, label or f"{M.label}-0->{P.label}")


def inner(M, bound=DEFAULT_AUT_BOUND, label=""):
    """``chi_M: M -> Aut(M)``, ``m`` going to right conjugation by ``m``."""
    aut, maps = automorphism_group(M, bound)
    index = {f: i for i, f in enumerate(maps)}
    chi = [index[tuple(M.conj(n, m) for n in M.elements)] for m in M.elements]
    act = [[maps[a][m] for a in aut.elements] for m in M.elements]
    return make_crossed_module(M, aut, chi, act, label or f"chi_{M.label}")


def central_surjection(M, P, mu_map, label=""):
    """Surjection with central kernel; ``m^p`` is conjugation by any preimage of ``p``."""
    mu = GroupMorphism(M, P, tuple(mu_map))
    chk = homomorphism_check(M, P, mu.map)
    if not chk:
        raise HypothesisViolated("not a homomorphism", chk.witness)
    if not mu.is_surjective:
        raise HypothesisViolated("not surjective", tuple(sorted(set(P.elements) - mu.image)))
    for a in mu.kernel:
        if a not in M.center:
            raise HypothesisViolated("kernel not central", (a,))
    pre = [None] * P.order
    for m in M.elements:
        if pre[mu.map[m]] is None:
            pre[mu.map[m]] = m
    act = [[M.conj(m, pre[p]) for p in P.elements] for m in M.elements]
    return make_crossed_module(M, P, mu.map, act, label or f"{M.label}->>{P.label}")


def central_map(M, P, mu_map, label=""):
    """Abelian ``M`` into the centre of ``P`` with trivial action."""
    act = [[m] * P.order for m in M.elements]
    return make_crossed_module(M, P, mu_map, act, label)


# morphisms of crossed modules

@dataclass(frozen=True, eq=False)
class CrossedModuleMorphism:
    source: CrossedModule
    target: CrossedModule
    f1: GroupMorphism
    f2: GroupMorphism


def validate_crossed_module_morphism(f):
    S, T = f.source, f.target
    chk = homomorphism_check(S.M, T.M, f.f1.map)
    if not chk:
        return Check.failed("f1 not a homomorphism", *chk.witness)
    chk = homomorphism_check(S.P, T.P, f.f2.map)
    if not chk:
        return Check.failed("f2 not a homomorphism", *chk.witness)
    for m in S.M.elements:
        if f.f2.map[S.mu.map[m]] != T.mu.map[f.f1.map[m]]:
            return Check.failed("square does not commute", m)
        for p in S.P.elements:
            if f.f1.map[S.act(m, p)] != T.act(f.f1.map[m], f.f2.map[p]):
                return Check.failed("f1 not an operator homomorphism", m, p)
    return Check.passed()


def is_crossed_module_isomorphism(f):
    return bool(validate_crossed_module_morphism(f)) and f.f1.is_isomorphism and f.f2.is_isomorphism


def identity_crossed_morphism(X):
    return CrossedModuleMorphism(
        X, X, GroupMorphism(X.M, X.M, tuple(X.M.elements)), GroupMorphism(X.P, X.P, tuple(X.P.elements))
    )


def induced_cokernel_map(f):
    """``Coker nu -> Coker mu`` induced by ``f2``."""
    QS, qs = f.source.cokernel
    QT, qt = f.target.cokernel
    out = [None] * QS.order
    for p in f.source.P.elements:
        v = qt.map[f.f2.map[p]]
        if out[qs.map[p]] is None:
            out[qs.map[p]] = v
        elif out[qs.map[p]] != v:
            raise ValueError("f2 does not descend to cokernels")
    return GroupMorphism(QS, QT, tuple(out))


def beta_morphism(f):
    """The morphism of underlying groupoids of ``beta(source) -> beta(target)``."""
    S, T = f.source, f.target
    ns, nt = S.M.order, T.M.order
    amap = tuple(f.f2.map[p] * nt + f.f1.map[m] for p in S.P.elements for m in S.M.elements)
    return GroupoidMorphism(beta(S).underlying, beta(T).underlying, tuple(f.f2.map), amap)


def is_crossed_covering(f):
    """``f1`` an isomorphism; cross-checked against the beta image."""
    covering = f.f1.is_isomorphism
    assert covering == bool(is_covering_morphism(beta_morphism(f))), "beta image disagrees"
    return covering


def is_universal_crossed_covering(f):
    if not is_crossed_covering(f):
        return False
    return f.source.mu.is_injective and induced_cokernel_map(f).is_isomorphism


# the equivalence

def beta(X):
    M, P, mu = X.M, X.P, X.mu.map
    k = M.order
    keys = [(p, m) for p in P.elements for m in M.elements]
    arrows = tuple((p, P.mul[p][mu[m]]) for p, m in keys)
    compose = {}
    for p, m in keys:
        q = P.mul[p][mu[m]]
        for n in M.elements:
            compose[(p * k + m, q * k + n)] = p * k + M.mul[m][n]
    identities = tuple(p * k + M.identity for p in P.elements)
    inverse = tuple(P.mul[p][mu[m]] * k + M.inv[m] for p, m in keys)
    U = FiniteGroupoid(P.order, arrows, compose, identities, inverse, None, tuple(keys))
    act = X.action.act
    amul = [[P.mul[p][q] * k + M.mul[act[m][q]][n] for q, n in keys] for p, m in keys]
    A = FiniteGroup.from_table(amul, f"{P.label}⋉{M.label}")
    return GroupGroupoid(U, P, A, f"beta({X.label})")


def delta(G):
    """Crossed module on the costar of ``e`` with ``mu = src``.

    Element ``i`` of the returned ``M`` is the arrow ``costar[i]``; the
    costar is returned as the second value.
    """
    U, A = G.underlying, G.arrow_group
    costar = sorted(U.costar(G.e))
    M, inc = subgroup_as_group(A, costar, "costar")
    index = {g: i for i, g in enumerate(costar)}
    mu = [U.src(g) for g in costar]
    act = [[index[A.m(G.bar(G.unit(p)), g, G.unit(p))] for p in G.object_group.elements] for g in costar]
    X = make_crossed_module(M, G.object_group, mu, act, f"delta({G.label})")
    return X, tuple(costar)


def delta_morphism(f):
    S, s_costar = delta(f.source)
    T, t_costar = delta(f.target)
    tindex = {g: i for i, g in enumerate(t_costar)}
    f1 = GroupMorphism(S.M, T.M, tuple(tindex[f.arrow_map[g]] for g in s_costar))
    f2 = GroupMorphism(S.P, T.P, tuple(f.object_map))
    return CrossedModuleMorphism(S, T, f1, f2)


def delta_beta_isomorphism(X):
    """Explicit ``X -> delta(beta(X))``: ``m`` goes to the arrow ``(mu m, m^-1)``."""
    D, costar = delta(beta(X))
    index = {g: i for i, g in enumerate(costar)}
    k = X.M.order
    f1 = GroupMorphism(X.M, D.M, tuple(index[X.mu.map[m] * k + X.M.inv[m]] for m in X.M.elements))
    f2 = GroupMorphism(X.P, D.P, tuple(X.P.elements))
    f = CrossedModuleMorphism(X, D, f1, f2)
    assert is_crossed_module_isomorphism(f)
    return f


def beta_delta_isomorphism(G):
    """Explicit ``beta(delta(G)) -> G``: ``(p, m)`` goes to ``1_p · m^-1``."""
    X, costar = delta(G)
    B = beta(X)
    U, A = G.underlying, G.arrow_group
    amap = tuple(A.mul[G.unit(p)][U.inverse[costar[m]]] for p, m in B.underlying.arrow_labels)
    f = GroupGroupoidMorphism(B, G, tuple(G.object_group.elements), amap)
    assert is_group_groupoid_isomorphism(f)
    return f


def pi0_and_objectgroup(G):
    """``(pi0 G, G(e))`` as groups, checked against ``Coker mu`` and ``Ker mu`` of delta."""
    U, O = G.underlying, G.object_group
    comps = transitive_components(U)
    ecomp = next(c for c in comps if G.e in c)
    pi0, proj = quotient_group(O, ecomp)
    # components are the cosets of the identity component
    cidx = component_index(U)
    assert len(comps) == pi0.order
    assert all((proj.map[x] == proj.map[y]) == (cidx[x] == cidx[y]) for x in U.objects for y in U.objects)
    X, costar = delta(G)
    Q, q = X.cokernel
    assert set(X.image) == set(ecomp) and Q.mul == pi0.mul
    loops = U.loops(G.e)
    Ge, _ = subgroup_as_group(G.arrow_group, loops, "G(e)")
    assert sorted(costar[a] for a in X.kernel) == sorted(loops)
    return pi0, Ge


def transitivity_flags(X):
    """Transitivity of beta(X) and the matching properties of mu."""
    trans, simple, one = transitivity(beta(X).underlying)
    return {
        "transitive": trans,
        "simply_transitive": simple,
        "one_transitive": one,
        "mu_epi": X.mu.is_surjective,
        "mu_mono": X.mu.is_injective,
        "mu_iso": X.mu.is_isomorphism,
    }


# actions of group-groupoids on groups

@dataclass(frozen=True, eq=False)
class GroupGroupoidActionOnGroup:
    base: GroupGroupoid
    carrier: FiniteGroup
    anchor: GroupMorphism
    act: dict

    @cached_property
    def set_action(self):
        return GroupoidActionOnSet(self.base.underlying, self.carrier.order, tuple(self.anchor.map), self.act)


def validate_group_action_on_group(A):
    chk = homomorphism_check(A.carrier, A.base.object_group, A.anchor.map)
    if not chk:
        return Check.failed("w not a homomorphism", *chk.witness)
    chk = validate_set_action(A.set_action)
    if not chk:
        return chk
    U, C, AG = A.base.underlying, A.carrier, A.base.arrow_group
    for a in C.elements:
        for g in U.star(A.anchor.map[a]):
            ag = A.act[(a, g)]
            for b in C.elements:
                for h in U.star(A.anchor.map[b]):
                    if C.mul[ag][A.act[(b, h)]] != A.act[(C.mul[a][b], AG.mul[g][h])]:
                        return Check.failed("interchange", a, g, b, h)
    return Check.passed()


def group_action_groupoid(A):
    """``A ⋊ G`` with ``(a,g)(c,k) = (ac, gk)`` and its projection to ``G``."""
    chk = validate_group_action_on_group(A)
    if not chk:
        raise InterchangeViolated(f"invalid action: {chk.failure}", chk.witness)
    H, p = action_groupoid(A.set_action)
    keys = H.arrow_labels
    index = {key: i for i, key in enumerate(keys)}
    C, AG = A.carrier, A.base.arrow_group
    amul = [[index[(C.mul[a][c], AG.mul[g][k])] for c, k in keys] for a, g in keys]
    arrow_group = FiniteGroup.from_table(amul, "A⋊G")
    GG = GroupGroupoid(H, C, arrow_group, "A⋊G")
    chk = validate_group_groupoid(GG)
    assert chk, chk
    proj = GroupGroupoidMorphism(GG, A.base, p.object_map, p.arrow_map)
    assert validate_group_groupoid_morphism(proj)
    return GG, proj


def action_from_covering(p):
    """Action of the base on the object group of a covering group-groupoid."""
    H, G = p.source, p.target
    UH = H.underlying
    lift = {}
    for x in UH.objects:
        for b in UH.star(x):
            lift[(x, p.arrow_map[b])] = b
    act = {}
    for a in UH.objects:
        for g in G.underlying.star(p.object_map[a]):
            act[(a, g)] = UH.tgt(lift[(a, g)])
    return GroupGroupoidActionOnGroup(G, H.object_group, GroupMorphism(H.object_group, G.object_group, p.object_map), act)
