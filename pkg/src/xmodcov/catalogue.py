"""Small groups, named crossed modules and the desk-scale sweep."""

from functools import lru_cache

from .crossed import (
    GroupGroupoidActionOnGroup,
    beta,
    central_map,
    central_surjection,
    group_action_groupoid,
    inner,
    make_crossed_module,
    module_zero,
    normal_inclusion,
)
from .errors import BoundExceeded, HypothesisViolated
from .extensions import AbstractKernel
from .groupoids import disjoint_union, groupoid_from_group, transitive_groupoid
from .groups import (
    all_homomorphisms,
    all_subgroups,
    automorphism_group,
    GroupMorphism,
    action_from_homomorphism,
    cyclic_group,
    dihedral_group,
    direct_product,
    is_normal,
    quaternion_group,
    quotient_group,
    symmetric_group,
)


@lru_cache(maxsize=None)
def small_groups(max_order=8):
    """One group of each isomorphism type of order at most 8 (and at most ``max_order``)."""
    C = cyclic_group
    gs = [
        C(1), C(2), C(3), C(4), dihedral_group(2), C(5), C(6), symmetric_group(3), C(7), C(8),
        direct_product(C(4), C(2), "C4xC2"), direct_product(direct_product(C(2), C(2)), C(2), "C2^3"),
        dihedral_group(4), quaternion_group(),
    ]
    return tuple(g for g in gs if g.order <= max_order)


def phi_groups(max_phi=3):
    return tuple(cyclic_group(n) for n in range(1, max_phi + 1))


def named_crossed_modules():
    """A fixed list of standard crossed modules, keyed by name."""
    C2, C3, C4 = cyclic_group(2), cyclic_group(3), cyclic_group(4)
    S3 = symmetric_group(3)
    V4 = dihedral_group(2)
    D8 = dihedral_group(4)
    out = {}
    out["C2-0->C2"] = central_map(C2, C2, [0, 0], "C2-0->C2")
    out["C4-x2->C4"] = central_map(C4, C4, [0, 2, 0, 2], "C4-x2->C4")
    A3 = frozenset(x for x in S3.elements if S3.element_orders[x] != 2)
    out["A3<|S3"] = normal_inclusion(S3, A3, "A3<|S3")
    out["chi_C2"] = inner(C2, label="chi_C2")
    out["id_C2"] = central_map(C2, C2, [0, 1], "id_C2")
    out["chi_S3"] = inner(S3, label="chi_S3")
    out["chi_V4"] = inner(V4, label="chi_V4")
    out["chi_D8"] = inner(D8, label="chi_D8")
    out["C4->>C2"] = central_surjection(C4, C2, [0, 1, 0, 1], "C4->>C2")
    out["C3-0->C2(inv)"] = module_zero(C2, _inversion_action(C2, C3), "C3-0->C2(inv)")
    out["C2-in->C4"] = central_map(C2, C4, [0, 2], "C2-in->C4")
    out["1->C3"] = central_map(cyclic_group(1), C3, [0], "1->C3")
    out["D8->>V4"] = central_surjection(D8, *_quotient_by_center(D8))
    return out


def _inversion_action(P, M):
    aut, maps = automorphism_group(M)
    inv = maps.index(tuple(M.inv))
    rho = next(r for r in all_homomorphisms(P, aut) if P.order == 1 or any(r.map[p] == inv for p in P.elements))
    return action_from_homomorphism(P, M, rho, maps)


def _quotient_by_center(G):
    Q, q = quotient_group(G, G.center)
    return Q, q.map, f"{G.label}->>{G.label}/Z"


def _key(X):
    return (X.M.mul, X.P.mul, X.mu.map, X.action.act)


def sweep_crossed_modules(max_m=8, max_p=8, max_aut=8):
    """Crossed modules for the sweep, each table-distinct.

    Families: normal inclusions, zero maps to P with every action through
    Aut(M), inner crossed modules with small Aut, central surjections
    ``M -> M/K``, and central maps between small abelian groups with trivial
    action.
    """
    groups = small_groups(max(max_m, max_p))
    out, seen = [], set()

    def add(X):
        if X.M.order <= max_m and X.P.order <= max_p and _key(X) not in seen:
            seen.add(_key(X))
            out.append(X)

    for P in groups:
        for N in all_subgroups(P):
            if is_normal(P, N):
                add(normal_inclusion(P, N))
    for M in groups:
        if not M.is_abelian:
            continue
        try:
            aut, maps = automorphism_group(M, bound=max_aut)
        except BoundExceeded:
            continue
        for P in (g for g in groups if g.order <= 4):
            for rho in _actions_up_to_conjugacy(P, aut):
                add(module_zero(P, action_from_homomorphism(P, M, rho, maps)))
    for M in groups:
        try:
            add(inner(M, bound=max_aut))
        except BoundExceeded:
            pass
    for M in groups:
        for K in all_subgroups(M):
            if len(K) > 1 and K <= M.center:
                Q, q = quotient_group(M, K)
                add(central_surjection(M, Q, q.map))
    small_abelian = [g for g in groups if g.is_abelian and 1 < g.order <= 4]
    for M in small_abelian:
        for P in small_abelian:
            for mu in all_homomorphisms(M, P):
                add(central_map(M, P, mu.map, f"{M.label}->{P.label}"))
    # abelian M with nonzero mu and a nontrivial action
    for M in small_abelian:
        aut, maps = automorphism_group(M, bound=max_aut)
        for P in groups:
            if P.order > max_p:
                continue
            for mu in all_homomorphisms(M, P):
                if not mu.kernel or len(mu.kernel) == M.order:
                    continue
                for rho in _actions_up_to_conjugacy(P, aut):
                    if all(r == aut.identity for r in rho.map):
                        continue
                    act = action_from_homomorphism(P, M, rho, maps).act
                    try:
                        X = make_crossed_module(M, P, mu.map, act, f"{M.label}-mu->{P.label}(tw)")
                    except HypothesisViolated:
                        continue
                    add(X)
    return out


def _actions_up_to_conjugacy(P, aut):
    """Homomorphisms ``P -> aut``, one per orbit under conjugation in ``aut``."""
    seen, out = set(), []
    for rho in all_homomorphisms(P, aut):
        if rho.map in seen:
            continue
        for a in aut.elements:
            seen.add(tuple(aut.conj(x, a) for x in rho.map))
        out.append(rho)
    return out


def sweep_instances(max_m=8, max_p=8, max_phi=3):
    """Every abstract kernel ``(X, Phi, theta)`` of the sweep."""
    out = []
    for X in sweep_crossed_modules(max_m, max_p):
        Q, _ = X.cokernel
        for phi in phi_groups(max_phi):
            for theta in all_homomorphisms(phi, Q):
                out.append(AbstractKernel(X, phi, theta))
    return out


def small_groupoids(max_arrows=24):
    """Plain groupoids for the covering checks: one-object groups, transitive
    groupoids on several objects, disjoint unions and beta images."""
    out = []

    def add(G, label):
        if G.num_arrows <= max_arrows:
            out.append((label, G))

    groups = small_groups()
    for g in groups:
        add(groupoid_from_group(g), f"{g.label}")
    for g in groups:
        for n in (2, 3):
            if n * n * g.order <= max_arrows:
                add(transitive_groupoid(g, n), f"{g.label}^({n})")
    C2, C3, S3 = cyclic_group(2), cyclic_group(3), symmetric_group(3)
    pairs = [
        (groupoid_from_group(C2), groupoid_from_group(C3)),
        (transitive_groupoid(C2, 2), groupoid_from_group(S3)),
        (transitive_groupoid(cyclic_group(1), 3), transitive_groupoid(C2, 2)),
    ]
    for A, B in pairs:
        add(disjoint_union(A, B)[0], f"{A!r}+{B!r}")
    for name, X in named_crossed_modules().items():
        add(beta(X).underlying, f"beta({name})")
    return out


def catalogue_group_groupoids():
    """beta of every named crossed module, plus the translation action groupoids over them."""
    out = []
    for name, X in named_crossed_modules().items():
        G = beta(X)
        out.append((f"beta({name})", G))
        H, _ = group_action_groupoid(translation_action(G))
        out.append((f"translate(beta({name}))", H))
    return out


def translation_action(G):
    """The object group acting on itself along ``w = id``: ``a∘g = tgt(g)``."""
    U, O = G.underlying, G.object_group
    act = {(a, g): U.tgt(g) for a in U.objects for g in U.star(a)}
    return GroupGroupoidActionOnGroup(G, O, GroupMorphism(O, O, tuple(O.elements)), act)
