import random

import pytest

from xmodcov.catalogue import small_groupoids
from xmodcov.crossed import beta
from xmodcov.catalogue import named_crossed_modules
from xmodcov.errors import MissingComponentChoice, NotACovering, NotASubgroup, NotTransitive, UnknownObject
from xmodcov.groupoids import (
    GroupoidActionOnSet,
    GroupoidMorphism,
    action_groupoid,
    conjugate_cover_isomorphism,
    covering_from_subgroup,
    covering_from_transversal,
    disjoint_union,
    groupoid_from_group,
    identity_groupoid_morphism,
    is_covering_morphism,
    is_pi0_proper,
    is_regular_by_normality,
    is_regular_covering,
    is_transitive,
    object_group,
    transitive_components,
    transitive_groupoid,
    transitivity,
    validate_groupoid,
    validate_groupoid_morphism,
    validate_set_action,
)
from xmodcov.groups import cyclic_group, symmetric_group


def c4():
    return groupoid_from_group(cyclic_group(4))


def test_stars_of_one_object_groupoid():
    G = c4()
    assert sorted(G.star(0)) == [0, 1, 2, 3] and sorted(G.costar(0)) == [0, 1, 2, 3]
    with pytest.raises(UnknownObject):
        G.star(1)


def test_c4_cover_by_order_two_subgroup():
    cov = covering_from_subgroup(c4(), 0, [0, 2])
    H = cov.morphism.source
    assert validate_groupoid(H)
    assert H.num_objects == 2 and H.num_arrows == 8
    assert all(len(H.star(x)) == 4 for x in H.objects)
    for x in H.objects:
        grp, loops = object_group(H, x)
        assert grp.order == 2
    p = cov.morphism
    assert is_covering_morphism(p) and is_regular_covering(p) and is_pi0_proper(p)
    assert sorted(p.arrow_map[a] for a in H.loops(cov.point)) == [0, 2]
    assert not cov.universal


def test_collapsing_morphism_is_not_a_covering():
    H = covering_from_subgroup(c4(), 0, [0, 2]).morphism.source
    G = c4()
    p = GroupoidMorphism(H, G, (0,) * H.num_objects, (G.identities[0],) * H.num_arrows)
    assert validate_groupoid_morphism(p)
    chk = is_covering_morphism(p)
    assert not chk and chk.failure == "duplicated"
    with pytest.raises(NotACovering):
        is_regular_covering(p)


def test_identity_covering():
    G = transitive_groupoid(symmetric_group(3), 2)
    p = identity_groupoid_morphism(G)
    assert is_covering_morphism(p) and is_regular_covering(p) and is_pi0_proper(p)


def test_components():
    assert len(transitive_components(beta(named_crossed_modules()["C2-0->C2"]).underlying)) == 2
    assert len(transitive_components(c4())) == 1
    U, _ = disjoint_union(c4(), groupoid_from_group(cyclic_group(2)))
    assert len(transitive_components(U)) == 2 and not is_transitive(U)


def test_action_groupoids():
    G = c4()
    triv = GroupoidActionOnSet(G, 1, (0,), {(0, g): 0 for g in range(4)})
    assert validate_set_action(triv)
    H, p = action_groupoid(triv)
    assert p.is_isomorphism
    # right translation of C4 on itself: 1-transitive
    g = cyclic_group(4)
    A = GroupoidActionOnSet(G, 4, (0,) * 4, {(a, x): g.mul[a][x] for a in range(4) for x in range(4)})
    H, p = action_groupoid(A)
    assert H.num_arrows == 16 and transitivity(H) == (True, True, True)
    bad = GroupoidActionOnSet(G, 4, (0,) * 4, {(a, x): 0 for a in range(4) for x in range(4)})
    assert not validate_set_action(bad)


def test_cover_from_whole_and_trivial_subgroup():
    G = transitive_groupoid(symmetric_group(3), 2)
    whole = G.loops(0)
    cov = covering_from_subgroup(G, 0, whole)
    assert cov.morphism.is_isomorphism
    cov = covering_from_subgroup(G, 0, [G.identities[0]])
    assert cov.universal
    assert all(len(cov.morphism.source.loops(y)) == 1 for y in cov.morphism.source.objects)
    assert cov.morphism.source.num_objects == 6 * 2


def test_cover_errors():
    U, _ = disjoint_union(c4(), c4())
    with pytest.raises(NotTransitive):
        covering_from_subgroup(U, 0, [0])
    with pytest.raises(NotASubgroup):
        covering_from_subgroup(c4(), 0, [0, 1])
    with pytest.raises(MissingComponentChoice):
        covering_from_transversal(U, [(0, [0])])


def test_transversal_universal_flag():
    U, off = disjoint_union(c4(), groupoid_from_group(symmetric_group(3)))
    e1 = U.identities[1]
    assert covering_from_transversal(U, [(0, [0]), (1, [e1])]).universal
    assert not covering_from_transversal(U, [(0, [0, 2]), (1, [e1])]).universal
    single = c4()
    assert covering_from_transversal(single, [(0, [0, 1, 2, 3])]).morphism.is_isomorphism


def test_conjugate_covers():
    G = c4()
    h, first, second = conjugate_cover_isomorphism(G, 0, [0], 0)
    assert h.object_map == tuple(range(h.source.num_objects))
    # the point goes to the end of the lift of a, so a outside N swaps the cosets
    h, first, second = conjugate_cover_isomorphism(G, 0, [0, 2], 1)
    assert h.object_map == (1, 0)
    h, first, second = conjugate_cover_isomorphism(G, 0, [0, 2], 2)
    assert h.object_map == (0, 1)
    S3 = symmetric_group(3)
    G = groupoid_from_group(S3)
    t = next(x for x in S3.elements if S3.element_orders[x] == 2)
    r = next(x for x in S3.elements if S3.element_orders[x] == 3)
    h, first, second = conjugate_cover_isomorphism(G, 0, [S3.identity, t], r)
    assert h.object_map != tuple(range(3))
    assert h.then(second.morphism).arrow_map == first.morphism.arrow_map


def test_cover_object_count_formula():
    for label, G in small_groupoids():
        if not is_transitive(G):
            continue
        grp, loops = object_group(G, 0)
        cov = covering_from_subgroup(G, 0, [G.identities[0]])
        assert cov.morphism.source.num_objects == grp.order * G.num_objects, label


def test_composite_of_coverings():
    G = transitive_groupoid(cyclic_group(4), 2)
    q = covering_from_subgroup(G, 0, [G.identities[0], G.compose[(G.loops(0)[1], G.loops(0)[1])]]).morphism
    H = q.source
    p = covering_from_subgroup(H, 0, [H.identities[0]]).morphism
    assert is_covering_morphism(p.then(q))


def test_random_coverings_regular_iff_normal():
    rng = random.Random(7)
    cat = [G for _, G in small_groupoids()]
    agree = 0
    for _ in range(40):
        G = rng.choice(cat)
        comps = transitive_components(G)
        choices = []
        for comp in comps:
            x = rng.choice(comp)
            grp, loops = object_group(G, x)
            from xmodcov.groups import all_subgroups

            subs = all_subgroups(grp)
            N = sorted(rng.choice(subs))
            choices.append((x, [loops[i] for i in N]))
        p = covering_from_transversal(G, choices).morphism
        assert is_regular_covering(p) == is_regular_by_normality(p)
        agree += 1
    assert agree == 40
