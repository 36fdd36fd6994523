import pytest

from xmodcov.catalogue import named_crossed_modules, sweep_crossed_modules
from xmodcov.crossed import (
    CrossedModule,
    CrossedModuleMorphism,
    GroupGroupoid,
    GroupGroupoidActionOnGroup,
    beta,
    beta_delta_isomorphism,
    delta,
    delta_beta_isomorphism,
    group_action_groupoid,
    identity_crossed_morphism,
    is_crossed_covering,
    make_crossed_module,
    normal_subgroupoid_from_subgroup,
    pi0_and_objectgroup,
    prop21_identities,
    transitivity_flags,
    validate_crossed_module,
    validate_group_groupoid,
)
from xmodcov.errors import HypothesisViolated, InterchangeViolated
from xmodcov.extensions import kernel_as_Q_module
from xmodcov.groupoids import FiniteGroupoid, groupoid_from_group
from xmodcov.groups import GroupMorphism, cyclic_group, symmetric_group, trivial_action, trivial_group

NAMED = named_crossed_modules()


def one_object(g):
    return GroupGroupoid(groupoid_from_group(g), trivial_group(), g, g.label)


def test_one_object_group_groupoids():
    assert validate_group_groupoid(one_object(cyclic_group(4)))
    chk = validate_group_groupoid(one_object(symmetric_group(3)))
    assert not chk and chk.failure == "interchange"


def test_named_catalogue_valid():
    assert len(NAMED) >= 10
    for name, X in NAMED.items():
        assert validate_crossed_module(X), name
        G = beta(X)
        assert validate_group_groupoid(G), name
        assert prop21_identities(G), name


def test_corrupted_composition_breaks_identities():
    G = beta(NAMED["C2-0->C2"])
    U = G.underlying
    comp = dict(U.compose)
    # swap two composites out of the same pair of objects
    (k1, v1), (k2, v2) = [(k, v) for k, v in comp.items() if U.arrows[k[0]] == (0, 0)][:2]
    comp[k1], comp[k2] = v2, v1
    bad = GroupGroupoid(FiniteGroupoid(U.num_objects, U.arrows, comp, U.identities, U.inverse), G.object_group, G.arrow_group)
    assert not prop21_identities(bad)


def test_beta_shapes():
    G = beta(NAMED["C2-0->C2"])
    U = G.underlying
    assert U.num_objects == 2 and U.num_arrows == 4 and all(s == t for s, t in U.arrows)
    assert transitivity_flags(NAMED["id_C2"])["one_transitive"]
    G = beta(NAMED["A3<|S3"])
    U = G.underlying
    from xmodcov.groupoids import transitive_components

    assert U.num_objects == 6 and U.num_arrows == 18
    assert [len(c) for c in transitive_components(U)] == [3, 3]


def test_transitivity_matches_mu_everywhere():
    for X in sweep_crossed_modules():
        f = transitivity_flags(X)
        assert f["transitive"] == f["mu_epi"]
        assert f["simply_transitive"] == f["mu_mono"]
        assert f["one_transitive"] == f["mu_iso"]


def test_pi0_examples():
    pi0, Ge = pi0_and_objectgroup(beta(NAMED["C4-x2->C4"]))
    assert (pi0.order, Ge.order) == (2, 2)
    pi0, Ge = pi0_and_objectgroup(beta(NAMED["id_C2"]))
    assert pi0.order == 1
    pi0, Ge = pi0_and_objectgroup(beta(NAMED["C2-0->C2"]))
    assert (pi0.order, Ge.order) == (2, 2)


def test_delta_examples():
    X, costar = delta(one_object(cyclic_group(4)))
    assert X.M.order == 4 and X.P.order == 1 and len(costar) == 4
    X, _ = delta(beta(NAMED["C2-0->C2"]))
    assert X.M.order == 2 and all(X.mu.map[m] == X.P.identity for m in X.M.elements)


def test_round_trips():
    for X in NAMED.values():
        delta_beta_isomorphism(X)
        beta_delta_isomorphism(beta(X))


def test_normal_subgroupoid():
    G = beta(NAMED["C4-x2->C4"])
    U = G.underlying
    e_loops = U.loops(G.e)
    fam = normal_subgroupoid_from_subgroup(G, e_loops)
    assert all(len(v) == 2 for v in fam.values()) and len(fam) == 4
    fam = normal_subgroupoid_from_subgroup(G, [U.identities[G.e]])
    assert all(v == {U.identities[x]} for x, v in fam.items())


def test_constructor_examples():
    X = NAMED["A3<|S3"]
    assert X.cokernel[0].order == 2 and len(X.kernel) == 1
    X = NAMED["C2-0->C2"]
    assert len(X.kernel) == 2 and X.cokernel[0].order == 2
    X = NAMED["chi_C2"]
    assert X.P.order == 1 and len(X.kernel) == 2 and X.cokernel[0].order == 1
    S3 = symmetric_group(3)
    with pytest.raises(HypothesisViolated) as exc:
        make_crossed_module(S3, S3, [S3.identity] * 6, [[S3.conj(m, p) for p in S3.elements] for m in S3.elements])
    assert exc.value.witness


def test_cm1_failure_reported():
    C2 = cyclic_group(2)
    S3 = symmetric_group(3)
    t = next(x for x in S3.elements if S3.element_orders[x] == 2)
    # C2 onto a non-central involution with trivial action breaks CM1
    X = CrossedModule(C2, S3, GroupMorphism(C2, S3, (S3.identity, t)), trivial_action(S3, C2))
    chk = validate_crossed_module(X)
    assert not chk and chk.failure == "CM1"


def test_kernel_modules():
    A, enc, dec = kernel_as_Q_module(NAMED["C4-x2->C4"])
    assert A.divisors == (2,) and A.is_trivial_action
    A, _, _ = kernel_as_Q_module(NAMED["A3<|S3"])
    assert A.size == 1
    A, _, _ = kernel_as_Q_module(NAMED["C2-0->C2"])
    assert A.divisors == (2,) and A.is_trivial_action


def test_crossed_coverings():
    X = NAMED["C4-x2->C4"]
    assert is_crossed_covering(identity_crossed_morphism(X))
    dbl = GroupMorphism(X.M, X.M, tuple(2 * m % 4 for m in X.M.elements))
    f = CrossedModuleMorphism(X, X, dbl, GroupMorphism(X.P, X.P, tuple(X.P.elements)))
    assert not is_crossed_covering(f)


def test_group_action_groupoids():
    # a one-element group can only act where every arrow out of e is a loop
    G = beta(NAMED["C2-0->C2"])
    one = trivial_group()
    w = GroupMorphism(one, G.object_group, (G.e,))
    A = GroupGroupoidActionOnGroup(G, one, w, {(0, g): 0 for g in G.underlying.star(G.e)})
    H, p = group_action_groupoid(A)
    assert H.underlying.num_objects == 1 and p.groupoid_morphism.is_isomorphism is False
    assert sorted(p.arrow_map) == sorted(G.underlying.star(G.e))

    G = beta(NAMED["C4-x2->C4"])
    O = G.object_group
    idw = GroupMorphism(O, O, tuple(O.elements))
    trans = {(a, g): G.underlying.tgt(g) for a in O.elements for g in G.underlying.star(a)}
    H, p = group_action_groupoid(GroupGroupoidActionOnGroup(G, O, idw, trans))
    assert p.groupoid_morphism.is_isomorphism
    bad = dict(trans)
    k = next(iter(bad))
    bad[k] = (bad[k] + 1) % O.order
    with pytest.raises(InterchangeViolated):
        group_action_groupoid(GroupGroupoidActionOnGroup(G, O, idw, bad))
