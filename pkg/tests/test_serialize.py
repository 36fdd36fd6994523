import json

from hypothesis import given, strategies as st

from xmodcov.catalogue import named_crossed_modules, small_groups
from xmodcov.cli import validate_document
from xmodcov.cohomology import all_module_structures
from xmodcov.crossed import beta
from xmodcov.extensions import classify, make_abstract_kernel
from xmodcov.groups import cyclic_group
from xmodcov.serialize import Bundle, Registry, dumps

NAMED = sorted(named_crossed_modules().items())


def _reload(bundle):
    reg = Registry()
    reg.add(json.loads(dumps(bundle.as_json())))
    return reg


@given(st.sampled_from(small_groups()))
def test_group_round_trip(g):
    b = Bundle()
    b.group(g, "g")
    assert _reload(b).get("g").mul == g.mul


@given(st.sampled_from(NAMED))
def test_crossed_module_and_beta_round_trip(item):
    name, X = item
    b = Bundle()
    b.crossed_module(X, "x")
    b.groupoid(beta(X), "bx")
    reg = _reload(b)
    Y = reg.get("x")
    assert (Y.M.mul, Y.P.mul, Y.mu.map, Y.action.act) == (X.M.mul, X.P.mul, X.mu.map, X.action.act)
    G = reg.get("bx")
    assert G.arrow_group.mul == beta(X).arrow_group.mul
    assert all(validate_document(reg, n) for n in reg.primary)


def test_kernel_and_extension_round_trip():
    X = named_crossed_modules()["C4-x2->C4"]
    k = make_abstract_kernel(X, cyclic_group(2), [0, 1])
    b = Bundle()
    xm = b.crossed_module(X, "x")
    b.abstract_kernel(k, "k", xm)
    e = classify(k).classes[1][1]
    b.extension(e, "e", xm, "k.phi")
    reg = _reload(b)
    assert reg.get("k").theta.map == k.theta.map
    assert reg.get("e").sigma.map == e.sigma.map
    assert all(validate_document(reg, n) for n in reg.primary)


def test_theta_from_lift_only():
    X = named_crossed_modules()["C4-x2->C4"]
    b = Bundle()
    b.crossed_module(X, "x")
    b.group(cyclic_group(2), "phi")
    reg = _reload(b)
    reg.add({"kind": "abstract_kernel", "name": "k", "payload": {"crossed_module": "x", "phi": "phi", "theta_lift": [0, 1]}})
    assert reg.get("k").theta.map == (0, 1)


@given(st.sampled_from(list(all_module_structures(cyclic_group(2), (2, 2)))))
def test_module_round_trip(A):
    b = Bundle()
    b.module(A, "A")
    assert _reload(b).get("A") == A


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [1, 2]}) == dumps({"a": [1, 2], "b": 1})
    assert dumps({}).endswith("\n")
