"""Extensions of type M, factor sets, the obstruction class and classification.

Conventions (left-to-right products, right actions):

* an extension ``E`` with section ``s`` has elements ``s(g) i(m)``, so on the
  carrier ``Phi x M`` (index ``g*|M| + m``)

      (g, m)(h, n) = (gh, f(g,h) . m^u(h) . n)

  with ``s(g)s(h) = s(gh) f(g,h)``, ``u = sigma s`` and
  ``mu f(g,h) = u(gh)^-1 u(g) u(h)``;
* associativity of this product is the identity
  ``f(g,hl) f(h,l) = f(gh,l) f(g,h)^u(l)`` and the obstruction cochain is

      k(g,h,l) = [f(g,hl) f(h,l)] [f(gh,l) f(g,h)^u(l)]^-1  in  A = Ker mu.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

from .cohomology import (
    Cochain,
    ModuleMap,
    PhiModule,
    abelian_group_from_divisors,
    coboundary,
    cohomology_group,
    make_module_map,
    module_from_group_action,
    pullback_module,
    pushforward_class,
)
from .crossed import CrossedModule, CrossedModuleMorphism, make_crossed_module, validate_crossed_module
from .errors import BoundExceeded, InvalidFactorSet, NotEquivariant, NotInvariant, ObstructionNonzero
from .groups import (
    FiniteGroup,
    GroupMorphism,
    all_homomorphisms,
    direct_product,
    extend_to_homomorphism,
    find_isomorphism,
    homomorphism_check,
    quotient_group,
    subgroup_as_group,
    validate_group,
)
from .report import Check

MAX_EQUIVALENCE_ORDER = 24
ORACLE_MAX_PHI = 3
ORACLE_MAX_M = 8
ORACLE_MAX_P = 8


# kernels

def kernel_as_Q_module(X):
    """``A = Ker mu`` as a right module over ``Q = Coker mu``.

    Returns ``(module, encode, decode)`` as ``module_from_group_action``.
    """
    Q, q = X.cokernel
    rep = [None] * Q.order
    for p in X.P.elements:
        if rep[q.map[p]] is None:
            rep[q.map[p]] = p
    A = X.kernel
    # mu(M) acts trivially on A, so any preimage gives the same action
    for p in X.P.elements:
        for a in A:
            assert X.act(a, p) == X.act(a, rep[q.map[p]])
    return module_from_group_action(Q, X.M, A, lambda a, c: X.act(a, rep[c]))


@dataclass(frozen=True, eq=False)
class AbstractKernel:
    xm: CrossedModule
    phi: FiniteGroup
    theta: GroupMorphism

    def __repr__(self):
        return f"AbstractKernel({self.xm!r}, {self.phi.label}, {list(self.theta.map)})"

    @cached_property
    def quotient(self):
        return self.xm.cokernel

    @cached_property
    def q_module(self):
        return kernel_as_Q_module(self.xm)

    @cached_property
    def module(self):
        """``A`` as a Phi-module through ``theta``."""
        return pullback_module(self.theta, self.q_module[0])

    @property
    def encode(self):
        return self.q_module[1]

    @property
    def decode(self):
        return self.q_module[2]

    @cached_property
    def lift_classes(self):
        """For each element of Q, the sorted P-elements over it."""
        Q, q = self.quotient
        out = [[] for _ in Q.elements]
        for p in self.xm.P.elements:
            out[q.map[p]].append(p)
        return tuple(map(tuple, out))


def make_abstract_kernel(xm, phi, theta_map):
    Q, _ = xm.cokernel
    chk = homomorphism_check(phi, Q, tuple(theta_map))
    if not chk:
        raise ValueError(f"theta is not a homomorphism into the cokernel: {chk.failure}")
    return AbstractKernel(xm, phi, GroupMorphism(phi, Q, tuple(theta_map)))


def kernel_from_lift(xm, phi, lift_map):
    """Abstract kernel ``q . lift`` for a homomorphism ``lift: Phi -> P``."""
    Q, q = xm.cokernel
    return make_abstract_kernel(xm, phi, [q.map[p] for p in lift_map])


def all_abstract_kernels(xm, phi):
    Q, _ = xm.cokernel
    return [AbstractKernel(xm, phi, t) for t in all_homomorphisms(phi, Q)]


# extensions

@dataclass(frozen=True, eq=False)
class ExtensionOfType:
    xm: CrossedModule
    E: FiniteGroup
    i: GroupMorphism
    p: GroupMorphism
    sigma: GroupMorphism

    @property
    def phi(self):
        return self.p.target


def validate_extension(e):
    X, E = e.xm, e.E
    chk = validate_group(E)
    if not chk:
        return Check.failed(f"E: {chk.failure}", *chk.witness)
    for name, f, src, tgt in (("i", e.i, X.M, E), ("p", e.p, E, e.p.target), ("sigma", e.sigma, E, X.P)):
        if f.source != src or f.target != tgt:
            return Check.failed(f"{name} has the wrong source or target")
        chk = homomorphism_check(src, tgt, f.map)
        if not chk:
            return Check.failed(f"{name} is not a homomorphism", *chk.witness)
    if not e.i.is_injective:
        return Check.failed("i is not injective", *sorted(e.i.kernel - {X.M.identity})[:1])
    if not e.p.is_surjective:
        return Check.failed("p is not surjective", *sorted(set(e.p.target.elements) - e.p.image)[:1])
    if e.p.kernel != e.i.image:
        bad = sorted(e.p.kernel ^ e.i.image)[0]
        return Check.failed("Ker p != Im i", bad)
    for m in X.M.elements:
        if e.sigma.map[e.i.map[m]] != X.mu.map[m]:
            return Check.failed("sigma i != mu", m)
    back = {y: m for m, y in enumerate(e.i.map)}
    for m in X.M.elements:
        im = e.i.map[m]
        for x in E.elements:
            if back[E.conj(im, x)] != X.act(m, e.sigma.map[x]):
                return Check.failed("m^e != m^sigma(e)", m, x)
    return Check.passed()


def abstract_kernel(e):
    """theta(g) = class of sigma(x) for any x over g, checked on every preimage."""
    Q, q = e.xm.cokernel
    phi = e.phi
    out = [None] * phi.order
    for x in e.E.elements:
        g = e.p.map[x]
        c = q.map[e.sigma.map[x]]
        if out[g] is None:
            out[g] = c
        elif out[g] != c:
            raise ValueError(f"theta not well defined at {g}")
    return AbstractKernel(e.xm, phi, GroupMorphism(phi, Q, tuple(out)))


def same_kernel(k1, k2):
    return k1.xm is k2.xm and k1.phi == k2.phi and k1.theta.map == k2.theta.map


def _generating_set(E, start):
    """``start`` extended greedily (smallest index first) to a generating set."""
    gens = list(start)
    span = _span(E, gens)
    for x in E.elements:
        if len(span) == E.order:
            break
        if x not in span:
            gens.append(x)
            span = _span(E, gens)
    return gens


def _span(E, gens):
    seen = {E.identity}
    frontier = [E.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = E.mul[x][s]
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def are_equivalent(e1, e2, bound=MAX_EQUIVALENCE_ORDER):
    """An isomorphism ``E1 -> E2`` commuting with ``i``, ``p`` and ``sigma``, or None."""
    if e1.E.order > bound or e2.E.order > bound:
        raise BoundExceeded(f"equivalence search limited to |E| <= {bound}")
    if e1.xm is not e2.xm and (e1.xm.M != e2.xm.M or e1.xm.P != e2.xm.P):
        raise ValueError("extensions of different crossed modules")
    if e1.E.order != e2.E.order or e1.phi != e2.phi:
        return None
    E1, E2 = e1.E, e2.E
    gens = _generating_set(E1, [e1.i.map[m] for m in e1.xm.M.generators])
    back = {y: m for m, y in enumerate(e1.i.map)}
    cands = []
    for x in gens:
        if x in back:
            cands.append([e2.i.map[back[x]]])
        else:
            cands.append([y for y in E2.elements if e2.p.map[y] == e1.p.map[x] and e2.sigma.map[y] == e1.sigma.map[x]])
        if not cands[-1]:
            return None
    for images in itertools.product(*cands):
        fmap = extend_to_homomorphism(E1, E2, gens, images)
        if fmap is None or len(set(fmap)) != E2.order:
            continue
        if all(fmap[e1.i.map[m]] == e2.i.map[m] for m in e1.xm.M.elements) and all(
            e2.p.map[fmap[x]] == e1.p.map[x] and e2.sigma.map[fmap[x]] == e1.sigma.map[x] for x in E1.elements
        ):
            return GroupMorphism(E1, E2, fmap)
    return None


# factor sets

@dataclass(frozen=True, eq=False)
class FactorSet:
    kernel: AbstractKernel
    u: tuple      # Phi -> P
    f: tuple      # f[g][h] in M

    def key(self):
        return (self.u, self.f)


def validate_factor_set(fs):
    k = fs.kernel
    X, phi = k.xm, k.phi
    Q, q = X.cokernel
    P, mu = X.P, X.mu.map
    e = phi.identity
    if fs.u[e] != P.identity:
        return Check.failed("u(1) != 1")
    for g in phi.elements:
        if q.map[fs.u[g]] != k.theta.map[g]:
            return Check.failed("q u != theta", g)
    for g in phi.elements:
        if fs.f[g][e] != X.M.identity or fs.f[e][g] != X.M.identity:
            return Check.failed("f not normalized", g)
        for h in phi.elements:
            lhs = mu[fs.f[g][h]]
            rhs = P.m(P.inv[fs.u[phi.mul[g][h]]], fs.u[g], fs.u[h])
            if lhs != rhs:
                return Check.failed("mu f(g,h) != u(gh)^-1 u(g) u(h)", g, h)
    return Check.passed()


def _product_table(fs):
    X, phi = fs.kernel.xm, fs.kernel.phi
    M = X.M
    k = M.order
    mul = []
    for g in phi.elements:
        for m in M.elements:
            row = []
            for h in phi.elements:
                fgh = fs.f[g][h]
                mu_h = X.act(m, fs.u[h])
                left = M.mul[fgh][mu_h]
                gh = phi.mul[g][h]
                for n in M.elements:
                    row.append(gh * k + M.mul[left][n])
            mul.append(row)
    return mul


def _extension_on_table(fs, mul):
    X, phi = fs.kernel.xm, fs.kernel.phi
    M, P = X.M, X.P
    k = M.order
    E = FiniteGroup.from_table(mul, f"E({phi.label},{M.label})")
    i = GroupMorphism(M, E, tuple(phi.identity * k + m for m in M.elements))
    p = GroupMorphism(E, phi, tuple(x // k for x in range(E.order)))
    sigma = GroupMorphism(E, P, tuple(P.mul[fs.u[x // k]][X.mu.map[x % k]] for x in range(E.order)))
    return ExtensionOfType(X, E, i, p, sigma)


def extension_from_factor_set(fs):
    chk = validate_factor_set(fs)
    if not chk:
        raise InvalidFactorSet(f"factor set: {chk.failure}", chk.witness)
    mul = _product_table(fs)
    e = _extension_on_table(fs, mul)
    chk = validate_group(e.E)
    if not chk:
        raise InvalidFactorSet(f"built E fails {chk.failure}", chk.witness)
    chk = validate_extension(e)
    if not chk:
        raise InvalidFactorSet(f"built extension fails {chk.failure}", chk.witness)
    return e


def factor_set_from_extension(e):
    """Factor set from the smallest-index section of ``p`` (with ``s(1) = 1``)."""
    E, phi = e.E, e.phi
    s = [None] * phi.order
    for x in E.elements:
        g = e.p.map[x]
        if s[g] is None:
            s[g] = x
    s[phi.identity] = E.identity
    back = {y: m for m, y in enumerate(e.i.map)}
    u = tuple(e.sigma.map[x] for x in s)
    f = tuple(
        tuple(back[E.m(E.inv[s[phi.mul[g][h]]], s[g], s[h])] for h in phi.elements) for g in phi.elements
    )
    return FactorSet(abstract_kernel(e), u, f)


# obstruction

@dataclass(frozen=True, eq=False)
class ObstructionClass:
    kernel: AbstractKernel
    cocycle: Cochain
    classification: tuple
    factor_set: FactorSet   # the (u, f) used; f need not satisfy the cocycle identity

    @property
    def is_zero(self):
        return not any(self.classification)

    @property
    def group(self):
        return cohomology_group(self.kernel.module, 3)


def _choose(options, rule):
    if rule == "canonical":
        return options[0]
    if rule == "reversed":
        return options[-1]
    raise ValueError(f"unknown choice rule {rule!r}")


def choose_lift(k, rule="canonical"):
    """``u`` with ``q u = theta`` and ``u(1) = 1``, and ``f`` with ``mu f = u(gh)^-1 u(g) u(h)``."""
    X, phi = k.xm, k.phi
    P = X.P
    u = [_choose(k.lift_classes[k.theta.map[g]], rule) for g in phi.elements]
    u[phi.identity] = P.identity
    e = phi.identity
    f = []
    for g in phi.elements:
        row = []
        for h in phi.elements:
            if g == e or h == e:
                row.append(X.M.identity)
                continue
            target = P.m(P.inv[u[phi.mul[g][h]]], u[g], u[h])
            pre = X.preimages[target]
            assert pre, "u(gh)^-1 u(g) u(h) must lie in mu(M)"
            row.append(_choose(pre, rule))
        f.append(tuple(row))
    return tuple(u), tuple(f)


def obstruction_cochain(k, u, f):
    X, phi = k.xm, k.phi
    M = X.M
    mulp = phi.mul
    vals = {}
    for g, h, l in itertools.product(phi.elements, repeat=3):
        left = M.mul[f[g][mulp[h][l]]][f[h][l]]
        right = M.mul[f[mulp[g][h]][l]][X.act(f[g][h], u[l])]
        a = M.mul[left][M.inv[right]]
        vals[(g, h, l)] = k.encode[a]
    return Cochain(3, k.module, vals)


def _check_bounds(k, max_phi, max_a):
    if k.phi.order > max_phi:
        raise BoundExceeded(f"|Phi| = {k.phi.order} exceeds {max_phi}")
    if len(k.xm.kernel) > max_a:
        raise BoundExceeded(f"|A| = {len(k.xm.kernel)} exceeds {max_a}")


def obstruction_class(k, rule="canonical", max_phi=6, max_a=16):
    _check_bounds(k, max_phi, max_a)
    u, f = choose_lift(k, rule)
    z = obstruction_cochain(k, u, f)
    assert coboundary(z).is_zero(), "obstruction cochain must be a 3-cocycle"
    H = cohomology_group(k.module, 3, max_phi, max_a)
    return ObstructionClass(k, z, H.coordinates(z), FactorSet(k, u, f))


def _twist(k, f, c, sign=1):
    """``f(g,h) . c(g,h)^sign`` with ``c`` an A-valued 2-cochain."""
    M, phi = k.xm.M, k.phi
    A = k.module
    out = []
    for g in phi.elements:
        row = []
        for h in phi.elements:
            v = c.values[(g, h)]
            if sign < 0:
                v = A.neg(v)
            row.append(M.mul[f[g][h]][k.decode[v]])
        out.append(tuple(row))
    return tuple(out)


def corrected_factor_set(k, max_phi=6, max_a=16):
    """A genuine factor set for ``k`` or None when the obstruction is nonzero."""
    ob = obstruction_class(k, max_phi=max_phi, max_a=max_a)
    if not ob.is_zero:
        return None, ob
    _, h2 = ob.group.decompose(ob.cocycle)
    assert coboundary(h2) == ob.cocycle
    fs = ob.factor_set
    return FactorSet(k, fs.u, _twist(k, fs.f, h2, -1)), ob


def realize(k, max_phi=6, max_a=16):
    fs, _ = corrected_factor_set(k, max_phi, max_a)
    if fs is None:
        return None
    e = extension_from_factor_set(fs)
    assert abstract_kernel(e).theta.map == k.theta.map
    return e


@dataclass(frozen=True, eq=False)
class Classification:
    kernel: AbstractKernel
    classes: tuple      # (coordinates in H^2, extension) pairs
    h2_divisors: tuple

    def __len__(self):
        return len(self.classes)


def classify(k, max_phi=6, max_a=16):
    fs, ob = corrected_factor_set(k, max_phi, max_a)
    if fs is None:
        raise ObstructionNonzero("obstruction class is nonzero", ob.classification)
    H2 = cohomology_group(k.module, 2, max_phi, max_a)
    classes = []
    for coords in H2.elements():
        z = H2.cocycle(coords)
        e = extension_from_factor_set(FactorSet(k, fs.u, _twist(k, fs.f, z)))
        classes.append((coords, e))
    # the H^2 action on the produced classes is free
    for (c1, a), (c2, b) in itertools.combinations(classes, 2):
        if are_equivalent(a, b) is not None:
            raise AssertionError(f"twists {c1} and {c2} gave equivalent extensions")
    return Classification(k, tuple(classes), H2.divisors)


# brute-force oracle

def _section_associative(fs, triples):
    """Associativity on triples of section elements ``(g,1)``.

    For factor-set products this is equivalent to associativity of the whole
    table (given CM2 and the mu condition); reported classes are re-checked in
    full.  Triples containing the identity hold by normalization.
    """
    X = fs.kernel.xm
    Mmul, act = X.M.mul, X.action.act
    f, u = fs.f, fs.u
    for g, h, l, gh, hl in triples:
        if Mmul[f[gh][l]][act[f[g][h]][u[l]]] != Mmul[f[g][hl]][f[h][l]]:
            return False
    return True


def oracle_factor_sets(k):
    """Every normalized ``(u, f)`` satisfying the factor set constraints."""
    X, phi = k.xm, k.phi
    P = X.P
    e = phi.identity
    others = [g for g in phi.elements if g != e]
    u_options = [k.lift_classes[k.theta.map[g]] for g in others]
    pairs = [(g, h) for g in others for h in others]
    triples = [(g, h, l, phi.mul[g][h], phi.mul[h][l]) for g in others for h in others for l in others]
    out = []
    for u_choice in itertools.product(*u_options):
        u = [P.identity] * phi.order
        for g, p in zip(others, u_choice):
            u[g] = p
        f_options = []
        for g, h in pairs:
            target = P.m(P.inv[u[phi.mul[g][h]]], u[g], u[h])
            f_options.append(X.preimages[target])
        for f_choice in itertools.product(*f_options):
            f = [[X.M.identity] * phi.order for _ in phi.elements]
            for (g, h), m in zip(pairs, f_choice):
                f[g][h] = m
            fs = FactorSet(k, tuple(u), tuple(map(tuple, f)))
            if _section_associative(fs, triples):
                out.append(fs)
    return out


def oracle_enumerate(k, max_phi=ORACLE_MAX_PHI, max_m=ORACLE_MAX_M, max_p=ORACLE_MAX_P):
    """All extensions of type ``k`` up to equivalence, by exhaustive search."""
    if k.phi.order > max_phi or k.xm.M.order > max_m or k.xm.P.order > max_p:
        raise BoundExceeded("oracle limited to small Phi, M and P")
    reps = []
    for fs in oracle_factor_sets(k):
        e = _extension_on_table(fs, _product_table(fs))
        if any(are_equivalent(e, r) is not None for r in reps):
            continue
        chk = validate_extension(e)
        assert chk, chk.failure
        reps.append(e)
    return reps


# changing coefficients

def quotient_module(module, subset_vectors):
    """``A/N`` for a Phi-invariant subgroup ``N`` of ``A`` (as coordinate vectors).

    Returns ``(B, projection ModuleMap)``.
    """
    A = abelian_group_from_divisors(module.divisors)
    index = {v: module.index(v) for v in module.elements()}
    elts = module.elements()
    Nidx = frozenset(index[v] for v in subset_vectors)
    for v in subset_vectors:
        for g in module.phi.elements:
            if index[module.act(v, g)] not in Nidx:
                raise NotInvariant("subgroup is not invariant", (v, g))
    Qg, proj = quotient_group(A, Nidx)
    reps = {}
    for x in A.elements:
        reps.setdefault(proj.map[x], x)
    B, enc, dec = module_from_group_action(
        module.phi, Qg, None, lambda c, g: proj.map[index[module.act(elts[reps[c]], g)]]
    )
    r = module.rank
    rows = [enc[proj.map[index[tuple(int(i == j) for j in range(r))]]] for i in range(r)]
    return B, make_module_map(module, B, rows)


@dataclass(frozen=True, eq=False)
class Pushout:
    xm: CrossedModule           # X' = (B x M)/C -> P
    morphism: CrossedModuleMorphism   # (phi', id): X -> X'
    j: GroupMorphism            # B -> M'
    b_group: FiniteGroup
    b_module: PhiModule


def pushout_crossed_module(X, B, fmap, encode=None):
    """Coefficient change along the Q-module map ``fmap: A -> B``.

    ``fmap.source`` must be the module of ``kernel_as_Q_module(X)`` whose
    element encoding is ``encode`` (recomputed when omitted).
    """
    modA, enc, dec = kernel_as_Q_module(X) if encode is None else encode
    if fmap.source != modA or B != fmap.target:
        raise NotEquivariant("map must start at Ker mu as a Q-module")
    Q, q = X.cokernel
    M, P = X.M, X.P
    Bg = abelian_group_from_divisors(B.divisors)
    belts = B.elements()
    bidx = {v: i for i, v in enumerate(belts)}
    BM = direct_product(Bg, M)
    k = M.order
    C = frozenset(bidx[fmap(enc[a])] * k + M.inv[a] for a in X.kernel)
    for c in C:
        assert c in BM.center
    Mp, proj = quotient_group(BM, C)
    rep = {}
    for x in BM.elements:
        rep.setdefault(proj.map[x], x)
    mu_p = [X.mu.map[rep[c] % k] for c in Mp.elements]

    def act(c, p):
        x = rep[c]
        b, m = belts[x // k], x % k
        return proj.map[bidx[B.act(b, q.map[p])] * k + X.act(m, p)]

    table = [[act(c, p) for p in P.elements] for c in Mp.elements]
    Xp = make_crossed_module(Mp, P, mu_p, table, f"{X.label or 'X'}_*")
    phi_p = GroupMorphism(M, Mp, tuple(proj.map[bidx[B.zero] * k + m] for m in M.elements))
    j = GroupMorphism(Bg, Mp, tuple(proj.map[b * k + M.identity] for b in Bg.elements))
    mor = CrossedModuleMorphism(X, Xp, phi_p, GroupMorphism(P, P, tuple(P.elements)))
    _check_ladder(X, Xp, enc, fmap, phi_p, j, bidx)
    return Pushout(Xp, mor, j, Bg, B)


def _check_ladder(X, Xp, enc, fmap, phi_p, j, bidx):
    from .crossed import validate_crossed_module_morphism

    chk = validate_crossed_module_morphism(CrossedModuleMorphism(X, Xp, phi_p, GroupMorphism(X.P, X.P, tuple(X.P.elements))))
    assert chk, chk.failure
    # j phi = phi' i on A
    for a in X.kernel:
        assert j.map[bidx[fmap(enc[a])]] == phi_p.map[a]
    # bottom row exact at B and M'
    assert j.is_injective
    assert j.image == Xp.kernel
    assert Xp.image == X.image


def fiber_product_kernel(k):
    """``N = (nu: M -> P x_Q Phi)``, ``nu(m) = (mu m, 1)``, with kernel ``id``.

    Returns ``(kN, to_phi)`` where ``kN`` is the abstract kernel of ``N`` whose
    theta identifies Phi with ``Coker nu``.
    """
    X, phi = k.xm, k.phi
    Q, q = X.cokernel
    P = X.P
    PF = direct_product(P, phi)
    n = phi.order
    elts = frozenset(p * n + g for p in P.elements for g in phi.elements if q.map[p] == k.theta.map[g])
    F, inc = subgroup_as_group(PF, elts, f"{P.label}x_Q{phi.label}")
    index = {x: i for i, x in enumerate(inc.map)}
    nu = [index[X.mu.map[m] * n + phi.identity] for m in X.M.elements]
    act = [[X.act(m, inc.map[x] // n) for x in F.elements] for m in X.M.elements]
    XN = make_crossed_module(X.M, F, nu, act, f"N({X.label or 'X'})")
    QN, qN = XN.cokernel
    # Coker nu -> Phi induced by the second projection
    to_phi = [None] * QN.order
    for x in F.elements:
        to_phi[qN.map[x]] = inc.map[x] % n
    to_phi = GroupMorphism(QN, phi, tuple(to_phi))
    assert to_phi.is_isomorphism and homomorphism_check(QN, phi, to_phi.map)
    theta = to_phi.inverse()
    kN = AbstractKernel(XN, phi, theta)
    assert XN.kernel == X.kernel
    return kN, inc


def extension_to_fiber_product(e, kN, inc):
    """The same extension seen as one of type N via ``x -> (sigma x, p x)``."""
    n = e.phi.order
    index = {x: i for i, x in enumerate(inc.map)}
    sig = GroupMorphism(e.E, kN.xm.P, tuple(index[e.sigma.map[x] * n + e.p.map[x]] for x in e.E.elements))
    return ExtensionOfType(kN.xm, e.E, e.i, e.p, sig)


@dataclass(frozen=True, eq=False)
class KernelCovering:
    kernel: AbstractKernel
    N: frozenset
    realizable: bool
    witness: tuple = ()            # nonzero obstruction coordinates when not realizable
    pushout: Pushout | None = None
    pushed_kernel: AbstractKernel | None = None
    extension: ExtensionOfType | None = None
    nu: GroupMorphism | None = None
    covering: CrossedModuleMorphism | None = None
    via_fiber_product: bool = False


def _invariant(k, N, acting):
    X = k.xm
    for a in N:
        for p in acting:
            if X.act(a, p) not in N:
                return (a, p)
    return None


def invariant_subgroups(k):
    """Subgroups of ``A`` invariant under the Phi action through ``theta``."""
    from .groups import all_subgroups

    X = k.xm
    lifts = sorted({p for g in k.phi.elements for p in k.lift_classes[k.theta.map[g]]})
    A, inc = subgroup_as_group(X.M, X.kernel)
    subs = [frozenset(inc.map[x] for x in S) for S in all_subgroups(A)]
    return [N for N in subs if _invariant(k, N, lifts) is None]


def covering_with_kernel(k, N, max_phi=6, max_a=16):
    """Decide whether some extension of type ``M/N`` realizes ``k``; build the covering datum."""
    X = k.xm
    N = frozenset(N)
    if not N <= X.kernel or not N or X.M.identity not in N:
        raise NotInvariant("N must be a subgroup of Ker mu", tuple(sorted(N - X.kernel)))
    phi_lifts = sorted({p for g in k.phi.elements for p in k.lift_classes[k.theta.map[g]]})
    bad = _invariant(k, N, phi_lifts)
    if bad is not None:
        raise NotInvariant("N is not invariant under the Phi action", bad)
    via_fp = _invariant(k, N, X.P.elements) is not None
    base, inc = k, None
    if via_fp:
        # only Phi-invariant: work over P x_Q Phi where the cokernel is Phi
        base, inc = fiber_product_kernel(k)
    modQ, enc, dec = base.q_module
    B, proj = quotient_module(modQ, [enc[a] for a in N])
    ob = obstruction_class(base, max_phi=max_phi, max_a=max_a)
    BPhi = pullback_module(base.theta, B)
    projPhi = make_module_map(base.module, BPhi, proj.matrix)
    pushed = pushforward_class(projPhi, ob.classification, 3, max_phi, max_a)
    po = pushout_crossed_module(base.xm, B, proj, (modQ, enc, dec))
    kp = AbstractKernel(po.xm, k.phi, base.theta)
    if any(pushed):
        return KernelCovering(k, N, False, tuple(pushed), po, kp, via_fiber_product=via_fp)
    e = realize(kp, max_phi, max_a)
    assert e is not None, "pushed-forward obstruction vanished"
    nu = po.morphism.f1.then(e.i)
    assert nu.kernel == N

    def to_p(x):
        s = e.sigma.map[x]
        return inc.map[s] // k.phi.order if via_fp else s

    # (nu: M -> E, action through sigma) maps onto the original crossed module
    f2 = GroupMorphism(e.E, X.P, tuple(to_p(x) for x in e.E.elements))
    act = [[X.act(m, f2.map[x]) for x in e.E.elements] for m in X.M.elements]
    cover = make_crossed_module(X.M, e.E, nu.map, act, f"cover({X.label or 'X'})")
    mor = CrossedModuleMorphism(cover, X, GroupMorphism(X.M, X.M, tuple(X.M.elements)), f2)
    return KernelCovering(k, N, True, (), po, kp, e, nu, mor, via_fp)
