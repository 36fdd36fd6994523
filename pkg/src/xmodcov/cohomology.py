"""Cohomology of a finite group with coefficients in a finite right module.

A module ``A`` is stored as its invariant factors ``d_1 | d_2 | ...`` with
elements as integer row vectors mod ``d``; ``phi`` acts by matrices,
``v^g = v @ action[g]``.  Cochains are normalized and inhomogeneous, and the
differential is

    (df)(g1..g_{n+1}) = f(g2..g_{n+1})
                        + sum_i (-1)^i f(.., g_i g_{i+1}, ..)
                        + (-1)^{n+1} f(g1..gn)^{g_{n+1}}
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache

import numpy as np

from .errors import BoundExceeded, DegreeTooHigh, NotACocycle, NotEquivariant
from .groups import FiniteGroup, GroupMorphism, automorphism_group, all_homomorphisms, cyclic_group, direct_product
from .smith import Echelon, hermite_mod, quotient_by_triangular, smith_normal_form, vecmat

MAX_DEGREE = 3
DEFAULT_MAX_PHI = 6
DEFAULT_MAX_A = 16
ORACLE_MAX_PHI = 3


# finite abelian groups

def abelian_decomposition(g, subset=None):
    """Invariant factors of an abelian (sub)group and coordinates for its elements.

    Returns ``(divisors, encode, decode)`` where ``encode`` maps group elements
    to coordinate tuples and ``decode`` is its inverse.
    """
    elts = sorted(subset) if subset is not None else list(g.elements)
    gens = []
    closure = {g.identity}
    for x in elts:
        if x not in closure:
            gens.append(x)
            closure = _closure(g, gens)
    k = len(gens)
    # spanning tree coordinates and Schreier relations
    coord = {g.identity: [0] * k}
    frontier = [g.identity]
    rels = []
    while frontier:
        nxt = []
        for x in frontier:
            for i, s in enumerate(gens):
                y = g.mul[x][s]
                step = list(coord[x])
                step[i] += 1
                if y not in coord:
                    coord[y] = step
                    nxt.append(y)
                else:
                    rel = [a - b for a, b in zip(step, coord[y])]
                    if any(rel):
                        rels.append(rel)
        frontier = nxt
    if k == 0:
        return (), {g.identity: ()}, {(): g.identity}
    sd = smith_normal_form(rels, k)
    divs = list(sd.divisors) + [0] * (k - len(sd.divisors))
    assert all(d > 0 for d in divs), "finite group expected"
    keep = [j for j, d in enumerate(divs) if d > 1]
    divisors = tuple(divs[j] for j in keep)
    encode = {}
    for x, c in coord.items():
        w = vecmat(c, sd.V, k)
        encode[x] = tuple(w[j] % divs[j] for j in keep)
    decode = {v: x for x, v in encode.items()}
    assert len(decode) == len(encode)
    return divisors, encode, decode


def _closure(g, gens):
    sub = {g.identity}
    frontier = [g.identity]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = g.mul[x][s]
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    return sub


def abelian_group_from_divisors(divisors):
    g = cyclic_group(1) if not divisors else cyclic_group(divisors[0])
    for d in divisors[1:]:
        g = direct_product(g, cyclic_group(d))
    return g


# modules

@dataclass(frozen=True)
class PhiModule:
    phi: FiniteGroup
    divisors: tuple
    action: tuple   # phi element -> r x r matrix (tuple of row tuples)

    def __repr__(self):
        return f"PhiModule({self.phi.label}, {list(self.divisors)})"

    @property
    def rank(self):
        return len(self.divisors)

    @property
    def size(self):
        n = 1
        for d in self.divisors:
            n *= d
        return n

    @property
    def zero(self):
        return (0,) * self.rank

    def reduce(self, v):
        return tuple(int(x) % d for x, d in zip(v, self.divisors))

    def add(self, u, v):
        return tuple((a + b) % d for a, b, d in zip(u, v, self.divisors))

    def sub(self, u, v):
        return tuple((a - b) % d for a, b, d in zip(u, v, self.divisors))

    def neg(self, v):
        return tuple((-a) % d for a, d in zip(v, self.divisors))

    def scale(self, k, v):
        return tuple((k * a) % d for a, d in zip(v, self.divisors))

    def act(self, v, g):
        R = self.action[g]
        r = self.rank
        return tuple(sum(v[i] * R[i][j] for i in range(r)) % self.divisors[j] for j in range(r))

    def elements(self):
        return [tuple(v) for v in itertools.product(*(range(d) for d in self.divisors))]

    def index(self, v):
        i = 0
        for a, d in zip(v, self.divisors):
            i = i * d + a
        return i

    def is_trivial_action(self):
        r = self.rank
        ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
        return all(self.reduce_matrix(R) == ident for R in self.action)

    def reduce_matrix(self, R):
        return tuple(tuple(x % d for x, d in zip(row, self.divisors)) for row in R)


def validate_module(A):
    from .report import Check
    phi, r, d = A.phi, A.rank, A.divisors
    if len(A.action) != phi.order:
        return Check.failed("one matrix per element required")
    for g in phi.elements:
        R = A.action[g]
        if len(R) != r or any(len(row) != r for row in R):
            return Check.failed("matrix shape", g)
        for i in range(r):
            if any((d[i] * x) % dj for x, dj in zip(R[i], d)):
                return Check.failed("matrix is not a homomorphism of A", g, i)
    basis = [tuple(int(i == j) for j in range(r)) for i in range(r)]
    for i, e in enumerate(basis):
        if A.act(e, phi.identity) != e:
            return Check.failed("identity acts trivially", i)
        for g in phi.elements:
            for h in phi.elements:
                if A.act(A.act(e, g), h) != A.act(e, phi.mul[g][h]):
                    return Check.failed("action(gh) = action(g) action(h)", g, h, i)
    for g in phi.elements:
        if len({A.act(v, g) for v in A.elements()}) != A.size:
            return Check.failed("matrix not invertible", g)
    return Check.passed()


def trivial_module(phi, divisors):
    r = len(divisors)
    ident = tuple(tuple(int(i == j) for j in range(r)) for i in range(r))
    return PhiModule(phi, tuple(divisors), tuple(ident for _ in phi.elements))


def module_from_group_action(phi, group, subset, act):
    """Module on an abelian (sub)group with ``act(x, g)`` giving ``x^g``.

    Returns ``(module, encode, decode)``.
    """
    divisors, encode, decode = abelian_decomposition(group, subset)
    r = len(divisors)
    basis = [decode[tuple(int(i == j) for j in range(r))] for i in range(r)]
    action = tuple(tuple(encode[act(b, g)] for b in basis) for g in phi.elements)
    mod = PhiModule(phi, divisors, action)
    # the matrices must reproduce the action on every element
    for x, v in encode.items():
        for g in phi.elements:
            if mod.act(v, g) != encode[act(x, g)]:
                raise NotEquivariant("action is not additive on the decomposition", (x, g))
    return mod, encode, decode


def all_module_structures(phi, divisors):
    """Every right module structure of ``phi`` on ``⊕ Z/d_i``."""
    A = abelian_group_from_divisors(divisors)
    aut, maps = automorphism_group(A, bound=max(A.order, 1))
    out = []
    for rho in all_homomorphisms(phi, aut):
        # automorphism product is "apply a then b", a right action
        mod, _, _ = module_from_group_action(phi, A, None, lambda x, g: maps[rho.map[g]][x])
        out.append(mod)
    return out


# cochains

@dataclass(frozen=True)
class Cochain:
    degree: int
    module: PhiModule
    values: dict = field(hash=False)   # argument tuple (all of phi^n) -> element

    def __call__(self, *args):
        return self.values[tuple(args)]

    def __eq__(self, other):
        return isinstance(other, Cochain) and self.degree == other.degree and self.values == other.values

    def __hash__(self):
        return hash((self.degree, tuple(sorted(self.values.items()))))

    def is_zero(self):
        z = self.module.zero
        return all(v == z for v in self.values.values())

    def is_normalized(self):
        e = self.module.phi.identity
        z = self.module.zero
        return all(v == z for k, v in self.values.items() if e in k)

    def __add__(self, other):
        A = self.module
        return Cochain(self.degree, A, {k: A.add(v, other.values[k]) for k, v in self.values.items()})

    def __sub__(self, other):
        A = self.module
        return Cochain(self.degree, A, {k: A.sub(v, other.values[k]) for k, v in self.values.items()})

    def scaled(self, c):
        A = self.module
        return Cochain(self.degree, A, {k: A.scale(c, v) for k, v in self.values.items()})


def cochain_from_function(module, n, fn):
    """Cochain from ``fn(*args)``; raises if the result is not normalized."""
    vals = {args: module.reduce(fn(*args)) for args in itertools.product(module.phi.elements, repeat=n)}
    f = Cochain(n, module, vals)
    if not f.is_normalized():
        raise ValueError("cochain is not normalized")
    return f


def zero_cochain(module, n):
    z = module.zero
    return Cochain(n, module, {args: z for args in itertools.product(module.phi.elements, repeat=n)})


def random_cochain(module, n, rng):
    e = module.phi.identity
    vals = {}
    for args in itertools.product(module.phi.elements, repeat=n):
        if e in args:
            vals[args] = module.zero
        else:
            vals[args] = tuple(rng.randrange(d) for d in module.divisors)
    return Cochain(n, module, vals)


def coboundary(f):
    n = f.degree
    if n > MAX_DEGREE:
        raise DegreeTooHigh(f"coboundary only up to degree {MAX_DEGREE}", (n,))
    A = f.module
    mul = A.phi.mul
    vals = f.values
    out = {}
    for g in itertools.product(A.phi.elements, repeat=n + 1):
        acc = vals[g[1:]]
        for i in range(1, n + 1):
            args = g[: i - 1] + (mul[g[i - 1]][g[i]],) + g[i + 1:]
            term = vals[args]
            acc = A.sub(acc, term) if i % 2 else A.add(acc, term)
        last = A.act(vals[g[:n]], g[n])
        acc = A.add(acc, last) if (n + 1) % 2 == 0 else A.sub(acc, last)
        out[g] = acc
    return Cochain(n + 1, A, out)


# coordinates for the linear algebra

def _nonidentity(phi):
    return [g for g in phi.elements if g != phi.identity]


def cochain_dimension(module, n):
    return (module.phi.order - 1) ** n * module.rank


def _arg_tuples(module, n):
    return list(itertools.product(_nonidentity(module.phi), repeat=n))


def cochain_to_vector(f):
    out = []
    for args in _arg_tuples(f.module, f.degree):
        out.extend(f.values[args])
    return out


def vector_to_cochain(module, n, vec):
    vals = {}
    r = module.rank
    e = module.phi.identity
    it = iter(_arg_tuples(module, n))
    nz = {args: i for i, args in enumerate(_arg_tuples(module, n))}
    for args in itertools.product(module.phi.elements, repeat=n):
        if e in args:
            vals[args] = module.zero
        else:
            i = nz[args]
            vals[args] = module.reduce(vec[i * r:(i + 1) * r])
    return Cochain(n, module, vals)


def _lattice_rows(module, n):
    """Rows ``d_j e_(args, j)`` spanning the zero-lattice of normalized n-cochains."""
    N = cochain_dimension(module, n)
    r = module.rank
    rows = []
    for i in range(N):
        row = [0] * N
        row[i] = module.divisors[i % r]
        rows.append(row)
    return rows


def differential_matrix(module, n):
    """Integer matrix of ``d: C^n -> C^{n+1}`` in row-vector convention."""
    r = module.rank
    phi = module.phi
    e = phi.identity
    rows_index = {a: i for i, a in enumerate(_arg_tuples(module, n))}
    outs = _arg_tuples(module, n + 1)
    D = [[0] * (len(outs) * r) for _ in range(len(rows_index) * r)]
    for o, g in enumerate(outs):
        terms = [(g[1:], 1)]
        for i in range(1, n + 1):
            terms.append((g[: i - 1] + (phi.mul[g[i - 1]][g[i]],) + g[i + 1:], (-1) ** i))
        for args, sign in terms:
            if e in args:
                continue
            base = rows_index[args] * r
            for j in range(r):
                D[base + j][o * r + j] += sign
        sign = (-1) ** (n + 1)
        base = rows_index[g[:n]] * r
        R = module.action[g[n]]
        for i in range(r):
            for j in range(r):
                if R[i][j]:
                    D[base + i][o * r + j] += sign * R[i][j]
    return D


@dataclass(frozen=True, eq=False)
class CohomologyGroup:
    degree: int
    module: PhiModule
    divisors: tuple
    representatives: tuple
    _zb: object = field(repr=False)
    _coords: object = field(repr=False)
    _solver: object = field(repr=False)

    @property
    def order(self):
        n = 1
        for d in self.divisors:
            n *= d
        return n

    def elements(self):
        """All coordinate tuples."""
        return [tuple(c) for c in itertools.product(*(range(d) for d in self.divisors))]

    def cocycle(self, coords):
        """The representative cocycle ``sum c_i rep_i``."""
        f = zero_cochain(self.module, self.degree)
        for c, rep in zip(coords, self.representatives):
            if c:
                f = f + rep.scaled(c)
        return f

    def coordinates(self, z):
        if self._zb is None:
            return ()
        y = self._zb.coordinates(cochain_to_vector(z))
        if y is None:
            raise NotACocycle("cochain is not a cocycle")
        return self._coords(y) if self.divisors else ()

    def decompose(self, z):
        """Coordinates of ``z`` and ``h`` with ``dh = z - cocycle(coords)``."""
        if self.degree <= MAX_DEGREE and not coboundary(z).is_zero():
            raise NotACocycle("cochain is not a cocycle")
        coords = self.coordinates(z)
        resid = cochain_to_vector(z - self.cocycle(coords))
        n = self.degree
        if cochain_dimension(self.module, n) == 0:
            return coords, zero_cochain(self.module, n - 1)
        x = self._solver.solve(resid)
        assert x is not None, "residual must be a coboundary"
        Nprev = cochain_dimension(self.module, n - 1)
        h = vector_to_cochain(self.module, n - 1, x[:Nprev])
        return coords, h


def _check_bounds(module, n, max_phi, max_a):
    if not 1 <= n <= MAX_DEGREE:
        raise DegreeTooHigh(f"degree must be in 1..{MAX_DEGREE}", (n,))
    if module.phi.order > max_phi:
        raise BoundExceeded(f"|phi| = {module.phi.order} exceeds {max_phi}")
    if module.size > max_a:
        raise BoundExceeded(f"|A| = {module.size} exceeds {max_a}")


@lru_cache(maxsize=256)
def cohomology_group(module, n, max_phi=DEFAULT_MAX_PHI, max_a=DEFAULT_MAX_A):
    """``H^n(phi, A)`` as invariant factors plus representative cocycles."""
    _check_bounds(module, n, max_phi, max_a)
    N = cochain_dimension(module, n)
    Nnext = cochain_dimension(module, n + 1)
    prev_rows = differential_matrix(module, n - 1) + _lattice_rows(module, n)
    solver = Echelon(prev_rows, N)
    if N == 0:
        return CohomologyGroup(n, module, (), (), None, None, solver)
    # cocycles: x with x D + w K = 0 for some w
    stacked = differential_matrix(module, n) + _lattice_rows(module, n + 1)
    gens = [row[:N] for row in Echelon(stacked, Nnext).dense_kernel()]
    zb = Echelon(gens, N)
    assert zb.rank == N
    # coboundaries and the zero lattice in cocycle coordinates; the quotient
    # is killed by the exponent of A so the lattice contains E * Z^N
    X = []
    for row in prev_rows:
        y = zb.coordinates(row)
        assert y is not None
        X.append(y)
    E = max(module.divisors)
    divisors, coords, gens = quotient_by_triangular(hermite_mod(X, N, E))
    basis = zb.dense_rows()
    reps = tuple(vector_to_cochain(module, n, vecmat(g, basis, N)) for g in gens)
    return CohomologyGroup(n, module, tuple(divisors), reps, zb, coords, solver)


def is_coboundary(z, max_phi=DEFAULT_MAX_PHI, max_a=DEFAULT_MAX_A):
    """A witness ``h`` with ``dh = z``, or None when the class is nonzero."""
    if not coboundary(z).is_zero():
        raise NotACocycle("cochain is not a cocycle")
    H = cohomology_group(z.module, z.degree, max_phi, max_a)
    coords, h = H.decompose(z)
    if any(coords):
        return None
    return h


# brute-force oracle

def cohomology_counts_bruteforce(module, n, max_phi=ORACLE_MAX_PHI):
    """``(#cocycles, #coboundaries)`` among normalized n-cochains by enumeration."""
    phi = module.phi
    if phi.order > max_phi:
        raise BoundExceeded(f"oracle path limited to |phi| <= {max_phi}")
    if not 0 <= n <= MAX_DEGREE:
        raise DegreeTooHigh("degree out of range", (n,))
    elts = module.elements()
    size = len(elts)
    idx = {v: i for i, v in enumerate(elts)}
    add = np.array([[idx[module.add(a, b)] for b in elts] for a in elts], dtype=np.int64)
    neg = np.array([idx[module.neg(a)] for a in elts], dtype=np.int64)
    act = np.array([[idx[module.act(a, g)] for a in elts] for g in phi.elements], dtype=np.int64)
    zero = idx[module.zero]
    e = phi.identity

    def image_rows(k):
        """All normalized k-cochains (as element-index arrays) and d of each."""
        args = list(itertools.product(_nonidentity(phi), repeat=k))
        col = {a: i for i, a in enumerate(args)}
        count = size ** len(args)
        vals = np.array(list(itertools.product(range(size), repeat=len(args))), dtype=np.int64).reshape(count, len(args))
        outs = list(itertools.product(_nonidentity(phi), repeat=k + 1))
        res = np.empty((count, len(outs)), dtype=np.int64)

        def column(a):
            if e in a:
                return np.full(count, zero, dtype=np.int64)
            return vals[:, col[a]]

        for o, g in enumerate(outs):
            acc = column(g[1:])
            for i in range(1, k + 1):
                a = g[: i - 1] + (phi.mul[g[i - 1]][g[i]],) + g[i + 1:]
                t = column(a)
                acc = add[acc, neg[t]] if i % 2 else add[acc, t]
            last = act[g[k]][column(g[:k])]
            acc = add[acc, last] if (k + 1) % 2 == 0 else add[acc, neg[last]]
            res[:, o] = acc
        return res

    d_n = image_rows(n)
    cocycles = int(np.all(d_n == zero, axis=1).sum()) if d_n.shape[1] else d_n.shape[0]
    if n == 0:
        return cocycles, 1
    d_prev = image_rows(n - 1)
    boundaries = len({row.tobytes() for row in d_prev})
    return cocycles, boundaries


def cohomology_order_bruteforce(module, n, max_phi=ORACLE_MAX_PHI):
    z, b = cohomology_counts_bruteforce(module, n, max_phi)
    assert z % b == 0
    return z // b


# coefficient maps

@dataclass(frozen=True)
class ModuleMap:
    source: PhiModule
    target: PhiModule
    matrix: tuple   # source basis element i -> target coordinates

    def __call__(self, v):
        T = self.target
        return tuple(sum(v[i] * self.matrix[i][j] for i in range(self.source.rank)) % T.divisors[j] for j in range(T.rank))


def make_module_map(source, target, matrix):
    f = ModuleMap(source, target, tuple(tuple(int(x) for x in row) for row in matrix))
    if source.phi != target.phi:
        raise NotEquivariant("modules over different groups")
    for i, d in enumerate(source.divisors):
        if any((d * x) % t for x, t in zip(f.matrix[i], target.divisors)):
            raise NotEquivariant("matrix is not a homomorphism", (i,))
    r = source.rank
    for g in source.phi.elements:
        for i in range(r):
            e = tuple(int(j == i) for j in range(r))
            if f(source.act(e, g)) != target.act(f(e), g):
                raise NotEquivariant("map does not commute with the action", (g, i))
    return f


def pushforward(fmap, c):
    return Cochain(c.degree, fmap.target, {k: fmap(v) for k, v in c.values.items()})


def pushforward_class(fmap, coords, n, max_phi=DEFAULT_MAX_PHI, max_a=DEFAULT_MAX_A):
    Hs = cohomology_group(fmap.source, n, max_phi, max_a)
    Ht = cohomology_group(fmap.target, n, max_phi, max_a)
    return Ht.coordinates(pushforward(fmap, Hs.cocycle(coords)))


def pullback_module(theta, module):
    """Restriction of a Q-module along ``theta: phi' -> Q``."""
    if theta.target != module.phi:
        raise ValueError("theta must land in the module's group")
    return PhiModule(theta.source, module.divisors, tuple(module.action[theta.map[g]] for g in theta.source.elements))


def pullback_cochain(theta, module_prime, c):
    """``c`` precomposed argument-wise with ``theta``, over the restricted module."""
    vals = {
        args: c.values[tuple(theta.map[a] for a in args)]
        for args in itertools.product(theta.source.elements, repeat=c.degree)
    }
    return Cochain(c.degree, module_prime, vals)


def pullback_along(theta, module, n=None, coords=None):
    """The restricted module; with ``n`` and ``coords`` also the pulled-back class."""
    mp = pullback_module(theta, module)
    if n is None:
        return mp
    H = cohomology_group(module, n)
    Hp = cohomology_group(mp, n)
    return mp, Hp.coordinates(pullback_cochain(theta, mp, H.cocycle(coords)))
