"""Exact integer matrices and Smith normal form.

Matrices are lists of rows of Python ints (unbounded).  ``smith_normal_form``
returns unimodular ``U``, ``V`` (and ``V^-1``) with ``U*A*V = S`` diagonal,
each nonzero divisor dividing the next and zeros trailing.
"""

from dataclasses import dataclass
import math
from fractions import Fraction


@dataclass(frozen=True)
class SmithDecomposition:
    U: list
    S: list
    V: list
    V_inv: list
    divisors: list

    @property
    def rank(self):
        return sum(1 for d in self.divisors if d != 0)


def identity_matrix(n):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def matmul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        r = [0] * cols
        for k in range(inner):
            a = row[k]
            if a:
                bk = B[k]
                for j in range(cols):
                    if bk[j]:
                        r[j] += a * bk[j]
        out.append(r)
    return out


def vecmat(v, B, cols=None):
    cols = len(B[0]) if B else (cols or 0)
    r = [0] * cols
    for k, a in enumerate(v):
        if a:
            bk = B[k]
            for j in range(cols):
                if bk[j]:
                    r[j] += a * bk[j]
    return r


def determinant(A):
    """Bareiss fraction-free elimination."""
    n = len(A)
    if n == 0:
        return 1
    M = [list(r) for r in A]
    sign, prev = 1, 1
    for k in range(n - 1):
        if M[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if M[i][k] != 0), None)
            if swap is None:
                return 0
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
        prev = M[k][k]
    return sign * M[n - 1][n - 1]


def smith_normal_form(A, cols=None):
    """Smith normal form of an ``m x n`` integer matrix.

    ``cols`` is only needed when ``A`` has no rows.
    """
    m = len(A)
    n = len(A[0]) if m else (cols or 0)
    D = [list(map(int, row)) for row in A]
    U = identity_matrix(m)
    V = identity_matrix(n)
    Vi = identity_matrix(n)

    def swap_rows(i, j):
        D[i], D[j] = D[j], D[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in D:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]
        Vi[i], Vi[j] = Vi[j], Vi[i]

    def add_row(src, dst, q):
        # row_dst += q * row_src
        if q:
            rs, rd = D[src], D[dst]
            for k in range(n):
                if rs[k]:
                    rd[k] += q * rs[k]
            us, ud = U[src], U[dst]
            for k in range(m):
                if us[k]:
                    ud[k] += q * us[k]

    def add_col(src, dst, q):
        # col_dst += q * col_src; V^-1 gets row_src -= q * row_dst
        if q:
            for row in D:
                if row[src]:
                    row[dst] += q * row[src]
            for row in V:
                if row[src]:
                    row[dst] += q * row[src]
            vd, vs = Vi[dst], Vi[src]
            for k in range(n):
                if vd[k]:
                    vs[k] -= q * vd[k]

    def negate_row(i):
        D[i] = [-x for x in D[i]]
        U[i] = [-x for x in U[i]]

    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = D[i]
            for j in range(t, n):
                v = row[j]
                if v and (best is None or abs(v) < best[0]):
                    best = (abs(v), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        if i != t:
            swap_rows(i, t)
        if j != t:
            swap_cols(j, t)
        while True:
            p = D[t][t]
            done = True
            for i in range(t + 1, m):
                if D[i][t]:
                    add_row(t, i, -(D[i][t] // p))
                    if D[i][t]:
                        done = False
            for j in range(t + 1, n):
                if D[t][j]:
                    add_col(t, j, -(D[t][j] // p))
                    if D[t][j]:
                        done = False
            if not done:
                # move the smallest remaining entry of row/col t to the pivot
                cand = [(abs(D[i][t]), i, None) for i in range(t, m) if D[i][t]]
                cand += [(abs(D[t][j]), None, j) for j in range(t + 1, n) if D[t][j]]
                _, i, j = min(cand, key=lambda c: c[0])
                if i is not None and i != t:
                    swap_rows(i, t)
                elif j is not None:
                    swap_cols(j, t)
                continue
            bad = None
            for i in range(t + 1, m):
                row = D[i]
                for j in range(t + 1, n):
                    if row[j] % p:
                        bad = i
                        break
                if bad is not None:
                    break
            if bad is None:
                break
            add_row(bad, t, 1)
        if D[t][t] < 0:
            negate_row(t)
        t += 1

    divisors = [D[k][k] for k in range(min(m, n))]
    return SmithDecomposition(U, D, V, Vi, divisors)


def left_kernel(A, cols=None):
    """Basis rows of ``{x : x A = 0}`` over the integers."""
    m = len(A)
    sd = smith_normal_form(A, cols)
    r = sd.rank
    return [list(sd.U[i]) for i in range(r, m)]


def row_basis(rows, cols):
    """A basis (as rows) of the lattice spanned by ``rows``."""
    if not rows:
        return []
    sd = smith_normal_form(rows, cols)
    UA = matmul(sd.U, rows)
    return [UA[i] for i in range(sd.rank)]


def solve_left(A, b, cols=None):
    """An integer ``x`` with ``x A = b``, or None."""
    m = len(A)
    n = len(A[0]) if m else (cols or len(b))
    sd = smith_normal_form(A, n)
    bv = vecmat(b, sd.V, n)
    y = [0] * m
    for j in range(n):
        d = sd.divisors[j] if j < len(sd.divisors) else 0
        if d == 0:
            if bv[j] != 0:
                return None
        else:
            if bv[j] % d:
                return None
            y[j] = bv[j] // d
    return vecmat(y, sd.U, m) if m else []


def inverse_matrix(A):
    """Exact rational inverse of a square matrix (entries are Fractions)."""
    n = len(A)
    M = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(A)]
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        M[c], M[piv] = M[piv], M[c]
        pv = M[c][c]
        M[c] = [x / pv for x in M[c]]
        for r in range(n):
            if r != c and M[r][c] != 0:
                f = M[r][c]
                Mr, Mc = M[r], M[c]
                M[r] = [a - f * b for a, b in zip(Mr, Mc)]
    return [row[n:] for row in M]


class Echelon:
    """Integer row echelon form ``H = T A`` with ``T`` unimodular, stored sparsely.

    ``rows`` are ``(pivot, h, t)`` with dict rows, pivots strictly increasing;
    ``kernel`` are the rows of ``T`` whose image is zero.
    """

    def __init__(self, A, cols=None):
        m = len(A)
        self.cols = len(A[0]) if m else (cols or 0)
        self.m = m
        live = []
        for i, row in enumerate(A):
            live.append(({j: int(v) for j, v in enumerate(row) if v}, {i: 1}))
        rows = []
        for c in range(self.cols):
            hits = [k for k, (h, _) in enumerate(live) if c in h]
            while len(hits) > 1:
                p = min(hits, key=lambda k: abs(live[k][0][c]))
                ph, pt = live[p]
                pv = ph[c]
                rest = []
                for k in hits:
                    if k == p:
                        continue
                    h, t = live[k]
                    q = h[c] // pv
                    _axpy(h, ph, -q)
                    _axpy(t, pt, -q)
                    if c in h:
                        rest.append(k)
                hits = rest + [p]
            if hits:
                k = hits[0]
                h, t = live[k]
                if h[c] < 0:
                    for d in (h, t):
                        for j in d:
                            d[j] = -d[j]
                rows.append((c, h, t))
                live[k] = None
                live = [x for x in live if x is not None]
        self.rows = rows
        self.kernel = [t for _, t in live]

    @property
    def rank(self):
        return len(self.rows)

    def dense_rows(self):
        return [[h.get(j, 0) for j in range(self.cols)] for _, h, _ in self.rows]

    def dense_kernel(self):
        return [[t.get(j, 0) for j in range(self.m)] for t in self.kernel]

    def coordinates(self, b):
        """``y`` with ``y H = b``, or None."""
        r = dict((j, int(v)) for j, v in enumerate(b) if v)
        y = []
        for c, h, _ in self.rows:
            v = r.get(c, 0)
            if v % h[c]:
                return None
            q = v // h[c]
            y.append(q)
            if q:
                _axpy(r, h, -q)
        if r:
            return None
        return y

    def solve(self, b):
        """An integer ``x`` with ``x A = b``, or None."""
        y = self.coordinates(b)
        if y is None:
            return None
        x = {}
        for q, (_, _, t) in zip(y, self.rows):
            if q:
                _axpy(x, t, q)
        return [x.get(i, 0) for i in range(self.m)]


def _axpy(dst, src, q):
    # dst += q * src on dict rows, dropping zeros
    if not q:
        return
    for j, v in src.items():
        w = dst.get(j, 0) + q * v
        if w:
            dst[j] = w
        else:
            dst.pop(j, None)


def hermite_mod(A, cols, modulus):
    """Upper triangular basis of ``rowspace(A) + modulus * Z^cols``.

    Returns one row per column (dense, entries reduced mod ``modulus`` right
    of the diagonal); each diagonal entry divides ``modulus``.
    """
    E = modulus
    live = [[int(x) % E for x in row] for row in A]
    live = [row for row in live if any(row)]
    basis = []
    for c in range(cols):
        virtual = [0] * cols
        virtual[c] = E
        hits = [row for row in live if row[c]] + [virtual]
        rest = [row for row in live if not row[c]]
        while len(hits) > 1:
            hits.sort(key=lambda r: r[c])
            piv = hits[0]
            pv = piv[c]
            nxt = [piv]
            for row in hits[1:]:
                q = row[c] // pv
                new = [x - q * y for x, y in zip(row, piv)]
                # keep column c exact, reduce the rest mod E
                new = [new[j] if j == c else new[j] % E for j in range(cols)]
                if new[c]:
                    nxt.append(new)
                elif any(new):
                    rest.append(new)
            hits = nxt
        basis.append(hits[0])
        live = rest
    return basis


def quotient_by_triangular(H):
    """Invariant factors of ``Z^n / rowspace(H)`` for upper triangular full-rank ``H``.

    Returns ``(divisors, coords, generators)``: ``coords(y)`` gives the
    coordinates of ``y`` mod each divisor, and ``generators[i]`` is an integer
    vector representing the i-th cyclic generator.
    """
    n = len(H)
    big = [c for c in range(n) if abs(H[c][c]) != 1]
    pos = {c: k for k, c in enumerate(big)}

    def substitute(y):
        y = list(y)
        for c in range(n):
            if y[c] and abs(H[c][c]) == 1:
                q = y[c] * H[c][c]
                y = [a - q * b for a, b in zip(y, H[c])]
        return [y[c] for c in big]

    # relation rows: H_c with later unit pivots eliminated
    rels = []
    for c in big:
        row = list(H[c])
        lead = row[c]
        row[c] = 0
        sub = substitute(row)
        sub[pos[c]] += lead
        rels.append(sub)
    k = len(big)
    sd = smith_normal_form(rels, k)
    keep = [j for j, d in enumerate(sd.divisors) if d != 1]
    divisors = [sd.divisors[j] for j in keep]
    assert all(d > 0 for d in divisors)

    def coords(y):
        w = vecmat(substitute(y), sd.V, k)
        return tuple(w[j] % sd.divisors[j] for j in keep)

    generators = []
    for j in keep:
        v = [0] * n
        for i, c in enumerate(big):
            v[c] = sd.V_inv[j][i]
        generators.append(v)
    return divisors, coords, generators
