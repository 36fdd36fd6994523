from hypothesis import given, strategies as st

from xmodcov.smith import (
    Echelon,
    determinant,
    hermite_mod,
    left_kernel,
    matmul,
    quotient_by_triangular,
    smith_normal_form,
    solve_left,
    vecmat,
)


def _check(A):
    sd = smith_normal_form(A)
    assert matmul(matmul(sd.U, A), sd.V) == sd.S
    assert abs(determinant(sd.U)) == 1 and abs(determinant(sd.V)) == 1
    m, n = len(A), len(A[0])
    for i in range(m):
        for j in range(n):
            if i != j:
                assert sd.S[i][j] == 0
    nz = [d for d in sd.divisors if d]
    assert sd.divisors[: len(nz)] == nz
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    assert all(d >= 0 for d in sd.divisors)
    return sd


def test_identity():
    assert _check([[1, 0, 0], [0, 1, 0], [0, 0, 1]]).divisors == [1, 1, 1]


def test_diag_2_3():
    assert _check([[2, 0], [0, 3]]).divisors == [1, 6]


def test_rank_one():
    assert _check([[2, 4], [4, 8]]).divisors == [2, 0]


def test_large_entries_stay_exact():
    A = [[10**30 + 7, 3], [6, 10**20]]
    sd = _check(A)
    assert sd.divisors[0] * sd.divisors[1] == abs(determinant(A))


ints = st.integers(min_value=-12, max_value=12)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_random_matrices(m, n, data):
    A = data.draw(st.lists(st.lists(ints, min_size=n, max_size=n), min_size=m, max_size=m))
    sd = _check(A)
    if m == n:
        prod = 1
        for d in sd.divisors:
            prod *= d
        assert prod == abs(determinant(A))


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_kernel_and_solve(m, n, data):
    A = data.draw(st.lists(st.lists(ints, min_size=n, max_size=n), min_size=m, max_size=m))
    for k in left_kernel(A):
        assert vecmat(k, A, n) == [0] * n
    x = data.draw(st.lists(ints, min_size=m, max_size=m))
    b = vecmat(x, A, n)
    y = solve_left(A, b)
    assert y is not None and vecmat(y, A, n) == b
    ech = Echelon(A, n)
    assert ech.rank == smith_normal_form(A).rank
    z = ech.solve(b)
    assert z is not None and vecmat(z, A, n) == b
    for k in ech.dense_kernel():
        assert vecmat(k, A, n) == [0] * n
    assert len(ech.kernel) == m - ech.rank


@given(st.integers(1, 4), st.integers(0, 4), st.sampled_from([2, 4, 6, 12]), st.data())
def test_quotient_modulo(n, m, E, data):
    # Z^n / (rowspace(A) + E Z^n) computed two ways
    A = data.draw(st.lists(st.lists(ints, min_size=n, max_size=n), min_size=m, max_size=m))
    H = hermite_mod(A, n, E)
    divs, coords, gens = quotient_by_triangular(H)
    full = A + [[E * (i == j) for j in range(n)] for i in range(n)]
    expect = [d for d in smith_normal_form(full).divisors if d != 1]
    assert sorted(divs) == sorted(expect)
    for row in A:
        assert all(c == 0 for c in coords(row))
    for i, g in enumerate(gens):
        c = coords(g)
        assert [int(j == i) % d for j, d in enumerate(divs)] == [x % d for x, d in zip(c, divs)]
