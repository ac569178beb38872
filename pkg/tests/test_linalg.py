import random
from fractions import Fraction

import pytest

from vertexalg import linalg as la
from vertexalg.scalar import I, ONE, ZERO, Scalar


def mk(rows):
    return [[Scalar(x) if not isinstance(x, Scalar) else x for x in row] for row in rows]


def rand_scalar(rng, small=True):
    num = rng.randint(-4, 4)
    den = rng.randint(1, 3)
    if small and rng.random() < 0.7:
        return Scalar(Fraction(num, den))
    return Scalar(Fraction(num, den), Fraction(rng.randint(-3, 3), rng.randint(1, 2)))


def rand_matrix(rng, n, m):
    return [[rand_scalar(rng) for _ in range(m)] for _ in range(n)]


def test_solve_identity():
    b = [Scalar(3), Scalar(-1), I]
    res = la.solve_exact(la.eye(3), b)
    assert res.status == "unique"
    assert res.solution == b


def test_solve_zero_matrix_inconsistent():
    res = la.solve_exact(la.zeros(2, 2), [ONE, ZERO])
    assert res.status == "inconsistent"


def test_singular_consistent_underdetermined():
    # rank-1 2x2 system with consistent rhs has a 1-dim nullspace
    a = mk([[1, 2], [2, 4]])
    res = la.solve_exact(a, [Scalar(3), Scalar(6)])
    assert res.status == "underdetermined"
    assert len(res.nullspace) == 1
    assert la.mat_vec(a, res.solution) == [Scalar(3), Scalar(6)]
    assert la.mat_vec(a, res.nullspace[0]) == [ZERO, ZERO]


def naive_rref(a):
    """Independent plain row-echelon oracle for cross-checking."""
    m = [row[:] for row in a]
    nr = len(m)
    nc = len(m[0]) if m else 0
    piv = []
    r = 0
    for c in range(nc):
        hit = None
        for i in range(r, nr):
            if m[i][c]:
                hit = i
                break
        if hit is None:
            continue
        m[r], m[hit] = m[hit], m[r]
        f = m[r][c]
        m[r] = [x / f for x in m[r]]
        for i in range(nr):
            if i != r and m[i][c]:
                g = m[i][c]
                m[i] = [x - g * y for x, y in zip(m[i], m[r])]
        piv.append(c)
        r += 1
    return m, piv


def test_solve_matches_naive_rref_on_random_systems():
    rng = random.Random(7)
    for _ in range(60):
        n = rng.randint(1, 5)
        m = rng.randint(1, 5)
        a = rand_matrix(rng, n, m)
        b = [rand_scalar(rng) for _ in range(n)]
        res = la.solve_exact(a, b)
        red, piv = naive_rref([a[i][:] + [b[i]] for i in range(n)])
        if m in piv:
            assert res.status == "inconsistent"
            continue
        assert la.mat_vec(a, res.solution) == b
        if len(piv) == m:
            assert res.status == "unique"
        else:
            assert res.status == "underdetermined"
            assert len(res.nullspace) == m - len(piv)
            for v in res.nullspace:
                assert la.is_zero_vector(la.mat_vec(a, v))


def test_solve_sparse_agrees_with_dense():
    rng = random.Random(19)
    for _ in range(40):
        n = rng.randint(1, 6)
        m = rng.randint(1, 6)
        a = rand_matrix(rng, n, m)
        for row in a:
            for j in range(m):
                if rng.random() < 0.5:
                    row[j] = ZERO
        b = [rand_scalar(rng) for _ in range(n)]
        dense = la.solve_exact(a, b)
        rows = [{j: row[j] for j in range(m) if row[j]} for row in a]
        sparse = la.solve_sparse(rows, b, m)
        assert dense.status == sparse.status
        if dense.status != "inconsistent":
            assert la.mat_vec(a, sparse.solution) == b
            assert len(sparse.nullspace) == len(dense.nullspace)
            for v in sparse.nullspace:
                assert la.is_zero_vector(la.mat_vec(a, v))


def test_inverse_and_det():
    a = mk([[1, 1], [0, 2]])
    inv = la.inverse(a)
    assert la.mat_eq(la.mat_mul(a, inv), la.eye(2))
    assert la.det(a) == Scalar(2)
    sing = mk([[1, 2], [2, 4]])
    assert la.det(sing) == ZERO
    with pytest.raises(la.StructureError):
        la.inverse(sing)


def test_hermitian_ldl_positive():
    g = [[Scalar(2), I], [-I, Scalar(2)]]
    ok, diag, wit = la.hermitian_ldl(g)
    assert ok and wit is None
    assert all(d.re > 0 for d in diag)


def test_hermitian_ldl_witness():
    g = mk([[1, 0], [0, -1]])
    ok, _, wit = la.hermitian_ldl(g)
    assert not ok
    # the witness has nonpositive norm under the form
    val = la.dot([x.conj() for x in wit], la.mat_vec(g, wit))
    assert val.is_real() and val.re <= 0


def test_hermitian_ldl_rejects_non_hermitian():
    with pytest.raises(la.StructureError):
        la.hermitian_ldl(mk([[1, 1], [0, 1]]))


def test_charpoly_and_spectrum():
    a = mk([[2, 1], [0, 3]])
    coeffs = la.charpoly(a)
    # x^2 - 5x + 6
    assert coeffs == [Scalar(6), Scalar(-5), ONE]
    spec = la.rational_spectrum(a, [Scalar(k) for k in range(-4, 5)])
    assert spec == {Scalar(2): 1, Scalar(3): 1}
    assert la.is_diagonalizable_with(a, [Scalar(2), Scalar(3)])
    jordan = mk([[1, 1], [0, 1]])
    assert not la.is_diagonalizable_with(jordan, [Scalar(1)])


def test_rational_spectrum_fails_on_irrational():
    rot = mk([[0, -1], [1, 0]])  # eigenvalues +-i
    assert la.rational_spectrum(rot, [Scalar(k) for k in range(-3, 4)]) is None
    assert la.rational_spectrum(rot, [I, -I]) == {I: 1, -I: 1}


def test_nullspace_dimension():
    a = mk([[1, 2, 3]])
    ns = la.nullspace(a)
    assert len(ns) == 2
    for v in ns:
        assert la.is_zero_vector(la.mat_vec(a, v))
