"""Exact dense and sparse linear algebra over the Gaussian rationals.

Matrices are lists of row lists of Scalars.  Everything here is exact:
Gaussian elimination over the field Q(i) classifies every system as
having a unique solution, no solution, or a positive-dimensional
solution set with an explicit nullspace basis.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import StructureError
from .scalar import ONE, ZERO, Scalar

Matrix = list  # list[list[Scalar]]
Vector = list  # list[Scalar]


def zeros(nrows: int, ncols: int) -> Matrix:
    return [[ZERO] * ncols for _ in range(nrows)]


def eye(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(a: Matrix):
    return (len(a), len(a[0]) if a else 0)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    n, k = shape(a)
    if n == 0:
        return []
    k2, m = shape(b)
    if k != k2:
        raise StructureError(f"matrix shapes {n}x{k} and {k2}x{m} do not compose")
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            c = ai[t]
            if not c:
                continue
            bt = b[t]
            for j in range(m):
                if bt[j]:
                    oi[j] = oi[j] + c * bt[j]
    return out


def mat_vec(a: Matrix, v: Vector) -> Vector:
    n, k = shape(a)
    if n == 0:
        return []
    if k != len(v):
        raise StructureError("matrix/vector size mismatch")
    out = []
    for i in range(n):
        acc = ZERO
        ai = a[i]
        for t in range(k):
            if ai[t] and v[t]:
                acc = acc + ai[t] * v[t]
        out.append(acc)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    if not a and not b:
        return []
    if shape(a) != shape(b):
        raise StructureError("matrix shape mismatch in add")
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    if not a and not b:
        return []
    if shape(a) != shape(b):
        raise StructureError("matrix shape mismatch in sub")
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(c: Scalar, a: Matrix) -> Matrix:
    return [[c * x for x in row] for row in a]


def conj_transpose(a: Matrix) -> Matrix:
    n, m = shape(a)
    return [[a[i][j].conj() for i in range(n)] for j in range(m)]


def mat_eq(a: Matrix, b: Matrix) -> bool:
    return shape(a) == shape(b) and all(
        x == y for ra, rb in zip(a, b) for x, y in zip(ra, rb)
    )


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for row in a for x in row)


def vec_add(u: Vector, v: Vector) -> Vector:
    return [x + y for x, y in zip(u, v)]


def vec_sub(u: Vector, v: Vector) -> Vector:
    return [x - y for x, y in zip(u, v)]


def vec_scale(c: Scalar, v: Vector) -> Vector:
    return [c * x for x in v]


def is_zero_vector(v: Vector) -> bool:
    return all(not x for x in v)


def dot(u: Vector, v: Vector) -> Scalar:
    acc = ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


# ---------------------------------------------------------------------------
# Row reduction and system solving


def rref(a: Matrix):
    """Reduced row echelon form.  Returns (rref matrix, pivot column list)."""
    m = [row[:] for row in a]
    nrows, ncols = shape(m)
    pivots = []
    r = 0
    for c in range(ncols):
        pr = None
        for i in range(r, nrows):
            if m[i][c]:
                pr = i
                break
        if pr is None:
            continue
        m[r], m[pr] = m[pr], m[r]
        inv = ONE / m[r][c]
        m[r] = [inv * x for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    return len(rref(a)[1])


@dataclass
class SolveResult:
    """Outcome of an exact linear solve: every case is a value, not an error.

    status is one of "unique", "inconsistent", "underdetermined".  For
    solvable systems ``solution`` holds one solution; for underdetermined
    ones ``nullspace`` holds a basis of the homogeneous solution space.
    """

    status: str
    solution: Vector | None = None
    nullspace: list = field(default_factory=list)

    @property
    def is_unique(self):
        return self.status == "unique"


def solve_exact(a: Matrix, b: Vector) -> SolveResult:
    """Classify and solve ``a x = b`` exactly over Q(i)."""
    nrows, ncols = shape(a)
    if len(b) != nrows:
        raise StructureError("rhs length does not match matrix rows")
    aug = [a[i][:] + [b[i]] for i in range(nrows)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return SolveResult("inconsistent")
    sol = [ZERO] * ncols
    for r, c in enumerate(pivots):
        sol[c] = red[r][ncols]
    if len(pivots) == ncols:
        return SolveResult("unique", sol)
    return SolveResult("underdetermined", sol, _nullspace_from_rref(red, pivots, ncols))


def _nullspace_from_rref(red: Matrix, pivots: list, ncols: int) -> list:
    basis = []
    pivot_set = set(pivots)
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for r, c in enumerate(pivots):
            v[c] = -red[r][free]
        basis.append(v)
    return basis


def nullspace(a: Matrix) -> list:
    """Basis of the kernel of ``a``."""
    nrows, ncols = shape(a)
    red, pivots = rref(a)
    return _nullspace_from_rref(red, pivots, ncols)


def inverse(a: Matrix) -> Matrix:
    n, m = shape(a)
    if n != m:
        raise StructureError("only square matrices can be inverted")
    aug = [a[i][:] + eye(n)[i] for i in range(n)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        raise StructureError("matrix is singular")
    return [row[n:] for row in red]


def det(a: Matrix) -> Scalar:
    n, m = shape(a)
    if n != m:
        raise StructureError("determinant of a non-square matrix")
    mwork = [row[:] for row in a]
    sign = 1
    acc = ONE
    for c in range(n):
        pr = None
        for i in range(c, n):
            if mwork[i][c]:
                pr = i
                break
        if pr is None:
            return ZERO
        if pr != c:
            mwork[c], mwork[pr] = mwork[pr], mwork[c]
            sign = -sign
        piv = mwork[c][c]
        acc = acc * piv
        inv = ONE / piv
        for i in range(c + 1, n):
            if mwork[i][c]:
                f = mwork[i][c] * inv
                mwork[i] = [x - f * y for x, y in zip(mwork[i], mwork[c])]
    return acc if sign == 1 else -acc


class ColumnSolver:
    """Repeated exact solves of B x = v for a fixed full-column-rank B."""

    def __init__(self, b: Matrix):
        nrows, ncols = shape(b)
        aug = [b[i][:] + eye(nrows)[i] for i in range(nrows)]
        red, pivots = rref(aug)
        if pivots[: ncols if ncols <= len(pivots) else len(pivots)] != list(range(ncols)):
            raise StructureError("basis matrix does not have full column rank")
        self.ncols = ncols
        self.nrows = nrows
        self.transform = [row[ncols:] for row in red]

    def solve(self, v: Vector) -> Vector | None:
        """Coordinates of v in the column span, or None if v is outside it."""
        tv = mat_vec(self.transform, v)
        for x in tv[self.ncols :]:
            if x:
                return None
        return tv[: self.ncols]


# ---------------------------------------------------------------------------
# Hermitian forms


def is_hermitian(a: Matrix) -> bool:
    n, m = shape(a)
    if n != m:
        return False
    return all(a[i][j] == a[j][i].conj() for i in range(n) for j in range(i, n))


def hermitian_ldl(a: Matrix):
    """Exact LDL* analysis of a Hermitian matrix.

    Returns (is_positive_definite, pivots, witness) where ``witness`` is a
    vector v with <v, v> <= 0 under the form when positivity fails.
    """
    if not is_hermitian(a):
        raise StructureError("form matrix is not Hermitian")
    n = len(a)
    lower = eye(n)
    diag: list[Scalar] = []
    for k in range(n):
        d = a[k][k]
        for j in range(k):
            d = d - lower[k][j] * diag[j] * lower[k][j].conj()
        if not d.is_real():
            raise StructureError("Hermitian pivot came out non-real")
        diag.append(d)
        if d.re <= 0:
            # v solves L* v = e_k, so v* A v equals the failing pivot.
            v = [ZERO] * n
            v[k] = ONE
            for i in range(k - 1, -1, -1):
                acc = ZERO
                for j in range(i + 1, k + 1):
                    acc = acc + lower[j][i].conj() * v[j]
                v[i] = -acc
            return False, diag, v
        for i in range(k + 1, n):
            c = a[i][k]
            for j in range(k):
                c = c - lower[i][j] * diag[j] * lower[k][j].conj()
            lower[i][k] = c / d
    return True, diag, None


# ---------------------------------------------------------------------------
# Characteristic polynomial and rational spectra


def charpoly(a: Matrix) -> list:
    """Coefficients [c_0, ..., c_n] of det(xI - A), c_n = 1, exact."""
    n, m = shape(a)
    if n != m:
        raise StructureError("characteristic polynomial of non-square matrix")
    coeffs = [ZERO] * n + [ONE]
    mk = eye(n)
    for k in range(1, n + 1):
        mk = mat_mul(a, mk)
        tr = ZERO
        for i in range(n):
            tr = tr + mk[i][i]
        ck = -tr / Scalar(k)
        coeffs[n - k] = ck
        if k < n:
            for i in range(n):
                mk[i][i] = mk[i][i] + ck
    return coeffs


def poly_eval(coeffs: list, x: Scalar) -> Scalar:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_divide_root(coeffs: list, root: Scalar):
    """Synthetic division by (x - root); returns quotient or None."""
    out = [ZERO] * (len(coeffs) - 1)
    carry = ZERO
    for k in range(len(coeffs) - 1, 0, -1):
        carry = coeffs[k] + carry * root
        out[k - 1] = carry
    if coeffs[0] + carry * root:
        return None
    return out


def rational_spectrum(a: Matrix, candidates) -> dict | None:
    """Multiset of eigenvalues of ``a`` if its charpoly splits over candidates.

    ``candidates`` is an iterable of Scalars to try as roots.  Returns a
    dict eigenvalue -> algebraic multiplicity, or None when the
    polynomial does not factor completely over the candidate set.
    """
    coeffs = charpoly(a)
    spectrum: dict = {}
    cand = list(candidates)
    while len(coeffs) > 1:
        for lam in cand:
            if not poly_eval(coeffs, lam):
                quot = poly_divide_root(coeffs, lam)
                if quot is not None:
                    spectrum[lam] = spectrum.get(lam, 0) + 1
                    coeffs = quot
                    break
        else:
            return None
    return spectrum


def is_diagonalizable_with(a: Matrix, eigenvalues) -> bool:
    """Check prod (A - lam) = 0 over the distinct eigenvalues given."""
    n = len(a)
    prod = eye(n)
    for lam in eigenvalues:
        shifted = [row[:] for row in a]
        for i in range(n):
            shifted[i][i] = shifted[i][i] - lam
        prod = mat_mul(prod, shifted)
    return is_zero_matrix(prod)


# ---------------------------------------------------------------------------
# Sparse exact elimination (rows as {column: Scalar} dicts)


def solve_sparse(rows: list, rhs: list, ncols: int) -> SolveResult:
    """Exact elimination for sparse systems; same contract as solve_exact.

    ``rows[i]`` is a dict column -> Scalar holding the nonzero entries of
    equation i, with right-hand side ``rhs[i]``.
    """
    work = [(dict(r), b) for r, b in zip(rows, rhs)]
    pivot_rows: dict[int, tuple] = {}
    queue = [rc for rc in work if rc[0] or rc[1]]
    inconsistent = False
    while queue:
        row, b = queue.pop()
        # reduce against existing pivots
        changed = True
        while changed:
            changed = False
            for c in list(row.keys()):
                if c in pivot_rows:
                    prow, pb = pivot_rows[c]
                    f = row.pop(c)
                    for pc, pv in prow.items():
                        if pc == c:
                            continue
                        nv = row.get(pc, ZERO) - f * pv
                        if nv:
                            row[pc] = nv
                        elif pc in row:
                            del row[pc]
                    b = b - f * pb
                    changed = True
                    break
        if not row:
            if b:
                inconsistent = True
                break
            continue
        c = min(row)
        inv = ONE / row.pop(c)
        row = {k: inv * v for k, v in row.items()}
        b = inv * b
        # back-substitute the new pivot into older pivot rows
        for pc, (prow, pb) in list(pivot_rows.items()):
            if c in prow:
                f = prow.pop(c)
                for k, v in row.items():
                    nv = prow.get(k, ZERO) - f * v
                    if nv:
                        prow[k] = nv
                    elif k in prow:
                        del prow[k]
                pivot_rows[pc] = (prow, pb - f * b)
        pivot_rows[c] = (row, b)
    if inconsistent:
        return SolveResult("inconsistent")
    sol = [ZERO] * ncols
    for c, (_, b) in pivot_rows.items():
        sol[c] = b
    if len(pivot_rows) == ncols:
        return SolveResult("unique", sol)
    free = [c for c in range(ncols) if c not in pivot_rows]
    basis = []
    for fc in free:
        v = [ZERO] * ncols
        v[fc] = ONE
        for c, (prow, _) in pivot_rows.items():
            if fc in prow:
                v[c] = -prow[fc]
        basis.append(v)
    return SolveResult("underdetermined", sol, basis)
