"""Polynomial calculus in D variables and harmonic decomposition.

Provides the Laplacian/Euler operators, the expansion of a homogeneous
polynomial into powers of the quadratic form times harmonic layers, and
construction of bases of harmonic polynomials normalized along the first
coordinate axis, together with the matrices of the rotation vector
fields z^a d/dz^b - z^b d/dz^a in those bases.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg as la
from .errors import ContractError, NormalizationError, StructureError
from .scalar import I, ONE, ZERO, Scalar, as_scalar

Mono = tuple  # tuple[int, ...], exponent multi-index


class PolyD:
    """A polynomial in z^1..z^D over Q(i), stored as a sparse term map."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms=None):
        self.dim = dim
        self.terms: dict = {}
        if terms:
            for mono, c in terms.items() if isinstance(terms, dict) else terms:
                if c:
                    cur = self.terms.get(mono)
                    new = c if cur is None else cur + c
                    if new:
                        self.terms[mono] = new
                    elif mono in self.terms:
                        del self.terms[mono]

    @classmethod
    def zero(cls, dim):
        return cls(dim)

    @classmethod
    def constant(cls, dim, c):
        c = as_scalar(c)
        return cls(dim, {(0,) * dim: c}) if c else cls(dim)

    @classmethod
    def variable(cls, dim, alpha):
        mono = tuple(1 if k == alpha else 0 for k in range(dim))
        return cls(dim, {mono: ONE})

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return (
            isinstance(other, PolyD)
            and self.dim == other.dim
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def __add__(self, other):
        self._check(other)
        out = dict(self.terms)
        for mono, c in other.terms.items():
            cur = out.get(mono)
            new = c if cur is None else cur + c
            if new:
                out[mono] = new
            elif mono in out:
                del out[mono]
        p = PolyD(self.dim)
        p.terms = out
        return p

    def __neg__(self):
        p = PolyD(self.dim)
        p.terms = {mono: -c for mono, c in self.terms.items()}
        return p

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, PolyD):
            self._check(other)
            out = PolyD(self.dim)
            acc = out.terms
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    mono = tuple(a + b for a, b in zip(m1, m2))
                    c = c1 * c2
                    cur = acc.get(mono)
                    new = c if cur is None else cur + c
                    if new:
                        acc[mono] = new
                    elif mono in acc:
                        del acc[mono]
            return out
        c = as_scalar(other)
        p = PolyD(self.dim)
        if c:
            p.terms = {mono: c * v for mono, v in self.terms.items()}
        return p

    __rmul__ = __mul__

    def _check(self, other):
        if self.dim != other.dim:
            raise StructureError("polynomials live in different dimensions")

    def deriv(self, alpha: int) -> "PolyD":
        out = PolyD(self.dim)
        for mono, c in self.terms.items():
            e = mono[alpha]
            if e:
                new = list(mono)
                new[alpha] = e - 1
                out.terms[tuple(new)] = c * Scalar(e)
        return out

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        degs = {sum(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d: int) -> "PolyD":
        out = PolyD(self.dim)
        out.terms = {m: c for m, c in self.terms.items() if sum(m) == d}
        return out

    def line_coefficient(self) -> Scalar:
        """For homogeneous p of degree m, p(x e_1) = line_coefficient * x^m."""
        d = self.degree()
        if d < 0:
            return ZERO
        mono = tuple(d if k == 0 else 0 for k in range(self.dim))
        return self.terms.get(mono, ZERO)

    def eval(self, point) -> Scalar:
        acc = ZERO
        for mono, c in self.terms.items():
            v = c
            for e, x in zip(mono, point):
                for _ in range(e):
                    v = v * x
            acc = acc + v
        return acc

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: kv[0])

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for mono, c in self.sorted_terms():
            vars_ = "*".join(
                f"z{k+1}" + (f"^{e}" if e > 1 else "")
                for k, e in enumerate(mono)
                if e
            )
            bits.append(f"({c})" + (f"*{vars_}" if vars_ else ""))
        return " + ".join(bits)

    __repr__ = __str__


def quadratic_form(dim: int) -> PolyD:
    """The Euclidean square-length polynomial (z^1)^2 + ... + (z^D)^2."""
    p = PolyD(dim)
    for a in range(dim):
        mono = tuple(2 if k == a else 0 for k in range(dim))
        p.terms[mono] = ONE
    return p


def laplacian(p: PolyD) -> PolyD:
    out = PolyD(p.dim)
    for a in range(p.dim):
        out = out + p.deriv(a).deriv(a)
    return out


def euler(p: PolyD) -> PolyD:
    out = PolyD(p.dim)
    for mono, c in p.terms.items():
        d = sum(mono)
        if d:
            out.terms[mono] = c * Scalar(d)
    return out


def vector_field_rotation(p: PolyD, a: int, b: int) -> PolyD:
    """Apply z^a d/dz^b - z^b d/dz^a (a, b are 0-based variable indices)."""
    za = PolyD.variable(p.dim, a)
    zb = PolyD.variable(p.dim, b)
    return za * p.deriv(b) - zb * p.deriv(a)


def monomials(dim: int, degree: int) -> list:
    """All exponent multi-indices of the given total degree, lex sorted."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(prefix + (remaining,))
            return
        for e in range(remaining + 1):
            rec(prefix + (e,), remaining - e, slots - 1)

    if dim == 0:
        return [()] if degree == 0 else []
    rec((), degree, dim)
    out.sort()
    return out


def poly_coords(p: PolyD, index: dict) -> list:
    v = [ZERO] * len(index)
    for mono, c in p.terms.items():
        v[index[mono]] = c
    return v


def harm_dim(dim: int, m: int) -> int:
    """Dimension of the space of degree-m harmonic polynomials."""
    if m == 0:
        return 1
    if m == 1:
        return dim

    def full(d):
        return math.comb(d + dim - 1, dim - 1) if d >= 0 else 0

    return full(m) - full(m - 2)


def harmonic_decompose(p: PolyD) -> dict:
    """Expand homogeneous p as sum over n of (z^2)^n q_n with q_n harmonic.

    Returns {n: harmonic component of degree deg(p) - 2n}.  Uses the exact
    recursion obtained by applying the Laplacian, whose action on
    (z^2)^n q_k is 2n (D + 2n + 2k - 2) (z^2)^(n-1) q_k.
    """
    if not p.is_homogeneous():
        raise ContractError("harmonic decomposition requires a homogeneous input")
    if p.is_zero():
        return {}
    m = p.degree()
    lap = laplacian(p)
    comps: dict = {}
    if lap.is_zero():
        comps[0] = p
        return comps
    sub = harmonic_decompose(lap)
    z2 = quadratic_form(p.dim)
    rest = PolyD(p.dim)
    for j, g in sub.items():
        n = j + 1
        k = m - 2 * n
        c = Scalar(2 * n * (p.dim + 2 * m - 2 * n - 2))
        q = g * (ONE / c)
        comps[n] = q
        pw = PolyD.constant(p.dim, ONE)
        for _ in range(n):
            pw = pw * z2
        rest = rest + pw * q
    top = p - rest
    if top:
        comps[0] = top
    return comps


def reassemble(dim: int, comps: dict) -> PolyD:
    z2 = quadratic_form(dim)
    out = PolyD(dim)
    for n, q in comps.items():
        pw = PolyD.constant(dim, ONE)
        for _ in range(n):
            pw = pw * z2
        out = out + pw * q
    return out


def general_binomial(a: int, k: int) -> Fraction:
    """binom(a, k) for integer a of any sign, k >= 0."""
    num = 1
    for j in range(k):
        num *= a - j
    return Fraction(num, math.factorial(k))


def gegenbauer_h(dim: int, m: int) -> PolyD:
    """The distinguished harmonic of degree m, invariant under rotations
    fixing e_1 and normalized to x^m along z = x e_1.

    For D >= 4 it is the degree-m coefficient of the formal expansion of
    ((e_1 + z)^2)^(-(D-2)/2), a Gegenbauer polynomial in disguise, divided
    by binom(2-D, m).  For D = 2 it is (z^1 - i z^2)^m.  The harmonicity
    and line normalization are verified rather than trusted.
    """
    if dim == 2:
        zminus = PolyD.variable(2, 0) - I * PolyD.variable(2, 1)
        out = PolyD.constant(2, ONE)
        for _ in range(m):
            out = out * zminus
        return out
    if dim < 4 or dim % 2:
        raise ContractError("distinguished harmonics are built for even D >= 4 (or D = 2)")
    if m == 0:
        return PolyD.constant(dim, ONE)
    s = (dim - 2) // 2
    t = 2 * PolyD.variable(dim, 0) + quadratic_form(dim)
    series = PolyD(dim)
    tk = PolyD.constant(dim, ONE)
    for k in range(m + 1):
        series = series + Scalar(general_binomial(-s, k)) * tk
        if k < m:
            tk = tk * t
            tk = PolyD(
                dim, {mo: c for mo, c in tk.terms.items() if sum(mo) <= m}
            )
    norm = general_binomial(2 - dim, m)
    if norm == 0:
        raise NormalizationError(f"vanishing binomial normalizer for D={dim}, m={m}")
    h = series.homogeneous_part(m) * Scalar(Fraction(1) / norm)
    if not laplacian(h).is_zero():
        raise NormalizationError("generating-series harmonic failed the Laplacian check")
    if h.line_coefficient() != ONE:
        raise NormalizationError("generating-series harmonic failed line normalization")
    return h


# ---------------------------------------------------------------------------
# Harmonic bases


@dataclass
class HarmonicBasis:
    """An ordered basis of the degree-m harmonic polynomials in D variables.

    rotation[(a, b)] is the matrix of the vector field
    z^a d/db - z^b d/da in this basis (1-based index pair, a < b), acting
    on column coordinate vectors.  line_values[s] is the coefficient
    lambda with h_s(x e_1) = lambda x^m.
    """

    dim: int
    degree: int
    polys: list
    rotation: dict
    line_values: list
    _eigen: tuple | None = field(default=None, repr=False, compare=False)

    @property
    def size(self):
        return len(self.polys)

    def rotation_matrix(self, a: int, b: int):
        """Matrix of the rotation field for any 1-based pair a != b."""
        if a < b:
            return self.rotation[(a, b)]
        return la.mat_scale(-ONE, self.rotation[(b, a)])

    def cartan_pairs(self):
        return [(2 * l + 1, 2 * l + 2) for l in range(self.dim // 2)]

    def weight_refinement(self):
        """Simultaneous eigenbasis of the Cartan rotations i*L(2l-1, 2l).

        Returns (E, weights): E's columns are coordinates (in this basis)
        of the refined vectors; weights[r] is the tuple of integer
        eigenvalues of the i*L operators on column r.
        """
        if self._eigen is not None:
            return self._eigen
        n = self.size
        blocks = [(la.eye(n), ())]
        for (a, b) in self.cartan_pairs():
            op = la.mat_scale(I, self.rotation[(a, b)])
            new_blocks = []
            for span, wprefix in blocks:
                cols = len(span[0])
                restr = la.mat_mul(op, span)
                found = 0
                for w in range(-self.degree, self.degree + 1):
                    shifted = [
                        [restr[i][j] - Scalar(w) * span[i][j] for j in range(cols)]
                        for i in range(n)
                    ]
                    for kv in la.nullspace(shifted):
                        vec = la.mat_vec(span, kv)
                        new_blocks.append((vec, wprefix + (w,)))
                        found += 1
                if found != cols:
                    raise StructureError(
                        "harmonic Cartan operator failed to diagonalize over Z"
                    )
            # regroup vectors of equal weight prefix into spans
            grouped: dict = {}
            for vec, wp in new_blocks:
                grouped.setdefault(wp, []).append(vec)
            blocks = []
            for wp in sorted(grouped):
                vecs = grouped[wp]
                span = [[vecs[j][i] for j in range(len(vecs))] for i in range(n)]
                blocks.append((span, wp))
        cols = []
        weights = []
        for span, wp in blocks:
            # canonicalize each weight space via row reduction
            red, pivots = la.rref([[span[i][j] for i in range(n)] for j in range(len(span[0]))])
            for r in range(len(pivots)):
                cols.append(red[r])
                weights.append(wp)
        emat = [[cols[j][i] for j in range(len(cols))] for i in range(n)]
        self._eigen = (emat, weights)
        return self._eigen


def _rotation_matrices(dim, polys, solver, index):
    rot = {}
    for a in range(1, dim + 1):
        for b in range(a + 1, dim + 1):
            cols = []
            for h in polys:
                img = vector_field_rotation(h, a - 1, b - 1)
                x = solver.solve(poly_coords(img, index))
                if x is None:
                    raise StructureError("rotation field left the harmonic space")
                cols.append(x)
            rot[(a, b)] = [[cols[j][i] for j in range(len(cols))] for i in range(len(cols))]
    return rot


def _finish_basis(dim, m, polys):
    monos = monomials(dim, m)
    index = {mo: k for k, mo in enumerate(monos)}
    bmat = [[ZERO] * len(polys) for _ in monos]
    for j, h in enumerate(polys):
        for mono, c in h.terms.items():
            bmat[index[mono]][j] = c
    solver = la.ColumnSolver(bmat)
    rotation = _rotation_matrices(dim, polys, solver, index)
    line_values = [h.line_coefficient() for h in polys]
    return HarmonicBasis(dim, m, polys, rotation, line_values)


_BASIS_CACHE: dict = {}


def harmonic_basis(dim: int, m: int) -> HarmonicBasis:
    """Normalized basis: h_1 is the distinguished invariant harmonic and
    h_s(x e_1) = 0 for s >= 2, so line_values = (1, 0, ..., 0)."""
    key = (dim, m, "normalized")
    if key in _BASIS_CACHE:
        return _BASIS_CACHE[key]
    if dim < 2 or dim % 2:
        raise ContractError("harmonic bases are built for even D >= 2")
    if m == 0:
        basis = _finish_basis(dim, 0, [PolyD.constant(dim, ONE)])
        _BASIS_CACHE[key] = basis
        return basis
    h1 = gegenbauer_h(dim, m)
    monos = monomials(dim, m)
    index = {mo: k for k, mo in enumerate(monos)}
    sub = monomials(dim, m - 2)
    lap_rows = []
    for mono in monos:
        p = PolyD(dim, {mono: ONE})
        lp = laplacian(p)
        row = [ZERO] * len(sub)
        for mo2, c in lp.terms.items():
            row[sub.index(mo2)] = c
        lap_rows.append(row)
    lap_mat = [[lap_rows[i][j] for i in range(len(monos))] for j in range(len(sub))]
    kernel = la.nullspace(lap_mat) if sub else [la.eye(len(monos))[i] for i in range(len(monos))]
    if len(kernel) != harm_dim(dim, m):
        raise StructureError("harmonic kernel has unexpected dimension")
    h1_coords = poly_coords(h1, index)
    line_idx = index[tuple(m if k == 0 else 0 for k in range(dim))]
    adjusted = []
    for v in kernel:
        lam = v[line_idx]
        w = [x - lam * y for x, y in zip(v, h1_coords)]
        if any(w):
            adjusted.append(w)
    red, pivots = la.rref(adjusted)
    rest = [red[r] for r in range(len(pivots))]
    if len(rest) != harm_dim(dim, m) - 1:
        raise StructureError("line-normalized complement has unexpected dimension")
    polys = [h1] + [
        PolyD(dim, {monos[k]: c for k, c in enumerate(v) if c}) for v in rest
    ]
    basis = _finish_basis(dim, m, polys)
    _BASIS_CACHE[key] = basis
    return basis


def chiral_basis(m: int) -> HarmonicBasis:
    """The D = 2 eigenbasis {(z^+)^m, (z^-)^m} of harmonic polynomials,
    with z^{+-} = z^1 +- i z^2; both members restrict to x^m on the line."""
    key = (2, m, "chiral")
    if key in _BASIS_CACHE:
        return _BASIS_CACHE[key]
    if m == 0:
        basis = _finish_basis(2, 0, [PolyD.constant(2, ONE)])
    else:
        zp = PolyD.variable(2, 0) + I * PolyD.variable(2, 1)
        zm = PolyD.variable(2, 0) - I * PolyD.variable(2, 1)
        hp = PolyD.constant(2, ONE)
        hm = PolyD.constant(2, ONE)
        for _ in range(m):
            hp = hp * zp
            hm = hm * zm
        basis = _finish_basis(2, m, [hp, hm])
    _BASIS_CACHE[key] = basis
    return basis


def equivariant_line_extension(dim: int, m: int) -> PolyD:
    """The unique degree-m harmonic invariant under rotations fixing e_1
    with value x^m along the line, found by exact linear solving.

    This is an independent route to the same polynomial as gegenbauer_h:
    here invariance and normalization are imposed as a linear system over
    a nullspace basis of the Laplacian, with no generating series.
    """
    if dim < 4 or dim % 2:
        raise ContractError("line extensions are solved for even D >= 4")
    basis = harmonic_basis(dim, m)
    monos = monomials(dim, m)
    index = {mo: k for k, mo in enumerate(monos)}
    rows = []
    rhs = []
    for a in range(2, dim + 1):
        for b in range(a + 1, dim + 1):
            cols = [
                poly_coords(vector_field_rotation(h, a - 1, b - 1), index)
                for h in basis.polys
            ]
            for i in range(len(monos)):
                row = [cols[s][i] for s in range(basis.size)]
                if any(row):
                    rows.append(row)
                    rhs.append(ZERO)
    rows.append(list(basis.line_values))
    rhs.append(ONE)
    res = la.solve_exact(rows, rhs)
    if res.status != "unique":
        raise StructureError(f"line extension solve was {res.status}")
    out = PolyD(dim)
    for c, h in zip(res.solution, basis.polys):
        out = out + c * h
    return out
