"""Vector-valued formal series in D variables with pole and truncation
bookkeeping.

Two representations are used.  SeriesZ stores the harmonic expansion of
Y(a, z)b: coefficients indexed by (p, m, sigma) standing for
(z^2)^p h_{m, sigma}(z).  MonoSeries is the plain-monomial form
(z^2)^{-pole} * sum over exponent tuples, used for the covariance and
locality checks where multiplication and differentiation are simplest.
Every series knows the largest "true degree" at which its coefficients
are conclusive at the grading cutoff; comparisons never read beyond it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import graded as gr
from . import linalg as la
from . import polyharm as ph
from .errors import ContractError, StructureError, TruncatedError
from .scalar import ONE, ZERO, Scalar

CHIRAL = "chiral2"
NORMALIZED = "normalized"


def basis_for(dim: int, kind: str, m: int) -> ph.HarmonicBasis:
    if kind == CHIRAL:
        if dim != 2:
            raise StructureError("the chiral basis only exists in dimension 2")
        return ph.chiral_basis(m)
    return ph.harmonic_basis(dim, m)


@dataclass
class SeriesZ:
    """Harmonic-coefficient series: value = sum over (p, m, sigma) of
    coeffs[(p,m,sigma)] (z^2)^p h_{m,sigma}(z); the vector at key
    (p, m, sigma) lives in the component of grade base2 + 2(2p + m)."""

    dim: int
    base2: int
    cutoff2: int
    basis_kind: str
    coeffs: dict = field(default_factory=dict)

    def max_n(self) -> int:
        return (self.cutoff2 - self.base2) // 2

    def conclusive(self, p: int, m: int) -> bool:
        return 2 * p + m <= self.max_n()

    def add_term(self, p: int, m: int, sigma: int, vec):
        if not any(vec):
            return
        key = (p, m, sigma)
        cur = self.coeffs.get(key)
        if cur is None:
            self.coeffs[key] = list(vec)
        else:
            self.coeffs[key] = [x + y for x, y in zip(cur, vec)]
            if not any(self.coeffs[key]):
                del self.coeffs[key]

    def min_pole(self) -> int:
        """Smallest exponent p of z^2 carrying a nonzero coefficient."""
        return min((p for (p, m, s) in self.coeffs), default=0)


def restrict_to_line(s: SeriesZ) -> dict:
    """Substitute z = x e_1 using the basis line values; returns the
    one-variable Laurent coefficients {n: vector} with n = 2p + m."""
    out: dict = {}
    for (p, m, sigma), vec in s.coeffs.items():
        lam = basis_for(s.dim, s.basis_kind, m).line_values[sigma - 1]
        if not lam:
            continue
        n = 2 * p + m
        cur = out.get(n)
        term = [lam * x for x in vec]
        if cur is None:
            out[n] = term
        else:
            out[n] = [x + y for x, y in zip(cur, term)]
    return {n: v for n, v in out.items() if any(v)}


def residue_extract(s: SeriesZ, n: int, m: int, sigma: int):
    """Coefficient lookup dual to assembling the series: the vector
    multiplying (z^2)^{(n-m)/2} h_{m,sigma}.  Out-of-window requests are
    inconclusive; odd n - m is conclusively zero by the parity law."""
    if (n - m) % 2:
        return None  # parity: no such term can exist
    p = (n - m) // 2
    if not s.conclusive(p, m):
        raise TruncatedError(f"coefficient (n={n}, m={m}) lies beyond the window")
    return s.coeffs.get((p, m, sigma))


# ---------------------------------------------------------------------------
# Plain monomial series


@dataclass
class MonoSeries:
    """(z^2)^{-pole} times a monomial sum with vector coefficients.

    The true degree of a term with exponent tuple ``mono`` is
    |mono| - 2 pole, and its vector lives at grade base2 + 2 truedeg.
    Coefficients of true degree <= maxdeg are conclusive."""

    dim: int
    base2: int
    cutoff2: int
    pole: int
    terms: dict
    maxdeg: int

    def truedeg(self, mono) -> int:
        return sum(mono) - 2 * self.pole


def _z2_power(dim: int, k: int) -> ph.PolyD:
    out = ph.PolyD.constant(dim, ONE)
    z2 = ph.quadratic_form(dim)
    for _ in range(k):
        out = out * z2
    return out


def series_to_mono(s: SeriesZ) -> MonoSeries:
    pole = max(0, -s.min_pole())
    terms: dict = {}
    for (p, m, sigma), vec in s.coeffs.items():
        if not s.conclusive(p, m):
            continue
        poly = _z2_power(s.dim, p + pole) * basis_for(s.dim, s.basis_kind, m).polys[sigma - 1]
        for mono, c in poly.terms.items():
            cur = terms.get(mono)
            if cur is None:
                terms[mono] = [c * x for x in vec]
            else:
                terms[mono] = [y + c * x for x, y in zip(vec, cur)]
    terms = {mo: v for mo, v in terms.items() if any(v)}
    return MonoSeries(s.dim, s.base2, s.cutoff2, pole, terms, s.max_n())


def mono_with_pole(s: MonoSeries, pole: int) -> MonoSeries:
    if pole < s.pole:
        raise StructureError("cannot lower a pole without dividing")
    if pole == s.pole:
        return s
    shift = _z2_power(s.dim, pole - s.pole)
    terms: dict = {}
    for mono, vec in s.terms.items():
        for mo2, c in shift.terms.items():
            key = tuple(a + b for a, b in zip(mono, mo2))
            cur = terms.get(key)
            if cur is None:
                terms[key] = [c * x for x in vec]
            else:
                terms[key] = [y + c * x for x, y in zip(vec, cur)]
    terms = {mo: v for mo, v in terms.items() if any(v)}
    return MonoSeries(s.dim, s.base2, s.cutoff2, pole, terms, s.maxdeg)


def mono_add(s1: MonoSeries, s2: MonoSeries, c2=None) -> MonoSeries:
    if s1.base2 != s2.base2 or s1.dim != s2.dim:
        raise StructureError("cannot add series with different gradings")
    pole = max(s1.pole, s2.pole)
    a = mono_with_pole(s1, pole)
    b = mono_with_pole(s2, pole)
    terms = {mo: list(v) for mo, v in a.terms.items()}
    for mo, v in b.terms.items():
        w = [c2 * x for x in v] if c2 is not None else v
        cur = terms.get(mo)
        if cur is None:
            terms[mo] = list(w)
        else:
            terms[mo] = [x + y for x, y in zip(cur, w)]
    terms = {mo: v for mo, v in terms.items() if any(v)}
    return MonoSeries(a.dim, a.base2, a.cutoff2, pole, terms, min(a.maxdeg, b.maxdeg))


def mono_scale(c, s: MonoSeries) -> MonoSeries:
    return MonoSeries(
        s.dim, s.base2, s.cutoff2, s.pole,
        {mo: [c * x for x in v] for mo, v in s.terms.items()},
        s.maxdeg,
    )


def mono_apply(op: gr.BlockMap, s: MonoSeries) -> MonoSeries:
    """Post-compose every coefficient with a graded operator; the window
    shrinks to the degrees where the operator's blocks are defined."""
    space = op.space
    k2 = s.cutoff2
    new_maxdeg = min(s.maxdeg, (k2 - op.degree2 - s.base2) // 2)
    terms: dict = {}
    for mono, vec in s.terms.items():
        d = s.truedeg(mono)
        if d > new_maxdeg:
            continue
        g = s.base2 + 2 * d
        if g < 0 or not space.dim(g):
            continue
        out = op.apply(g, vec)
        if any(out):
            terms[mono] = out
    return MonoSeries(s.dim, s.base2 + op.degree2, k2, s.pole, terms, new_maxdeg)


def mono_mul_poly(s: MonoSeries, poly: ph.PolyD) -> MonoSeries:
    """Multiply by a homogeneous scalar polynomial.

    Coefficient vectors keep their grades while degrees shift, so the
    base grade offset drops by twice the polynomial degree."""
    if poly.is_zero():
        return MonoSeries(s.dim, s.base2, s.cutoff2, s.pole, {}, s.maxdeg)
    if not poly.is_homogeneous():
        raise ContractError("series multiplication expects a homogeneous polynomial")
    e = poly.degree()
    terms: dict = {}
    for mono, vec in s.terms.items():
        for mo2, c in poly.terms.items():
            key = tuple(a + b for a, b in zip(mono, mo2))
            cur = terms.get(key)
            if cur is None:
                terms[key] = [c * x for x in vec]
            else:
                terms[key] = [y + c * x for x, y in zip(vec, cur)]
    terms = {mo: v for mo, v in terms.items() if any(v)}
    return MonoSeries(s.dim, s.base2 - 2 * e, s.cutoff2, s.pole, terms, s.maxdeg + e)


def mono_mul_z2(s: MonoSeries, power: int) -> MonoSeries:
    """Multiply by (z^2)^power for any integer power."""
    if power >= 0:
        return mono_mul_poly(s, _z2_power(s.dim, power))
    return MonoSeries(
        s.dim, s.base2 - 4 * power, s.cutoff2, s.pole - power,
        dict(s.terms), s.maxdeg + 2 * power,
    )


def mono_deriv(s: MonoSeries, alpha: int) -> MonoSeries:
    """d/dz^alpha, carried through the global (z^2)^{-pole} prefactor."""
    dim = s.dim
    terms: dict = {}

    def accum(mono, vec, c):
        if not c:
            return
        cur = terms.get(mono)
        if cur is None:
            terms[mono] = [c * x for x in vec]
        else:
            terms[mono] = [y + c * x for x, y in zip(vec, cur)]

    z2 = ph.quadratic_form(dim)
    for mono, vec in s.terms.items():
        # -2 pole z^alpha * term
        if s.pole:
            up = list(mono)
            up[alpha] += 1
            accum(tuple(up), vec, Scalar(-2 * s.pole))
        # z^2 * d_alpha term
        if mono[alpha]:
            base = list(mono)
            base[alpha] -= 1
            for mo2, c in z2.terms.items():
                key = tuple(a + b for a, b in zip(base, mo2))
                accum(key, vec, Scalar(mono[alpha]) * c)
    terms = {mo: v for mo, v in terms.items() if any(v)}
    return MonoSeries(dim, s.base2 + 2, s.cutoff2, s.pole + 1, terms, s.maxdeg - 1)


def mono_euler(s: MonoSeries) -> MonoSeries:
    terms = {}
    for mono, vec in s.terms.items():
        d = s.truedeg(mono)
        if d:
            terms[mono] = [Scalar(d) * x for x in vec]
    return MonoSeries(s.dim, s.base2, s.cutoff2, s.pole, terms, s.maxdeg)


def mono_compare(s1: MonoSeries, s2: MonoSeries):
    """Exact comparison on the common conclusive window.

    Returns (equal, compared_count, witness): witness is the first
    differing (mono, index) pair with both values.
    """
    if s1.base2 != s2.base2:
        return False, 0, ("grading", s1.base2, s2.base2)
    pole = max(s1.pole, s2.pole)
    a = mono_with_pole(s1, pole)
    b = mono_with_pole(s2, pole)
    window = min(a.maxdeg, b.maxdeg)
    count = 0
    for mono in sorted(set(a.terms) | set(b.terms)):
        if sum(mono) - 2 * pole > window:
            continue
        va = a.terms.get(mono)
        vb = b.terms.get(mono)
        count += 1
        if va is None:
            va = [ZERO] * len(vb)
        if vb is None:
            vb = [ZERO] * len(va)
        for k, (x, y) in enumerate(zip(va, vb)):
            if x != y:
                return False, count, (mono, k, x, y)
    return True, count, None


def taylor_shift(s: MonoSeries, direction) -> MonoSeries:
    """The expansion e^{u . d/dz} applied with u = direction, i.e. the
    substitution z -> z + direction on polynomial content.

    Only pole-free series are shifted here; shifting across a pole is
    the two-variable expansion handled by the identity checks.
    """
    if s.pole:
        raise ContractError("taylor_shift expects polynomial content (no pole)")
    if len(direction) != s.dim:
        raise StructureError("direction has the wrong number of components")
    terms: dict = {}
    for mono, vec in s.terms.items():
        expansion = ph.PolyD.constant(s.dim, ONE)
        for axis, e in enumerate(mono):
            if not e:
                continue
            lin = ph.PolyD.variable(s.dim, axis) + ph.PolyD.constant(s.dim, direction[axis])
            for _ in range(e):
                expansion = expansion * lin
        for mo2, c in expansion.terms.items():
            cur = terms.get(mo2)
            if cur is None:
                terms[mo2] = [c * x for x in vec]
            else:
                terms[mo2] = [y + c * x for x, y in zip(vec, cur)]
    terms = {mo: v for mo, v in terms.items() if any(v)}
    return MonoSeries(s.dim, s.base2, s.cutoff2, 0, terms, s.maxdeg)


# ---------------------------------------------------------------------------
# Two-variable monomial series (for locality)


@dataclass
class MonoSeries2:
    """(z^2)^{-pole_z} (w^2)^{-pole_w} times a sum over exponent tuple
    pairs, with a box-shaped conclusiveness window: true z-degree at
    most zmax, true w-degree at most wmax, and their sum at most tmax."""

    dim: int
    base2: int
    cutoff2: int
    pole_z: int
    pole_w: int
    terms: dict  # (mono_z, mono_w) -> vector
    zmax: int
    wmax: int
    tmax: int

    def in_window(self, mono_z, mono_w) -> bool:
        dz = sum(mono_z) - 2 * self.pole_z
        dw = sum(mono_w) - 2 * self.pole_w
        return dz <= self.zmax and dw <= self.wmax and dz + dw <= self.tmax


def mono2_mul(s: MonoSeries2, poly2: dict) -> MonoSeries2:
    """Multiply by a polynomial given as {(mono_z, mono_w): Scalar}."""
    terms: dict = {}
    for (mz, mw), vec in s.terms.items():
        for (pz, pw), c in poly2.items():
            key = (tuple(a + b for a, b in zip(mz, pz)),
                   tuple(a + b for a, b in zip(mw, pw)))
            cur = terms.get(key)
            if cur is None:
                terms[key] = [c * x for x in vec]
            else:
                terms[key] = [y + c * x for x, y in zip(vec, cur)]
    terms = {k: v for k, v in terms.items() if any(v)}
    return MonoSeries2(
        s.dim, s.base2, s.cutoff2, s.pole_z, s.pole_w, terms,
        s.zmax, s.wmax, s.tmax,
    )


def mono2_compare(s1: MonoSeries2, s2: MonoSeries2, sign):
    """Compare s1 with sign * s2 on the intersection window.

    Both series are complete inside their windows, so missing keys there
    are conclusive zeros; the returned count is the number of bidegree
    slots in the window box, which is what the comparison decides.
    """
    if (s1.pole_z, s1.pole_w) != (s2.pole_z, s2.pole_w) or s1.base2 != s2.base2:
        raise StructureError("two-variable comparison requires aligned poles")
    zmax = min(s1.zmax, s2.zmax)
    wmax = min(s1.wmax, s2.wmax)
    tmax = min(s1.tmax, s2.tmax)
    dzmin = -2 * s1.pole_z
    dwmin = -2 * s1.pole_w
    zhi = min(zmax, tmax - dwmin)
    whi = min(wmax, tmax - dzmin)
    count = 0
    for dz in range(dzmin, zhi + 1):
        top = min(whi, tmax - dz)
        if top >= dwmin:
            count += top - dwmin + 1
    for key in sorted(set(s1.terms) | set(s2.terms)):
        mz, mw = key
        dz = sum(mz) - 2 * s1.pole_z
        dw = sum(mw) - 2 * s1.pole_w
        if dz > zmax or dw > wmax or dz + dw > tmax:
            continue
        va = s1.terms.get(key)
        vb = s2.terms.get(key)
        if va is None:
            va = [ZERO] * len(vb)
        if vb is None:
            vb = [ZERO] * len(va)
        for k, (x, y) in enumerate(zip(va, vb)):
            if x != sign * y:
                return False, count, (key, k, x, y)
    return True, count, None
