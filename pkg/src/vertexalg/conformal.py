"""The conformal Lie algebra of C^D: structure constants, the star
involution, nilpotent adjoint expansions, and hypothesis validation of
graded representations.

Generators are first-class names ("H", "T1".."TD", "C1".."CD", "Oab"
with a < b), so the same abstract element acts in any representation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import graded as gr
from . import linalg as la
from .errors import StructureError
from .report import FAIL, INCONCLUSIVE, PASS, CheckReport, ReportSet
from .scalar import I, ONE, ZERO, Scalar, as_scalar


def omega_name(a: int, b: int) -> str:
    if a == b:
        raise StructureError("rotation generators need two distinct axes")
    return f"O{min(a,b)}{max(a,b)}"


def generator_names(dim: int):
    names = ["H"]
    names += [f"T{a}" for a in range(1, dim + 1)]
    names += [f"C{a}" for a in range(1, dim + 1)]
    names += [omega_name(a, b) for a in range(1, dim + 1) for b in range(a + 1, dim + 1)]
    return names


def cartan_pairs(dim: int):
    return [(2 * l + 1, 2 * l + 2) for l in range(dim // 2)]


def _parse(name: str):
    if name == "H":
        return ("H",)
    kind = name[0]
    if kind in ("T", "C"):
        return (kind, int(name[1:]))
    if kind == "O":
        return ("O", int(name[1]), int(name[2:]))
    raise StructureError(f"unknown generator name {name!r}")


class CLieElement:
    """A formal linear combination of conformal generators over Q(i)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs: dict = {}
        if coeffs:
            for name, c in coeffs.items():
                self._accum(name, as_scalar(c))

    def _accum(self, name, c):
        if not c:
            return
        if name[0] == "O":
            p = _parse(name)
            if p[1] > p[2]:
                name = omega_name(p[1], p[2])
                c = -c
            elif p[1] == p[2]:
                return
        cur = self.coeffs.get(name)
        new = c if cur is None else cur + c
        if new:
            self.coeffs[name] = new
        elif name in self.coeffs:
            del self.coeffs[name]

    @classmethod
    def basis(cls, name):
        return cls({name: ONE})

    def __add__(self, other):
        out = CLieElement(self.coeffs)
        for name, c in other.coeffs.items():
            out._accum(name, c)
        return out

    def __sub__(self, other):
        out = CLieElement(self.coeffs)
        for name, c in other.coeffs.items():
            out._accum(name, -c)
        return out

    def __neg__(self):
        return CLieElement({n: -c for n, c in self.coeffs.items()})

    def __mul__(self, c):
        c = as_scalar(c)
        return CLieElement({n: c * v for n, v in self.coeffs.items()})

    __rmul__ = __mul__

    def is_zero(self):
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, CLieElement) and self.coeffs == other.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "0"
        return " + ".join(f"({c})*{n}" for n, c in sorted(self.coeffs.items()))


def _basis_bracket(x: str, y: str) -> CLieElement:
    px, py = _parse(x), _parse(y)
    order = {"H": 0, "T": 1, "C": 2, "O": 3}
    if order[px[0]] > order[py[0]]:
        return -_basis_bracket(y, x)
    kx, ky = px[0], py[0]
    out: dict = {}
    if kx == "H":
        if ky == "T":
            out[y] = ONE
        elif ky == "C":
            out[y] = -ONE
        # [H, H] = [H, O] = 0
    elif kx == "T":
        if ky == "C":
            a, b = px[1], py[1]
            if a == b:
                out["H"] = Scalar(2)
            else:
                # -2 * Omega_ab, with antisymmetry folded into the name
                name = omega_name(a, b)
                out[name] = Scalar(-2) if a < b else Scalar(2)
        elif ky == "O":
            # [T_c, O_ab] = -(d_ac T_b - d_bc T_a)
            c, (a, b) = px[1], (py[1], py[2])
            e = CLieElement()
            if a == c:
                e._accum(f"T{b}", -ONE)
            if b == c:
                e._accum(f"T{a}", ONE)
            return e
        # [T, T] = 0
    elif kx == "C":
        if ky == "O":
            c, (a, b) = px[1], (py[1], py[2])
            e = CLieElement()
            if a == c:
                e._accum(f"C{b}", -ONE)
            if b == c:
                e._accum(f"C{a}", ONE)
            return e
        # [C, C] = 0
    else:  # O with O
        a1, b1 = px[1], px[2]
        a2, b2 = py[1], py[2]
        e = CLieElement()
        for delta, (u, v) in (
            (a1 == a2, (b1, b2)),
            (b1 == b2, (a1, a2)),
        ):
            if delta and u != v:
                e._accum(omega_name(u, v), ONE if u < v else -ONE)
        for delta, (u, v) in (
            (a1 == b2, (b1, a2)),
            (b1 == a2, (a1, b2)),
        ):
            if delta and u != v:
                e._accum(omega_name(u, v), -ONE if u < v else ONE)
        return e
    return CLieElement(out)


def bracket(x: CLieElement, y: CLieElement) -> CLieElement:
    out = CLieElement()
    for nx, cx in x.coeffs.items():
        for ny, cy in y.coeffs.items():
            term = _basis_bracket(nx, ny)
            for n, c in term.coeffs.items():
                out._accum(n, cx * cy * c)
    return out


def star(x: CLieElement) -> CLieElement:
    """The anti-linear anti-involution singling out the compact real form:
    H fixed, rotations negated, and T_a <-> -C_a.

    The sign on the T/C swap is forced: with the bracket conventions
    above ([H, T] = T, [T_a, C_b] = 2 d_ab H - 2 O_ab), the involution
    must send T to -C for positive-definite invariant forms to exist at
    positive energy (norms of T-descendants would otherwise come out
    negative).
    """
    out = CLieElement()
    for name, c in x.coeffs.items():
        p = _parse(name)
        cc = c.conj()
        if p[0] == "H":
            out._accum("H", cc)
        elif p[0] == "T":
            out._accum(f"C{p[1]}", -cc)
        elif p[0] == "C":
            out._accum(f"T{p[1]}", -cc)
        else:
            out._accum(name, -cc)
    return out


def exp_neg_ad_zT(x: CLieElement, dim: int) -> dict:
    """The polynomial e^{-ad(z.T)} x as {exponent multi-index: element}.

    ad(z.T) is nilpotent on the conformal algebra, so the series ends by
    itself; the loop carries a safety bound.  The k-th layer is built as
    (-ad(z.T))^k x / k! one application at a time, which is well defined
    because the translations commute.
    """
    zero_mono = (0,) * dim
    result = {zero_mono: x}
    layer = {zero_mono: x}
    k = 0
    while layer and k < dim + 4:
        k += 1
        nxt: dict = {}
        for mono, elt in layer.items():
            for alpha in range(dim):
                term = -bracket(CLieElement.basis(f"T{alpha+1}"), elt)
                if term.is_zero():
                    continue
                m2 = list(mono)
                m2[alpha] += 1
                m2 = tuple(m2)
                cur = nxt.get(m2)
                nxt[m2] = term if cur is None else cur + term
        inv_k = ONE / Scalar(k)
        layer = {m: e * inv_k for m, e in nxt.items() if not e.is_zero()}
        for m, e in layer.items():
            cur = result.get(m)
            result[m] = e if cur is None else cur + e
    return {m: e for m, e in result.items() if not e.is_zero()}


# ---------------------------------------------------------------------------
# Representations


@dataclass
class CLieRep:
    """Matrices of the conformal generators on a graded space."""

    dim: int
    space: gr.GradedSpace
    action: dict
    validated: dict = field(default_factory=dict)

    def act(self, elt: CLieElement) -> gr.BlockMap:
        """The BlockMap of a general element; degrees must agree."""
        terms = [(self.action[n], c) for n, c in elt.coeffs.items()]
        if not terms:
            return gr.zero_map(self.space, 0)
        deg = {f.degree2 for f, _ in terms}
        if len(deg) != 1:
            raise StructureError("cannot mix generator degrees in one block map")
        out = gr.scale_map(terms[0][1], terms[0][0])
        for f, c in terms[1:]:
            out = gr.add_maps(out, gr.scale_map(c, f))
        return out

    def generator(self, name: str) -> gr.BlockMap:
        return self.action[name]


GENERATOR_DEGREE2 = {"H": 0, "T": 2, "C": -2, "O": 0}


def expected_degree2(name: str) -> int:
    return GENERATOR_DEGREE2[_parse(name)[0]]


def make_rep(dim: int, space: gr.GradedSpace, action: dict) -> CLieRep:
    for name in generator_names(dim):
        if name not in action:
            raise StructureError(f"representation is missing generator {name}")
        if action[name].degree2 != expected_degree2(name):
            raise StructureError(f"generator {name} has the wrong degree")
    return CLieRep(dim, space, action)


def _even_candidates(bound: int):
    out = [Scalar(0)]
    for k in range(2, bound + 1, 2):
        out.extend([Scalar(k), Scalar(-k)])
    return out


def _coeff_bound(coeffs) -> int:
    worst = 0
    for c in coeffs[:-1]:
        mag2 = c.abs2()
        worst = max(worst, math.isqrt(int(mag2)) + 1)
    return worst + 1


def validate_rep(rep: CLieRep) -> ReportSet:
    """Check every reconstruction hypothesis that is decidable at the
    cutoff: bracket homomorphism, positive energy, integrability,
    even total-Cartan spectrum, unitarity, and the energy/weight bound.

    Failures carry witnesses; nothing raises for a false hypothesis.
    """
    reports = ReportSet()
    space = rep.space
    names = generator_names(rep.dim)
    grades = space.grades()

    # (a) bracket homomorphism
    wit = []
    compared_any = False
    for i, n1 in enumerate(names):
        for n2 in names[i + 1 :]:
            lhs = gr.commutator(rep.action[n1], rep.action[n2])
            br = _basis_bracket(n1, n2)
            rhs = gr.zero_map(space, lhs.degree2) if br.is_zero() else rep.act(br)
            eq, compared, w = gr.maps_equal(lhs, rhs, grades)
            compared_any = compared_any or bool(compared)
            if not eq:
                wit.append((n1, n2, w))
    reports.add(CheckReport(
        "bracket_homomorphism",
        FAIL if wit else (PASS if compared_any else INCONCLUSIVE),
        window=f"grades 0..{space.cutoff2}/2",
        witnesses=wit[:5],
    ))

    # (b) positive energy: H acts as Delta on each component
    wit = []
    h = rep.action["H"]
    for d2 in grades:
        n = space.dim(d2)
        if not n or not h.is_defined(d2):
            continue
        m = h.matrix(d2)
        want = Scalar(d2) / Scalar(2)
        for i in range(n):
            for j in range(n):
                expect = want if i == j else ZERO
                if m[i][j] != expect:
                    wit.append((d2, i, j, m[i][j]))
    reports.add(CheckReport(
        "positive_energy",
        FAIL if wit else PASS,
        window=f"grades 0..{space.cutoff2}/2",
        witnesses=wit[:5],
        details="H must act as the (nonnegative) grade on each component",
    ))

    # (c) integrability: rotations close on each finite component
    omegas = [n for n in names if n.startswith("O")]
    bad = [n for n in omegas if rep.action[n].degree2 != 0 or rep.action[n].parity]
    reports.add(CheckReport(
        "integrability",
        FAIL if bad else PASS,
        window="per component",
        witnesses=bad,
        details="rotation generators preserve every graded component",
    ))

    # (d) strong integrability: spectrum of H + i * (sum of Cartan rotations)
    wit = []
    inconclusive = []
    for d2 in grades:
        n = space.dim(d2)
        if not n:
            continue
        mat = [row[:] for row in rep.action["H"].matrix(d2)]
        for (a, b) in cartan_pairs(rep.dim):
            om = rep.action[omega_name(a, b)].matrix(d2)
            for i in range(n):
                for j in range(n):
                    mat[i][j] = mat[i][j] + I * om[i][j]
        diag = all(not mat[i][j] for i in range(n) for j in range(n) if i != j)
        if diag:
            for i in range(n):
                v = mat[i][i]
                if not (v.is_real() and v.re.denominator == 1 and v.re.numerator % 2 == 0):
                    wit.append((d2, i, v))
            continue
        coeffs = la.charpoly(mat)
        spec = la.rational_spectrum(mat, _even_candidates(_coeff_bound(coeffs)))
        if spec is None:
            wit.append((d2, "spectrum not contained in the even integers"))
        elif not la.is_diagonalizable_with(mat, list(spec)):
            wit.append((d2, "total Cartan operator is not diagonalizable"))
    reports.add(CheckReport(
        "strong_integrability",
        FAIL if wit else (PASS if rep.dim % 2 == 0 else INCONCLUSIVE),
        window=f"grades 0..{space.cutoff2}/2",
        witnesses=wit[:5],
        details="H + i(O12 + O34 + ...) must have even integer spectrum",
    ))

    # (e) unitarity: star matches the Hermitian adjoint
    ok, gram_wit = space.check_positive_definite()
    wit = []
    if not ok:
        wit = [("gram", d2, v) for d2, v in gram_wit]
    else:
        for name in names:
            adj = gr.adjoint(rep.action[name], space)
            target = rep.act(star(CLieElement.basis(name)))
            eq, compared, w = gr.maps_equal(adj, target, grades)
            if not eq:
                wit.append((name, w))
    reports.add(CheckReport(
        "unitarity",
        FAIL if wit else PASS,
        window=f"grades 0..{space.cutoff2}/2",
        witnesses=wit[:5],
        details="adjoint(action(A)) must equal action(star(A)) w.r.t. the gram",
    ))

    # (f) energy dominates the first Cartan weight: Delta >= |j|
    wit = []
    inconclusive = []
    if rep.dim >= 2:
        om12 = rep.action["O12"]
        for d2 in grades:
            n = space.dim(d2)
            if not n:
                continue
            mat = la.mat_scale(I, om12.matrix(d2))
            delta = Scalar(d2) / Scalar(2)
            diag = all(not mat[i][j] for i in range(n) for j in range(n) if i != j)
            if diag:
                for i in range(n):
                    j = mat[i][i]
                    if not j.is_real() or abs(j.re) > delta.re:
                        wit.append((d2, i, j))
            else:
                bound = _coeff_bound(la.charpoly(mat))
                cands = []
                for num in range(-2 * bound, 2 * bound + 1):
                    cands.append(Scalar(Fraction(num, 2)))
                spec = la.rational_spectrum(mat, cands)
                if spec is None:
                    inconclusive.append(d2)
                    continue
                for j in spec:
                    if abs(j.re) > delta.re:
                        wit.append((d2, "eig", j))
    status = FAIL if wit else (INCONCLUSIVE if inconclusive else PASS)
    reports.add(CheckReport(
        "energy_weight_bound",
        status,
        window=f"grades 0..{space.cutoff2}/2",
        witnesses=wit[:5],
        details="every (Delta, j) eigenvalue pair must satisfy Delta >= |j|",
    ))

    # (g) weight labels describe diagonal Cartan actions (needed by solvers)
    wit = []
    have_labels = True
    for d2 in grades:
        for lab in space.labels(d2):
            if len(lab.cartan) != rep.dim // 2:
                have_labels = False
    if have_labels:
        for l, (a, b) in enumerate(cartan_pairs(rep.dim)):
            om = rep.action[omega_name(a, b)]
            for d2 in grades:
                n = space.dim(d2)
                if not n:
                    continue
                mat = la.mat_scale(I, om.matrix(d2))
                labs = space.labels(d2)
                for i in range(n):
                    for j in range(n):
                        expect = labs[i].cartan[l] if i == j else ZERO
                        if mat[i][j] != expect:
                            wit.append((omega_name(a, b), d2, i, j))
    reports.add(CheckReport(
        "weight_labels",
        (FAIL if wit else PASS) if have_labels else INCONCLUSIVE,
        window=f"grades 0..{space.cutoff2}/2",
        witnesses=wit[:5],
        details="Cartan rotations are diagonal with the labeled eigenvalues",
    ))

    rep.validated = {c.name: c.status for c in reports.checks}
    return reports
