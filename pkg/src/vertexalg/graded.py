"""Graded vector spaces, weight-labeled bases, and block linear maps.

Gradings are half-integers stored doubled (an integer 2*Delta), so all
keys stay in Z.  A BlockMap stores one matrix per source grade; grades
whose image would land above the cutoff are *absent and marked
undefined*, never silently zero.  Grades below zero index the zero
space, so maps into them are conclusively zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import linalg as la
from .errors import StructureError, TruncatedError
from .scalar import ONE, ZERO, Scalar


@dataclass(frozen=True)
class WeightLabel:
    """Identifies one basis vector: grade 2*Delta, Cartan eigenvalues of
    the operators i*O(12), i*O(34), ..., parity, and an ordinal index."""

    delta2: int
    cartan: tuple
    parity: int
    index: int

    def sort_key(self):
        return (tuple(c.sort_key() for c in self.cartan), self.parity, self.index)


class GradedSpace:
    """A finite direct sum of graded components with Hermitian Gram data."""

    def __init__(self, components: dict, gram: dict, cutoff2: int):
        self.components = {d2: list(labels) for d2, labels in components.items()}
        self.gram = gram
        self.cutoff2 = cutoff2
        self._gram_inv: dict = {}
        self._posdef = None
        for d2, labels in self.components.items():
            if d2 < 0:
                raise StructureError("negative grade in a positive-energy space")
            if d2 > cutoff2:
                raise StructureError("component grade exceeds the cutoff")
            for k, lab in enumerate(labels):
                if lab.delta2 != d2 or lab.index != k:
                    raise StructureError(f"label mismatch at grade {d2}, slot {k}")
            g = gram.get(d2)
            if g is None or la.shape(g) != (len(labels), len(labels)):
                raise StructureError(f"missing or misshapen gram at grade {d2}")
            if not la.is_hermitian(g):
                raise StructureError(f"gram at grade {d2} is not Hermitian")

    def grades(self):
        return sorted(self.components)

    def dim(self, d2: int) -> int:
        if d2 < 0:
            return 0
        return len(self.components.get(d2, ()))

    def labels(self, d2: int):
        return self.components.get(d2, [])

    def total_dim(self):
        return sum(len(v) for v in self.components.values())

    def check_positive_definite(self):
        """Exact Sylvester/LDL positivity scan of every Gram matrix.

        Returns (ok, witnesses) where each witness is (grade2, vector)
        with nonpositive squared norm.
        """
        if self._posdef is None:
            witnesses = []
            for d2 in self.grades():
                if not self.dim(d2):
                    continue
                ok, _, wit = la.hermitian_ldl(self.gram[d2])
                if not ok:
                    witnesses.append((d2, wit))
            self._posdef = ((not witnesses), witnesses)
        return self._posdef

    def gram_inverse(self, d2: int):
        if d2 not in self._gram_inv:
            self._gram_inv[d2] = la.inverse(self.gram[d2])
        return self._gram_inv[d2]

    def inner(self, d2: int, u, v) -> Scalar:
        """<u | v> on component d2, antilinear in the first argument."""
        gv = la.mat_vec(self.gram[d2], v)
        return la.dot([x.conj() for x in u], gv)


class BlockMap:
    """A graded linear map of fixed degree, one matrix block per grade.

    ``defined`` lists the source grades on which the map is known; a
    source grade in ``defined`` without a stored block is the zero map.
    Requests outside ``defined`` raise TruncatedError.
    """

    def __init__(self, space: GradedSpace, degree2: int, parity: int = 0,
                 blocks: dict | None = None, defined=None):
        self.space = space
        self.degree2 = degree2
        self.parity = parity
        self.blocks = {}
        if defined is None:
            defined = default_defined(space, degree2)
        self.defined = frozenset(defined)
        if blocks:
            for d2, mat in blocks.items():
                self.set_block(d2, mat)

    def set_block(self, d2: int, mat):
        if d2 not in self.defined and self.space.dim(d2) != 0:
            raise StructureError(f"block at undefined source grade {d2}")
        want = (self.space.dim(d2 + self.degree2), self.space.dim(d2))
        if want[0] == 0 or want[1] == 0:
            return
        if la.shape(mat) != want:
            raise StructureError(
                f"block at grade {d2} has shape {la.shape(mat)}, expected {want}"
            )
        if not la.is_zero_matrix(mat):
            self.blocks[d2] = mat

    def is_defined(self, d2: int) -> bool:
        return d2 in self.defined or self.space.dim(d2) == 0

    def matrix(self, d2: int):
        """The block on source grade d2, materializing zeros; raises
        TruncatedError when the block is outside the defined region."""
        if not self.is_defined(d2):
            raise TruncatedError(f"block at source grade {d2} is truncated")
        got = self.blocks.get(d2)
        if got is not None:
            return got
        tdim = self.space.dim(d2 + self.degree2)
        return [[ZERO] * self.space.dim(d2) for _ in range(tdim)]

    def apply(self, d2: int, vec):
        return la.mat_vec(self.matrix(d2), vec)

    def is_zero_on(self, grades) -> bool:
        return all(
            la.is_zero_matrix(self.matrix(d2)) for d2 in grades if self.is_defined(d2)
        )


def default_defined(space: GradedSpace, degree2: int):
    """All source grades whose image grade is inside the space (or empty)."""
    out = set()
    for d2 in space.grades():
        t = d2 + degree2
        if t <= space.cutoff2:
            out.add(d2)
        elif space.dim(d2) == 0:
            out.add(d2)
    return out


def identity_map(space: GradedSpace) -> BlockMap:
    f = BlockMap(space, 0, 0, defined=set(space.grades()))
    for d2 in space.grades():
        f.set_block(d2, la.eye(space.dim(d2)))
    return f


def zero_map(space: GradedSpace, degree2: int = 0) -> BlockMap:
    return BlockMap(space, degree2, 0)


def compose(f: BlockMap, g: BlockMap) -> BlockMap:
    """The map f o g; degrees add, parities add mod 2, and the defined
    region is the set of grades where both factors are valid."""
    if f.space is not g.space:
        raise StructureError("composition across different spaces")
    space = f.space
    degree2 = f.degree2 + g.degree2
    defined = set()
    for d2 in space.grades():
        mid = d2 + g.degree2
        if g.is_defined(d2) and (f.is_defined(mid) or space.dim(mid) == 0):
            defined.add(d2)
    out = BlockMap(space, degree2, (f.parity + g.parity) % 2, defined=defined)
    for d2 in sorted(defined):
        mid = d2 + g.degree2
        tgt = d2 + degree2
        if space.dim(d2) == 0 or space.dim(mid) == 0 or space.dim(tgt) == 0:
            continue
        out.set_block(d2, la.mat_mul(f.matrix(mid), g.matrix(d2)))
    return out


def add_maps(f: BlockMap, g: BlockMap) -> BlockMap:
    if f.degree2 != g.degree2 or f.parity != g.parity:
        raise StructureError("can only add maps of equal degree and parity")
    defined = {d2 for d2 in f.space.grades() if f.is_defined(d2) and g.is_defined(d2)}
    out = BlockMap(f.space, f.degree2, f.parity, defined=defined)
    for d2 in defined:
        if f.space.dim(d2) and f.space.dim(d2 + f.degree2):
            out.set_block(d2, la.mat_add(f.matrix(d2), g.matrix(d2)))
    return out


def scale_map(c: Scalar, f: BlockMap) -> BlockMap:
    out = BlockMap(f.space, f.degree2, f.parity, defined=f.defined)
    for d2, m in f.blocks.items():
        out.set_block(d2, la.mat_scale(c, m))
    return out


def commutator(f: BlockMap, g: BlockMap) -> BlockMap:
    fg = compose(f, g)
    gf = compose(g, f)
    return add_maps(fg, scale_map(-ONE, gf))


def adjoint(f: BlockMap, space: GradedSpace | None = None) -> BlockMap:
    """Hermitian adjoint with respect to the space's Gram data:
    <adjoint(f) u | v> = <u | f v> exactly on every defined block."""
    space = space or f.space
    ok, wit = space.check_positive_definite()
    if not ok:
        raise StructureError(f"gram is not positive definite (witness at {wit[0][0]})")
    degree2 = -f.degree2
    # the adjoint's block on source s is derived from f's block on s - f.degree2
    defined = {s for s in space.grades() if f.is_defined(s - f.degree2)}
    out = BlockMap(space, degree2, f.parity, defined=defined)
    for src in sorted(defined):
        tgt = src + degree2
        if tgt < 0 or space.dim(tgt) == 0 or space.dim(src) == 0:
            continue
        fm = f.matrix(tgt)
        m = la.mat_mul(
            space.gram_inverse(tgt),
            la.mat_mul(la.conj_transpose(fm), space.gram[src]),
        )
        out.set_block(src, m)
    return out


def maps_equal(f: BlockMap, g: BlockMap, grades=None):
    """Compare two maps blockwise on the grades where both are defined.

    Returns (equal, compared_grades, witness) with witness the first
    (grade, column) discrepancy.
    """
    if f.degree2 != g.degree2:
        return False, [], ("degree", f.degree2, g.degree2)
    compared = []
    for d2 in sorted(grades if grades is not None else f.space.grades()):
        if not (f.is_defined(d2) and g.is_defined(d2)):
            continue
        compared.append(d2)
        fm, gm = f.matrix(d2), g.matrix(d2)
        if not la.mat_eq(fm, gm):
            for j in range(len(fm[0]) if fm else 0):
                col_f = [row[j] for row in fm]
                col_g = [row[j] for row in gm]
                if col_f != col_g:
                    return False, compared, (d2, j)
            return False, compared, (d2, None)
    return True, compared, None
