"""Built-in oracle-verified models.

The rank-1 Heisenberg (free boson) algebra is generated from the
commutator [alpha_m, alpha_n] = m delta_{m+n,0} by a brute-force
normal-ordering recursion, with the standard Fock inner product.  The
two-dimensional tensor model pairs two copies with matched field
arguments and carries the conformal action assembled from the two
commuting Moebius halves.  These are the concrete test beds for every
axiom check and for the reconstruction pipeline.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import chiral as ch
from . import conformal as cf
from . import graded as gr
from . import linalg as la
from .errors import ContractError, StructureError
from .scalar import I, ONE, ZERO, Scalar


@lru_cache(maxsize=None)
def partitions(n: int):
    """Weakly decreasing positive tuples summing to n, lex-descending."""
    if n == 0:
        return ((),)
    out = []

    def rec(prefix, remaining, cap):
        if remaining == 0:
            out.append(tuple(prefix))
            return
        for part in range(min(cap, remaining), 0, -1):
            rec(prefix + [part], remaining - part, part)

    rec([], n, n)
    return tuple(out)


def _mult(state, part):
    return sum(1 for p in state if p == part)


def _remove_one(state, part):
    rest = list(state)
    rest.remove(part)
    return tuple(rest)


def _add_one(state, part):
    return tuple(sorted(state + (part,), reverse=True))


def _gamma(n: int, m: int) -> int:
    """Coefficient of alpha_m x^{-m-n} in the field of alpha_{-n}:
    the (n-1)-th derivative of the free field divided by (n-1)!."""
    num = 1
    for j in range(1, n):
        num *= m + j
    den = 1
    for j in range(2, n):
        den *= j
    sign = -1 if (n - 1) % 2 else 1
    return sign * num // den


@lru_cache(maxsize=None)
def boson_mode(a: tuple, k: int, c: tuple):
    """a_(k) c for Fock states, as a dict state -> integer coefficient.

    Recursive normal-ordered product: stripping the largest creation
    index n from a, the field of a splits into a creation half acting
    after the rest and an annihilation half acting first.
    """
    if a == ():
        return {c: 1} if k == -1 else {}
    n = a[0]
    rest = a[1:]
    out: dict = {}
    # annihilation half hits c first
    for m in sorted(set(c)):
        coeff = m * _mult(c, m) * _gamma(n, m)
        if not coeff:
            continue
        inner = boson_mode(rest, k - m - n, _remove_one(c, m))
        for state, v in inner.items():
            out[state] = out.get(state, 0) + coeff * v
    # creation half is applied last; finitely many m < 0 contribute
    degb = sum(rest)
    degc = sum(c)
    mmin = k + 1 - n - (degb + degc)  # j = k - m - n <= degb + degc - 1
    for m in range(mmin, 0):
        coeff = _gamma(n, m)
        if not coeff:
            continue
        inner = boson_mode(rest, k - m - n, c)
        for state, v in inner.items():
            s2 = _add_one(state, -m)
            out[s2] = out.get(s2, 0) + coeff * v
    return {s: v for s, v in out.items() if v}


def _apply_creation(mapping: dict, part: int) -> dict:
    return {_add_one(s, part): v for s, v in mapping.items()}


def lowering_half_virasoro(state: tuple) -> dict:
    """L_1 |s> = sum_j alpha_{-j} alpha_{j+1} |s>."""
    out: dict = {}
    for part in sorted(set(state)):
        if part < 2:
            continue
        coeff = part * _mult(state, part)
        s2 = _add_one(_remove_one(state, part), part - 1)
        out[s2] = out.get(s2, 0) + coeff
    return out


def raising_half_virasoro(state: tuple) -> dict:
    """L_{-1} |s> = sum_j alpha_{-j-1} alpha_j |s>."""
    out: dict = {}
    for part in sorted(set(state)):
        coeff = part * _mult(state, part)
        s2 = _add_one(_remove_one(state, part), part + 1)
        out[s2] = out.get(s2, 0) + coeff
    return out


def fock_norm2(state: tuple) -> int:
    out = 1
    for part in sorted(set(state)):
        mult = _mult(state, part)
        fact = 1
        for t in range(2, mult + 1):
            fact *= t
        out *= part ** mult * fact
    return out


@dataclass
class HeisenbergModel:
    cutoff: int
    space: gr.GradedSpace
    table: ch.ModeTable
    rep: cf.CLieRep  # the Moebius (D = 1) action: H, T1, C1

    def basis_states(self, delta: int):
        return partitions(delta)

    def state_index(self, state: tuple) -> int:
        return partitions(sum(state)).index(state)

    def state_vector(self, state: tuple):
        delta = sum(state)
        idx = self.state_index(state)
        return 2 * delta, [ONE if k == idx else ZERO for k in range(self.space.dim(2 * delta))]


def _dict_to_vector(mapping: dict, delta: int):
    basis = partitions(delta)
    vec = [ZERO] * len(basis)
    for state, v in mapping.items():
        vec[basis.index(state)] = Scalar(v)
    return vec


def build_heisenberg(cutoff: int) -> HeisenbergModel:
    """The rank-1 free boson truncated at conformal weight ``cutoff``."""
    if cutoff < 0:
        raise ContractError("cutoff must be nonnegative")
    components = {}
    gram = {}
    for delta in range(cutoff + 1):
        basis = partitions(delta)
        d2 = 2 * delta
        components[d2] = [
            gr.WeightLabel(d2, (), 0, k) for k in range(len(basis))
        ]
        gram[d2] = [
            [Scalar(fock_norm2(basis[i])) if i == j else ZERO for j in range(len(basis))]
            for i in range(len(basis))
        ]
    space = gr.GradedSpace(components, gram, 2 * cutoff)

    def operator_from(action_fn, degree_shift):
        f = gr.BlockMap(space, 2 * degree_shift)
        for delta in range(cutoff + 1):
            if not f.is_defined(2 * delta):
                continue
            tgt = delta + degree_shift
            if tgt < 0 or tgt > cutoff:
                continue
            src_basis = partitions(delta)
            tgt_basis = partitions(tgt)
            mat = [[ZERO] * len(src_basis) for _ in range(len(tgt_basis))]
            for j, s in enumerate(src_basis):
                for s2, v in action_fn(s).items():
                    mat[tgt_basis.index(s2)][j] = Scalar(v)
            f.set_block(2 * delta, mat)
        return f

    t_map = operator_from(raising_half_virasoro, 1)
    # C = -L_1: the bracket [T, C] = 2H fixes this sign relative to the
    # standard Fock lowering operator
    c_map = operator_from(lambda s: {k: -v for k, v in lowering_half_virasoro(s).items()}, -1)
    l0_map = operator_from(lambda s: {s: sum(s)}, 0)

    table = ch.ModeTable(space, 0, t_map)
    for da in range(cutoff + 1):
        for db in range(cutoff + 1):
            abasis = partitions(da)
            bbasis = partitions(db)
            for n in range(-(da + db), cutoff - da - db + 1):
                tgt = da + db + n
                tbasis = partitions(tgt) if tgt >= 0 else ()
                if not tbasis:
                    continue
                mat = [[ZERO] * (len(abasis) * len(bbasis)) for _ in range(len(tbasis))]
                nonzero = False
                for i, j in itertools.product(range(len(abasis)), range(len(bbasis))):
                    res = boson_mode(abasis[i], -n - 1, bbasis[j])
                    for state, v in res.items():
                        mat[tbasis.index(state)][i * len(bbasis) + j] = Scalar(v)
                        nonzero = True
                if nonzero:
                    table.set_block(2 * da, 2 * db, n, mat)

    rep = cf.CLieRep(1, space, {"H": l0_map, "T1": t_map, "C1": c_map})
    return HeisenbergModel(cutoff, space, table, rep)


# ---------------------------------------------------------------------------
# The two-dimensional tensor model


@lru_cache(maxsize=None)
def tensor_states(delta: int):
    """Pairs of Fock states of total weight delta, ordered by the
    rotation weight j = delta_minus - delta_plus, then lexicographically."""
    out = []
    for dminus in range(delta + 1):
        dplus = delta - dminus
        j = dminus - dplus
        for pa in partitions(dplus):
            for pb in partitions(dminus):
                out.append((j, pa, pb))
    out.sort(key=lambda t: (t[0], t[1], t[2]))
    return tuple((pa, pb) for _, pa, pb in out)


@dataclass
class TensorModel2D:
    cutoff: int
    space: gr.GradedSpace
    table: ch.ModeTable
    rep: cf.CLieRep
    factor: HeisenbergModel

    def basis_states(self, delta: int):
        return tensor_states(delta)

    def state_index(self, pair) -> int:
        return tensor_states(sum(pair[0]) + sum(pair[1])).index(pair)

    def state_vector(self, pair):
        delta = sum(pair[0]) + sum(pair[1])
        idx = self.state_index(pair)
        return 2 * delta, [
            ONE if k == idx else ZERO for k in range(len(tensor_states(delta)))
        ]

    def bigrade(self, pair):
        return (sum(pair[0]), sum(pair[1]))


def _pair_operator(space, cutoff, degree_shift, left_fn, right_fn, scalar_left, scalar_right):
    """scalar_left * (op on + factor) + scalar_right * (op on - factor)."""
    f = gr.BlockMap(space, 2 * degree_shift)
    for delta in range(cutoff + 1):
        if not f.is_defined(2 * delta):
            continue
        tgt = delta + degree_shift
        if tgt < 0 or tgt > cutoff:
            continue
        src = tensor_states(delta)
        dst = tensor_states(tgt)
        mat = [[ZERO] * len(src) for _ in range(len(dst))]
        for j, (pa, pb) in enumerate(src):
            if scalar_left:
                for s2, v in left_fn(pa).items():
                    mat[dst.index((s2, pb))][j] = (
                        mat[dst.index((s2, pb))][j] + scalar_left * Scalar(v)
                    )
            if scalar_right:
                for s2, v in right_fn(pb).items():
                    mat[dst.index((pa, s2))][j] = (
                        mat[dst.index((pa, s2))][j] + scalar_right * Scalar(v)
                    )
        f.set_block(2 * delta, mat)
    return f


def build_tensor_2d(cutoff: int) -> TensorModel2D:
    """Two commuting Heisenberg halves with matched field arguments and
    the conformal action of the plane built from their Moebius modes."""
    factor = build_heisenberg(cutoff)
    components = {}
    gram = {}
    for delta in range(cutoff + 1):
        states = tensor_states(delta)
        d2 = 2 * delta
        labels = []
        for k, (pa, pb) in enumerate(states):
            j = Scalar(sum(pb) - sum(pa))
            labels.append(gr.WeightLabel(d2, (j,), 0, k))
        components[d2] = labels
        gram[d2] = [
            [
                Scalar(fock_norm2(states[i][0]) * fock_norm2(states[i][1]))
                if i == j else ZERO
                for j in range(len(states))
            ]
            for i in range(len(states))
        ]
    space = gr.GradedSpace(components, gram, 2 * cutoff)

    mk = lambda shift, lf, rf, cl, cr: _pair_operator(space, cutoff, shift, lf, rf, cl, cr)
    raise_ = raising_half_virasoro
    lower = lowering_half_virasoro
    grade = lambda s: {s: sum(s)}
    # L_{-1}^{+-} are the Fock raising halves, L_0^{+-} the grades, and
    # L_1^{+-} = -(Fock lowering halves), matching [L_{-1}, L_1] = 2 L_0
    # as dictated by [T_a, C_b] = 2 d_ab H - 2 O_ab; then
    # T1 = L_{-1}^+ + L_{-1}^-, T2 = i(L_{-1}^+ - L_{-1}^-),
    # H = L_0^+ + L_0^-,        O12 = i(L_0^+ - L_0^-),
    # C1 = L_1^+ + L_1^-,       C2 = -i(L_1^+ - L_1^-).
    action = {
        "T1": mk(1, raise_, raise_, ONE, ONE),
        "T2": mk(1, raise_, raise_, I, -I),
        "H": mk(0, grade, grade, ONE, ONE),
        "O12": mk(0, grade, grade, I, -I),
        "C1": mk(-1, lower, lower, -ONE, -ONE),
        "C2": mk(-1, lower, lower, I, -I),
    }
    table = ch.ModeTable(space, 0, action["T1"])
    for da in range(cutoff + 1):
        abasis = tensor_states(da)
        for db in range(cutoff + 1):
            bbasis = tensor_states(db)
            for n in range(-(da + db), cutoff - da - db + 1):
                tgt = da + db + n
                if tgt < 0:
                    continue
                tbasis = tensor_states(tgt)
                mat = [[ZERO] * (len(abasis) * len(bbasis)) for _ in range(len(tbasis))]
                nonzero = False
                for i, (ap, am) in enumerate(abasis):
                    for j, (bp, bm) in enumerate(bbasis):
                        col = i * len(bbasis) + j
                        for nplus in range(-(sum(ap) + sum(bp)), n + sum(am) + sum(bm) + 1):
                            nminus = n - nplus
                            resp = boson_mode(ap, -nplus - 1, bp)
                            if not resp:
                                continue
                            resm = boson_mode(am, -nminus - 1, bm)
                            if not resm:
                                continue
                            for sp, vp in resp.items():
                                for sm, vm in resm.items():
                                    row = tbasis.index((sp, sm))
                                    mat[row][col] = mat[row][col] + Scalar(vp * vm)
                                    nonzero = True
                if nonzero:
                    table.set_block(2 * da, 2 * db, n, mat)
    rep = cf.make_rep(2, space, action)
    return TensorModel2D(cutoff, space, table, rep, factor)


def chiral_factorization_oracle(model: TensorModel2D, a_pair, b_pair):
    """Y+(a+, z+) b+ tensor Y-(a-, z-) b- rewritten into the mixed basis
    (z^2)^p h_{m, sigma}: independent of the reconstruction path.

    Returns {(p, m, sigma): vector at the target component}, with
    sigma = 1 for (z^+)^m and sigma = 2 for (z^-)^m.
    """
    ap, am = a_pair
    bp, bm = b_pair
    cutoff = model.cutoff
    out: dict = {}
    for nplus in range(-(sum(ap) + sum(bp)), cutoff + 1):
        resp = boson_mode(ap, -nplus - 1, bp)
        if not resp:
            continue
        for nminus in range(-(sum(am) + sum(bm)), cutoff + 1):
            tgt = sum(ap) + sum(am) + sum(bp) + sum(bm) + nplus + nminus
            if tgt < 0 or tgt > cutoff:
                continue
            resm = boson_mode(am, -nminus - 1, bm)
            if not resm:
                continue
            p = min(nplus, nminus)
            m = abs(nplus - nminus)
            sigma = 1 if nplus >= nminus else 2
            tbasis = tensor_states(tgt)
            vec = out.setdefault((p, m, sigma), [ZERO] * len(tbasis))
            for sp, vp in resp.items():
                for sm, vm in resm.items():
                    row = tbasis.index((sp, sm))
                    vec[row] = vec[row] + Scalar(vp * vm)
    return {key: v for key, v in out.items() if any(v)}


# ---------------------------------------------------------------------------
# Synthetic D = 4 benchmark: dual harmonic carriers with line evaluation


def build_gegenbauer4(mmax: int):
    """A synthetic 4-dimensional input whose unique equivariant
    extension is known in closed form.

    Grade m carries the dual of the degree-m harmonic space in its
    weight-refined basis, with the rotations acting by the transposed
    vector-field matrices.  The only mode data is the grade-0 pair
    evaluating to x^m times the "value along the line" functional, whose
    extension must be the tautological evaluation family; its sigma = 1
    member is the distinguished invariant harmonic.

    Returns (table, rep, expected) where expected maps (m, sigma) to the
    expected coefficient column (rows of the refinement matrix).
    """
    from . import polyharm as ph

    if mmax < 1:
        raise ContractError("need at least degree 1")
    dim = 4
    components = {0: [gr.WeightLabel(0, (ZERO, ZERO), 0, 0)]}
    gram = {0: [[ONE]]}
    refine = {}
    for m in range(1, mmax + 1):
        basis = ph.harmonic_basis(dim, m)
        emat, weights = basis.weight_refinement()
        refine[m] = (basis, emat, weights)
        d2 = 2 * m
        components[d2] = [
            gr.WeightLabel(d2, tuple(Scalar(x) for x in w), 0, r)
            for r, w in enumerate(weights)
        ]
        gram[d2] = la.eye(len(weights))
    space = gr.GradedSpace(components, gram, 2 * mmax)

    action = {}
    for name in cf.generator_names(dim):
        deg2 = cf.expected_degree2(name)
        f = gr.BlockMap(space, deg2)
        if name.startswith("O") or name == "H":
            for m in range(0, mmax + 1):
                d2 = 2 * m
                nv = space.dim(d2)
                if not nv:
                    continue
                if name == "H":
                    f.set_block(d2, [[Scalar(m) if i == j else ZERO
                                      for j in range(nv)] for i in range(nv)])
                elif m:
                    basis, emat, _ = refine[m]
                    pair = (int(name[1]), int(name[2:]))
                    lhat = la.mat_mul(la.inverse(emat),
                                      la.mat_mul(basis.rotation[pair], emat))
                    f.set_block(d2, [[lhat[j][i] for j in range(nv)]
                                     for i in range(nv)])
        action[name] = f
    table = ch.ModeTable(space, 0, action["T1"])
    expected = {}
    for m in range(1, mmax + 1):
        basis, emat, _ = refine[m]
        nv = len(emat)
        table.set_block(0, 0, m, [[emat[0][r]] for r in range(nv)])
        for sigma in range(basis.size):
            expected[(m, sigma + 1)] = [[emat[sigma][r]] for r in range(nv)]
    rep = cf.CLieRep(dim, space, action)
    return table, rep, expected


# ---------------------------------------------------------------------------
# Corrupted fixtures for hypothesis-validation tests


def corrupt_negative_norm(model: TensorModel2D) -> cf.CLieRep:
    """Gram flipped to minus the identity on the top component."""
    d2bad = 2 * model.cutoff
    gram = dict(model.space.gram)
    n = model.space.dim(d2bad)
    gram[d2bad] = [[-ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    space = gr.GradedSpace(model.space.components, gram, model.space.cutoff2)
    action = {
        name: gr.BlockMap(space, f.degree2, f.parity, dict(f.blocks), f.defined)
        for name, f in model.rep.action.items()
    }
    return cf.CLieRep(2, space, action)


def corrupt_negative_energy(model: TensorModel2D) -> cf.CLieRep:
    """H acts by -1 on the weight-1 component."""
    if model.cutoff < 1:
        raise ContractError("need cutoff >= 1 to corrupt the weight-1 component")
    h = model.rep.action["H"]
    blocks = dict(h.blocks)
    n = model.space.dim(2)
    blocks[2] = [[-ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    action = dict(model.rep.action)
    action["H"] = gr.BlockMap(model.space, 0, 0, blocks, h.defined)
    return cf.CLieRep(2, model.space, action)


def corrupt_scaled_rotation(model: TensorModel2D) -> cf.CLieRep:
    """O12 doubled, which breaks the bracket scaling."""
    o = model.rep.action["O12"]
    blocks = {d2: la.mat_scale(Scalar(2), m) for d2, m in o.blocks.items()}
    action = dict(model.rep.action)
    action["O12"] = gr.BlockMap(model.space, 0, 0, blocks, o.defined)
    return cf.CLieRep(2, model.space, action)
