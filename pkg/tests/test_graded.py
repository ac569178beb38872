import random
from fractions import Fraction

import pytest

from vertexalg import graded as gr
from vertexalg import linalg as la
from vertexalg.errors import StructureError, TruncatedError
from vertexalg.scalar import I, ONE, ZERO, Scalar


def simple_space(cutoff2=4, dims=(1, 2, 1)):
    components = {}
    gram = {}
    for k, d in enumerate(dims):
        d2 = 2 * k
        components[d2] = [
            gr.WeightLabel(d2, (Scalar(0),), 0, j) for j in range(d)
        ]
        gram[d2] = la.eye(d)
    return gr.GradedSpace(components, gram, cutoff2)


def test_compose_with_identity():
    sp = simple_space()
    ident = gr.identity_map(sp)
    f = gr.BlockMap(sp, 2)
    f.set_block(0, [[ONE], [Scalar(2)]])
    assert gr.maps_equal(gr.compose(ident, f), f)[0]
    assert gr.maps_equal(gr.compose(f, ident), f)[0]


def test_degree_addition():
    sp = simple_space()
    up = gr.BlockMap(sp, 2)
    down = gr.BlockMap(sp, -2)
    assert gr.compose(down, up).degree2 == 0


def test_truncation_metadata():
    sp = simple_space()
    up = gr.BlockMap(sp, 2)
    # source at top grade maps above the cutoff: undefined, not zero
    assert not up.is_defined(4)
    with pytest.raises(TruncatedError):
        up.matrix(4)
    # composing two raising maps shrinks the defined region further
    upup = gr.compose(up, up)
    assert not upup.is_defined(2)
    assert upup.is_defined(0)


def test_blockmap_shape_validation():
    sp = simple_space()
    f = gr.BlockMap(sp, 2)
    with pytest.raises(StructureError):
        f.set_block(0, [[ONE, ONE]])


def test_adjoint_identity_and_involution():
    sp = simple_space()
    ident = gr.identity_map(sp)
    assert gr.maps_equal(gr.adjoint(ident), ident)[0]
    f = gr.BlockMap(sp, 2)
    f.set_block(0, [[ONE], [I]])
    f.set_block(2, [[Scalar(2), -I]])
    fdd = gr.adjoint(gr.adjoint(f))
    eq, compared, _ = gr.maps_equal(fdd, f)
    assert eq and compared


def test_adjoint_defining_property():
    rng = random.Random(5)
    components = {}
    gram = {}
    dims = (2, 2)
    for k, d in enumerate(dims):
        d2 = 2 * k
        components[d2] = [gr.WeightLabel(d2, (Scalar(0),), 0, j) for j in range(d)]
    gram[0] = [[Scalar(2), I], [-I, Scalar(1)]]
    gram[2] = [[Scalar(3), ZERO], [ZERO, Scalar(1)]]
    sp = gr.GradedSpace(components, gram, 2)
    f = gr.BlockMap(sp, 2)
    f.set_block(0, [[ONE, I], [Scalar(0, 2), Scalar(-1)]])
    fd = gr.adjoint(f)
    for i in range(2):
        for j in range(2):
            u = [ONE if t == i else ZERO for t in range(2)]
            v = [ONE if t == j else ZERO for t in range(2)]
            lhs = sp.inner(0, fd.apply(2, u), v)
            rhs = sp.inner(2, u, f.apply(0, v))
            assert lhs == rhs


def test_adjoint_reverses_composition():
    sp = simple_space()
    f = gr.BlockMap(sp, 2)
    f.set_block(0, [[ONE], [I]])
    f.set_block(2, [[Scalar(1), Scalar(2)]])
    g = gr.BlockMap(sp, 0)
    g.set_block(0, [[Scalar(3)]])
    g.set_block(2, [[ONE, I], [ZERO, ONE]])
    g.set_block(4, [[Scalar(-2)]])
    lhs = gr.adjoint(gr.compose(f, g))
    rhs = gr.compose(gr.adjoint(g), gr.adjoint(f))
    eq, compared, wit = gr.maps_equal(lhs, rhs)
    assert eq, wit


def test_compose_associative_random():
    rng = random.Random(11)
    sp = simple_space(6, (2, 2, 2, 2))

    def rand_map(degree2):
        f = gr.BlockMap(sp, degree2)
        for d2 in sp.grades():
            if f.is_defined(d2) and sp.dim(d2 + degree2):
                mat = [
                    [Scalar(rng.randint(-2, 2), rng.randint(-1, 1)) for _ in range(sp.dim(d2))]
                    for _ in range(sp.dim(d2 + degree2))
                ]
                f.set_block(d2, mat)
        return f

    for _ in range(10):
        f = rand_map(rng.choice([-2, 0, 2]))
        g = rand_map(rng.choice([-2, 0, 2]))
        h = rand_map(rng.choice([-2, 0, 2]))
        left = gr.compose(gr.compose(f, g), h)
        right = gr.compose(f, gr.compose(g, h))
        eq, _, wit = gr.maps_equal(left, right)
        assert eq, wit


def test_nonpositive_gram_rejected_by_adjoint():
    components = {0: [gr.WeightLabel(0, (Scalar(0),), 0, 0)]}
    gram = {0: [[Scalar(-1)]]}
    sp = gr.GradedSpace(components, gram, 0)
    ok, wits = sp.check_positive_definite()
    assert not ok and wits[0][0] == 0
    with pytest.raises(StructureError):
        gr.adjoint(gr.identity_map(sp))
