import itertools
import random
from fractions import Fraction

import pytest

from vertexalg import conformal as cf
from vertexalg.scalar import I, ONE, ZERO, Scalar

E = cf.CLieElement.basis


def test_bracket_translation_special():
    # [T_a, C_b] = 2 d_ab H - 2 O_ab
    b = cf.bracket(E("T1"), E("C1"))
    assert b == cf.CLieElement({"H": 2})
    b = cf.bracket(E("T1"), E("C2"))
    assert b == cf.CLieElement({"O12": -2})
    b = cf.bracket(E("T2"), E("C1"))
    assert b == cf.CLieElement({"O12": 2})


def test_bracket_dilation_and_translations():
    assert cf.bracket(E("H"), E("T1")) == E("T1")
    assert cf.bracket(E("H"), E("C2")) == -E("C2")
    assert cf.bracket(E("T1"), E("T2")).is_zero()
    assert cf.bracket(E("C1"), E("C2")).is_zero()


def test_bracket_rotation_moves_vectors():
    assert cf.bracket(E("O12"), E("T1")) == E("T2")
    assert cf.bracket(E("O12"), E("T2")) == -E("T1")
    assert cf.bracket(E("O12"), E("C1")) == E("C2")


def test_omega_antisymmetric_storage():
    assert cf.CLieElement({"O21": ONE}) == cf.CLieElement({"O12": -1})


@pytest.mark.parametrize("dim", [2, 4, 6])
def test_jacobi_exhaustive(dim):
    names = cf.generator_names(dim)
    for x, y, z in itertools.combinations(names, 3):
        a, b, c = E(x), E(y), E(z)
        total = (
            cf.bracket(a, cf.bracket(b, c))
            + cf.bracket(b, cf.bracket(c, a))
            + cf.bracket(c, cf.bracket(a, b))
        )
        assert total.is_zero(), (x, y, z)


@pytest.mark.parametrize("dim", [2, 4])
def test_antisymmetry_random(dim):
    rng = random.Random(4)
    names = cf.generator_names(dim)
    for _ in range(20):
        x = cf.CLieElement({rng.choice(names): Scalar(rng.randint(-3, 3), rng.randint(-1, 1))})
        y = cf.CLieElement({rng.choice(names): Scalar(rng.randint(-3, 3))})
        assert cf.bracket(x, y) == -cf.bracket(y, x)


def test_rotations_close_into_rotations():
    names = [n for n in cf.generator_names(6) if n.startswith("O")]
    for n1 in names:
        for n2 in names:
            b = cf.bracket(E(n1), E(n2))
            assert all(k.startswith("O") for k in b.coeffs)


def test_star_involution():
    # the T/C swap carries the sign that makes unitary positive-energy
    # representations possible alongside [T_a, C_b] = 2 d_ab H - 2 O_ab
    assert cf.star(E("T1")) == -E("C1")
    assert cf.star(E("C2")) == -E("T2")
    assert cf.star(E("H")) == E("H")
    assert cf.star(I * E("O12")) == I * E("O12")
    x = cf.CLieElement({"T1": Scalar(1, 2), "O12": I, "H": Scalar(3)})
    assert cf.star(cf.star(x)) == x


def test_star_antihomomorphism():
    rng = random.Random(9)
    names = cf.generator_names(4)
    for _ in range(15):
        x = cf.CLieElement({rng.choice(names): Scalar(rng.randint(-2, 2), 1)})
        y = cf.CLieElement({rng.choice(names): Scalar(rng.randint(-2, 2))})
        assert cf.star(cf.bracket(x, y)) == cf.bracket(cf.star(y), cf.star(x))


def test_exp_neg_ad_dilation():
    # e^{-ad(z.T)} H = H + z . T
    out = cf.exp_neg_ad_zT(E("H"), 3)
    assert out[(0, 0, 0)] == E("H")
    assert out[(1, 0, 0)] == E("T1")
    assert out[(0, 1, 0)] == E("T2")
    assert out[(0, 0, 1)] == E("T3")
    assert len(out) == 4


def test_exp_neg_ad_special_conformal_1d():
    # restriction to one variable: C_1 -> C_1 - 2x H - x^2 T_1
    out = cf.exp_neg_ad_zT(E("C1"), 1)
    assert out[(0,)] == E("C1")
    assert out[(1,)] == Scalar(-2) * E("H")
    assert out[(2,)] == -E("T1")


def test_exp_neg_ad_special_conformal_general():
    # C_a - 2 z^a H - 2 sum_b z^b O_ab + z^2 T_a - 2 z^a (z.T)
    dim = 3
    out = cf.exp_neg_ad_zT(E("C1"), dim)
    assert out[(0, 0, 0)] == E("C1")
    assert out[(1, 0, 0)] == Scalar(-2) * E("H")
    assert out[(0, 1, 0)] == Scalar(-2) * cf.CLieElement({"O12": 1})
    assert out[(0, 0, 1)] == Scalar(-2) * cf.CLieElement({"O13": 1})
    # z^2 T_1 - 2 z^1 (z.T): coefficient of (z^1)^2 is T1 - 2 T1 = -T1
    assert out[(2, 0, 0)] == -E("T1")
    assert out[(0, 2, 0)] == E("T1")
    assert out[(1, 1, 0)] == Scalar(-2) * E("T2")


def test_exp_neg_ad_rotation():
    out = cf.exp_neg_ad_zT(cf.CLieElement({"O12": 1}), 2)
    assert out[(1, 0)] == E("T2")
    assert out[(0, 1)] == -E("T1")


def test_exp_neg_ad_value_and_derivative_at_zero():
    rng = random.Random(2)
    names = cf.generator_names(4)
    for _ in range(10):
        x = cf.CLieElement({rng.choice(names): Scalar(rng.randint(-3, 3), rng.randint(0, 1))})
        out = cf.exp_neg_ad_zT(x, 4)
        assert out.get((0, 0, 0, 0), cf.CLieElement()) == x
        for alpha in range(4):
            mono = tuple(1 if k == alpha else 0 for k in range(4))
            expect = -cf.bracket(E(f"T{alpha+1}"), x)
            assert out.get(mono, cf.CLieElement()) == expect
