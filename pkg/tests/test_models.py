import pytest

from vertexalg import chiral as ch
from vertexalg import conformal as cf
from vertexalg import graded as gr
from vertexalg import models as md
from vertexalg.report import FAIL, PASS
from vertexalg.scalar import I, ONE, ZERO, Scalar


@pytest.fixture(scope="module")
def heis3():
    return md.build_heisenberg(3)


@pytest.fixture(scope="module")
def tensor2():
    return md.build_tensor_2d(2)


def test_component_dimensions(heis3):
    # partition counting: p(0..3) = 1, 1, 2, 3
    assert [heis3.space.dim(2 * d) for d in range(4)] == [1, 1, 2, 3]
    heis4 = md.build_heisenberg(4)
    assert heis4.space.dim(8) == 5


def test_generator_modes(heis3):
    d2a, alpha = heis3.state_vector((1,))
    # alpha_(1) alpha = vacuum, alpha_(0) alpha = 0
    out1 = ch.mode_apply(heis3.table, d2a, alpha, 1, d2a, alpha)
    assert out1 == [ONE]
    out0 = ch.mode_apply(heis3.table, d2a, alpha, 0, d2a, alpha)
    assert all(not x for x in out0)


def test_translation_is_raising(heis3):
    # T a = a_(-2) vacuum, and T alpha = alpha_{-2} state
    d2a, alpha = heis3.state_vector((1,))
    ta = heis3.table.T.apply(d2a, alpha)
    d2t, expect = heis3.state_vector((2,))
    assert d2t == d2a + 2 and ta == expect
    vac = heis3.table.vacuum_vector()
    via_mode = ch.mode_apply(heis3.table, d2a, alpha, -2, 0, vac)
    assert via_mode == expect


def test_sl2_relations_and_norms(heis3):
    rep = heis3.rep
    # L1 L_{-1} vacuum = 0 i.e. C1 T1 vacuum = 0 (vacuum is sl2-invariant)
    tv = rep.action["T1"].apply(0, heis3.table.vacuum_vector())
    cv = rep.action["C1"].apply(2, tv)
    assert all(not x for x in cv)
    # <alpha | alpha> = 1 under the standard Fock gram
    assert heis3.space.gram[2][0][0] == ONE


def test_heisenberg_rep_brackets(heis3):
    reports = cf.validate_rep(heis3.rep)
    assert reports.by_name("bracket_homomorphism").status == PASS
    assert reports.by_name("positive_energy").status == PASS
    assert reports.by_name("unitarity").status == PASS


def test_tensor_dimensions(tensor2):
    assert [tensor2.space.dim(2 * d) for d in range(3)] == [1, 2, 5]


def test_tensor_rep_validates(tensor2):
    reports = cf.validate_rep(tensor2.rep)
    for check in reports.checks:
        assert check.status == PASS, (check.name, check.witnesses)


def test_tensor_strong_integrability_spectrum(tensor2):
    # H + i O12 acts as 2 L_0^- : even spectrum {0, 2, 4} through weight 2
    h = tensor2.rep.action["H"]
    om = tensor2.rep.action["O12"]
    seen = set()
    for d2 in tensor2.space.grades():
        n = tensor2.space.dim(d2)
        hm = h.matrix(d2)
        omm = om.matrix(d2)
        for i in range(n):
            val = hm[i][i] + I * omm[i][i]
            assert val.is_real() and val.re.denominator == 1
            assert val.re % 2 == 0
            seen.add(int(val.re))
    assert seen == {0, 2, 4}


def test_corrupted_fixtures(tensor2):
    bad_norm = md.corrupt_negative_norm(tensor2)
    rep = cf.validate_rep(bad_norm)
    unit = rep.by_name("unitarity")
    assert unit.status == FAIL and unit.witnesses

    bad_h = md.corrupt_negative_energy(tensor2)
    rep = cf.validate_rep(bad_h)
    pos = rep.by_name("positive_energy")
    assert pos.status == FAIL
    assert any(w[3] == Scalar(-1) for w in pos.witnesses)

    bad_om = md.corrupt_scaled_rotation(tensor2)
    rep = cf.validate_rep(bad_om)
    assert rep.by_name("bracket_homomorphism").status == FAIL


def test_oracle_vacuum_cases(tensor2):
    vac = ((), ())
    out = md.chiral_factorization_oracle(tensor2, vac, vac)
    assert set(out) == {(0, 0, 1)}
    assert out[(0, 0, 1)] == [ONE]


def test_oracle_pure_plus_dependence(tensor2):
    # Y(alpha x 1, z) vacuum = exp(z+ L_{-1}) alpha x 1: depends on z+ only
    a = ((1,), ())
    vac = ((), ())
    out = md.chiral_factorization_oracle(tensor2, a, vac)
    for (p, m, sigma), vec in out.items():
        exp_plus = p + (m if sigma == 1 else 0)
        exp_minus = p + (m if sigma == 2 else 0)
        assert exp_minus == 0 and exp_plus >= 0


def test_oracle_singular_part(tensor2):
    # leading OPE singularity of the free boson: the (z+)^{-2} monomial
    # reads (z^2)^{-2} (z^-)^2 in the mixed basis, i.e. p=-2, m=2, sigma=2
    a = ((1,), ())
    out = md.chiral_factorization_oracle(tensor2, a, a)
    vec = out[(-2, 2, 2)]
    assert vec == [ONE]
    assert (-3, 3, 2) not in out
    assert all(p >= -2 for (p, m, sigma) in out)
