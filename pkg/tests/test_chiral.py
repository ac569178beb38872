import pytest

from vertexalg import chiral as ch
from vertexalg import conformal as cf
from vertexalg import graded as gr
from vertexalg import models as md
from vertexalg.errors import ContractError, TruncatedError
from vertexalg.report import FAIL, INCONCLUSIVE, PASS
from vertexalg.scalar import ONE, ZERO, Scalar


@pytest.fixture(scope="module")
def heis():
    return md.build_heisenberg(4)


@pytest.fixture(scope="module")
def tensor3():
    return md.build_tensor_2d(3)


def test_vacuum_partial_identity(heis):
    d2a, alpha = heis.state_vector((1,))
    vac = heis.table.vacuum_vector()
    # a_(-1) 1 = a
    assert ch.mode_apply(heis.table, d2a, alpha, -1, 0, vac) == alpha
    # 1_(n) a = delta_{n,-1} a
    assert ch.mode_apply(heis.table, 0, vac, -1, d2a, alpha) == alpha
    for n in (-3, -2, 0, 1):
        out = ch.mode_apply(heis.table, 0, vac, n, d2a, alpha)
        assert all(not x for x in out)


def test_mode_apply_out_of_cutoff_is_inconclusive(heis):
    d2a, alpha = heis.state_vector((1,))
    with pytest.raises(TruncatedError):
        # target grade 1 + 4 + 1 exceeds the cutoff 4
        ch.mode_apply(heis.table, d2a, alpha, -6, 8, [ONE] + [ZERO] * 4)


def test_translation_suite_passes(heis):
    reports = ch.check_translation(heis.table)
    for c in reports.checks:
        assert c.status == PASS, (c.name, c.witnesses)


def test_translation_detects_corruption(heis):
    # zero out T but keep nonzero positive modes: Y(a,x)1 = e^{xT}a fails
    broken = ch.ModeTable(heis.space, 0, gr.zero_map(heis.space, 2))
    broken.blocks = dict(heis.table.blocks)
    reports = ch.check_translation(broken)
    assert reports.by_name("vacuum_right").status == FAIL


def trivial_algebra():
    """The complete one-dimensional algebra spanned by the vacuum; a
    zero-dimensional grade-1 component records that nothing lives there."""
    components = {
        0: [gr.WeightLabel(0, (), 0, 0)],
        2: [],
    }
    gram = {0: [[ONE]], 2: []}
    space = gr.GradedSpace(components, gram, 2)
    t = gr.BlockMap(space, 2)
    table = ch.ModeTable(space, 0, t)
    table.set_block(0, 0, 0, [[ONE]])
    return table


def test_trivial_algebra_passes():
    table = trivial_algebra()
    reports = ch.check_translation(table)
    for c in reports.checks:
        assert c.status == PASS, (c.name, c.details)
    vac = table.vacuum_vector()
    report, n = ch.check_locality_1d(table, 0, vac, 0, vac)
    assert n == 0


def test_locality_vacuum(heis):
    vac = heis.table.vacuum_vector()
    report, n = ch.check_locality_1d(heis.table, 0, vac, 0, vac)
    assert n == 0 and report.status == PASS


def test_locality_boson_generator(heis):
    d2a, alpha = heis.state_vector((1,))
    report, n = ch.check_locality_1d(heis.table, d2a, alpha, d2a, alpha)
    assert n == 2, report
    vac = heis.table.vacuum_vector()
    report, n = ch.check_locality_1d(heis.table, d2a, alpha, 0, vac)
    assert n == 0


def test_commutator_formula_vacuum(heis):
    vac = heis.table.vacuum_vector()
    d2a, alpha = heis.state_vector((1,))
    rep = ch.check_commutator_formula(heis.table, 0, vac, d2a, alpha, 2, -1)
    assert rep.status == PASS


def test_commutator_formula_boson(heis):
    d2a, alpha = heis.state_vector((1,))
    rep = ch.check_commutator_formula(heis.table, d2a, alpha, d2a, alpha, 1, -1)
    assert rep.status == PASS
    rep = ch.check_commutator_formula(heis.table, d2a, alpha, d2a, alpha, 0, 0)
    assert rep.status == PASS
    for m, n in [(2, -1), (1, 1), (-1, -1), (3, -2)]:
        rep = ch.check_commutator_formula(heis.table, d2a, alpha, d2a, alpha, m, n)
        assert rep.status == PASS, (m, n, rep.witnesses)


def test_commutator_formula_deep_states(heis):
    d2a, v22 = heis.state_vector((2, 2))
    d2b, alpha = heis.state_vector((1,))
    rep = ch.check_commutator_formula(heis.table, d2b, alpha, d2a, v22, 1, 0)
    assert rep.status in (PASS, INCONCLUSIVE)
    assert rep.status == PASS


def test_local_endo_translation(heis):
    endo, rep = ch.make_local_endo(heis.table, heis.table.T)
    assert rep.status == PASS
    # X(x) = T: the tower stops immediately
    assert len([c for c in endo.coeffs if c.blocks]) == 1


def test_local_endo_dilation(heis):
    # X = H = L_0: X(x) = H + x T
    endo, rep = ch.make_local_endo(heis.table, heis.rep.action["H"])
    assert rep.status == PASS, rep.witnesses
    eq, _, _ = gr.maps_equal(endo.coeffs[1], heis.table.T)
    assert eq
    assert endo.terminated


def test_local_endo_special_conformal(heis):
    # X = C1 = L_1-type: X(x) = C1 - 2x H - x^2 T
    endo, rep = ch.make_local_endo(heis.table, heis.rep.action["C1"])
    assert rep.status == PASS, rep.witnesses
    eq, _, _ = gr.maps_equal(endo.coeffs[1], gr.scale_map(Scalar(-2), heis.rep.action["H"]))
    assert eq
    eq, _, _ = gr.maps_equal(endo.coeffs[2], gr.scale_map(-ONE, heis.table.T))
    assert eq


def test_local_endo_requires_vacuum_kill(heis):
    bad = gr.identity_map(heis.space)
    with pytest.raises(ContractError):
        ch.make_local_endo(heis.table, bad)


def test_pseudoderivation_identities(heis):
    for name in ("H", "C1"):
        endo, rep = ch.make_local_endo(heis.table, heis.rep.action[name])
        reports = ch.check_pseudoderivation(heis.table, endo)
        for c in reports.checks:
            assert c.status == PASS, (name, c.name, c.witnesses)


def test_c1d_action_heisenberg(heis):
    reports = ch.check_c1d_action(heis.table, heis.rep)
    for c in reports.checks:
        assert c.status == PASS, (c.name, c.witnesses)


def test_c1d_action_tensor(tensor3):
    reports = ch.check_c1d_action(tensor3.table, tensor3.rep)
    for c in reports.checks:
        assert c.status == PASS, (c.name, c.witnesses)


def test_c1d_action_detects_scaled_rotation(tensor3):
    bad = md.corrupt_scaled_rotation(tensor3)
    reports = ch.check_c1d_action(tensor3.table, bad)
    assert any(c.status == FAIL for c in reports.checks)
    assert reports.by_name("action_O12").status == FAIL


def test_trivial_action_on_trivial_algebra():
    heis0 = md.build_heisenberg(0)
    reports = ch.check_c1d_action(heis0.table, heis0.rep)
    assert not any(c.status == FAIL for c in reports.checks)
