import pytest

from vertexalg import chiral as ch
from vertexalg import graded as gr
from vertexalg import linalg as la
from vertexalg import models as md
from vertexalg import polyharm as ph
from vertexalg import reconstruct as rc
from vertexalg import series as se
from vertexalg.errors import HypothesisViolation, TruncatedError
from vertexalg.report import FAIL, INCONCLUSIVE, PASS
from vertexalg.scalar import I, ONE, ZERO, Scalar


@pytest.fixture(scope="module")
def tensor2():
    return md.build_tensor_2d(2)


@pytest.fixture(scope="module")
def mud2(tensor2):
    return rc.reconstruct_d2(tensor2.table, tensor2.rep)


def unit(space, d2, idx):
    return [ONE if t == idx else ZERO for t in range(space.dim(d2))]


def test_vacuum_block(mud2, tensor2):
    vac = tensor2.table.vacuum_vector()
    s = rc.assemble_series(mud2, 0, vac, 0, vac)
    assert set(s.coeffs) == {(0, 0, 1)}
    assert s.coeffs[(0, 0, 1)] == [ONE]


def test_identity_on_left(mud2, tensor2):
    # Y(1, z) b = b for every basis vector
    vac = tensor2.table.vacuum_vector()
    for d2b in tensor2.space.grades():
        for j in range(tensor2.space.dim(d2b)):
            s = rc.assemble_series(mud2, 0, vac, d2b, unit(tensor2.space, d2b, j))
            assert set(s.coeffs) == {(0, 0, 1)}
            assert s.coeffs[(0, 0, 1)] == unit(tensor2.space, d2b, j)


def test_creation_series_is_translation_exponential(mud2, tensor2):
    # Y(a, z) 1 = e^{z.T} a: for a = alpha x 1 the series is polynomial
    a = ((1,), ())
    d2a, avec = tensor2.state_vector(a)
    vac = tensor2.table.vacuum_vector()
    s = rc.assemble_series(mud2, d2a, avec, 0, vac)
    assert s.min_pole() >= 0
    line = se.restrict_to_line(s)
    # compare against exp(x T) a through the cutoff
    t = tensor2.table.T
    cur, g = avec, d2a
    fact = 1
    for n in range(0, (tensor2.space.cutoff2 - d2a) // 2 + 1):
        if n:
            cur = t.apply(g, cur)
            g += 2
            fact *= n
        want = [x / Scalar(fact) for x in cur]
        got = line.get(n, [ZERO] * len(want))
        assert got == want


def test_parity_invariant(mud2):
    for (d2a, d2b, n, m, sigma) in mud2.blocks:
        assert (n - m) % 2 == 0
    assert rc.check_parity(mud2).status == PASS
    assert rc.check_degree_law(mud2).status == PASS


def test_oracle_equivalence_cutoff2(mud2, tensor2):
    # every reconstructed coefficient equals the chiral factorization
    space = tensor2.space
    for da in range(tensor2.cutoff + 1):
        for db in range(tensor2.cutoff + 1):
            for a in md.tensor_states(da):
                for b in md.tensor_states(db):
                    d2a, avec = tensor2.state_vector(a)
                    d2b, bvec = tensor2.state_vector(b)
                    s = rc.assemble_series(mud2, d2a, avec, d2b, bvec)
                    oracle = md.chiral_factorization_oracle(tensor2, a, b)
                    assert s.coeffs == oracle, (a, b)


def test_general_solver_matches_projection(tensor2, mud2):
    general = rc.reconstruct_general(tensor2.table, tensor2.rep, 2)
    assert set(general.blocks) == set(mud2.blocks)
    for key, mat in mud2.blocks.items():
        assert la.mat_eq(general.blocks[key], mat), key
    assert all(st["status"] == "unique" for st in general.meta["instances"])


def test_restriction_identity(mud2, tensor2):
    rep = rc.check_restriction(mud2, tensor2.table)
    assert rep.status == PASS, rep.witnesses


def test_pole_bound_generators(tensor2, mud2):
    a = ((1,), ())
    d2a, avec = tensor2.state_vector(a)
    bound = rc.pole_bound(tensor2.rep, d2a, avec, d2a, avec)
    assert bound == 2
    # realized minimal power of z^2 equals -2: the bound is tight here
    s = rc.assemble_series(mud2, d2a, avec, d2a, avec)
    assert s.min_pole() == -2
    vac = tensor2.table.vacuum_vector()
    assert rc.pole_bound(tensor2.rep, 0, vac, 0, vac) == 0


def test_pole_bound_check(mud2, tensor2):
    rep = rc.check_pole_bounds(mud2, tensor2.rep)
    assert rep.status == PASS, rep.witnesses


def test_covariance_suite(mud2, tensor2):
    reports = rc.check_covariance_D(mud2, tensor2.rep)
    for c in reports.checks:
        assert c.status == PASS, (c.name, c.witnesses)


def test_covariance_detects_corruption(tensor2):
    mud = rc.reconstruct_d2(tensor2.table, tensor2.rep)
    key = next(k for k in mud.blocks if k[3] > 0)
    mud.blocks[key] = la.mat_scale(Scalar(2), mud.blocks[key])
    mud._series_cache.clear()
    reports = rc.check_covariance_D(mud, tensor2.rep)
    assert any(c.status == FAIL for c in reports.checks)


def test_locality_vacuum(mud2, tensor2):
    vac = tensor2.table.vacuum_vector()
    rep = rc.check_locality_D(mud2, 0, vac, 0, vac, 0)
    assert rep.status == PASS


def test_locality_generators(mud2, tensor2):
    a = ((1,), ())
    d2a, avec = tensor2.state_vector(a)
    bound = rc.pole_bound(tensor2.rep, d2a, avec, d2a, avec)
    rep = rc.check_locality_D(mud2, d2a, avec, d2a, avec, bound)
    assert rep.status == PASS, rep.witnesses
    # one step below the bound the commutator survives: the test has power
    rep = rc.check_locality_D(mud2, d2a, avec, d2a, avec, bound - 1)
    assert rep.status == FAIL


def test_taylor_shift_basic():
    # constant series shifts to itself; shifting by u then -u is identity
    s = se.MonoSeries(2, 0, 8, 0, {(0, 0): [ONE]}, 4)
    out = se.taylor_shift(s, [ONE, I])
    assert out.terms == s.terms
    s2 = se.MonoSeries(2, 0, 8, 0, {(2, 1): [Scalar(3)], (0, 0): [ONE]}, 4)
    there = se.taylor_shift(s2, [ONE, -I])
    back = se.taylor_shift(there, [-ONE, I])
    assert back.terms == s2.terms


def test_iota_line_shift(tensor2, mud2):
    vac = tensor2.table.vacuum_vector()
    a = ((1,), ())
    d2a, avec = tensor2.state_vector(a)
    for (d2x, xv), (d2y, yv) in [
        ((0, vac), (0, vac)),
        ((d2a, avec), (0, vac)),
        ((d2a, avec), (d2a, avec)),
    ]:
        rep = rc.check_iota_line_shift(mud2, tensor2.table, tensor2.rep, d2x, xv, d2y, yv)
        assert rep.status == PASS, rep.witnesses


def test_residue_extract_round_trip(mud2, tensor2):
    a = ((1,), ())
    d2a, avec = tensor2.state_vector(a)
    s = rc.assemble_series(mud2, d2a, avec, d2a, avec)
    for (p, m, sigma), vec in s.coeffs.items():
        n = 2 * p + m
        assert se.residue_extract(s, n, m, sigma) == vec
    # odd n - m extracts the zero coefficient conclusively
    assert se.residue_extract(s, 1, 2, 1) is None
    with pytest.raises(TruncatedError):
        se.residue_extract(s, 40, 0, 1)


def test_extract_vacuum(mud2, tensor2):
    vac = tensor2.table.vacuum_vector()
    d2b, bvec = tensor2.state_vector(((1,), ()))
    s = rc.assemble_series(mud2, 0, vac, d2b, bvec)
    assert se.residue_extract(s, 0, 0, 1) == bvec


def test_isotypic_crosscheck_d2(tensor2, mud2):
    seen = 0
    for (d2a, d2b, n) in sorted(tensor2.table.blocks):
        if d2a > 2 or d2b > 2:
            continue
        rep = rc.isotypic_crosscheck(tensor2.table, tensor2.rep, mud2, d2a, d2b, n)
        assert rep.status == PASS, (d2a, d2b, n, rep.details, rep.witnesses)
        seen += 1
    assert seen >= 5


def test_gegenbauer_solver_route():
    table, rep, expected = md.build_gegenbauer4(3)
    mud = rc.reconstruct_general(table, rep, 4)
    got = {
        (m, sigma): mat
        for (d2a, d2b, n, m, sigma), mat in mud.blocks.items()
        if (d2a, d2b) == (0, 0)
    }
    want = {k: v for k, v in expected.items() if not la.is_zero_matrix(v)}
    assert set(got) == set(want)
    for k in want:
        assert la.mat_eq(got[k], want[k]), k
    assert rc.check_parity(mud).status == PASS
    assert rc.check_restriction(mud, table).status == PASS


def test_gegenbauer_isotypic_agreement():
    table, rep, expected = md.build_gegenbauer4(2)
    mud = rc.reconstruct_general(table, rep, 4)
    for m in (1, 2):
        rep_check = rc.isotypic_crosscheck(table, rep, mud, 0, 0, m)
        assert rep_check.status == PASS, (m, rep_check.details, rep_check.witnesses)


def test_solver_rejects_broken_labels(tensor2):
    bad = md.corrupt_scaled_rotation(tensor2)
    with pytest.raises(HypothesisViolation):
        rc.reconstruct_general(tensor2.table, bad, 2)
