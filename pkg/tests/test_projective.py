import pytest

from fefferman_lab.projective import (PreconditionError, ProjectiveStructure,
                                      dual_tractor_curvature_check, is_special, make_special,
                                      proj_cotton, proj_schouten, proj_weyl, projective_change,
                                      schouten_change_law, schouten_general)
from fefferman_lab.tensor_calc import Chart, Connection, Tensor, covariant_derivative, permute, \
    tensor_product
from fefferman_lab.verify import flat_projective, random_projective

ch = Chart(["x1", "x2"])
x1, x2 = ch.var(0), ch.var(1)
flat = Connection(ch, {})


def dx1(chart):
    return Tensor(chart, "d", {(0,): 1})


def test_zero_change_is_identity():
    D = random_projective(2, 4).representative
    assert projective_change(D, Tensor(D.chart, "d", {})).gamma == D.gamma


def test_change_of_flat_by_dx1():
    Dh = projective_change(flat, dx1(ch))
    expect = {(0, 0, 0): 2, (1, 0, 1): 1, (1, 1, 0): 1}
    got = {k: v for k, v in Dh.gamma.items() if v}
    assert set(got) == set(expect)
    for k, v in expect.items():
        assert got[k] == ch.const(v)


@pytest.mark.parametrize("n,seed", [(2, 1), (2, 2), (3, 1), (3, 2), (3, 5)])
def test_weyl_projectively_invariant(n, seed):
    D = random_projective(n, seed).representative
    c = D.chart
    # closed Υ keeps the changed connection special after renormalising volume;
    # compare through the special representative of the changed class
    ups = Tensor(c, "d", {(i,): c.var(i) * (i + 1) + 1 for i in range(n)})
    Dh = make_special(projective_change(D, ups))
    assert (proj_weyl(Dh) - proj_weyl(D)).is_zero()


def test_flat_schouten_zero():
    assert proj_schouten(flat).is_zero()


def test_example_schouten_symmetric():
    D = Connection(ch, {(0, 1, 1): x1})
    assert is_special(D)
    P = proj_schouten(D)
    assert not P.is_zero()
    assert (P - permute(P, [1, 0])).is_zero()


def _exact_ups(c):
    # Υ = d log f with f = 1 + x1^2 + x2
    f = c.one() + c.var(0) * c.var(0) + c.var(1)
    return Tensor(c, "d", {(i,): f.diff(i) * f.inverse() for i in range(c.dim)})


def test_schouten_change_law():
    D = random_projective(2, 6).representative
    ups = _exact_ups(D.chart)
    Dh = projective_change(D, ups)
    assert (schouten_general(Dh) - schouten_change_law(D, ups)).normalize().is_zero()


@pytest.mark.xfail(strict=True, reason="opposite sign convention; the identity that holds is "
                   "P - DU + UU (see test_schouten_change_law)")
def test_schouten_change_law_opposite_sign():
    D = random_projective(2, 6).representative
    ups = _exact_ups(D.chart)
    Dh = projective_change(D, ups)
    lit = proj_schouten(D) + covariant_derivative(ups, D) - tensor_product(ups, ups)
    assert (schouten_general(Dh) - lit).normalize().is_zero()


def test_flat_weyl_cotton_zero():
    for n in (2, 3):
        D = flat_projective(n).representative
        assert proj_weyl(D).is_zero() and proj_cotton(D).is_zero()


@pytest.mark.parametrize("seed", range(1, 6))
def test_weyl_vanishes_n2(seed):
    assert proj_weyl(random_projective(2, seed).representative).is_zero()


def test_weyl_trace_free_and_bianchi_n3():
    D = random_projective(3, 8, max_degree=1).representative
    W = proj_weyl(D)
    assert not W.is_zero()
    tr = {}
    for (a, b, c, d), v in W.comps.items():
        if a == c:
            tr[(b, d)] = tr.get((b, d), D.chart.zero()) + v
    assert all(not v for v in tr.values())
    # W_[AB^C_D] = 0: cyclic sum over (A, B, D)
    cyc = W + permute(W, [1, 3, 2, 0]) + permute(W, [3, 0, 2, 1])
    assert cyc.is_zero()


def test_is_special_examples():
    assert is_special(flat)
    assert not is_special(Connection(ch, {(0, 0, 1): x2, (0, 1, 0): x2}))
    assert not is_special(projective_change(flat, dx1(ch)))


def test_schouten_requires_special():
    with pytest.raises(PreconditionError):
        proj_schouten(Connection(ch, {(0, 0, 1): 1, (0, 1, 0): 1}))


def test_structure_normalizes():
    P = ProjectiveStructure(Connection(ch, {(0, 0, 1): x2, (0, 1, 0): x2}))
    assert P.normalized and P.special


def test_nonconstant_volume_rejected():
    with pytest.raises(PreconditionError):
        ProjectiveStructure(flat, volume=x1)


@pytest.mark.parametrize("n,seed", [(2, 3), (3, 3)])
def test_dual_tractor_curvature(n, seed):
    top, bottom = dual_tractor_curvature_check(random_projective(n, seed).representative)
    assert top.is_zero() and bottom.is_zero()
