import pytest

from fefferman_lab.exact_core import Q
from fefferman_lab.exterior import Spinor
from fefferman_lab.tensor_calc import Tensor, covariant_derivative, permute
from fefferman_lab.tractor import (AdjTractor, SpinTractor, eigentractor_residuals,
                                   mat_add, mat_apply, mat_identity, mat_is_zero, mat_mul,
                                   mat_scale, mat_sub, pairing_check, residual_is_zero,
                                   s_E_slots)

CASES = [(2, None), (2, 3), (3, 3)]


@pytest.fixture(params=CASES, ids=lambda p: "n%d-%s" % p)
def data(request, fdata):
    return fdata(*request.param)


def _sF(data):
    return SpinTractor(Spinor(data.n, {}, 0), data.chi)


def _scale_tractor(data):
    ch, N = data.pw.chart, 2 * data.n
    return [ch.zero()] * (N + 1) + [ch.one()]


def _random_tractor(ch, N, shift=0):
    return [ch.var((i + shift) % N) * ch.var(i % N) + i + 1 for i in range(N + 2)]


def test_flat_scale_tractor_parallel(fdata):
    d = fdata(2)
    s = _scale_tractor(d)
    for c in range(4):
        assert all(not x for x in d.ctx.std_derivative(s, c))


def test_scale_tractor_derivative_is_schouten(data):
    s = _scale_tractor(data)
    N, P = 2 * data.n, data.conf.P
    for a in range(N):
        got = data.ctx.std_derivative(s, a)
        assert not got[0] and not got[-1]
        assert all(not (got[1 + b] - P[(a, b)]) for b in range(N))


def test_std_connection_matches_slot_display(data):
    ctx, N = data.ctx, 2 * data.n
    T = _random_tractor(data.pw.chart, N)
    for c in range(N):
        assert all(not (x - y) for x, y in zip(ctx.std_derivative(T, c),
                                                ctx.std_derivative_slots(T, c)))


def test_h_preserved(data):
    ctx, ch, N = data.ctx, data.pw.chart, 2 * data.n
    T1, T2 = _random_tractor(ch, N), _random_tractor(ch, N, 1)
    for c in range(N):
        lhs = ctx.h(ctx.std_derivative(T1, c), T2) + ctx.h(T1, ctx.std_derivative(T2, c))
        assert not (lhs - ctx.h(T1, T2).diff(c))


def test_curvature_slot_form(data):
    for (a, b), F in data.F.items():
        assert mat_is_zero(mat_sub(F, data.ctx.adj_matrix(data.ctx.curvature_slots(a, b))))


def test_curvature_commutator(fdata):
    d = fdata(2, 3)
    ctx, ch = d.ctx, d.pw.chart
    T = _random_tractor(ch, 4)
    for a in range(4):
        for b in range(a + 1, 4):
            lhs = [x - y for x, y in zip(ctx.std_derivative(ctx.std_derivative(T, b), a),
                                         ctx.std_derivative(ctx.std_derivative(T, a), b))]
            rhs = mat_apply(d.F[(a, b)], T)
            assert all(not (x - y) for x, y in zip(lhs, rhs))


def test_s_F_parallel(data):
    assert all(x.is_zero() for x in data.st.nabla(_sF(data)))


def test_curvature_annihilates_s_F(data):
    sF = _sF(data)
    assert all(data.st.spin_action(F, sF).is_zero() for F in data.F.values())


def test_flat_spin_connection_constant(fdata):
    d = fdata(2)
    ch = d.pw.chart
    tau = Spinor(2, {1: ch.one()})
    chi = Spinor(2, {0: ch.one()})
    for c in range(4):
        got = d.st.connection(SpinTractor(tau, chi), c)
        assert got.tau.is_zero()
        expect = d.sf.gamma_low(c, tau).with_root2_shift(-1)
        assert (got.chi - expect).is_zero()


def test_L0_values(data):
    N = 2 * data.n
    assert all(not (x - y) for x, y in zip(data.ctx.L0_std(data.pw.chart.one()),
                                            _scale_tractor(data)))
    L = data.st.L0_spin(data.chi)
    assert L.tau.is_zero() and (L.chi - data.chi).is_zero()
    K = data.K
    assert K.rho.is_zero() and K.phi == data.pw.chart.const(-1)
    Dk = covariant_derivative(K.k, data.conf.D)
    assert (K.mu - (Dk - permute(Dk, [1, 0])).scale(Q(1, 2))).is_zero()
    assert N == K.k.chart.dim


def test_K_square(data):
    assert all(residual_is_zero(v) for v in data.ctx.K_square_residuals(data.K).values())
    I = mat_identity(data.pw.chart, 2 * data.n + 2)
    assert mat_is_zero(mat_sub(mat_mul(data.MK, data.MK), I))


def test_K_square_negative_witnesses(fdata):
    d = fdata(2)
    ch = d.pw.chart
    K = d.ctx.L0_adjoint(Tensor(ch, "u", {(0,): 1}))
    assert not K.phi and K.rho.is_zero()
    assert d.ctx.K_square_residuals(K)["k.rho - (phi^2 - 1)"] == ch.one()
    Z = d.ctx.L0_adjoint(Tensor(ch, "u", {}))
    assert Z.phi * Z.phi - 1 == ch.const(-1)
    assert d.ctx.K_square_residuals(Z)["k.rho - (phi^2 - 1)"] == ch.one()


def test_K_minus_one_on_ker_s_F(data):
    ch, n, N = data.pw.chart, data.n, 2 * data.n
    sF = _sF(data)
    ker = [_scale_tractor(data)]
    for v in data.pw.vertical_frame():
        low = [sum((data.conf.g[(a, b)] * v[(b,)] for b in range(N)), ch.zero())
               for a in range(N)]
        ker.append([ch.zero()] + low + [ch.zero()])
    assert len(ker) == n + 1
    for T in ker:
        assert data.st.clifford(T, sF).is_zero()
        assert all(not (x + y) for x, y in zip(data.ctx.adj_act(data.K, T), T))


def test_nabla_K_is_insertion(data):
    ctx, N = data.ctx, 2 * data.n
    for b in range(N):
        lhs = ctx.adj_connection_matrix(data.MK, b)
        rhs = mat_scale(lhs, 0)
        for a in range(N):
            if a != b and data.k[(a,)]:
                rhs = mat_add(rhs, mat_scale(data.F_ab(a, b), data.k[(a,)]))
        assert mat_is_zero(mat_sub(lhs, rhs))
        assert mat_is_zero(mat_sub(lhs, ctx.adj_matrix(ctx.adj_connection(data.K, b))))


def test_K_on_s_F(data):
    sF = _sF(data)
    assert (data.st.spin_action(data.MK, sF) + sF.scale(Q(data.n + 1, 2))).is_zero()


def test_phi_slot_action(fdata):
    d = fdata(2, 3)
    ch = d.pw.chart
    A = AdjTractor(Tensor(ch, "d", {}), Tensor(ch, "dd", {}), ch.one(), Tensor(ch, "d", {}))
    T = _random_tractor(ch, 4)
    got = d.ctx.adj_act(A, T)
    assert got[0] == -T[0] and got[-1] == T[-1] and all(not x for x in got[1:-1])


def test_clifford_single_slots(fdata):
    d = fdata(2)
    tau = Spinor(2, {1: d.pw.chart.one()})
    out = d.st.clifford(_scale_tractor(d), SpinTractor(tau, Spinor(2, {})))
    assert out.tau.is_zero()
    assert (out.chi + tau.with_root2_shift(1)).is_zero()


def test_scale_tractor_times_s_F(data):
    assert data.st.clifford(_scale_tractor(data), _sF(data)).is_zero()


def test_clifford_relation(data):
    ch, n, N = data.pw.chart, data.n, 2 * data.n
    T = _random_tractor(ch, N)
    S = SpinTractor(Spinor(n, {1: ch.var(0)}), Spinor(n, {0: ch.one() + ch.var(1)}))
    TTS = data.st.clifford(T, data.st.clifford(T, S))
    total = TTS + S.scale(data.ctx.h(T, T))
    assert residual_is_zero(total.tau.map_coeffs(lambda c: c.normalize()))
    assert residual_is_zero(total.chi.map_coeffs(lambda c: c.normalize()))


def test_eigentractor_residuals(data):
    sF = _sF(data)
    sE = s_E_slots(data.st, data.K, data.chi)
    res = eigentractor_residuals(data.st, data.K, sE, (sF.tau, sF.chi))
    assert len(res) == 12
    for name, v in res.items():
        assert residual_is_zero(v), name
    assert pairing_check(sE, (sF.tau, sF.chi)) == Q(-1, 2)


def test_mu_on_vertical(data):
    ch, N = data.pw.chart, 2 * data.n
    mu = data.K.mu
    ginv = data.conf.ginv
    for v in data.pw.vertical_frame():
        # μ^a_b v^b = g^ac μ_cb v^b
        for a in range(N):
            s = ch.zero()
            for c in range(N):
                for b in range(N):
                    if ginv[(a, c)] and mu[(c, b)] and v[(b,)]:
                        s = s + ginv[(a, c)] * mu[(c, b)] * v[(b,)]
            assert not (s + v[(a,)])
