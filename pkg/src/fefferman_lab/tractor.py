"""Standard, spin and adjoint tractors in slots relative to a metric in the conformal class.

Standard tractors are columns (ρ, φ_0..φ_{N-1}, σ) with φ covariant; the
tractor metric is h(T, T) = 2ρσ + g^ab φ_a φ_b and the connection is
∇_c = ∂_c + A_c with

    ∇_c(ρ; φ_a; σ) = (D_c ρ - Ρ_c^b φ_b;  D_c φ_a + σ Ρ_ca + ρ g_ca;  D_c σ - φ_c).

Adjoint tractors (ρ_a; μ_ab | φ; k_a) act on standard tractors by

    (ρ; μ | φ; β) • (ν; ω; σ) = (ρ^r ω_r - φν;  μ_b^r ω_r - σρ_b - νβ_b;  β^r ω_r + φσ),

which identifies them with matrices in so(h).  Spin tractors are pairs
(τ, χ) of spinors in the model of ``conformal_spin``.
"""

from dataclasses import dataclass

from .exact_core import Q
from .exterior import Spinor, _popcount
from .tensor_calc import (Tensor, _add_into, covariant_derivative, lower_index, raise_index)


# ---------------------------------------------------------------------------
# small matrix helpers over RatFunc

def mat_zero(chart, size):
    z = chart.zero()
    return [[z] * size for _ in range(size)]


def mat_identity(chart, size):
    M = mat_zero(chart, size)
    for i in range(size):
        M[i][i] = chart.one()
    return M


def mat_mul(A, B):
    size = len(A)
    cols = list(zip(*B))
    out = []
    for i in range(size):
        row = []
        Ai = [(k, a) for k, a in enumerate(A[i]) if a]
        for j in range(size):
            col = cols[j]
            s = None
            for k, a in Ai:
                b = col[k]
                if b:
                    s = a * b if s is None else s + a * b
            row.append(s if s is not None else A[0][0] * 0)
        out.append(row)
    return out


def mat_add(A, B):
    return [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(A, B):
    return [[a - b for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(A, c):
    return [[a * c for a in row] for row in A]


def mat_bracket(A, B):
    return mat_sub(mat_mul(A, B), mat_mul(B, A))


def mat_diff(A, i):
    return [[a.diff(i) for a in row] for row in A]


def mat_is_zero(A):
    return all(not a for row in A for a in row)


def mat_trace(A):
    s = A[0][0] * 0
    for i in range(len(A)):
        s = s + A[i][i]
    return s


def mat_apply(A, v):
    out = []
    for row in A:
        s = v[0] * 0
        for a, x in zip(row, v):
            if a and x:
                s = s + a * x
        out.append(s)
    return out


# ---------------------------------------------------------------------------
# standard tractors

class TractorContext:
    """Conformal data of one metric plus the matrices of the standard tractor connection."""

    def __init__(self, conf, spin=None):
        self.conf = conf
        self.chart = conf.chart
        self.N = conf.N
        self.size = self.N + 2
        self.spin = spin
        self._A = None

    @property
    def g(self):
        return self.conf.g

    @property
    def ginv(self):
        return self.conf.ginv

    def connection_matrices(self):
        """A_c for each coordinate direction c."""
        if self._A is None:
            N, last = self.N, self.N + 1
            conf = self.conf
            Pu = conf.P_up
            mats = [mat_zero(self.chart, self.size) for _ in range(N)]
            for (c, b), v in Pu.comps.items():
                mats[c][0][1 + b] = mats[c][0][1 + b] - v
            for (d, c, a), v in conf.D.gamma.items():
                mats[c][1 + a][1 + d] = mats[c][1 + a][1 + d] - v
            for (c, a), v in conf.P.comps.items():
                mats[c][1 + a][last] = mats[c][1 + a][last] + v
            for (c, a), v in conf.g.comps.items():
                mats[c][1 + a][0] = mats[c][1 + a][0] + v
            for c in range(N):
                mats[c][last][1 + c] = mats[c][last][1 + c] - 1
            self._A = mats
        return self._A

    def h_matrix(self):
        N, last = self.N, self.N + 1
        H = mat_zero(self.chart, self.size)
        H[0][last] = self.chart.one()
        H[last][0] = self.chart.one()
        for (a, b), v in self.ginv.comps.items():
            H[1 + a][1 + b] = v
        return H

    def h(self, T1, T2):
        return self._bilinear(self.h_matrix(), T1, T2)

    @staticmethod
    def _bilinear(H, T1, T2):
        s = T1[0] * 0
        for i, row in enumerate(H):
            if not T1[i]:
                continue
            for j, v in enumerate(row):
                if v and T2[j]:
                    s = s + T1[i] * v * T2[j]
        return s

    def std_derivative(self, T, c):
        A = self.connection_matrices()[c]
        dT = [x.diff(c) for x in T]
        return [a + b for a, b in zip(dT, mat_apply(A, T))]

    def std_derivative_slots(self, T, c):
        """Same derivative written out slot by slot from the displayed formula."""
        N = self.N
        conf = self.conf
        rho, sigma = T[0], T[-1]
        phi = Tensor(self.chart, "d", {(a,): T[1 + a] for a in range(N)})
        Dphi = covariant_derivative(phi, conf.D)
        top = rho.diff(c)
        for b in range(N):
            v = conf.P_up[(c, b)]
            if v and T[1 + b]:
                top = top - v * T[1 + b]
        mid = [Dphi[(c, a)] + sigma * conf.P[(c, a)] + rho * conf.g[(c, a)] for a in range(N)]
        bottom = sigma.diff(c) - T[1 + c]
        return [top] + mid + [bottom]

    def curvature(self):
        """F_ab = ∂_a A_b - ∂_b A_a + [A_a, A_b] as a dict {(a, b): matrix} for a < b."""
        A = self.connection_matrices()
        out = {}
        for a in range(self.N):
            for b in range(a + 1, self.N):
                F = mat_sub(mat_diff(A[b], a), mat_diff(A[a], b))
                F = mat_add(F, mat_bracket(A[a], A[b]))
                out[(a, b)] = F
        return out

    def L0_std(self, sigma):
        """((1/2n)(-D^p D_p σ - J σ); D_a σ; σ)."""
        conf, N = self.conf, self.N
        grad = Tensor(self.chart, "d", {(a,): sigma.diff(a) for a in range(N)})
        hess = covariant_derivative(grad, conf.D)
        lap = self.chart.zero()
        for (p, q), v in conf.ginv.comps.items():
            h = hess.comps.get((p, q))
            if h is not None:
                lap = lap + v * h
        top = (-lap - conf.J * sigma) * Q(1, N)
        return [top] + [grad[(a,)] for a in range(N)] + [sigma]

    # adjoint tractors
    def adj_matrix(self, A):
        N, last = self.N, self.N + 1
        M = mat_zero(self.chart, self.size)
        rho_up = raise_index(A.rho, self.ginv, 0)
        k_up = raise_index(A.k, self.ginv, 0)
        mu_mixed = raise_index(A.mu, self.ginv, 1)
        M[0][0] = -A.phi
        M[last][last] = A.phi
        for (r,), v in rho_up.comps.items():
            M[0][1 + r] = v
        for (b,), v in A.rho.comps.items():
            M[1 + b][last] = -v
        for (b,), v in A.k.comps.items():
            M[1 + b][0] = -v
        for (r,), v in k_up.comps.items():
            M[last][1 + r] = v
        for (b, r), v in mu_mixed.comps.items():
            M[1 + b][1 + r] = v
        return M

    def adj_from_matrix(self, M):
        """Inverse of ``adj_matrix`` on so(h); also returns the residual of the fit."""
        N, last, ch = self.N, self.N + 1, self.chart
        phi = M[last][last]
        rho = Tensor(ch, "d", {(b,): -M[1 + b][last] for b in range(N)})
        k_up = Tensor(ch, "u", {(r,): M[last][1 + r] for r in range(N)})
        mu_mixed = Tensor(ch, "du", {(b, r): M[1 + b][1 + r] for b in range(N) for r in range(N)})
        A = AdjTractor(rho, lower_index(mu_mixed, self.g, 1), phi, lower_index(k_up, self.g, 0))
        return A, mat_sub(M, self.adj_matrix(A))

    def adj_act(self, A, T):
        return mat_apply(self.adj_matrix(A), T)

    def adj_connection(self, A, c):
        """Slot formula of the normal adjoint tractor connection in direction c."""
        conf, N, ch = self.conf, self.N, self.chart
        D = conf.D
        P, Pu, g = conf.P, conf.P_up, conf.g
        Drho = covariant_derivative(A.rho, D)
        Dmu = covariant_derivative(A.mu, D)
        Dk = covariant_derivative(A.k, D)
        rho, mu, k, phi = A.rho, A.mu, A.k, A.phi
        new_rho = {}
        for a in range(N):
            v = Drho[(c, a)] - P[(c, a)] * phi
            for p in range(N):
                pv = Pu[(c, p)]
                if pv:
                    v = v - pv * mu[(p, a)]
            _add_into(new_rho, (a,), v)
        new_mu = {}
        for a0 in range(N):
            for a1 in range(N):
                v = Dmu[(c, a0, a1)]
                v = v + g[(c, a0)] * rho[(a1,)] - g[(c, a1)] * rho[(a0,)]
                v = v + P[(c, a0)] * k[(a1,)] - P[(c, a1)] * k[(a0,)]
                _add_into(new_mu, (a0, a1), v)
        new_phi = phi.diff(c) + rho[(c,)]
        for p in range(N):
            pv = Pu[(c, p)]
            if pv:
                new_phi = new_phi - pv * k[(p,)]
        new_k = {}
        for a in range(N):
            _add_into(new_k, (a,), Dk[(c, a)] - mu[(c, a)] + g[(c, a)] * phi)
        return AdjTractor(Tensor(ch, "d", new_rho), Tensor(ch, "dd", new_mu), new_phi,
                          Tensor(ch, "d", new_k))

    def adj_connection_matrix(self, M, c):
        """∂_c M + [A_c, M]."""
        A = self.connection_matrices()[c]
        return mat_add(mat_diff(M, c), mat_bracket(A, M))

    def curvature_slots(self, a, b):
        """Ω_ab = (-Y_·ab; W_ab·· | 0; 0) as an adjoint tractor."""
        conf, N, ch = self.conf, self.N, self.chart
        Y, Wl = conf.Y, conf.W_low
        rho = Tensor(ch, "d", {(d,): -Y[(d, a, b)] for d in range(N)})
        mu = Tensor(ch, "dd", {(d0, d1): Wl[(a, b, d0, d1)] for d0 in range(N) for d1 in range(N)})
        return AdjTractor(rho, mu, ch.zero(), Tensor(ch, "d", {}))

    def L0_adjoint(self, k_vec):
        """Splitting operator on a vector field k (lowered to k_a)."""
        conf, N, ch = self.conf, self.N, self.chart
        n = N // 2
        D, g, ginv = conf.D, conf.g, conf.ginv
        k = lower_index(k_vec, g, 0)
        Dk = covariant_derivative(k, D)             # (p, q) -> D_p k_q
        DDk = covariant_derivative(Dk, D)           # (a, p, q) -> D_a D_p k_q
        mu = {}
        for (p, q), v in Dk.comps.items():
            _add_into(mu, (p, q), v * Q(1, 2))
            _add_into(mu, (q, p), v * Q(-1, 2))
        div = ch.zero()
        for (p, q), v in ginv.comps.items():
            d = Dk.comps.get((p, q))
            if d is not None:
                div = div + v * d
        phi = div * Q(-1, N)
        rho = {}
        for a in range(N):
            v = ch.zero()
            for (p, q), gv in ginv.comps.items():
                # D^p D_p k_a = g^pq D_q D_p k_a ; D^p D_a k_p = g^pq D_q D_a k_p
                v = v + gv * (DDk[(q, p, a)] * Q(-1, 4 * n) + DDk[(q, a, p)] * Q(1, 4 * n))
                # Ρ^p_a k_p = g^pq Ρ_qa k_p
                pq = conf.P[(q, a)]
                if pq:
                    v = v + gv * pq * k[(p,)] * Q(1, n)
            v = v + div.diff(a) * Q(1, 4 * n * n)
            v = v - conf.J * k[(a,)] * Q(1, 2 * n)
            _add_into(rho, (a,), v)
        return AdjTractor(Tensor(ch, "d", rho), Tensor(ch, "dd", mu), phi, k)

    def K_square_residuals(self, A):
        """The six slot equations equivalent to K² = id."""
        conf, N, ch = self.conf, self.N, self.chart
        g, ginv = conf.g, conf.ginv
        k_up = raise_index(A.k, ginv, 0)
        rho_up = raise_index(A.rho, ginv, 0)
        mu_ud = raise_index(A.mu, ginv, 0)          # μ^a_b
        res = {}
        res["k.k"] = _dot(k_up, A.k, ch)
        res["rho.rho"] = _dot(rho_up, A.rho, ch)
        t1, t2 = {}, {}
        for (a, b), v in mu_ud.comps.items():
            _add_into(t1, (a,), v * k_up[(b,)])
            _add_into(t2, (a,), v * rho_up[(b,)])
        for a in range(N):
            _add_into(t1, (a,), -(A.phi * k_up[(a,)]))
            _add_into(t2, (a,), A.phi * rho_up[(a,)])
        res["mu.k - phi k"] = Tensor(ch, "u", t1)
        res["mu.rho + phi rho"] = Tensor(ch, "u", t2)
        res["k.rho - (phi^2 - 1)"] = _dot(k_up, A.rho, ch) - (A.phi * A.phi - 1)
        mm = {}
        mu_du = raise_index(A.mu, ginv, 1)          # μ_a^c
        for (a, c), v in mu_du.comps.items():
            for b in range(N):
                w = A.mu[(c, b)]
                if w:
                    _add_into(mm, (a, b), v * w)
        for (a, b), v in g.comps.items():
            _add_into(mm, (a, b), -v)
        for a in range(N):
            for b in range(N):
                _add_into(mm, (a, b), -(A.k[(a,)] * A.rho[(b,)] + A.k[(b,)] * A.rho[(a,)]))
        res["mu.mu - g - 2k(rho)"] = Tensor(ch, "dd", mm)
        return res


def _dot(up, down, ch):
    s = ch.zero()
    for (a,), v in up.comps.items():
        w = down.comps.get((a,))
        if w is not None:
            s = s + v * w
    return s


@dataclass
class AdjTractor:
    rho: Tensor
    mu: Tensor
    phi: object
    k: Tensor

    def slots(self):
        return {"rho": self.rho, "mu": self.mu, "phi": self.phi, "k": self.k}

    def is_zero(self):
        return self.rho.is_zero() and self.mu.is_zero() and not self.phi and self.k.is_zero()

    def __sub__(self, other):
        return AdjTractor(self.rho - other.rho, self.mu - other.mu, self.phi - other.phi,
                          self.k - other.k)


def residual_is_zero(x):
    if isinstance(x, Tensor):
        return x.is_zero()
    if isinstance(x, AdjTractor):
        return x.is_zero()
    if isinstance(x, Spinor):
        return not x.comps
    if isinstance(x, (list, tuple)):
        return all(residual_is_zero(y) for y in x)
    return not x


# ---------------------------------------------------------------------------
# spin tractors

@dataclass
class SpinTractor:
    tau: Spinor
    chi: Spinor

    def __add__(self, other):
        return SpinTractor(self.tau + other.tau, self.chi + other.chi)

    def __sub__(self, other):
        return SpinTractor(self.tau - other.tau, self.chi - other.chi)

    def scale(self, c):
        return SpinTractor(self.tau.scale(c), self.chi.scale(c))

    def is_zero(self):
        return not self.tau.comps and not self.chi.comps


def _szero(n, root2=0):
    return Spinor(n, {}, root2)


class SpinTractorCalculus:
    """Spin tractor operations built on a ``SpinFrame`` and its ``TractorContext``."""

    def __init__(self, spin_frame):
        self.sf = spin_frame
        self.ctx = TractorContext(spin_frame.conf, spin_frame)
        self.n = spin_frame.n
        self.N = spin_frame.N
        self.chart = spin_frame.chart

    def connection(self, S, c):
        """(D_c τ + (1/√2) Ρ_cp γ^p χ;  D_c χ + (1/√2) γ_c τ)."""
        sf, P = self.sf, self.ctx.conf.P
        top = sf.derivative(S.tau, c)
        for p in range(self.N):
            v = P[(c, p)]
            if v and S.chi.comps:
                top = top + sf.gamma_up(p, S.chi).scale(v).with_root2_shift(-1)
        bottom = sf.derivative(S.chi, c)
        if S.tau.comps:
            bottom = bottom + sf.gamma_low(c, S.tau).with_root2_shift(-1)
        return SpinTractor(top, bottom)

    def nabla(self, S):
        return [self.connection(S, c) for c in range(self.N)]

    def clifford(self, T, S):
        """(ρ, φ, σ)·(τ, χ) = (-φ_a γ^a τ + √2 ρ χ;  φ_a γ^a χ - √2 σ τ)."""
        sf, n = self.sf, self.n
        rho, sigma = T[0], T[-1]
        top = _szero(n, S.tau.root2 + 1)
        bottom = _szero(n, S.chi.root2 + 1)
        for a in range(self.N):
            f = T[1 + a]
            if f:
                if S.tau.comps:
                    top = top - sf.gamma_up(a, S.tau).scale(f)
                if S.chi.comps:
                    bottom = bottom + sf.gamma_up(a, S.chi).scale(f)
        if rho and S.chi.comps:
            top = top + S.chi.scale(rho).with_root2_shift(1)
        if sigma and S.tau.comps:
            bottom = bottom - S.tau.scale(sigma).with_root2_shift(1)
        return SpinTractor(top, bottom)

    def std_basis(self):
        ch, size = self.chart, self.N + 2
        return [[ch.one() if i == J else ch.zero() for i in range(size)] for J in range(size)]

    def std_dual_basis(self):
        """T^J with h(T^J, T_L) = δ^J_L."""
        ch, N, last = self.chart, self.N, self.N + 1
        size = N + 2
        out = []
        for J in range(size):
            v = [ch.zero()] * size
            if J == 0:
                v[last] = ch.one()
            elif J == last:
                v[0] = ch.one()
            else:
                a = J - 1
                for b in range(N):
                    v[1 + b] = self.ctx.g[(a, b)]
            out.append(v)
        return out

    def spin_action(self, M, S, coeff=Q(1, 4)):
        """coeff * Σ M^L_J T^J · T_L · S for a matrix M in so(h)."""
        basis, dual = self.std_basis(), self.std_dual_basis()
        size = len(basis)
        out = None
        single = {}
        for L in range(size):
            col = [M[L][J] for J in range(size)]
            if not any(col):
                continue
            if L not in single:
                single[L] = self.clifford(basis[L], S)
            TS = single[L]
            for J in range(size):
                m = M[L][J]
                if m:
                    t = self.clifford(dual[J], TS).scale(m * coeff)
                    out = t if out is None else out + t
        if out is None:
            return SpinTractor(_szero(self.n, S.tau.root2), _szero(self.n, S.chi.root2))
        return out

    def L0_spin(self, chi):
        """((1/(√2 n)) D̸χ; χ)."""
        d = self.sf.dirac(chi).scale(Q(1, self.n)).with_root2_shift(-1)
        return SpinTractor(d, chi)


# ---------------------------------------------------------------------------
# dual spinors (the η side), via the top-degree pairing

def top_sign(S, T, dim):
    inv = 0
    for i in range(dim):
        if S >> i & 1:
            inv += _popcount(T & ((1 << i) - 1))
    return -1 if inv & 1 else 1


def transpose_apply(y, op, dim, one):
    """y' with top(y', s) = top(y, op(s)) for all s; ``op`` may shift the √2 exponent."""
    full = (1 << dim) - 1
    res = {}
    shift = None
    for S in range(1 << dim):
        img = op(Spinor(dim, {S: one}))
        if shift is None:
            shift = img.root2
        if img.root2 != shift:
            img = img.with_root2(shift)
        val = None
        for U, c in img.comps.items():
            d = y.comps.get(full ^ U)
            if d is not None:
                t = d * c if top_sign(full ^ U, U, dim) > 0 else -(d * c)
                val = t if val is None else val + t
        if val:
            T = full ^ S
            res[T] = val if top_sign(T, S, dim) > 0 else -val
    return Spinor(dim, res, y.root2 + (shift or 0))


def raw_top(y, s):
    """Top-degree pairing of coefficient maps, ignoring √2 exponents."""
    dim = y.dim
    full = (1 << dim) - 1
    total = None
    for S, c in y.comps.items():
        d = s.comps.get(full ^ S)
        if d is not None:
            t = c * d if top_sign(S, full ^ S, dim) > 0 else -(c * d)
            total = t if total is None else total + t
    return total


# ---------------------------------------------------------------------------
# eigentractor equations for s_F = (χ̄, χ) and s_E = (η̄, η)

def transposed_gamma(sf, X, y):
    """y γ(X), i.e. the dual spinor s -> top(y, γ(X) s)."""
    return transpose_apply(y, lambda s: sf.gamma(X, s), sf.n, sf.chart.one())


def s_E_slots(st, K, chi):
    """Dual tractor spinor (η̄, η) in a scale with χ̄ = 0, ρ = 0, φ = -1.

    η̄ is fixed by ⟨η̄, χ⟩ = -½ and by being annihilated by the horizontal frame;
    η then follows from k^a η̄_a + √2(φ - 1) η = 0.
    """
    sf = st.sf
    n, ch = sf.n, sf.chart
    full = (1 << n) - 1
    c = chi.rational().comps.get(full)
    if not c or len(chi.comps) != 1:
        raise ValueError("expected a multiple of the volume spinor")
    eta_bar = Spinor(n, {0: c.inverse() * Q(-1, 2)})
    k_up = raise_index(K.k, ctx_ginv(st), 0)
    t = transposed_gamma(sf, k_up, eta_bar)
    # η = k^a η̄_a / (√2 (1 - φ))
    eta = t.scale((1 - K.phi).inverse()).with_root2_shift(-1)
    return eta_bar, eta


def ctx_ginv(st):
    return st.ctx.ginv


def muchi_residuals(st, K, sE, chi):
    """k^a - 2√2 η(γ^a χ) and μ_ab - 2 η̄(γ_[a γ_b] χ), evaluated with the top pairing."""
    sf, N, ch = st.sf, st.N, st.chart
    eta_bar, eta = sE
    k_up = raise_index(K.k, ctx_ginv(st), 0)
    res_k, res_mu = [], []
    for a in range(N):
        v = _paired(eta, sf.gamma(_up_coord(st, a), chi), 3)
        res_k.append(k_up[(a,)] - v)
    for a in range(N):
        for b in range(N):
            ab = sf.gamma_low(a, sf.gamma_low(b, chi))
            ba = sf.gamma_low(b, sf.gamma_low(a, chi))
            v = _paired(eta_bar, ab - ba, 0)
            res_mu.append(K.mu[(a, b)] - v)
    return {"k^a - 2sqrt2 eta gamma^a chi": res_k,
            "mu_ab - 2 etabar gamma_[a gamma_b] chi": res_mu}


def _paired(y, s, extra_root2):
    """√2^extra_root2 · top(y, s) as a rational function (odd powers rejected)."""
    if not y.comps or not s.comps:
        return s.comps and next(iter(s.comps.values())) * 0 or Q(0)
    r = y.root2 + s.root2 + extra_root2
    if r & 1:
        raise ValueError("pairing leaves an odd power of sqrt(2)")
    v = raw_top(y, s)
    if v is None:
        return next(iter(s.comps.values())) * 0
    return v * Q(2) ** (r // 2) if r >= 0 else v / Q(2) ** (-r // 2)


def eigentractor_residuals(st, K, sE, sF):
    """The twelve slot equations equivalent to K V = -V on F and K U = U on E."""
    sf, N, ch = st.sf, st.N, st.chart
    ginv = ctx_ginv(st)
    eta_bar, eta = sE
    chi_bar, chi = sF
    k_up = raise_index(K.k, ginv, 0)
    rho_up = raise_index(K.rho, ginv, 0)
    mu_uu = raise_index(raise_index(K.mu, ginv, 0), ginv, 1)
    phi = K.phi
    r2 = lambda s: s.with_root2_shift(1)   # √2 s

    def g_(X, s):
        return sf.gamma(X, s)

    def tg(X, y):
        return transposed_gamma(sf, X, y)

    def mu_plus(s, sign, dual):
        """(μ^a_b + sign δ^a_b) γ^b s for each a, using μ^a_b γ^b = γ(μ^ab ∂_b)."""
        out = []
        for a in range(N):
            X = Tensor(ch, "u", {(b,): v for (x, b), v in mu_uu.comps.items() if x == a})
            img = tg(X, s) if dual else g_(X, s)
            up_a = _up_coord(st, a)
            extra = tg(up_a, s) if dual else g_(up_a, s)
            out.append(img + extra.scale(sign))
        return out

    res = {}
    # χ side
    res["k^a chi_a"] = g_(k_up, chi)
    res["k^a chibar_a - sqrt2(phi+1) chi"] = g_(k_up, chi_bar) - r2(chi.scale(phi + 1))
    res["(mu+1) chi + sqrt2 chibar k"] = [m + r2(chi_bar.scale(k_up[(a,)]))
                                          for a, m in enumerate(mu_plus(chi, 1, False))]
    res["(mu+1) chibar + sqrt2 chi rho"] = [m + r2(chi.scale(rho_up[(a,)]))
                                            for a, m in enumerate(mu_plus(chi_bar, 1, False))]
    res["rho^a chi_a + sqrt2(phi-1) chibar"] = g_(rho_up, chi) + r2(chi_bar.scale(phi - 1))
    res["rho^a chibar_a"] = g_(rho_up, chi_bar)
    # η side (dual spinors, Clifford action transposed)
    res["k^a eta_a"] = tg(k_up, eta)
    res["k^a etabar_a + sqrt2(phi-1) eta"] = tg(k_up, eta_bar) + r2(eta.scale(phi - 1))
    res["(mu-1) eta - sqrt2 etabar k"] = [m - r2(eta_bar.scale(k_up[(a,)]))
                                          for a, m in enumerate(mu_plus(eta, -1, True))]
    res["(mu-1) etabar - sqrt2 eta rho"] = [m - r2(eta.scale(rho_up[(a,)]))
                                            for a, m in enumerate(mu_plus(eta_bar, -1, True))]
    res["rho^a eta_a - sqrt2(phi+1) etabar"] = tg(rho_up, eta) - r2(eta_bar.scale(phi + 1))
    res["rho^a etabar_a"] = tg(rho_up, eta_bar)
    return res


def _up_coord(st, a):
    """g^ab ∂_b, the vector behind γ^a."""
    comps = {(b,): v for (x, b), v in st.ctx.ginv.comps.items() if x == a}
    return Tensor(st.chart, "u", comps)


def pairing_check(sE, sF):
    """⟨s_E, s_F⟩ = η̄(χ) + η(χ̄), computed with the top-degree pairing."""
    eta_bar, eta = sE
    chi_bar, chi = sF
    total = None
    for y, s in ((eta_bar, chi), (eta, chi_bar)):
        if not y.comps or not s.comps:
            continue
        r = y.root2 + s.root2
        v = raw_top(y, s)
        if v is None:
            continue
        if r & 1:
            raise ValueError("pairing leaves an odd power of sqrt(2)")
        v = v * Q(2) ** (r // 2) if r >= 0 else v / Q(2) ** (-r // 2)
        total = v if total is None else total + v
    return total
