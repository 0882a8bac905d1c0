"""Conformal curvature, conformal Killing operator and the split-signature spinor calculus.

Spinors on the 2n-dimensional Walker chart live in Λ•R^n.  With the null frame
(V_a = ∂p_a, H_a) of ``PWStructure``

    γ(V_a) = √2 e_a ∧ ,     γ(H_a) = -√2 ι_a,

so that γ(X)γ(Y) + γ(Y)γ(X) = -2 g(X, Y).  Powers of √2 are carried by the
``root2`` exponent of ``Spinor``.  Weighted spinors are trivialised by a scale;
the optional ``density`` (f, w) represents f^w times the given components.
"""

from fractions import Fraction

from . import linalg
from .exact_core import Q
from .exterior import Spinor
from .tensor_calc import (Metric, Tensor, _add_into, contract, covariant_derivative,
                          levi_civita, lower_index, permute, raise_index, riemann, ricci,
                          symmetrize, tensor_product)


class DegenerateSpinorError(ValueError):
    pass


class ConformalData:
    """Levi-Civita curvature of a metric, computed lazily and cached.

    Ρ = (Ric - Sc g / (2(N-1))) / (N-2), J = g^pq Ρ_pq,
    W_ab^c_d = R_ab^c_d - 2δ^c_[a Ρ_b]d + 2 g_d[a Ρ_b]^c,  Y_cab = 2 D_[a Ρ_b]c.
    """

    def __init__(self, metric, connection=None):
        self.metric = metric
        self.g = metric.g
        self.ginv = metric.ginv
        self.chart = metric.chart
        self.N = self.chart.dim
        self._lc = connection
        self._cache = {}

    def _get(self, key, fn):
        if key not in self._cache:
            self._cache[key] = fn()
        return self._cache[key]

    @property
    def D(self):
        if self._lc is None:
            self._lc = levi_civita(self.metric)
        return self._lc

    @property
    def R(self):
        return self._get("R", lambda: riemann(self.D))

    @property
    def Ric(self):
        return self._get("Ric", lambda: ricci(self.R))

    @property
    def Sc(self):
        return self._get("Sc", lambda: _full_trace(self.Ric, self.ginv))

    @property
    def P(self):
        def make():
            N = self.N
            if N < 3:
                raise ValueError("conformal Schouten tensor needs dimension at least 3")
            c = self.Sc * Q(-1, 2 * (N - 1))
            return (self.Ric + self.g.scale(c)).scale(Q(1, N - 2))
        return self._get("P", make)

    @property
    def J(self):
        return self._get("J", lambda: _full_trace(self.P, self.ginv))

    @property
    def P_up(self):
        """Ρ_a^c (second index raised)."""
        return self._get("P_up", lambda: raise_index(self.P, self.ginv, 1))

    @property
    def W(self):
        """W_ab^c_d."""
        def make():
            N = self.N
            W = dict(self.R.comps)
            P, Pu, g = self.P, self.P_up, self.g
            for (b, d), v in P.comps.items():
                for a in range(N):
                    _add_into(W, (a, b, a, d), -v)      # -δ^c_a Ρ_bd
                    _add_into(W, (b, a, a, d), v)       # +δ^c_b Ρ_ad
            for (d, a), gv in g.comps.items():
                for (b, c), pv in Pu.comps.items():
                    t = gv * pv
                    _add_into(W, (a, b, c, d), t)       # +g_da Ρ_b^c
                    _add_into(W, (b, a, c, d), -t)      # -g_db Ρ_a^c
            return Tensor(self.chart, "ddud", W)
        return self._get("W", make)

    @property
    def W_low(self):
        """W_abcd = g_ce W_ab^e_d."""
        return self._get("W_low", lambda: lower_index(self.W, self.g, 2))

    @property
    def DP(self):
        return self._get("DP", lambda: covariant_derivative(self.P, self.D))

    @property
    def Y(self):
        """Y_cab."""
        def make():
            DP = self.DP                        # (a, b, c) -> D_a Ρ_bc
            Y = DP - permute(DP, [1, 0, 2])
            return permute(Y, [2, 0, 1])
        return self._get("Y", make)


def _full_trace(T, ginv):
    out = T.chart.zero()
    for k, v in T.comps.items():
        w = ginv.comps.get(k)
        if w is not None:
            out = out + v * w
    return out


def conformal_curvature(metric):
    return ConformalData(metric)


def conformal_killing_residual(metric, xi, connection=None):
    """Trace-free part of D_(a ξ_b)."""
    D = connection or levi_civita(metric)
    N = metric.chart.dim
    xl = lower_index(xi, metric.g, 0)
    Dx = covariant_derivative(xl, D)
    sym = symmetrize(Dx, [0, 1])
    div = _full_trace(Dx, metric.ginv)
    return sym - metric.g.scale(div * Q(1, N))


def divergence(xi, connection):
    return contract(covariant_derivative(xi, connection), 0, 1)[()]


def conformal_rescale(metric, omega):
    """ĝ = Ω² g with exact inverse g^-1 / Ω²."""
    chart = metric.chart
    omega = chart.scalar(omega)
    if not omega:
        raise ValueError("conformal factor vanishes identically")
    o2 = omega * omega
    g = metric.g.scale(o2)
    ginv = metric.ginv.scale(o2.inverse())
    return Metric(g, ginv)


def schouten_rescale_law(cd, omega):
    """Predicted Schouten of Ω²g: Ρ - ∇Υ + ΥΥ - ½|Υ|² g, Υ = dΩ/Ω."""
    chart = cd.chart
    omega = chart.scalar(omega)
    inv = omega.inverse()
    ups = Tensor(chart, "d", {(i,): omega.diff(i) * inv for i in range(chart.dim)})
    DU = covariant_derivative(ups, cd.D)
    sq = _full_trace(tensor_product(ups, ups), cd.ginv)
    return cd.P - DU + tensor_product(ups, ups) - cd.g.scale(sq * Q(1, 2))


# ---------------------------------------------------------------------------
# spinors

class SpinFrame:
    """Spinor calculus of a Walker metric, optionally for the rescaled metric Ω²g.

    The frame is (V_0..V_{n-1}, H_0..H_{n-1}), indices j < n vertical; for a
    rescaling the frame becomes e_j / Ω, still null with the same pairing.
    """

    def __init__(self, pw, omega=None):
        self.pw = pw
        self.n = n = pw.n
        self.chart = chart = pw.chart
        self.N = 2 * n
        if omega is None:
            self.omega = None
            self.metric = pw.metric
            self.conf = ConformalData(pw.metric, pw.levi_civita)
        else:
            self.omega = chart.scalar(omega)
            self.metric = conformal_rescale(pw.metric, self.omega)
            self.conf = ConformalData(self.metric)
        base = pw.vertical_frame() + pw.horizontal_frame()
        if self.omega is None:
            self.frame = base
        else:
            inv = self.omega.inverse()
            self.frame = [e.scale(inv) for e in base]
        self._omega_tables = None
        self._coord_gamma = None
        self._coord_gamma_up = None

    @property
    def D(self):
        return self.conf.D

    # frame bookkeeping
    def coefficients(self, X):
        """θ^j(X) for the frame in use, as a list of length 2n (V part then H part)."""
        alpha, beta = self.pw.frame_coefficients(X)
        c = alpha + beta
        if self.omega is not None:
            c = [v * self.omega for v in c]
        return c

    @staticmethod
    def dual_index(j, n):
        return j + n if j < n else j - n

    # Clifford action
    def gamma_frame(self, j, psi, coeff=None):
        """coeff * γ(e_j) psi (one extra power of √2)."""
        n = self.n
        if j < n:
            s = psi.wedge(j, 1 if coeff is None else coeff)
        else:
            s = psi.contract(j - n, -1 if coeff is None else -coeff)
        return s.with_root2_shift(1)

    def gamma(self, X, psi):
        """γ(X) psi for a vector field X."""
        out = Spinor(self.n, {}, psi.root2 + 1)
        for j, c in enumerate(self.coefficients(X)):
            if c:
                out = out + self.gamma_frame(j, psi, c)
        return out

    def coord_gamma(self):
        """Frame coefficients of ∂_a (for γ_a) and of g^ab ∂_b (for γ^a)."""
        if self._coord_gamma is None:
            N, ch = self.N, self.chart
            low, up = [], []
            for a in range(N):
                low.append(self.coefficients(Tensor(ch, "u", {(a,): 1})))
                comps = {(b,): v for (x, b), v in self.metric.ginv.comps.items() if x == a}
                up.append(self.coefficients(Tensor(ch, "u", comps)))
            self._coord_gamma, self._coord_gamma_up = low, up
        return self._coord_gamma, self._coord_gamma_up

    def gamma_low(self, a, psi):
        return self._apply_coeffs(self.coord_gamma()[0][a], psi)

    def gamma_up(self, a, psi):
        return self._apply_coeffs(self.coord_gamma()[1][a], psi)

    def _apply_coeffs(self, coeffs, psi):
        out = Spinor(self.n, {}, psi.root2 + 1)
        for j, c in enumerate(coeffs):
            if c:
                out = out + self.gamma_frame(j, psi, c)
        return out

    # spin connection
    def omega_tables(self):
        """For each coordinate direction i: [(ω^l_j(∂_i), j, l)], ω^l_j = θ^l(∇ e_j)."""
        if self._omega_tables is None:
            D = self.D
            tables = []
            derivs = [covariant_derivative(e, D) for e in self.frame]
            for i in range(self.N):
                row = []
                for j, De in enumerate(derivs):
                    Y = Tensor(self.chart, "u", {(c,): v for (x, c), v in De.comps.items()
                                                 if x == i})
                    for l, w in enumerate(self.coefficients(Y)):
                        if w:
                            row.append((w, j, l))
                tables.append(row)
            self._omega_tables = tables
        return self._omega_tables

    def derivative(self, psi, i, density=None):
        """D_i psi = ∂_i psi + ¼ ω^l_j(∂_i) γ(e^j) γ(e_l) psi (+ w ∂_i f / f psi)."""
        n = self.n
        out = psi.map_coeffs(lambda c: c.diff(i))
        for w, j, l in self.omega_tables()[i]:
            t = self.gamma_frame(self.dual_index(j, n), self.gamma_frame(l, psi), w * Q(1, 4))
            out = out + t
        if density is not None:
            f, wt = density
            f = self.chart.scalar(f)
            df = f.diff(i)
            if df:
                out = out + psi.scale(df * f.inverse() * Q(wt))
        return out

    def nabla(self, psi, density=None):
        """All coordinate derivatives [D_0 psi, ..., D_{N-1} psi]."""
        return [self.derivative(psi, i, density) for i in range(self.N)]

    def derivative_along(self, X, psi, density=None, nabla=None):
        nab = nabla if nabla is not None else self.nabla(psi, density)
        out = Spinor(self.n, {}, psi.root2)
        for (i,), x in X.comps.items():
            out = out + nab[i].scale(x)
        return out

    def dirac(self, psi, density=None, nabla=None):
        """γ^p D_p psi."""
        nab = nabla if nabla is not None else self.nabla(psi, density)
        out = Spinor(self.n, {}, psi.root2 + 1)
        for p in range(self.N):
            out = out + self.gamma_up(p, nab[p])
        return out

    def twistor_residual(self, psi, density=None):
        """[D_a psi + (1/2n) γ_a D̸ psi for each coordinate index a]."""
        nab = self.nabla(psi, density)
        dpsi = self.dirac(psi, nabla=nab)
        c = Q(1, self.N)
        return [nab[a] + self.gamma_low(a, dpsi).scale(c) for a in range(self.N)]

    def lie_derivative(self, k, psi, density=None):
        """ℒ_k psi = D_k psi - ¼ μ_ab γ^a γ^b psi - (1/4n)(D_p k^p) psi, μ_ab = D_[a k_b]."""
        D = self.D
        nab = self.nabla(psi, density)
        out = self.derivative_along(k, psi, nabla=nab)
        kl = lower_index(k, self.metric.g, 0)
        Dk = covariant_derivative(kl, D)
        mu = (Dk - permute(Dk, [1, 0])).scale(Q(1, 2))
        mu_up = raise_index(raise_index(mu, self.metric.ginv, 0), self.metric.ginv, 1)
        # μ_ab γ^a γ^b = μ^ab γ_a γ_b
        for (a, b), v in mu_up.comps.items():
            out = out + self.gamma_low(a, self.gamma_low(b, psi)).scale(v * Q(-1, 4))
        div = divergence(k, D)
        if div:
            out = out + psi.scale(div * Q(-1, 2 * self.N))
        return out

    # algebraic properties
    def kernel_matrix(self, psi):
        """Columns γ(e_j) psi; rows indexed by spinor components."""
        cols = [self.gamma_frame(j, psi) for j in range(self.N)]
        masks = sorted({S for c in cols for S in c.comps})
        r = min((c.root2 for c in cols), default=0)
        cols = [c.with_root2(r) if c.comps else c for c in cols]
        zero = self.chart.zero()
        return [[c.comps.get(S, zero) for c in cols] for S in masks]

    def kernel(self, psi):
        """Frame coefficient vectors spanning {v : γ(v) psi = 0}."""
        if not psi.comps:
            raise DegenerateSpinorError("zero spinor has no meaningful kernel")
        rows = self.kernel_matrix(psi)
        return linalg.nullspace(rows, self.N, self.chart.zero(), self.chart.one())

    def is_pure(self, psi):
        return len(self.kernel(psi)) == self.n

    def clifford_check(self):
        """γ(e_i)γ(e_j) + γ(e_j)γ(e_i) + 2 g(e_i, e_j) = 0 on all basis spinors and frame pairs."""
        n = self.n
        for S in range(1 << n):
            psi = Spinor(n, {S: self.chart.one()})
            for i in range(self.N):
                for j in range(self.N):
                    lhs = self.gamma_frame(i, self.gamma_frame(j, psi)) + \
                        self.gamma_frame(j, self.gamma_frame(i, psi))
                    gij = self.metric.inner(self.frame[i], self.frame[j])
                    total = lhs + psi.scale(gij * 2)
                    if not all(not c for c in total.rational().comps.values()):
                        return False
        return True


def chi_vol(pw):
    """e_1 ∧ ... ∧ e_n, the parallel pure spinor in the Walker scale."""
    n = pw.n
    return Spinor(n, {(1 << n) - 1: pw.chart.one()})


def spinor_is_zero(psi):
    return all(not c for c in psi.comps.values())


def weight_of(density):
    return Fraction(0) if density is None else Fraction(density[1])
