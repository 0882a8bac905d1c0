"""Projective structures: projective change, special representatives, Schouten, Weyl, Cotton.

Densities are trivialised by the coordinate volume dx^1^...^dx^n, so a special
representative is one with vanishing trace Γ^P_PB.
"""

import logging

from .exact_core import Q, RatFunc
from .tensor_calc import (Chart, Connection, Tensor, _add_into, antisymmetrize, contract,
                          covariant_derivative, permute, riemann, ricci, tensor_product)

log = logging.getLogger(__name__)


class PreconditionError(ValueError):
    pass


class ProjectiveStructure:
    """A projective class on a chart, given by a torsion-free representative.

    ``volume`` must be a nonzero constant; a non-constant volume density is
    rejected since all formulas below assume the coordinate volume.
    """

    def __init__(self, representative, volume=1, name=None, normalize=True):
        self.chart = representative.chart
        self.n = self.chart.dim
        vol = self.chart.scalar(volume)
        if not vol.is_constant() or not vol:
            raise PreconditionError("volume density must be a nonzero constant")
        self.volume = vol
        self.name = name or "structure"
        self.original = representative
        self.normalized = False
        if normalize and not is_special(representative):
            representative = make_special(representative)
            self.normalized = True
            log.info("%s: representative was not special; applied projective change "
                     "with Upsilon = -trace(Gamma)/(n+1)", self.name)
        self.representative = representative

    @property
    def special(self):
        return is_special(self.representative)

    def curvature(self):
        D = self.representative
        return {"P": proj_schouten(D), "W": proj_weyl(D), "Y": proj_cotton(D)}


def projective_change(D, ups):
    """Γ̂^C_AB = Γ^C_AB + Υ_A δ^C_B + Υ_B δ^C_A."""
    if ups.valence != "d":
        raise ValueError("Upsilon must be a one-form")
    G = dict(D.gamma)
    n = D.chart.dim
    for (a,), u in ups.comps.items():
        for c in range(n):
            _add_into(G, (c, a, c), u)
            _add_into(G, (c, c, a), u)
    return Connection(D.chart, G, check_symmetry=False)


def is_special(D, volume=1):
    """∇vol = 0 for a constant volume density, i.e. Γ^P_PB = 0."""
    vol = D.chart.scalar(volume)
    if not vol.is_constant():
        return False
    return D.trace_form().is_zero()


def special_gauge(D):
    """Υ_B = -Γ^P_PB/(n+1), making the changed connection special."""
    n = D.chart.dim
    return D.trace_form().scale(Q(-1, n + 1))


def make_special(D):
    return projective_change(D, special_gauge(D))


def _require_special(D):
    if not is_special(D):
        raise PreconditionError("connection is not special (Γ^P_PB != 0)")


def schouten_general(D):
    """Ρ_AB = Ric_(AB)/(n-1) + Ric_[AB]/(n+1); agrees with Ric/(n-1) for special D."""
    n = D.chart.dim
    Ric = ricci(riemann(D))
    RicT = permute(Ric, [1, 0])
    sym = (Ric + RicT).scale(Q(1, 2 * (n - 1)))
    alt = (Ric - RicT).scale(Q(1, 2 * (n + 1)))
    return sym + alt


def proj_schouten(D, R=None):
    """Ρ_AB = R_PA^P_B/(n-1) for a special connection."""
    _require_special(D)
    n = D.chart.dim
    if n < 2:
        raise PreconditionError("dimension must be at least 2")
    if R is None:
        R = riemann(D)
    return ricci(R).scale(Q(1, n - 1))


def proj_weyl(D, R=None, P=None):
    """W_AB^C_D = R_AB^C_D + Ρ_AD δ^C_B - Ρ_BD δ^C_A."""
    _require_special(D)
    if R is None:
        R = riemann(D)
    if P is None:
        P = proj_schouten(D, R)
    n = D.chart.dim
    W = dict(R.comps)
    for (x, d), v in P.comps.items():
        for y in range(n):
            _add_into(W, (x, y, y, d), v)     # Ρ_AD δ^C_B: A=x, B=C=y
            _add_into(W, (y, x, y, d), -v)    # -Ρ_BD δ^C_A: B=x, A=C=y
    return Tensor(D.chart, "ddud", W)


def proj_cotton(D, P=None):
    """Y_CAB = 2 D_[A Ρ_B]C."""
    _require_special(D)
    if P is None:
        P = proj_schouten(D)
    DP = covariant_derivative(P, D)          # (A, B, C) -> D_A Ρ_BC
    Y = DP - permute(DP, [1, 0, 2])          # D_A Ρ_BC - D_B Ρ_AC
    return permute(Y, [2, 0, 1])             # index order C, A, B


def schouten_change_law(D, ups, P=None):
    """Predicted Schouten of the changed connection: Ρ - D_A Υ_B + Υ_A Υ_B."""
    if P is None:
        P = proj_schouten(D)
    DU = covariant_derivative(ups, D)
    return P - DU + tensor_product(ups, ups)


def dual_tractor_derivative(D, phi, sigma, P=None):
    """Projective dual tractor connection on (φ_A; σ):
    ∇_C(φ_A; σ) = (D_C φ_A + Ρ_CA σ; D_C σ - φ_C)."""
    if P is None:
        P = proj_schouten(D)
    chart = D.chart
    top = covariant_derivative(phi, D) + tensor_product(P, Tensor(chart, "", {(): sigma}))
    dsig = Tensor(chart, "d", {(c,): sigma.diff(c) for c in range(chart.dim)})
    bottom = dsig - phi
    return top, bottom


def dual_tractor_curvature_check(D):
    """Curvature of the dual tractor connection on (φ; σ) in terms of W and Y.

    Returns (top residual, bottom residual) for generic slots, both expected zero:
    [∇_A, ∇_B](φ_C; σ) = (-W_AB^P_C φ_P - Y_CAB σ... ) is checked through the
    equivalent statement that the curvature annihilates the bottom slot and acts
    on φ through W and Y.
    """
    chart = D.chart
    n = chart.dim
    R = riemann(D)
    P = proj_schouten(D, R)
    W = proj_weyl(D, R, P)
    Y = proj_cotton(D, P)
    # symbolic generic slots: use coordinate functions as test sections
    x = [chart.var(i) for i in range(n)]
    phi = Tensor(chart, "d", {(i,): x[i] * x[(i + 1) % n] + i + 1 for i in range(n)})
    sigma = chart.one() + x[0] * x[0]

    def nabla(ph, sg):
        return dual_tractor_derivative(D, ph, sg, P)

    top1, bot1 = nabla(phi, sigma)   # top1: (C, A), bot1: (C,)
    res_top = {}
    res_bot = {}
    # second derivative in direction B of the section (top1[C,.], bot1[C]) for each C
    for c in range(n):
        ph_c = Tensor(chart, "d", {(a,): top1[(c, a)] for a in range(n)})
        sg_c = bot1[(c,)]
        t2, b2 = nabla(ph_c, sg_c)
        # t2[(B, A)] = ∇_B of component c; need correction for the C index as a 1-form:
        for (b, a), v in t2.comps.items():
            _add_into(res_top, (b, c, a), v)
        for (b,), v in b2.comps.items():
            _add_into(res_bot, (b, c), v)
    # correct for the derivative index C itself (covariant in C)
    for (e, b, c0), g in D.gamma.items():
        # ∇_B acting on the form index C contributes -Γ^E_BC (.)_E
        for a in range(n):
            v = top1[(e, a)]
            if v:
                _add_into(res_top, (b, c0, a), -(g * v))
        v = bot1[(e,)]
        if v:
            _add_into(res_bot, (b, c0), -(g * v))
    # antisymmetrise in (B, C): F_BC = ∇_B∇_C - ∇_C∇_B
    top_T = Tensor(chart, "ddd", res_top)
    bot_T = Tensor(chart, "dd", res_bot)
    F_top = top_T - permute(top_T, [1, 0, 2])
    F_bot = bot_T - permute(bot_T, [1, 0])
    # expected: F_BC(φ;σ) = (-W_BC^P_A φ_P + Y_ABC σ... ) in the form
    #   top_A = -W_BC^P_A φ_P + Y_ABC σ,  bottom = 0
    exp = {}
    for (b, c, p, a), w in W.comps.items():
        v = phi.comps.get((p,))
        if v is not None:
            _add_into(exp, (b, c, a), -(w * v))
    for (a, b, c), y in Y.comps.items():
        _add_into(exp, (b, c, a), y * sigma)
    return (F_top - Tensor(chart, "ddd", exp)), F_bot
