"""Double-precision finite-difference oracle for the curvature quantities.

Independent of the exact engine except for reading off the input data
(connection coefficients or metric components).  Derivatives use the
five-point central stencil; higher quantities nest it, so the Cotton tensor of
a metric takes three nested levels.  Polynomial inputs are compiled to numpy
arrays and evaluated on batches of points.
"""

import random

import numpy as np

from .exact_core import Q, unpack
from .projective import proj_cotton, proj_schouten, proj_weyl
from .tensor_calc import riemann

DEFAULT_STEP = 1e-2


class Compiled:
    """Vectorised evaluator of a RatFunc (numerator and denominator)."""

    def __init__(self, f):
        self.nvars = f.nvars
        self.num = self._pack(f.num)
        self.den = self._pack(f.den)

    def _pack(self, p):
        if not p.terms:
            return np.zeros((0, self.nvars), dtype=np.int64), np.zeros(0)
        exps = np.array([unpack(m, self.nvars) for m in p.terms], dtype=np.int64)
        coefs = np.array([float(c) for c in p.terms.values()])
        return exps, coefs

    @staticmethod
    def _eval(packed, X):
        exps, coefs = packed
        if not len(coefs):
            return np.zeros(X.shape[0])
        return np.prod(X[:, None, :] ** exps[None, :, :], axis=2) @ coefs

    def __call__(self, X):
        return self._eval(self.num, X) / self._eval(self.den, X)


def compile_tensor(T, shape):
    """Batch evaluator X (P, nv) -> array (P, *shape) for a Tensor."""
    items = [(k, Compiled(v)) for k, v in T.comps.items()]

    def fn(X):
        out = np.zeros((X.shape[0],) + tuple(shape))
        for k, f in items:
            out[(slice(None),) + tuple(k)] = f(X)
        return out
    return fn


def compile_gamma(conn):
    n = conn.chart.dim
    items = [(k, Compiled(v)) for k, v in conn.gamma.items()]

    def fn(X):
        out = np.zeros((X.shape[0], n, n, n))
        for (c, a, b), f in items:
            out[:, c, a, b] = f(X)
        return out
    return fn


def partials(fn, X, h=DEFAULT_STEP):
    """(P, nv, *shape): ∂_i fn at each point by the five-point stencil."""
    P, nv = X.shape
    stacks = []
    for i in range(nv):
        e = np.zeros(nv)
        e[i] = h
        stacks += [X + 2 * e, X + e, X - e, X - 2 * e]
    vals = fn(np.concatenate(stacks, axis=0))
    vals = vals.reshape((nv, 4, P) + vals.shape[1:])
    d = (-vals[:, 0] + 8 * vals[:, 1] - 8 * vals[:, 2] + vals[:, 3]) / (12 * h)
    return np.moveaxis(d, 0, 1)


def riemann_fd(gamma_fn, h=DEFAULT_STEP):
    """R_ab^c_d = ∂_a Γ^c_bd - ∂_b Γ^c_ad + Γ^c_ae Γ^e_bd - Γ^c_be Γ^e_ad."""
    def fn(X):
        G = gamma_fn(X)
        dG = partials(gamma_fn, X, h)                # (P, a, c, b, d)
        R = np.einsum("pacbd->pabcd", dG) - np.einsum("pbcad->pabcd", dG)
        R = R + np.einsum("pcae,pebd->pabcd", G, G) - np.einsum("pcbe,pead->pabcd", G, G)
        return R
    return fn


def covariant_d2(T_fn, gamma_fn, h=DEFAULT_STEP):
    """D_a T_bc for a covariant 2-tensor."""
    def fn(X):
        T = T_fn(X)
        G = gamma_fn(X)
        dT = partials(T_fn, X, h)
        return dT - np.einsum("peab,pec->pabc", G, T) - np.einsum("peac,pbe->pabc", G, T)
    return fn


def cotton_from(P_fn, gamma_fn, h=DEFAULT_STEP):
    """Y_cab = D_a Ρ_bc - D_b Ρ_ac."""
    DP = covariant_d2(P_fn, gamma_fn, h)

    def fn(X):
        d = DP(X)
        return np.einsum("pabc->pcab", d - np.swapaxes(d, 1, 2))
    return fn


# ---------------------------------------------------------------------------
# projective side

def projective_oracle(conn, h=DEFAULT_STEP):
    """Float evaluators for R, Ρ, W, Y of a torsion-free connection."""
    n = conn.chart.dim
    G = compile_gamma(conn)
    R = riemann_fd(G, h)
    eye = np.eye(n)

    def P(X):
        Ric = np.einsum("pabad->pbd", R(X))
        RicT = np.swapaxes(Ric, 1, 2)
        return (Ric + RicT) / (2 * (n - 1)) + (Ric - RicT) / (2 * (n + 1))

    def W(X):
        Pv = P(X)
        return (R(X) + np.einsum("pad,cb->pabcd", Pv, eye)
                - np.einsum("pbd,ca->pabcd", Pv, eye))

    return {"riemann": R, "schouten": P, "weyl": W, "cotton": cotton_from(P, G, h)}


def projective_exact(conn):
    R = riemann(conn)
    P = proj_schouten(conn, R)
    return {"riemann": R, "schouten": P, "weyl": proj_weyl(conn, R, P),
            "cotton": proj_cotton(conn, P)}


# ---------------------------------------------------------------------------
# conformal side

def conformal_oracle(metric, h=DEFAULT_STEP):
    N = metric.chart.dim
    gfn = compile_tensor(metric.g, (N, N))

    def gamma(X):
        g = gfn(X)
        gi = np.linalg.inv(g)
        dg = partials(gfn, X, h)                      # (P, i, a, b) = ∂_i g_ab
        low = np.einsum("padb->pdab", dg) + np.einsum("pbda->pdab", dg) - dg
        return 0.5 * np.einsum("pcd,pdab->pcab", gi, low)

    R = riemann_fd(gamma, h)

    def P(X):
        g = gfn(X)
        gi = np.linalg.inv(g)
        Ric = np.einsum("pabad->pbd", R(X))
        Sc = np.einsum("pab,pab->p", gi, Ric)
        return (Ric - (Sc / (2 * (N - 1)))[:, None, None] * g) / (N - 2)

    def W(X):
        g = gfn(X)
        gi = np.linalg.inv(g)
        Pv = P(X)
        Pu = np.einsum("pbe,pec->pbc", Pv, gi)        # Ρ_b^c
        eye = np.eye(N)
        return (R(X) - np.einsum("ca,pbd->pabcd", eye, Pv) + np.einsum("cb,pad->pabcd", eye, Pv)
                + np.einsum("pda,pbc->pabcd", g, Pu) - np.einsum("pdb,pac->pabcd", g, Pu))

    return {"riemann": R, "schouten": P, "weyl": W, "cotton": cotton_from(P, gamma, h)}


def conformal_exact(conf):
    return {"riemann": conf.R, "schouten": conf.P, "weyl": conf.W, "cotton": conf.Y}


# ---------------------------------------------------------------------------
# comparison

def exact_values(T, points, shape):
    out = np.zeros((len(points),) + tuple(shape))
    for k, v in T.comps.items():
        for i, p in enumerate(points):
            out[(i,) + tuple(k)] = float(v.evaluate(p))
    return out


def random_points(nvars, count, seed, lo=-1, hi=1, den=7):
    rng = random.Random(seed)
    return [[Q(rng.randint(lo * den, hi * den), den) for _ in range(nvars)]
            for _ in range(count)]


def compare(exact, oracle, dim, points):
    """{name: max abs difference over the points}."""
    X = np.array([[float(x) for x in p] for p in points])
    shapes = {"riemann": (dim,) * 4, "schouten": (dim,) * 2, "weyl": (dim,) * 4,
              "cotton": (dim,) * 3}
    out = {}
    for name, shape in shapes.items():
        ex = exact_values(exact[name], points, shape)
        fd = oracle[name](X)
        out[name] = float(np.max(np.abs(ex - fd))) if ex.size else 0.0
    return out
