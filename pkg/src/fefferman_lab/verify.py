"""Verification suites for Patterson-Walker metrics and the Lie-algebraic model.

Each check evaluates an exact residual (a polynomial, tensor, spinor, tractor
or matrix) and passes iff it vanishes identically.  Residuals are summarised by
their number of nonzero components and their largest absolute value at a few
fixed rational sample points.  Reports round-trip through JSON.
"""

import json
import os
import random
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from gmpy2 import mpq

from . import kostant_lab as kl
from . import linalg
from .conformal_spin import SpinFrame, chi_vol, conformal_killing_residual
from .exact_core import Q, PoleError, RatFunc
from .exterior import Spinor
from .projective import (ProjectiveStructure, dual_tractor_curvature_check, proj_cotton,
                         proj_schouten, proj_weyl)
from .pw_fefferman import PWStructure
from .tensor_calc import Chart, Connection, Tensor, lie_bracket, permute, raise_index
from .tractor import (AdjTractor, SpinTractor, SpinTractorCalculus, eigentractor_residuals,
                      mat_add, mat_bracket, mat_identity, mat_is_zero, mat_mul, mat_scale,
                      mat_sub, mat_trace, muchi_residuals, pairing_check, s_E_slots)

FORMAT_VERSION = 1
PASS, FAIL, INFO = "pass", "fail", "info"


# ---------------------------------------------------------------------------
# report data

@dataclass
class Check:
    suite: str
    name: str
    identity: str
    status: str
    residual: str
    seconds: float
    detail: dict = field(default_factory=dict)


@dataclass
class VerificationReport:
    structure: dict
    checks: list
    format_version: int = FORMAT_VERSION

    @property
    def passed(self):
        return all(c.status != FAIL for c in self.checks)

    def failures(self):
        return [c for c in self.checks if c.status == FAIL]

    def find(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self):
        return {"format_version": self.format_version, "structure": self.structure,
                "checks": [asdict(c) for c in self.checks]}

    @classmethod
    def from_dict(cls, d):
        if d.get("format_version") != FORMAT_VERSION:
            raise ValueError("unsupported report format_version %r" % d.get("format_version"))
        return cls(d["structure"], [Check(**c) for c in d["checks"]], d["format_version"])

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))

    def render(self):
        s = self.structure
        head = "structure: %s (n=%s)" % (s.get("name", "?"), s.get("n", "?"))
        lines = [head]
        w = max([len(c.name) for c in self.checks] + [5])
        for c in self.checks:
            lines.append("%-4s  %-*s  %s  [%s]" % (c.status.upper(), w, c.name, c.residual,
                                                    c.identity))
        nf = len(self.failures())
        lines.append("%d checks, %d failed: %s" % (len(self.checks), nf,
                                                   "ALL PASS" if nf == 0 else
                                                   ", ".join(c.name for c in self.failures())))
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# residual summaries

def leaves(x):
    """All scalar entries of a residual, flattened."""
    if isinstance(x, Tensor):
        return list(x.comps.values())
    if isinstance(x, AdjTractor):
        return leaves(x.rho) + leaves(x.mu) + [x.phi] + leaves(x.k)
    if isinstance(x, Spinor):
        return list(x.comps.values())
    if isinstance(x, SpinTractor):
        return leaves(x.tau) + leaves(x.chi)
    if isinstance(x, dict):
        return [y for v in x.values() for y in leaves(v)]
    if isinstance(x, (list, tuple)):
        return [y for v in x for y in leaves(v)]
    return [x]


def sample_points(nvars, count=3, seed=0):
    rng = random.Random(1000 + seed)
    return [[Q(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(nvars)]
            for _ in range(count)]


def summarize(x, points=None):
    """(is_zero, text) for a residual."""
    vals = [v for v in leaves(x) if v]
    if not vals:
        return True, "0 (exact)"
    worst = 0.0
    for v in vals:
        if isinstance(v, RatFunc):
            if points is None:
                points = sample_points(v.nvars)
            for p in points:
                try:
                    worst = max(worst, abs(float(v.evaluate(p))))
                except PoleError:
                    pass
        else:
            worst = max(worst, abs(float(v)))
    return False, "nonzero: %d entries, max |.| = %.3g at samples" % (len(vals), worst)


def _timed(suite, name, identity, fn, mode="zero"):
    """Run fn() and wrap the result.  mode "zero": pass iff residual vanishes;
    "bool": fn returns (ok, text, detail); "info": report only."""
    t = time.perf_counter()
    try:
        out = fn()
    except Exception as e:                            # noqa: BLE001 - reported as a failure
        return Check(suite, name, identity, FAIL, "error: %s: %s" % (type(e).__name__, e),
                     round(time.perf_counter() - t, 4))
    dt = round(time.perf_counter() - t, 4)
    if mode == "zero":
        ok, text = summarize(out)
        return Check(suite, name, identity, PASS if ok else FAIL, text, dt)
    ok, text, detail = out
    status = INFO if mode == "info" else (PASS if ok else FAIL)
    return Check(suite, name, identity, status, text, dt, detail)


# ---------------------------------------------------------------------------
# structures

def random_projective(n, seed, max_degree=2, coeff_range=3, name=None):
    """Random polynomial connection, made special by a projective change."""
    rng = random.Random(seed)
    chart = Chart(["x%d" % (i + 1) for i in range(n)])
    monos = [()]
    for d in range(1, max_degree + 1):
        monos += [m for m in _monomials(n, d)]
    gamma = {}
    for c in range(n):
        for a in range(n):
            for b in range(a, n):
                f = chart.zero()
                for m in monos:
                    k = rng.randint(-coeff_range, coeff_range)
                    if k and rng.random() < 0.4:
                        t = chart.const(k)
                        for i in m:
                            t = t * chart.var(i)
                        f = f + t
                if f:
                    gamma[(c, a, b)] = f
                    if a != b:
                        gamma[(c, b, a)] = f
    D = Connection(chart, gamma)
    return ProjectiveStructure(D, name=name or "random-n%d-seed%d" % (n, seed))


def _monomials(n, d, start=0):
    if d == 0:
        yield ()
        return
    for i in range(start, n):
        for rest in _monomials(n, d - 1, i):
            yield (i,) + rest


def flat_projective(n):
    chart = Chart(["x%d" % (i + 1) for i in range(n)])
    return ProjectiveStructure(Connection(chart, {}), name="flat%d" % n)


class FeffermanData:
    """Lazily built objects attached to one projective structure and its Walker metric."""

    def __init__(self, structure, perturbation=None, omega=None, meta=None):
        self.structure = structure
        self.n = structure.n
        self.perturbation = perturbation
        self.omega = omega
        self.meta = dict(meta or {})
        self._cache = {}

    def _get(self, key, make):
        if key not in self._cache:
            self._cache[key] = make()
        return self._cache[key]

    @property
    def pw(self):
        return self._get("pw", lambda: PWStructure(self.structure, self.perturbation))

    @property
    def sf(self):
        return self._get("sf", lambda: SpinFrame(self.pw))

    @property
    def st(self):
        return self._get("st", lambda: SpinTractorCalculus(self.sf))

    @property
    def ctx(self):
        return self.st.ctx

    @property
    def conf(self):
        return self.ctx.conf

    @property
    def k(self):
        return self._get("k", self.pw.euler_field)

    @property
    def chi(self):
        return self._get("chi", lambda: chi_vol(self.pw))

    @property
    def K(self):
        return self._get("K", lambda: self.ctx.L0_adjoint(self.k))

    @property
    def MK(self):
        return self._get("MK", lambda: self.ctx.adj_matrix(self.K))

    @property
    def F(self):
        return self._get("F", self.ctx.curvature)

    def F_ab(self, a, b):
        """Curvature matrix for any ordered pair."""
        if a == b:
            return None
        return self.F[(a, b)] if a < b else mat_scale(self.F[(b, a)], -1)

    @property
    def kernel_fields(self):
        """Vector fields spanning ker χ (from the frame coefficient kernel)."""
        def make():
            out = []
            for vec in self.sf.kernel(self.chi):
                X = None
                for c, e in zip(vec, self.sf.frame):
                    if c:
                        X = e.scale(c) if X is None else X + e.scale(c)
                out.append(X if X is not None else Tensor(self.pw.chart, "u", {}))
            return out
        return self._get("ker", make)

    def describe(self):
        d = {"name": self.structure.name, "n": self.n,
             "normalized": bool(self.structure.normalized),
             "perturbed": bool(self.perturbation),
             "conformal_factor": None if self.omega is None
             else self.omega.to_str(self.pw.chart.names)}
        d.update(self.meta)
        return d


def _sF(data):
    return SpinTractor(Spinor(data.n, {}, 0), data.chi)


# ---------------------------------------------------------------------------
# suites

def projective_suite(data):
    D = data.structure.representative
    n = data.n
    S = "projective"
    out = []
    cache = {}

    def P():
        if "P" not in cache:
            cache["P"] = proj_schouten(D)
        return cache["P"]

    def W():
        if "W" not in cache:
            cache["W"] = proj_weyl(D, None, P())
        return cache["W"]

    out.append(_timed(S, "schouten symmetric", "P_AB - P_BA",
                      lambda: P() - permute(P(), [1, 0])))
    out.append(_timed(S, "weyl trace-free", "W_AB^A_D",
                      lambda: _trace_02(W())))
    if n == 2:
        out.append(_timed(S, "weyl vanishes (n=2)", "W_AB^C_D", W))
    out.append(_timed(S, "dual tractor curvature", "[D_B, D_C](phi_A; s) = (-W_BC^P_A phi_P + Y_ABC s; 0)",
                      lambda: list(dual_tractor_curvature_check(D))))
    return out


def _trace_02(W):
    comps = {}
    for (a, b, c, d), v in W.comps.items():
        if a == c:
            comps[(b, d)] = comps.get((b, d), v * 0) + v
    return Tensor(W.chart, "dd", comps)


def characterize(data):
    """The defining properties of the Fefferman-type data on the Walker metric."""
    S = "characterize"
    n, N = data.n, 2 * data.n
    out = []
    out.append(_timed(S, "conformal Killing field k", "D_(a k_b) - (1/2n) D^c k_c g_ab",
                      lambda: conformal_killing_residual(data.pw.metric, data.k,
                                                         data.conf.D)))
    for key, val in data.ctx.K_square_residuals(data.K).items():
        out.append(_timed(S, "K^2 slot: %s" % key, "K^2 = id, slot " + key, lambda v=val: v))
    out.append(_timed(S, "twistor spinor chi", "D_a chi + (1/2n) gamma_a Dirac chi",
                      lambda: data.sf.twistor_residual(data.chi)))

    def purity():
        basis = data.st.std_basis()
        sF = _sF(data)
        cols = [data.st.clifford(T, sF) for T in basis]
        rows = _spin_tractor_rows(cols, data.pw.chart)
        ker = linalg.nullspace(rows, len(cols), data.pw.chart.zero(), data.pw.chart.one())
        ok = len(ker) == n + 1
        return ok, "Clifford kernel dimension %d (expected %d)" % (len(ker), n + 1), \
            {"kernel_dim": len(ker)}
    out.append(_timed(S, "s_F pure", "dim {T : T.s_F = 0} = n+1", purity, mode="bool"))

    def vertical():
        ker = data.kernel_fields
        V = data.pw.vertical_frame()
        ok = len(ker) == n and all(not data.sf.gamma(v, data.chi).comps for v in V)
        return ok, "dim ker chi = %d, vertical frame annihilates chi: %s" % (
            len(ker), all(not data.sf.gamma(v, data.chi).comps for v in V)), {}
    out.append(_timed(S, "ker chi vertical", "ker chi = span(d/dp_a)", vertical, mode="bool"))
    out.append(_timed(S, "k in ker chi", "gamma(k) chi", lambda: data.sf.gamma(data.k, data.chi)))

    def integrable():
        ker = data.kernel_fields
        res = []
        for i in range(len(ker)):
            for j in range(i + 1, len(ker)):
                res.append(data.sf.gamma(lie_bracket(ker[i], ker[j]), data.chi))
        return res
    out.append(_timed(S, "ker chi integrable", "gamma([v, w]) chi for v, w in ker chi",
                      integrable))
    out.append(_timed(S, "Lie derivative of chi", "L_k chi + (n+1)/2 chi",
                      lambda: data.sf.lie_derivative(data.k, data.chi)
                      + data.chi.scale(Q(n + 1, 2))))

    def weyl_cond():
        Wl = data.conf.W_low
        ker = data.kernel_fields
        res = []
        for v in ker:
            for w in ker:
                comps = {}
                for (a, r, b, s), x in Wl.comps.items():
                    vr, ws = v[(r,)], w[(s,)]
                    if vr and ws:
                        comps[(a, b)] = comps.get((a, b), x * 0) + x * vr * ws
                res.append(Tensor(data.pw.chart, "dd", comps))
        return res
    out.append(_timed(S, "Weyl condition", "v^r w^s W_arbs for v, w in ker chi", weyl_cond))
    return out


def _spin_tractor_rows(cols, chart):
    r = min((s.tau.root2 for s in cols if s.tau.comps), default=0)
    r2 = min((s.chi.root2 for s in cols if s.chi.comps), default=0)
    keys = sorted({("t", m) for s in cols for m in s.tau.comps}
                  | {("c", m) for s in cols for m in s.chi.comps})
    zero = chart.zero()
    rows = []
    for kind, m in keys:
        row = []
        for s in cols:
            sp = s.tau if kind == "t" else s.chi
            if sp.comps:
                sp = sp.with_root2(r if kind == "t" else r2)
            row.append(sp.comps.get(m, zero))
        rows.append(row)
    return rows


def reduced_scale_check(data, omega=None):
    """Reduced-scale identities in the Walker scale, or in Ω²g with density (Ω, ½)."""
    S = "reduced_scale"
    pw, n = data.pw, data.n
    if omega is None:
        sf, density = data.sf, None
        ctx = data.ctx
    else:
        sf = SpinFrame(pw, omega)
        density = (pw.chart.scalar(omega), Q(1, 2))
        ctx = SpinTractorCalculus(sf).ctx
    conf = ctx.conf
    chi = data.chi
    V = pw.vertical_frame()
    out = []
    out.append(_timed(S, "J vanishes", "J = g^ab P_ab", lambda: conf.J))

    def vP():
        res = []
        for v in V:
            comps = {}
            for (a, b), x in conf.P.comps.items():
                if v[(a,)]:
                    comps[(b,)] = comps.get((b,), x * 0) + x * v[(a,)]
            res.append(Tensor(pw.chart, "d", comps))
        return res
    out.append(_timed(S, "vertical Schouten", "v^a P_ab for v in ker chi", vP))
    out.append(_timed(S, "chi parallel", "D_a chi (weight 1/2 density)",
                      lambda: sf.nabla(chi, density)))
    one = pw.chart.one()

    def scale_tractor():
        I = ctx.L0_std(one)
        return I[:-1]
    out.append(_timed(S, "scale tractor is (0;0;1)", "L0(1) - (0; 0; 1)", scale_tractor))

    def horizontal():
        I = ctx.L0_std(one)
        res = []
        for i in range(n):
            res.append(ctx.std_derivative(I, n + i))
        return res
    out.append(_timed(S, "scale tractor horizontal", "v^a nabla_a L0(1) for v in ker chi",
                      horizontal))
    return out


def prolongation_suite(data):
    """Prolongation identities for k, μ and the curvature in the Walker scale."""
    S = "prolongation"
    conf, ch = data.conf, data.pw.chart
    n, N = data.n, 2 * data.n
    K = data.K
    k_low, mu = K.k, K.mu
    k_up = raise_index(k_low, conf.ginv, 0)
    mu_ud = raise_index(mu, conf.ginv, 0)              # μ^c_b
    P, Wl, Y, g = conf.P, conf.W_low, conf.Y, conf.g
    D = conf.D
    V = data.kernel_fields
    z = ch.zero()

    def T(val, comps):
        return Tensor(ch, val, {k: v for k, v in comps.items() if v})

    def acc(d, key, v):
        d[key] = d.get(key, z) + v

    def r1():
        from .tensor_calc import covariant_derivative
        return covariant_derivative(k_low, D) - mu - g

    def r2():
        from .tensor_calc import covariant_derivative
        Dmu = covariant_derivative(mu, D)
        comps = dict(Dmu.comps)
        for a in range(N):
            for b in range(N):
                for c in range(N):
                    v = P[(a, b)] * k_low[(c,)] - P[(a, c)] * k_low[(b,)]
                    if v:
                        acc(comps, (a, b, c), v)
        for (d, a, b, c), w in Wl.comps.items():
            kd = k_up[(d,)]
            if kd:
                acc(comps, (a, b, c), -(kd * w))
        return T("ddd", comps)

    def r3():
        comps = {}
        for (a, b), v in P.comps.items():
            if k_up[(b,)]:
                acc(comps, (a,), v * k_up[(b,)])
        return T("d", comps)

    def r4():
        comps = {}
        for (a, c), v in P.comps.items():
            for b in range(N):
                m = mu_ud[(c, b)] - (1 if b == c else 0)
                if m:
                    acc(comps, (a, b), v * m)
        for (a, b, c), y in Y.comps.items():
            if k_up[(c,)]:
                acc(comps, (a, b), -(y * k_up[(c,)]))
        return T("dd", comps)

    def r5():
        res = []
        for v in V:
            comps = {}
            for (a, b), x in P.comps.items():
                if v[(b,)]:
                    acc(comps, (a,), x * v[(b,)])
            res.append(T("d", comps))
        return res

    def r6():
        comps = {}
        for (a, b, c), y in Y.comps.items():
            if k_up[(c,)]:
                acc(comps, (a, b), y * k_up[(c,)])
        return T("dd", comps)

    def r7():
        res = []
        for v in V:
            comps = {}
            for (a, b, c, d), w in Wl.comps.items():
                if k_up[(a,)] and v[(c,)]:
                    acc(comps, (b, d), w * k_up[(a,)] * v[(c,)])
            res.append(T("dd", comps))
        return res

    def r8():
        mu_uu = raise_index(raise_index(mu, conf.ginv, 0), conf.ginv, 1)
        comps = {}
        for (a, b, c, d), w in Wl.comps.items():
            m = mu_uu[(c, d)]
            if m:
                acc(comps, (a, b), w * m)
        return T("dd", comps)

    def r9():
        res = []
        for v in V:
            for x in V:
                comps = {}
                for (a, b, c, d), w in Wl.comps.items():
                    if v[(c,)] and x[(d,)]:
                        acc(comps, (a, b), w * v[(c,)] * x[(d,)])
                res.append(T("dd", comps))
        return res

    def r10():
        res = []
        for v in V:
            comps = {}
            for (a, b, c), y in Y.comps.items():
                if v[(a,)]:
                    acc(comps, (b, c), y * v[(a,)])
            res.append(T("dd", comps))
        return res

    table = [
        ("D k - mu - g", "D_a k_b - mu_ab - g_ab", r1),
        ("D mu", "D_a mu_bc + 2 P_a[b k_c] - k^d W_dabc", r2),
        ("P k", "P_ab k^b", r3),
        ("P (mu - 1) - Y k", "P_ac (mu^c_b - delta^c_b) - Y_abc k^c", r4),
        ("P v", "P_ab v^b for v in ker chi", r5),
        ("Y k", "Y_abc k^c", r6),
        ("k W v", "k^a W_abcd v^c for v in ker chi", r7),
        ("W mu", "W_abcd mu^cd", r8),
        ("W v w", "W_abcd v^c w^d for v, w in ker chi", r9),
        ("v Y", "v^a Y_abc for v in ker chi", r10),
    ]
    return [_timed(S, name, ident, fn) for name, ident, fn in table]


def omega_prime(data, a, b):
    """Ω'_ab = Ω_ab + ½ [K, Ω_ab] as a matrix."""
    F = data.F_ab(a, b)
    return mat_add(F, mat_scale(mat_bracket(data.MK, F), Q(1, 2)))


def induced_curvature_slots(data, a, b):
    """Slots of Ω'_ab: (-Y_.ab; W_ab.. - ½(W_ab^r_c mu_dr - ...) + ½(k_c Y_dab - ...) | 0; ½ k^r W_abr.)."""
    conf, ch, N = data.conf, data.pw.chart, 2 * data.n
    Y, Wl, W = conf.Y, conf.W_low, conf.W
    K = data.K
    k_up = raise_index(K.k, conf.ginv, 0)
    rho = Tensor(ch, "d", {(c,): -Y[(c, a, b)] for c in range(N)})
    mu = {}
    for c0 in range(N):
        for c1 in range(N):
            v = Wl[(a, b, c0, c1)]
            for r in range(N):
                w0, w1 = W[(a, b, r, c0)], W[(a, b, r, c1)]
                if w0:
                    v = v - w0 * K.mu[(c1, r)] * Q(1, 2)
                if w1:
                    v = v + w1 * K.mu[(c0, r)] * Q(1, 2)
            v = v + (K.k[(c0,)] * Y[(c1, a, b)] - K.k[(c1,)] * Y[(c0, a, b)]) * Q(1, 2)
            if v:
                mu[(c0, c1)] = v
    beta = {}
    for c in range(N):
        v = ch.zero()
        for r in range(N):
            if k_up[(r,)]:
                v = v + k_up[(r,)] * Wl[(a, b, r, c)]
        if v:
            beta[(c,)] = v * Q(1, 2)
    return AdjTractor(rho, Tensor(ch, "dd", mu), ch.zero(), Tensor(ch, "d", beta))


def torsion_slot(data):
    """½ k^r W_abrc as a tensor (a, b, c)."""
    conf, ch, N = data.conf, data.pw.chart, 2 * data.n
    k_up = raise_index(data.K.k, conf.ginv, 0)
    comps = {}
    for (a, b, r, c), w in conf.W_low.comps.items():
        if k_up[(r,)]:
            comps[(a, b, c)] = comps.get((a, b, c), ch.zero()) + w * k_up[(r,)] * Q(1, 2)
    return Tensor(ch, "ddd", {k: v for k, v in comps.items() if v})


def omega_prime_suite(data):
    S = "omega_prime"
    n, N = data.n, 2 * data.n
    pairs = [(a, b) for a in range(N) for b in range(a + 1, N)]
    cache = {}

    def Op(a, b):
        if (a, b) not in cache:
            cache[(a, b)] = omega_prime(data, a, b)
        return cache[(a, b)]

    sF = _sF(data)
    out = []
    out.append(_timed(S, "Omega' . s_F", "Omega'_ab . s_F",
                      lambda: [data.st.spin_action(Op(a, b), sF) for a, b in pairs]))
    out.append(_timed(S, "[Omega', K]", "[Omega'_ab, K]",
                      lambda: [mat_bracket(Op(a, b), data.MK) for a, b in pairs]))

    def iota_v():
        res = []
        for i in range(n):
            a = n + i
            for b in range(N):
                if b != a:
                    M = Op(a, b) if a < b else mat_scale(Op(b, a), -1)
                    res.append(M)
        return res
    out.append(_timed(S, "vertical insertion", "v^a Omega'_ab for v = d/dp_i", iota_v))
    out.append(_timed(S, "<Omega, K>", "tr(Omega_ab K)",
                      lambda: [mat_trace(mat_mul(data.F_ab(a, b), data.MK)) for a, b in pairs]))

    def slots():
        res = []
        for a, b in pairs:
            A, fit = data.ctx.adj_from_matrix(Op(a, b))
            res.append(fit)
            res.append(A - induced_curvature_slots(data, a, b))
        return res
    out.append(_timed(S, "Omega' slot formula",
                      "slots(Omega'_ab) = (-Y_cab; W_abcd - W_ab^r_[c mu_d]r + k_[c Y_d]ab | 0;"
                      " 1/2 k^r W_abrc)", slots))

    def torsion():
        t = torsion_slot(data)
        nz = not t.is_zero()
        _, text = summarize(t)
        if n == 2:
            return not nz, text, {"torsion_nonzero": nz}
        return True, text, {"torsion_nonzero": nz}
    out.append(_timed(S, "torsion slot", "1/2 k^r W_abrc", torsion,
                      mode="bool" if n == 2 else "info"))
    return out


def tractor_suite(data):
    S = "tractor"
    n, N = data.n, 2 * data.n
    ctx, st = data.ctx, data.st
    sF = _sF(data)
    out = []

    def nablaK():
        res = []
        for b in range(N):
            lhs = ctx.adj_connection_matrix(data.MK, b)
            rhs = None
            for a in range(N):
                if a != b and data.k[(a,)]:
                    t = mat_scale(data.F_ab(a, b), data.k[(a,)])
                    rhs = t if rhs is None else mat_add(rhs, t)
            res.append(lhs if rhs is None else mat_sub(lhs, rhs))
        return res
    out.append(_timed(S, "nabla K = iota_k Omega", "nabla_b K - k^a Omega_ab", nablaK))
    out.append(_timed(S, "adjoint connection slots", "matrix and slot forms of nabla K agree",
                      lambda: [mat_sub(ctx.adj_connection_matrix(data.MK, b),
                                       ctx.adj_matrix(ctx.adj_connection(data.K, b)))
                               for b in range(N)]))
    out.append(_timed(S, "K^2 = id", "K K - 1",
                      lambda: mat_sub(mat_mul(data.MK, data.MK),
                                      mat_identity(data.pw.chart, N + 2))))
    out.append(_timed(S, "K . s_F", "K . s_F + (n+1)/2 s_F",
                      lambda: st.spin_action(data.MK, sF) + sF.scale(Q(n + 1, 2))))
    out.append(_timed(S, "s_F parallel", "nabla s_F", lambda: st.nabla(sF)))
    out.append(_timed(S, "curvature slots", "F_ab = matrix of (-Y_.ab; W_ab.. | 0; 0)",
                      lambda: [mat_sub(F, ctx.adj_matrix(ctx.curvature_slots(a, b)))
                               for (a, b), F in data.F.items()]))
    sE = s_E_slots(st, data.K, data.chi)
    out.append(_timed(S, "<s_E, s_F>", "<s_E, s_F> + 1/2",
                      lambda: pairing_check(sE, (sF.tau, sF.chi)) + Q(1, 2)))
    for name, v in eigentractor_residuals(st, data.K, sE, (sF.tau, sF.chi)).items():
        out.append(_timed(S, "eigentractor: " + name, name, lambda v=v: v))
    for name, v in muchi_residuals(st, data.K, sE, data.chi).items():
        out.append(_timed(S, "spinor bilinear: " + name, name, lambda v=v: v))
    return out


def oracle_suite(data, count=10, seed=0, tol=1e-6):
    """Exact curvature against the finite-difference oracle at random rational points."""
    from . import oracle
    S = "oracle"
    n = data.n
    out = []
    D = data.structure.representative
    sides = [("projective", lambda: oracle.compare(
                 oracle.projective_exact(D), oracle.projective_oracle(D), n,
                 oracle.random_points(n, count, seed))),
             ("conformal", lambda: oracle.compare(
                 oracle.conformal_exact(data.conf), oracle.conformal_oracle(data.pw.metric),
                 2 * n, oracle.random_points(2 * n, count, seed + 1)))]
    for side, fn in sides:
        def run(fn=fn):
            diffs = fn()
            worst = max(diffs.values())
            text = ", ".join("%s %.2e" % kv for kv in diffs.items())
            return worst < tol, "max |exact - fd|: " + text, diffs
        out.append(_timed(S, "%s curvature vs oracle" % side,
                          "|exact - finite difference| < %g at %d points" % (tol, count),
                          run, "bool"))
    return out


# ---------------------------------------------------------------------------
# Lie-algebraic suites

def kostant_suite(n, seed=0, cochains=20, closed=10):
    S = "kostant"
    rng = random.Random(seed)
    out = []
    t0 = time.perf_counter()
    M = kl.LieModel(n)
    out.append(Check(S, "model", "so(n+1,n+1) with sl(n+1), B = 1/2 tr", INFO,
                     "dim g~ = %d" % len(M.gt_basis), round(time.perf_counter() - t0, 4)))

    def ddstar():
        bad = 0
        for _ in range(cochains):
            phi = kl.random_cochain(M, 2, rng)
            if not kl.del_star(M, kl.del_star(M, phi)).is_zero():
                bad += 1
        return bad == 0, "%d of %d cochains violate" % (bad, cochains), {}
    out.append(_timed(S, "del* del* = 0", "d~* d~* phi on random 2-cochains", ddstar, "bool"))
    out.append(_timed(S, "second codifferential term", "sum_i phi(X_i, [Z~_i, X]) = 0 (|1|-grading)",
                      lambda: (kl.del_star_2(M, kl.random_cochain(M, 2, rng)).is_zero(),
                               "exact", {}), "bool"))

    def worked():
        if n < 3:
            return True, "n/a for n = 2 (needs Z_n distinct from Z_2)", {"applicable": False}
        phi = kl.worked_example(M)
        d = kl.del_star(M, kl.extend_cochain(M, phi))
        ok = d.equals(kl.worked_example_expected(M))
        ok2 = kl.in_component(M, d)
        return ok and ok2, "matches: %s, in component: %s" % (ok, ok2), {"applicable": True}
    out.append(_timed(S, "worked example",
                      "d~*(Z1^Z2 (x) X_n(x)Z_n - Z1^Z2 (x) X1(x)Z1 + Z_n^Z2 (x) X_n(x)Z1)"
                      " = -Z~1 (x) Z~n^Z~2 - Z~n (x) Z~1^Z~2", worked, "bool"))

    def eigen2():
        B = kl.component_basis(M)
        bad = 0
        for b in B:
            if not kl.laplacian(M, b).equals(b.scale(2)):
                bad += 1
        return bad == 0 and len(B) > 0, "%d spanning elements, %d fail" % (len(B), bad), \
            {"dim": len(B)}
    out.append(_timed(S, "box eigenvalue 2", "box psi = 2 psi on f^ (x) L2Fbar cap ker alt",
                      eigen2, "bool"))

    def closed_kappas():
        kappas = curvature_cochains(M, n, closed, seed)
        bad_proj, bad_comp, bad_psi = 0, 0, 0
        for kap in kappas:
            if not kl.del_star(M, kap, side="proj").is_zero():
                bad_proj += 1
                continue
            d = kl.del_star(M, kl.extend_cochain(M, kap))
            if not kl.in_component(M, d):
                bad_comp += 1
                continue
            psi = kl.normalize_step(M, kl.extend_cochain(M, kap))
            alt = kl.laplacian_inverse_on_component(M, d).scale(-1)
            if not psi.equals(alt):
                bad_psi += 1
        nz = sum(1 for kap in kappas if not kap.is_zero())
        ok = bad_proj == bad_comp == bad_psi == 0 and nz > 0
        return ok, ("%d cochains (%d nonzero): d*k != 0: %d, outside component: %d, "
                    "Psi1 mismatch: %d" % (len(kappas), nz, bad_proj, bad_comp, bad_psi)), {}
    out.append(_timed(S, "extended curvature in component",
                      "d*k = 0 => d~*(k~) in f^ (x) L2Fbar cap ker alt, -1/2 d~* k~ = -box^-1 d~* k~",
                      closed_kappas, "bool"))
    return out


def curvature_cochains(M, n, count, seed):
    """∂*-closed 2-cochains from the curvature (W, Y) of random structures at rational points."""
    out = []
    rng = random.Random(7919 + seed)
    per = 2
    s = 0
    while len(out) < count:
        P = random_projective(n, 500 + seed * 31 + s, max_degree=2)
        s += 1
        D = P.representative
        Pp = proj_schouten(D)
        W = proj_weyl(D, None, Pp)
        Y = proj_cotton(D, Pp)
        for _ in range(per):
            pt = [Q(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(n)]
            Wd = {k: v.evaluate(pt) for k, v in W.comps.items()}
            Yd = {k: v.evaluate(pt) for k, v in Y.comps.items()}
            out.append(kl.weyl_cochain(M, Wd, Yd))
            if len(out) >= count:
                break
    return out


def lie_constants_suite(n):
    S = "lie_constants"
    M = kl.LieModel(n)
    out = []

    def brackets():
        e = all(kl.mat_equal(kl.bracket(M.K, b), 2 * b) for b in M.lambda2E_basis())
        f = all(kl.mat_equal(kl.bracket(M.K, b), -2 * b) for b in M.lambda2F_basis())
        ef = all(kl.is_zero(kl.bracket(M.K, b)) for b in M.EF_basis())
        return e and f and ef, "L2E: %s, L2F: %s, E(x)F: %s" % (e, f, ef), {}
    out.append(_timed(S, "K eigenvalues", "[K, L2E] = 2, [K, L2F] = -2, [K, E(x)F] = 0",
                      brackets, "bool"))

    def spin_eig(s, lam):
        return (M.spin_action(M.K, s) - s.scale(lam)).is_zero()
    out.append(_timed(S, "K . s_F", "K . s_F = -(n+1)/2 s_F",
                      lambda: (spin_eig(M.s_F, mpq(-(n + 1), 2)), "exact", {}), "bool"))
    out.append(_timed(S, "K . s_E", "K . s_E = (n+1)/2 s_E",
                      lambda: (spin_eig(M.s_E, mpq(n + 1, 2)), "exact", {}), "bool"))
    out.append(_timed(S, "<s_E, s_F>", "<s_E, s_F> = -1/2",
                      lambda: (M.pairing(M.s_E, M.s_F) == mpq(-1, 2),
                               "value %s" % M.pairing(M.s_E, M.s_F), {}), "bool"))

    def hK():
        bad = 0
        for i in range(M.N):
            X = M.basis_vector(i)
            for j in range(M.N):
                Y = M.basis_vector(j)
                lhs = X.dot(M.h).dot(M.K.dot(Y))
                rhs = 2 * M.pairing(M.s_E, M.twoform_clifford(X, Y, M.s_F))
                bad += lhs != rhs
        return bad == 0, "%d of %d basis pairs fail" % (bad, M.N * M.N), {}
    out.append(_timed(S, "h(X, KY)", "h(X, KY) = 2 <s_E, (X^Y) . s_F>", hK, "bool"))

    def annihilators():
        kE, kF = M.annihilator(M.s_E), M.annihilator(M.s_F)
        a = M.span_equal(kE, M.sl_basis + M.lambda2E_basis())
        b = M.span_equal(kF, M.sl_basis + M.lambda2F_basis())
        return a and b, "ann s_E = sl + L2E: %s, ann s_F = sl + L2F: %s" % (a, b), {}
    out.append(_timed(S, "spinor stabilisers", "ann(s_E) = g + L2E, ann(s_F) = g + L2F",
                      annihilators, "bool"))

    def fhat():
        L2 = M.lambda2Fbar()
        fh = M.f_hat()
        a = M.span_equal(M.basis_of([kl.bracket(x, y) for x in M.p_plus_t for y in L2]), fh)
        b = all(kl.is_zero(kl.bracket(x, y)) for x in fh for y in L2)
        return a and b, "[p~+, L2Fbar] = f^: %s, [f^, L2Fbar] = 0: %s" % (a, b), {}
    out.append(_timed(S, "f^ from L2Fbar", "[p~+, L2Fbar] = f^", fhat, "bool"))

    def ortho():
        ok = all(M.form(M.Zt[j] - M.Z[j], g) == 0 for j in range(n) for g in M.sl_basis)
        return ok, "exact", {}
    out.append(_timed(S, "Z~ - Z orthogonal to g", "B(Z~_j - Z_j, g) = 0", ortho, "bool"))
    return out


# ---------------------------------------------------------------------------
# drivers

SUITES = {
    "projective": projective_suite,
    "characterize": characterize,
    "reduced_scale": lambda data: reduced_scale_check(data, data.omega),
    "prolongation": prolongation_suite,
    "omega_prime": omega_prime_suite,
    "tractor": tractor_suite,
    "oracle": oracle_suite,
}
VERIFY_SUITES = ("projective", "characterize", "reduced_scale", "prolongation", "omega_prime")


def thread_count():
    try:
        return max(1, int(os.environ.get("FEFFERMAN_LAB_THREADS", "1")))
    except ValueError:
        return 1


def run_parallel(tasks, threads=None):
    """Run zero-argument callables, at most ``threads`` at a time; keeps order."""
    threads = threads or thread_count()
    if threads == 1 or len(tasks) < 2:
        return [t() for t in tasks]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(lambda t: t(), tasks))


def verify_structure(data, suites=VERIFY_SUITES, threads=None):
    """Run the named suites on one structure and collect a report."""
    # shared lazy objects are built up front so suites only read them
    _ = data.K, data.MK, data.chi
    tasks = [lambda s=s: SUITES[s](data) for s in suites]
    checks = [c for group in run_parallel(tasks, threads) for c in group]
    return VerificationReport(data.describe(), checks)


def verify_kostant(n, seed=0, threads=None):
    tasks = [lambda: kostant_suite(n, seed), lambda: lie_constants_suite(n)]
    checks = [c for group in run_parallel(tasks, threads) for c in group]
    return VerificationReport({"name": "lie-model", "n": n, "seed": seed}, checks)
