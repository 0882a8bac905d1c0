"""Patterson-Walker metric of a special connection on the chart (x^1..x^n, p_1..p_n).

    g = 2 dx^a ⊙ dp_a + A_ab dx^a dx^b,   A_ab = -2 p_c Γ^c_ab,

so g(∂x^a, ∂p_b) = δ^a_b, g(∂p_a, ∂p_b) = 0 and g(∂x^a, ∂x^b) = A_ab.  The
inverse is [[0, I], [I, -A]], polynomial.  An optional perturbation of the
xx block (used for negative controls) keeps this Walker form.
"""

from .exact_core import Q, extend_vars
from .projective import PreconditionError, ProjectiveStructure, is_special
from .tensor_calc import Chart, Metric, Tensor, levi_civita, vector_field


class PerturbationError(ValueError):
    pass


def pw_chart(base_chart):
    n = base_chart.dim
    names = list(base_chart.names) + ["p%d" % (i + 1) for i in range(n)]
    if len(set(names)) != len(names):
        names = list(base_chart.names) + ["p_%s" % nm for nm in base_chart.names]
    return Chart(names)


class PWStructure:
    """Walker metric with its frames and Euler field.

    ``perturbation`` maps (i, j) with i, j < n to RatFuncs on the 2n-chart
    (or base polynomials, which are lifted); it is added symmetrically to the
    xx block only.
    """

    def __init__(self, source, perturbation=None, require_special=True):
        if not isinstance(source, ProjectiveStructure):
            source = ProjectiveStructure(source, normalize=False)
        D = source.representative
        if require_special and not is_special(D):
            raise PreconditionError("Patterson-Walker metric needs a special connection")
        self.source = source
        n = source.n
        self.n = n
        self.base_chart = source.chart
        self.chart = chart = pw_chart(self.base_chart)
        N = 2 * n
        self.gamma = {k: extend_vars(v, N) for k, v in D.gamma.items()}
        p = [chart.var(n + i) for i in range(n)]
        A = {}
        for (c, a, b), v in self.gamma.items():
            t = p[c] * v * (-2)
            old = A.get((a, b))
            A[(a, b)] = t if old is None else old + t
        pert = {}
        for (i, j), v in (perturbation or {}).items():
            if not (0 <= i < n and 0 <= j < n):
                raise PerturbationError("perturbations are only supported in the x-x block")
            v = _lift(v, n, chart)
            pert[(i, j)] = pert.get((i, j), chart.zero()) + v
            if i != j:
                pert[(j, i)] = pert.get((j, i), chart.zero()) + v
        self.perturbation = pert
        for k, v in pert.items():
            A[k] = A.get(k, chart.zero()) + v
        self.A = {k: v for k, v in A.items() if v}
        self.is_perturbed = any(pert.values())
        comps = {}
        for a in range(n):
            comps[(a, n + a)] = 1
            comps[(n + a, a)] = 1
        for k, v in self.A.items():
            comps[k] = v
        g = Tensor(chart, "dd", comps)
        icomps = {}
        for a in range(n):
            icomps[(a, n + a)] = 1
            icomps[(n + a, a)] = 1
        for (a, b), v in self.A.items():
            icomps[(n + a, n + b)] = -v
        ginv = Tensor(chart, "uu", icomps)
        self.metric = Metric(g, ginv)
        self._lc = None

    @property
    def g(self):
        return self.metric.g

    @property
    def ginv(self):
        return self.metric.ginv

    @property
    def levi_civita(self):
        if self._lc is None:
            self._lc = levi_civita(self.metric)
        return self._lc

    def vertical_frame(self):
        """V_a = ∂/∂p_a."""
        n, ch = self.n, self.chart
        return [Tensor(ch, "u", {(n + a,): 1}) for a in range(n)]

    def horizontal_frame(self):
        """H_a = ∂/∂x^a - ½ A_ab ∂/∂p_b (= ∂x^a + p_c Γ^c_ab ∂p_b when unperturbed)."""
        n, ch = self.n, self.chart
        half = Q(-1, 2)
        frames = []
        for a in range(n):
            comps = {(a,): ch.one()}
            for b in range(n):
                v = self.A.get((a, b))
                if v is not None:
                    comps[(n + b,)] = v * half
            frames.append(Tensor(ch, "u", comps))
        return frames

    def euler_field(self):
        """k = 2 p_a ∂/∂p_a."""
        n, ch = self.n, self.chart
        return Tensor(ch, "u", {(n + a,): ch.var(n + a) * 2 for a in range(n)})

    def frame_coefficients(self, X):
        """(α, β) with X = α_a V_a + β_a H_a."""
        n = self.n
        beta = [X[(a,)] for a in range(n)]
        alpha = []
        for b in range(n):
            v = X[(n + b,)]
            for a in range(n):
                Aab = self.A.get((a, b))
                if Aab is not None and beta[a]:
                    v = v + beta[a] * Aab * Q(1, 2)
            alpha.append(v)
        return alpha, beta

    def describe(self):
        names = self.chart.names
        lines = []
        for (a, b), v in sorted(self.g.comps.items()):
            if a <= b:
                lines.append("g[%s,%s] = %s" % (names[a], names[b], v.to_str(names)))
        return lines


def _lift(v, n, chart):
    # base-chart functions are lifted, rationals become constants
    if getattr(v, "nvars", None) == n and n != chart.dim:
        v = extend_vars(v, chart.dim)
    return chart.scalar(v)


def pw_metric(P, perturbation=None):
    return PWStructure(P, perturbation)


def euler_field(pw):
    return pw.euler_field()


def distributions(pw):
    return pw.vertical_frame(), pw.horizontal_frame()
