"""Coordinate tensor calculus on a single chart with exact rational-function components.

A tensor stores only its nonzero components, keyed by index tuples.  The
valence is a string of 'u' (contravariant) and 'd' (covariant) letters, one
per index, e.g. Riemann R_ab^c_d has valence "ddud".

Curvature convention (fixed by the Ricci identity, tested):
    (∇_a∇_b - ∇_b∇_a) ξ^c = R_ab^c_d ξ^d,
    R_ab^c_d = ∂_a Γ^c_bd - ∂_b Γ^c_ad + Γ^c_ae Γ^e_bd - Γ^c_be Γ^e_ad,
and the Ricci tensor is Ric_bd = R_ab^a_d.
"""

import itertools
from fractions import Fraction
from math import factorial

from . import linalg
from .exact_core import DimensionError, MultiPoly, RatFunc, Q


class ChartError(ValueError):
    pass


class SingularMetricError(ValueError):
    pass


class Chart:
    """Ordered coordinate names; the number of names is the dimension."""

    def __init__(self, names):
        names = list(names)
        if len(set(names)) != len(names):
            raise ChartError("coordinate names must be distinct")
        if not names:
            raise ChartError("a chart needs at least one coordinate")
        self.names = names
        self.dim = len(names)

    def __eq__(self, other):
        return isinstance(other, Chart) and self.names == other.names

    def __hash__(self):
        return hash(tuple(self.names))

    def __repr__(self):
        return "Chart(%s)" % ", ".join(self.names)

    def zero(self):
        return RatFunc(MultiPoly(self.dim))

    def one(self):
        return RatFunc.constant(1, self.dim)

    def const(self, c):
        return RatFunc.constant(c, self.dim)

    def var(self, i):
        return RatFunc.variable(i, self.dim)

    def scalar(self, x):
        """Coerce a rational, MultiPoly or RatFunc to a RatFunc on this chart."""
        if isinstance(x, RatFunc):
            if x.nvars != self.dim:
                raise DimensionError("scalar lives on %d variables, chart has %d" % (x.nvars, self.dim))
            return x
        if isinstance(x, MultiPoly):
            return RatFunc(x)
        return RatFunc.constant(x, self.dim)


def _add_into(d, key, val):
    if not val:
        return
    old = d.get(key)
    if old is None:
        d[key] = val
    else:
        s = old + val
        if s:
            d[key] = s
        else:
            del d[key]


class Tensor:
    """Tensor field with sparse RatFunc components.

    ``weight`` is a bookkeeping tag (conformal or projective density weight);
    the chart's coordinate volume trivialises densities.
    """

    __slots__ = ("chart", "valence", "comps", "weight")

    def __init__(self, chart, valence, comps=None, weight=0):
        self.chart = chart
        self.valence = valence
        if any(v not in "ud" for v in valence):
            raise ValueError("valence letters must be 'u' or 'd'")
        self.weight = Fraction(weight)
        cleaned = {}
        dim = chart.dim
        for k, v in (comps or {}).items():
            k = tuple(k)
            if len(k) != len(valence) or any(not 0 <= i < dim for i in k):
                raise DimensionError("component index %r does not match valence %r" % (k, valence))
            v = chart.scalar(v)
            if v:
                cleaned[k] = v
        self.comps = cleaned

    @property
    def rank(self):
        return len(self.valence)

    def __getitem__(self, idx):
        if not isinstance(idx, tuple):
            idx = (idx,)
        v = self.comps.get(idx)
        return v if v is not None else self.chart.zero()

    def items(self):
        return self.comps.items()

    def _same(self, other):
        if self.chart != other.chart:
            raise ChartError("tensors live on different charts")
        if self.valence != other.valence:
            raise ValueError("valence mismatch: %s vs %s" % (self.valence, other.valence))

    def __add__(self, other):
        self._same(other)
        d = dict(self.comps)
        for k, v in other.comps.items():
            _add_into(d, k, v)
        return Tensor(self.chart, self.valence, d, self.weight)

    def __neg__(self):
        return Tensor(self.chart, self.valence, {k: -v for k, v in self.comps.items()}, self.weight)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        if isinstance(c, RatFunc):
            return Tensor(self.chart, self.valence, {k: v * c for k, v in self.comps.items()},
                          self.weight)
        c = Q(c)
        return Tensor(self.chart, self.valence, {k: v * c for k, v in self.comps.items()},
                      self.weight)

    def is_zero(self):
        """Exact test: every component is the zero rational function."""
        return not any(self.comps.values())

    def normalize(self):
        return Tensor(self.chart, self.valence,
                      {k: v.normalize() for k, v in self.comps.items()}, self.weight)

    def with_weight(self, w):
        return Tensor(self.chart, self.valence, self.comps, w)

    def evaluate(self, point):
        """Exact component values at a rational point."""
        return {k: v.evaluate(point) for k, v in self.comps.items()}

    def max_abs(self, points):
        """Largest |component| over the given points (float), used in reports."""
        best = 0.0
        for pt in points:
            for v in self.comps.values():
                best = max(best, abs(float(v.evaluate(pt))))
        return best

    def __repr__(self):
        return "Tensor(%s, %d nonzero)" % (self.valence, len(self.comps))


def zero_tensor(chart, valence, weight=0):
    return Tensor(chart, valence, {}, weight)


def kronecker(chart):
    """δ^a_b with valence 'ud'."""
    return Tensor(chart, "ud", {(i, i): 1 for i in range(chart.dim)})


def scalar_field(chart, f, weight=0):
    return Tensor(chart, "", {(): f}, weight)


def vector_field(chart, comps, weight=0):
    """From a list of components (length dim)."""
    return Tensor(chart, "u", {(i,): c for i, c in enumerate(comps)}, weight)


def one_form(chart, comps, weight=0):
    return Tensor(chart, "d", {(i,): c for i, c in enumerate(comps)}, weight)


# ---------------------------------------------------------------------------
# algebra

def tensor_product(A, B):
    if A.chart != B.chart:
        raise ChartError("tensors live on different charts")
    d = {}
    for ka, va in A.comps.items():
        for kb, vb in B.comps.items():
            d[ka + kb] = va * vb
    return Tensor(A.chart, A.valence + B.valence, d, A.weight + B.weight)


def contract(T, i, j):
    """Trace over index positions i and j (one up, one down)."""
    r = T.rank
    if not (0 <= i < r and 0 <= j < r) or i == j:
        raise IndexError("index position out of range")
    if {T.valence[i], T.valence[j]} != {"u", "d"}:
        raise ValueError("contraction needs one upper and one lower index")
    lo, hi = sorted((i, j))
    val = T.valence[:lo] + T.valence[lo + 1:hi] + T.valence[hi + 1:]
    d = {}
    for k, v in T.comps.items():
        if k[i] == k[j]:
            _add_into(d, k[:lo] + k[lo + 1:hi] + k[hi + 1:], v)
    return Tensor(T.chart, val, d, T.weight)


trace = contract


def permute(T, perm):
    """Reorder indices: result index position p takes T's index perm[p]."""
    if sorted(perm) != list(range(T.rank)):
        raise ValueError("not a permutation")
    val = "".join(T.valence[p] for p in perm)
    d = {tuple(k[p] for p in perm): v for k, v in T.comps.items()}
    return Tensor(T.chart, val, d, T.weight)


def _perm_sign(p):
    s = 1
    p = list(p)
    for i in range(len(p)):
        for j in range(i + 1, len(p)):
            if p[i] > p[j]:
                s = -s
    return s


def _project(T, positions, signed):
    positions = list(positions)
    if any(not 0 <= p < T.rank for p in positions):
        raise IndexError("index position out of range")
    if len({T.valence[p] for p in positions}) > 1:
        raise ValueError("(anti)symmetrised indices must have the same variance")
    k = len(positions)
    d = {}
    c = Q(1) / factorial(k)
    for key, v in T.comps.items():
        for perm in itertools.permutations(range(k)):
            new = list(key)
            for a, b in zip(positions, perm):
                new[a] = key[positions[b]]
            s = _perm_sign(perm) if signed else 1
            _add_into(d, tuple(new), v * (c * s))
    return Tensor(T.chart, T.valence, d, T.weight)


def symmetrize(T, positions):
    return _project(T, positions, False)


def antisymmetrize(T, positions):
    return _project(T, positions, True)


def raise_index(T, ginv, pos):
    """Raise the covariant index at ``pos`` with the inverse metric."""
    if T.valence[pos] != "d":
        raise ValueError("index %d is already contravariant" % pos)
    d = {}
    rows = _rows(ginv)
    for k, v in T.comps.items():
        for b, gab in rows.get(k[pos], ()):
            _add_into(d, k[:pos] + (b,) + k[pos + 1:], gab * v)
    val = T.valence[:pos] + "u" + T.valence[pos + 1:]
    return Tensor(T.chart, val, d, T.weight + ginv.weight)


def lower_index(T, g, pos):
    """Lower the contravariant index at ``pos`` with the metric."""
    if T.valence[pos] != "u":
        raise ValueError("index %d is already covariant" % pos)
    d = {}
    rows = _rows(g)
    for k, v in T.comps.items():
        for b, gab in rows.get(k[pos], ()):
            _add_into(d, k[:pos] + (b,) + k[pos + 1:], gab * v)
    val = T.valence[:pos] + "d" + T.valence[pos + 1:]
    return Tensor(T.chart, val, d, T.weight + g.weight)


def _rows(M):
    rows = {}
    for (a, b), v in M.comps.items():
        rows.setdefault(a, []).append((b, v))
    return rows


def apply_vector(T, X, pos=0):
    """Contract the covariant index at ``pos`` with the vector field X."""
    if T.valence[pos] != "d" or X.valence != "u":
        raise ValueError("need a covariant slot and a vector field")
    d = {}
    for k, v in T.comps.items():
        x = X.comps.get((k[pos],))
        if x is not None:
            _add_into(d, k[:pos] + k[pos + 1:], v * x)
    return Tensor(T.chart, T.valence[:pos] + T.valence[pos + 1:], d, T.weight + X.weight)


def apply_form(T, w, pos=0):
    """Contract the contravariant index at ``pos`` with the one-form w."""
    if T.valence[pos] != "u" or w.valence != "d":
        raise ValueError("need a contravariant slot and a one-form")
    d = {}
    for k, v in T.comps.items():
        x = w.comps.get((k[pos],))
        if x is not None:
            _add_into(d, k[:pos] + k[pos + 1:], v * x)
    return Tensor(T.chart, T.valence[:pos] + T.valence[pos + 1:], d, T.weight + w.weight)


def gradient(f):
    """Partial derivatives of a scalar field, as a one-form."""
    chart = f.chart
    v = f[()]
    return Tensor(chart, "d", {(i,): v.diff(i) for i in range(chart.dim)}, f.weight)


def directional(X, f):
    """X(f) for a vector field X and a RatFunc f."""
    out = X.chart.zero()
    for (i,), x in X.comps.items():
        out = out + x * f.diff(i)
    return out


def lie_bracket(X, Y):
    chart = X.chart
    comps = {}
    for i in range(chart.dim):
        _add_into(comps, (i,), directional(X, Y[i]) - directional(Y, X[i]))
    return Tensor(chart, "u", comps)


# ---------------------------------------------------------------------------
# connections

class Connection:
    """Torsion-free affine connection, Γ^c_ab stored as {(c, a, b): RatFunc}."""

    def __init__(self, chart, gamma, check_symmetry=True):
        self.chart = chart
        g = {}
        for (c, a, b), v in gamma.items():
            v = chart.scalar(v)
            if v:
                g[(c, a, b)] = v
        if check_symmetry:
            for (c, a, b), v in g.items():
                w = g.get((c, b, a))
                if w is None or not (v - w).is_zero():
                    raise ValueError("connection is not symmetric: Γ^%d_%d%d != Γ^%d_%d%d"
                                     % (c + 1, a + 1, b + 1, c + 1, b + 1, a + 1))
        self.gamma = g
        # lookup tables for covariant derivatives
        self._up = {}     # k -> [(i, e, Γ^i_ek)]
        self._down = {}   # k -> [(i, e, Γ^k_ei)]
        for (c, a, b), v in g.items():
            self._up.setdefault(b, []).append((c, a, v))
            self._down.setdefault(c, []).append((b, a, v))

    def __getitem__(self, cab):
        v = self.gamma.get(tuple(cab))
        return v if v is not None else self.chart.zero()

    def as_tensor(self):
        return Tensor(self.chart, "udd", self.gamma)

    def is_flat_coordinates(self):
        return not self.gamma

    def trace_form(self):
        """Γ^p_pb as a one-form."""
        d = {}
        for (c, a, b), v in self.gamma.items():
            if c == a:
                _add_into(d, (b,), v)
        return Tensor(self.chart, "d", d)


def covariant_derivative(T, conn):
    """∇T with the new (covariant) index in front."""
    if T.chart != conn.chart:
        raise ChartError("tensor and connection live on different charts")
    dim = T.chart.dim
    d = {}
    for idx, val in T.comps.items():
        for e in range(dim):
            _add_into(d, (e,) + idx, val.diff(e))
        for p, kind in enumerate(T.valence):
            k = idx[p]
            if kind == "u":
                for i, e, g in conn._up.get(k, ()):
                    _add_into(d, (e,) + idx[:p] + (i,) + idx[p + 1:], g * val)
            else:
                for i, e, g in conn._down.get(k, ()):
                    _add_into(d, (e,) + idx[:p] + (i,) + idx[p + 1:], -(g * val))
    return Tensor(T.chart, "d" + T.valence, d, T.weight)


def riemann(conn):
    """R_ab^c_d, valence 'ddud'."""
    chart = conn.chart
    dim = chart.dim
    G = conn.gamma
    d = {}
    # derivative terms
    for (c, b, dd), v in G.items():
        for a in range(dim):
            if a == b:
                continue
            dv = v.diff(a)
            if dv:
                _add_into(d, (a, b, c, dd), dv)
                _add_into(d, (b, a, c, dd), -dv)
    # quadratic terms Γ^c_ae Γ^e_bd - Γ^c_be Γ^e_ad
    by_last = {}
    for (c, a, e), v in G.items():
        by_last.setdefault(e, []).append((c, a, v))
    for (e, b, dd), v2 in G.items():
        for c, a, v1 in by_last.get(e, ()):
            if a == b:
                continue
            p = v1 * v2
            _add_into(d, (a, b, c, dd), p)
            _add_into(d, (b, a, c, dd), -p)
    return Tensor(chart, "ddud", d)


def ricci(R):
    """Ric_bd = R_ab^a_d."""
    return contract(R, 0, 2)


class Metric:
    """Metric g_ab with its exact inverse g^ab."""

    def __init__(self, g, ginv=None):
        if g.valence != "dd":
            raise ValueError("metric must have valence 'dd'")
        for (a, b), v in g.comps.items():
            if not (v - g[(b, a)]).is_zero():
                raise ValueError("metric is not symmetric")
        self.g = g
        self.chart = g.chart
        if ginv is None:
            ginv = inverse_metric(g)
        self.ginv = ginv

    @property
    def dim(self):
        return self.chart.dim

    def raise_(self, T, pos):
        return raise_index(T, self.ginv, pos)

    def lower(self, T, pos):
        return lower_index(T, self.g, pos)

    def inner(self, X, Y):
        out = self.chart.zero()
        for (a, b), v in self.g.comps.items():
            x, y = X.comps.get((a,)), Y.comps.get((b,))
            if x is not None and y is not None:
                out = out + v * x * y
        return out

    def flat(self, X):
        return lower_index(X, self.g, 0)

    def sharp(self, w):
        return raise_index(w, self.ginv, 0)

    def check_inverse(self):
        """True if g_ab g^bc = δ_a^c exactly."""
        return _is_identity(contract(tensor_product(self.g, self.ginv), 1, 2))


def _is_identity(P):
    dim = P.chart.dim
    for i in range(dim):
        for j in range(dim):
            v = P[(i, j)] - (1 if i == j else 0)
            if v:
                return False
    return True


def inverse_metric(g):
    """Exact inverse of a metric tensor by elimination over rational functions."""
    chart = g.chart
    dim = chart.dim
    rows = [[g[(i, j)] for j in range(dim)] for i in range(dim)]
    try:
        inv = linalg.inverse(rows)
    except linalg.SingularError as exc:
        raise SingularMetricError("metric is not invertible on the chart") from exc
    comps = {(i, j): inv[i][j] for i in range(dim) for j in range(dim)}
    return Tensor(chart, "uu", comps, -g.weight)


def levi_civita(metric):
    """Γ^c_ab = ½ g^cd (∂_a g_bd + ∂_b g_ad - ∂_d g_ab)."""
    g = metric.g
    chart = g.chart
    dim = chart.dim
    dg = {}
    for (a, b), v in g.comps.items():
        for e in range(dim):
            w = v.diff(e)
            if w:
                dg[(e, a, b)] = w
    lowered = {}   # Γ_dab = ½(∂_a g_bd + ∂_b g_ad - ∂_d g_ab)
    half = Q(1, 2)
    for (e, a, b), w in dg.items():
        # w = ∂_e g_ab enters Γ_dij as ∂_i g_jd, ∂_j g_id and -∂_d g_ij
        _add_into(lowered, (b, e, a), w * half)
        _add_into(lowered, (b, a, e), w * half)
        _add_into(lowered, (e, a, b), -(w * half))
    G = {}
    for (dd, a, b), v in lowered.items():
        for c, gcd in _col(metric.ginv, dd):
            _add_into(G, (c, a, b), gcd * v)
    return Connection(chart, G, check_symmetry=False)


def _col(M, j):
    for (a, b), v in M.comps.items():
        if b == j:
            yield a, v
