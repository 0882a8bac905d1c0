"""Matrix model of so(n+1,n+1) ⊃ sl(n+1), spinors on Λ•R^{n+1}, Kostant codifferential.

Everything is exact: matrices are numpy object arrays of gmpy2.mpq.  Index
conventions (0-based): e_0..e_n span E, e_{n+1}..e_{2n+1} span F, and
h(e_i, e_{n+1+i}) = 1.  The distinguished null vector is v~ = e_0 + e_{2n+1}.
"""

import itertools

import numpy as np
from gmpy2 import mpq

from . import linalg
from .exterior import Spinor, top_pairing

ZERO = mpq(0)
ONE = mpq(1)
HALF = mpq(1, 2)
FBAR_WEDGE_SCALE = mpq(-1, 2)


def zeros(N):
    return np.full((N, N), ZERO, dtype=object)


def unit(N, i, j):
    M = zeros(N)
    M[i, j] = ONE
    return M


def bracket(A, B):
    return A.dot(B) - B.dot(A)


def is_zero(A):
    return not any(x for x in A.flat)


def mat_equal(A, B):
    return is_zero(A - B)


def flat(A):
    return list(A.flat)


class ModelError(ValueError):
    pass


class ComponentError(ValueError):
    """Raised when a cochain does not land in the component the theory predicts."""


class LieModel:
    """All algebras, gradings and dual bases for a given n.

    ``form_scale`` fixes the invariant form B(X, Y) = form_scale * tr(XY) that
    is used for every duality.  The default 1/2 is the normalisation under
    which the Kostant Laplacian acts by 2 on the component (f ⊙ Λ²f)[-4]; the
    tests check that statement rather than assume it.
    """

    def __init__(self, n, form_scale=HALF):
        if n < 2:
            raise ModelError("n must be at least 2")
        self.n = n
        self.m = m = n + 1
        self.N = N = 2 * n + 2
        self.form_scale = mpq(form_scale)
        I = np.identity(m, dtype=object) * ONE
        Z = zeros(m)
        self.h = np.block([[Z, I], [I, Z]]).astype(object)
        self.K = np.block([[I, Z], [Z, -I]]).astype(object)
        self.vt = np.array([ONE] + [ZERO] * (N - 2) + [ONE], dtype=object)

        self.gt_basis = [self.h.dot(unit(N, i, j) - unit(N, j, i))
                         for i in range(N) for j in range(i + 1, N)]
        self.p_t = self.subspace(self._stabilises_line(self.vt))
        e_op = np.array([ZERO] * N, dtype=object)
        e_op[m] = ONE
        self.p_op = self.subspace(self._stabilises_line(e_op))
        self.g0_t = self.intersect(self.p_t, self.p_op)
        self.p_plus_t = self.orthogonal(self.p_t)
        self.g_minus_t = self.orthogonal(self.p_op)

        # sl(n+1) and its projective parabolic, embedded by A -> diag(A, -A^T)
        self.sl_basis = []
        for i in range(m):
            for j in range(m):
                if i != j:
                    self.sl_basis.append(self.embed(unit(m, i, j)))
        for i in range(m - 1):
            self.sl_basis.append(self.embed(unit(m, i, i) - unit(m, i + 1, i + 1)))
        self.g_minus = [self.embed(unit(m, i, 0)) for i in range(1, m)]
        self.p_plus = [self.embed(unit(m, 0, j)) for j in range(1, m)]
        self.p = [X for X in self.sl_basis if all(X[i, 0] == 0 for i in range(1, m))]
        self.q = self.intersect(self.sl_basis, self.p_t)

        # coset representatives of g~/p~ = g/q: first n span g/p (X-entries and
        # the w-entry), then the Y-entries and the z-direction, which lie in p.
        reps = [self.embed(unit(m, i, 0)) for i in range(1, m)]
        reps += [self.embed(unit(m, n, j)) for j in range(1, n)]
        z = zeros(m)
        z[0, 0] = z[n, n] = -HALF
        for j in range(1, n):
            z[j, j] = mpq(1, n - 1)
        reps.append(self.embed(z))
        self.X = reps
        if linalg.rank([self.coords(x) for x in self.X] + [self.coords(p) for p in self.p_t]) \
                != len(self.X) + len(self.p_t):
            raise ModelError("coset representatives are not independent modulo p~")
        # representatives inside g~_- (used where a grading is needed)
        self.X_minus = [self.project(x, self.g_minus_t, self.p_t)[0] for x in self.X]
        # dual bases under B
        self.Zt = self._dual_in(self.p_plus_t, self.X)
        self.Z = self._dual_in(self.p_plus, self.X[:n])

        # spinors
        self.s_F = Spinor(m, {0: ONE})
        self.s_E = Spinor(m, {(1 << m) - 1: -HALF})

    # -- linear algebra on g~ ------------------------------------------------
    def coords(self, X):
        A = self.h.dot(X)
        N = self.N
        return [A[i, j] for i in range(N) for j in range(i + 1, N)]

    def from_coords(self, c, basis=None):
        basis = self.gt_basis if basis is None else basis
        M = zeros(self.N)
        for ci, b in zip(c, basis):
            if ci:
                M = M + b * ci
        return M

    def in_gt(self, X):
        A = self.h.dot(X)
        return is_zero(A + A.T)

    def form(self, X, Y):
        return self.form_scale * np.trace(X.dot(Y))

    def subspace(self, conditions, basis=None):
        """Basis of {X in span(basis) : conditions(X) == 0 componentwise}."""
        basis = self.gt_basis if basis is None else basis
        cols = [conditions(b) for b in basis]
        rows = [[c[k] for c in cols] for k in range(len(cols[0]))]
        ns = linalg.nullspace(rows, len(basis), ZERO, ONE)
        return [self.from_coords(v, basis) for v in ns]

    def intersect(self, U, V):
        if not U or not V:
            return []
        # solve sum a_i U_i = sum b_j V_j
        rows_u = [self.coords(u) for u in U]
        rows_v = [self.coords(v) for v in V]
        dim = len(rows_u[0])
        mat = [[ru[k] for ru in rows_u] + [-rv[k] for rv in rows_v] for k in range(dim)]
        ns = linalg.nullspace(mat, len(U) + len(V), ZERO, ONE)
        out = [self.from_coords(v[:len(U)], U) for v in ns]
        return self.basis_of(out)

    def basis_of(self, mats):
        if not mats:
            return []
        R, piv = linalg.rref([self.coords(x) for x in mats])
        return [self.from_coords(R[i]) for i in range(len(piv))]

    def orthogonal(self, U):
        return self.subspace(lambda X: [self.form(X, u) for u in U])

    def in_span(self, X, basis):
        return linalg.in_span([self.coords(b) for b in basis], self.coords(X))

    def span_equal(self, U, V):
        return all(self.in_span(u, V) for u in U) and all(self.in_span(v, U) for v in V) \
            and linalg.rank([self.coords(u) for u in U] or [[ZERO]]) == \
            linalg.rank([self.coords(v) for v in V] or [[ZERO]])

    def decompose(self, X, basis):
        c = linalg.coordinates([self.coords(b) for b in basis], self.coords(X))
        if c is None:
            raise ComponentError("element not in the given span")
        return c

    def project(self, X, U, V):
        """Split X = u + v with u in span U, v in span V (U ⊕ V assumed direct)."""
        c = self.decompose(X, list(U) + list(V))
        u = self.from_coords(c[:len(U)], U)
        return u, X - u

    def _stabilises_line(self, v):
        N = self.N
        k = next(i for i in range(N) if v[i])

        def cond(X):
            w = X.dot(v)
            lam = w[k] / v[k]
            return [w[i] - lam * v[i] for i in range(N)]
        return cond

    def _dual_in(self, space, reps):
        """Elements Z_j of span(space) with B(reps_i, Z_j) = delta_ij."""
        G = [[self.form(r, s) for s in space] for r in reps]
        out = []
        for j in range(len(reps)):
            rhs = [ONE if i == j else ZERO for i in range(len(reps))]
            c = linalg.solve(G, rhs)
            if c is None:
                raise ModelError("pairing between representatives and dual space is degenerate")
            out.append(self.from_coords(c, space))
        return out

    def embed(self, A):
        m = self.m
        M = zeros(self.N)
        M[:m, :m] = A
        M[m:, m:] = -A.T
        return M

    def coset_coords(self, X):
        """Coordinates of X + p~ in the basis self.X."""
        c = self.decompose(X, list(self.X) + list(self.p_t))
        return c[:2 * self.n]

    # -- blocks of g~ = Λ²(E ⊕ F) --------------------------------------------
    def block_parts(self, X):
        m = self.m
        EF = zeros(self.N)
        EF[:m, :m] = X[:m, :m]
        EF[m:, m:] = X[m:, m:]
        L2E = zeros(self.N)
        L2E[:m, m:] = X[:m, m:]
        L2F = zeros(self.N)
        L2F[m:, :m] = X[m:, :m]
        return EF, L2E, L2F

    def lambda2E_basis(self):
        return [b for b in self.gt_basis if is_zero(b[:self.m, :self.m]) and is_zero(b[self.m:, :])]

    def lambda2F_basis(self):
        return [b for b in self.gt_basis if is_zero(b[:, self.m:]) and is_zero(b[:self.m, :])]

    def EF_basis(self):
        m = self.m
        return [b for b in self.gt_basis if is_zero(b[:m, m:]) and is_zero(b[m:, :m])]

    def lambda2Fbar(self):
        return self.intersect(self.lambda2F_basis(), self.p_t)

    # -- spinors -----------------------------------------------------------------
    def clifford(self, x, s):
        """x · s for a vector x of R^{n+1,n+1}; E acts by sqrt2*wedge, F by -sqrt2*contraction."""
        m = self.m
        out = Spinor(m, {}, s.root2 + 1)
        for i in range(m):
            if x[i]:
                out = out + s.wedge(i, x[i]).with_root2_shift(1)
            if x[m + i]:
                out = out + s.contract(i, -x[m + i]).with_root2_shift(1)
        return out

    def basis_vector(self, i):
        v = np.array([ZERO] * self.N, dtype=object)
        v[i] = ONE
        return v

    def spin_action(self, A, s):
        """A • s, the lift of A in so(h) to the spin representation."""
        if not self.in_gt(A):
            raise ModelError("matrix is not in so(h)")
        N, m = self.N, self.m
        out = Spinor(m, {}, s.root2)
        for l in range(N):
            for j in range(N):
                a = A[l, j]
                if not a:
                    continue
                jd = j + m if j < m else j - m      # h e_j
                t = self.clifford(self.basis_vector(jd), self.clifford(self.basis_vector(l), s))
                out = out + t.scale(a / 4)
        return out

    def pairing(self, s, t):
        return top_pairing(s, t)

    def twoform_clifford(self, x, y, s):
        """(x ∧ y) · s = x·y·s + h(x, y) s."""
        hxy = x.dot(self.h).dot(y)
        return self.clifford(x, self.clifford(y, s)) + s.scale(hxy)

    def wedge_matrix(self, x, y):
        """Matrix in so(h) whose spin action is -1/4 (x ∧ y)·."""
        hx = self.h.dot(x)
        hy = self.h.dot(y)
        return (np.outer(x, hy) - np.outer(y, hx)) * HALF

    def annihilator(self, s):
        """Basis of {A in g~ : A • s = 0}."""
        keys = sorted({S for b in self.gt_basis for S in self.spin_action(b, s).rational().comps}
                      | set(s.comps))

        def cond(X):
            r = self.spin_action(X, s).rational()
            return [r.comps.get(k, ZERO) for k in keys]
        return self.subspace(cond)

    def clifford_kernel_dim(self, s):
        N = self.N
        imgs = [self.clifford(self.basis_vector(i), s) for i in range(N)]
        r = min(im.root2 for im in imgs)
        imgs = [im.with_root2(r) for im in imgs]
        keys = sorted({k for im in imgs for k in im.comps})
        if not keys:
            return N
        rows = [[im.comps.get(k, ZERO) for im in imgs] for k in keys]
        return N - linalg.rank(rows)

    def f_hat(self):
        return self.intersect(self.p_plus_t, self.annihilator(self.s_F))

    # -- identification f^ <-> F-bar ------------------------------------------
    def fbar_vectors(self):
        """u_a in F-bar with Z~_a = v~ ∧ u_a (as wedge_matrix), a = 0..n-1."""
        out = []
        Fbar = [self.basis_vector(i) for i in range(self.m + 1, self.N)]
        for a in range(self.n):
            target = self.Zt[a]
            cols = [flat(self.wedge_matrix(self.vt, u)) for u in Fbar]
            rows = [[c[k] for c in cols] for k in range(len(cols[0]))]
            c = linalg.solve(rows, flat(target))
            if c is None:
                raise ComponentError("Z~_%d is not of the form v~ ∧ u with u in F-bar" % (a + 1))
            u = sum((ui * ci for ui, ci in zip(Fbar, c)), np.array([ZERO] * self.N, dtype=object))
            out.append(u)
        return out

    def fbar_wedge(self, a, b):
        """The element written Z~_a ∧ Z~_b of Λ²F-bar.

        With Z~_a = v~ ∧ u_a this is -1/2 u_a ∧ u_b; the scalar is the
        normalisation of the isomorphism Λ²F-bar = Λ²f^ ⊗ (density weight).
        """
        u = self.__dict__.get("_fbar_u")
        if u is None:
            u = self._fbar_u = self.fbar_vectors()
        return self.wedge_matrix(u[a], u[b]) * FBAR_WEDGE_SCALE


# ---------------------------------------------------------------------------
# cochains

class Cochain:
    """Alternating k-linear map on a quotient with a fixed basis, values in g~.

    ``values`` maps increasing index tuples to matrices; missing keys are zero.
    ``nbasis`` is 2n for (g~, p~) and n for (g, p).
    """

    def __init__(self, degree, nbasis, values=None, module="adjoint"):
        self.degree = degree
        self.nbasis = nbasis
        self.module = module
        self.values = {}
        for k, v in (values or {}).items():
            if not is_zero(v):
                self.values[tuple(k)] = v

    def __call__(self, *idx):
        if len(idx) != self.degree:
            raise ValueError("expected %d arguments" % self.degree)
        if len(set(idx)) < len(idx):
            return None
        order = sorted(range(len(idx)), key=lambda i: idx[i])
        key = tuple(idx[i] for i in order)
        sign = _perm_sign(order)
        v = self.values.get(key)
        if v is None:
            return None
        return v if sign > 0 else -v

    def value(self, *idx, N):
        v = self(*idx)
        return zeros(N) if v is None else v

    def is_zero(self):
        return not self.values

    def __add__(self, other):
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals[k] + v if k in vals else v
        return Cochain(self.degree, self.nbasis, vals, self.module)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        return Cochain(self.degree, self.nbasis, {k: v * c for k, v in self.values.items()},
                       self.module)

    def equals(self, other):
        return (self - other).is_zero()

    def coordinates(self, model):
        out = []
        for key in itertools.combinations(range(self.nbasis), self.degree):
            v = self.values.get(key)
            out.extend(model.coords(v) if v is not None else [ZERO] * len(model.gt_basis))
        return out


def _perm_sign(order):
    sign = 1
    seen = list(order)
    for i in range(len(seen)):
        for j in range(i + 1, len(seen)):
            if seen[i] > seen[j]:
                sign = -sign
    return sign


def decomposable(model, forms, value, nbasis=None):
    """Cochain Z_{a1} ∧ ... ∧ Z_{ak} ⊗ value where Z_a is the dual of basis index a.

    The wedge is normalised as the antisymmetrisation with weight 1/k!, so that
    (Z_a ∧ Z_b)(X_a, X_b) = 1/2.
    """
    k = len(forms)
    nbasis = 2 * model.n if nbasis is None else nbasis
    vals = {}
    if len(set(forms)) < k:
        return Cochain(k, nbasis)
    order = sorted(range(k), key=lambda i: forms[i])
    key = tuple(forms[i] for i in order)
    from math import factorial
    vals[key] = value * (mpq(_perm_sign(order)) / factorial(k))
    return Cochain(k, nbasis, vals)


def del_star(model, phi, side="tilde"):
    """Kostant codifferential: (∂*φ)(Y..) = k Σ_i [φ(X_i, Y..), Z_i].

    For k = 2 this is the displayed ∂*₁; the ∂*₂ part vanishes for the
    |1|-graded pairs used here (see :func:`del_star_2`).
    """
    k = phi.degree
    if k == 0:
        raise ValueError("codifferential of a 0-cochain")
    Zs = model.Zt if side == "tilde" else model.Z
    nb = phi.nbasis
    N = model.N
    vals = {}
    for key in itertools.combinations(range(nb), k - 1):
        acc = zeros(N)
        for i in range(nb):
            if i in key:
                continue
            v = phi(i, *key)
            if v is not None:
                acc = acc + bracket(v, Zs[i])
        if not is_zero(acc):
            vals[key] = acc * k
    return Cochain(k - 1, nb, vals, phi.module)


def del_star_2(model, phi):
    """Σ_i φ(X_i, [Z~_i, X]) for a 2-cochain, evaluated with X in g~_-."""
    nb = phi.nbasis
    vals = {}
    for j in range(nb):
        acc = zeros(model.N)
        for i in range(nb):
            c = model.coset_coords(bracket(model.Zt[i], model.X_minus[j]))
            for l, cl in enumerate(c):
                if cl:
                    v = phi(i, l)
                    if v is not None:
                        acc = acc + v * cl
        if not is_zero(acc):
            vals[(j,)] = acc
    return Cochain(1, nb, vals)


def del_(model, psi):
    """Kostant differential on cochains of g~_- with values in g~.

    ∂ψ(Y_0..Y_k) = -Σ_i (-1)^i [Y_i, ψ(..Ŷ_i..)], with Y_i the g~_- representatives
    (g~_- is abelian, so there are no bracket terms).  The overall sign is the
    one for which ∂ is adjoint to ∂* and the Laplacian is non-negative.
    """
    k = psi.degree
    nb = psi.nbasis
    vals = {}
    for key in itertools.combinations(range(nb), k + 1):
        acc = zeros(model.N)
        for pos, i in enumerate(key):
            rest = key[:pos] + key[pos + 1:]
            v = psi(*rest) if k else psi.values.get((), None)
            if v is None:
                continue
            t = bracket(model.X_minus[i], v)
            acc = acc + (-t if pos % 2 == 0 else t)
        if not is_zero(acc):
            vals[key] = acc
    return Cochain(k + 1, nb, vals)


def laplacian(model, psi):
    """Kostant Laplacian ∂∂* + ∂*∂."""
    a = del_(model, del_star(model, psi)) if psi.degree > 0 else Cochain(psi.degree, psi.nbasis)
    b = del_star(model, del_(model, psi))
    return a + b


def g0_action(model, A, psi):
    """(A.ψ)(Y..) = [A, ψ(Y..)] - Σ ψ(.., [A, Y_i], ..) for A in g~_0, Y_i in g~_-."""
    k, nb = psi.degree, psi.nbasis
    ad = [model.coset_coords(bracket(A, model.X_minus[i])) for i in range(nb)]
    vals = {}
    for key in itertools.combinations(range(nb), k):
        v = psi(*key) if k else psi.values.get(())
        acc = zeros(model.N) if v is None else bracket(A, v)
        for pos, i in enumerate(key):
            for l, c in enumerate(ad[i]):
                if c:
                    w = psi(*(key[:pos] + (l,) + key[pos + 1:]))
                    if w is not None:
                        acc = acc - w * c
        if not is_zero(acc):
            vals[key] = acc
    return Cochain(k, nb, vals, psi.module)


def extend_cochain(model, kappa):
    """Pull back a cochain on g/p along g~/p~ = g/q -> g/p (values already embedded)."""
    n = model.n
    if kappa.nbasis != n:
        raise ValueError("expected a cochain on g/p")
    vals = {key: v for key, v in kappa.values.items()}
    return Cochain(kappa.degree, 2 * n, vals, kappa.module)


def restrict_is_horizontal(model, phi):
    """True if φ vanishes whenever an argument comes from f = p/q."""
    n = model.n
    return all(max(key) < n for key in phi.values)


def values_in(model, phi, basis):
    return all(model.in_span(v, basis) for v in phi.values.values())


def alternation(model, psi):
    """alt: f^ ⊗ Λ²F-bar -> Λ³ f, as a dict over increasing triples (a, b, c)."""
    n = model.n
    if not restrict_is_horizontal(model, psi):
        raise ComponentError("cochain does not vanish on f")
    W = {(b, c): model.fbar_wedge(b, c) for b in range(n) for c in range(b + 1, n)}
    pairs = list(W)
    cols = [flat(W[p]) for p in pairs]
    rows = [[c[k] for c in cols] for k in range(len(cols[0]))] if cols else []
    out = {}
    for (a,), v in psi.values.items():
        if not pairs:
            raise ComponentError("Λ²F-bar is zero but the cochain is not")
        coeffs = linalg.solve(rows, flat(v))
        if coeffs is None:
            raise ComponentError("value is not in Λ²F-bar")
        for (b, c), t in zip(pairs, coeffs):
            if not t or a in (b, c):
                continue
            trip = (a, b, c)
            order = sorted(range(3), key=lambda i: trip[i])
            key = tuple(trip[i] for i in order)
            out[key] = out.get(key, ZERO) + t * _perm_sign(order)
    return {k: v for k, v in out.items() if v}


def in_component(model, psi):
    """Membership in f^ ⊗ Λ²F-bar ∩ ker(alt)."""
    if not restrict_is_horizontal(model, psi):
        return False
    if not values_in(model, psi, model.lambda2Fbar()):
        return False
    return not alternation(model, psi)


def normalize_step(model, kappa_t):
    """Ψ¹ = -½ ∂~* κ~, after checking the component it lives in."""
    d = del_star(model, kappa_t)
    if not in_component(model, d):
        raise ComponentError("∂~*κ~ is not in f^ ⊗ Λ²F-bar ∩ ker(alt)")
    return d.scale(-HALF)


def component_basis(model):
    """Spanning set of f^ ⊗ Λ²F-bar ∩ ker(alt), as 1-cochains."""
    n = model.n
    pairs = [(b, c) for b in range(n) for c in range(b + 1, n)]
    cands = []
    for a in range(n):
        for (b, c) in pairs:
            cands.append((a, b, c))
    # coefficients t_{a,bc}; alternation constraint for each triple
    triples = list(itertools.combinations(range(n), 3))
    rows = []
    for trip in triples:
        row = []
        for (a, b, c) in cands:
            if len({a, b, c}) < 3 or set(trip) != {a, b, c}:
                row.append(ZERO)
                continue
            t = (a, b, c)
            order = sorted(range(3), key=lambda i: t[i])
            row.append(mpq(_perm_sign(order)))
        rows.append(row)
    if rows:
        ns = linalg.nullspace(rows, len(cands), ZERO, ONE)
    else:
        ns = [[ONE if i == j else ZERO for i in range(len(cands))] for j in range(len(cands))]
    out = []
    for v in ns:
        vals = {}
        for coeff, (a, b, c) in zip(v, cands):
            if coeff:
                W = model.fbar_wedge(b, c) * coeff
                vals[(a,)] = vals[(a,)] + W if (a,) in vals else W
        out.append(Cochain(1, 2 * n, vals))
    return out


def laplacian_inverse_on_component(model, target):
    """Solve □x = target for x in the component f^ ⊗ Λ²F-bar ∩ ker(alt)."""
    basis = component_basis(model)
    imgs = [laplacian(model, b).coordinates(model) for b in basis]
    rows = [[im[k] for im in imgs] for k in range(len(imgs[0]))]
    c = linalg.solve(rows, target.coordinates(model))
    if c is None:
        raise ComponentError("target not in the image of □ on the component")
    out = Cochain(1, 2 * model.n)
    for ci, b in zip(c, basis):
        if ci:
            out = out + b.scale(ci)
    return out


# ---------------------------------------------------------------------------
# specific elements

def worked_example(model):
    """Z1∧Z2⊗X_n⊗Z_n − Z1∧Z2⊗X1⊗Z1 + Z_n∧Z2⊗X_n⊗Z1 as a cochain on g/p."""
    n = model.n

    def gl(i, j):
        return model.endo_element(i, j)
    v1 = gl(n - 1, n - 1) - gl(0, 0)
    phi = decomposable(model, (0, 1), v1, nbasis=n)
    phi = phi + decomposable(model, (n - 1, 1), gl(n - 1, 0), nbasis=n)
    return phi


def _endo_element(self, i, j):
    """Element A of g_0 with [A, X_k] = δ_jk X_i on g_- (the endomorphism X_i ⊗ Z_j)."""
    cache = self.__dict__.setdefault("_endo_cache", {})
    if (i, j) in cache:
        return cache[(i, j)]
    m, n = self.m, self.n
    # g_0 of sl(n+1) is spanned by E_ab (a, b >= 1) made trace free with E_00
    g0 = [self.embed(unit(m, a, b) - (unit(m, 0, 0) if a == b else zeros(m)))
          for a in range(1, m) for b in range(1, m)]
    cols = []
    for A in g0:
        col = []
        for k in range(n):
            col.extend(self.coords(bracket(A, self.g_minus[k])))
        cols.append(col)
    rhs = []
    for k in range(n):
        rhs.extend(self.coords(self.g_minus[i]) if k == j else [ZERO] * len(self.gt_basis))
    rows = [[c[r] for c in cols] for r in range(len(rhs))]
    c = linalg.solve(rows, rhs)
    if c is None:
        raise ModelError("no g_0 element realises X_%d ⊗ Z_%d" % (i + 1, j + 1))
    A = self.from_coords(c, g0)
    cache[(i, j)] = A
    return A


LieModel.endo_element = _endo_element


def worked_example_expected(model):
    """−Z~1 ⊗ Z~n∧Z~2 − Z~n ⊗ Z~1∧Z~2 as a 1-cochain on g~/p~."""
    n = model.n
    vals = {}
    A = -model.fbar_wedge(n - 1, 1)
    B = -model.fbar_wedge(0, 1)
    vals[(0,)] = A
    vals[(n - 1,)] = vals[(n - 1,)] + B if (n - 1,) in vals else B
    return Cochain(1, 2 * n, vals)


def random_cochain(model, degree, rng, nbasis=None, values=None, lo=-3, hi=3):
    nbasis = 2 * model.n if nbasis is None else nbasis
    values = model.gt_basis if values is None else values
    vals = {}
    for key in itertools.combinations(range(nbasis), degree):
        M = zeros(model.N)
        for b in values:
            c = rng.randint(lo, hi)
            if c:
                M = M + b * c
        vals[key] = M
    return Cochain(degree, nbasis, vals)


def weyl_cochain(model, W, Y=None):
    """Projective curvature cochain from tensor values at a point.

    κ(X_A, X_B) = W_AB^C_D (X_C ⊗ Z_D) + Y_CAB Z_C; W and Y are dicts keyed by
    index tuples (A, B, C, D) and (C, A, B).
    """
    n = model.n
    vals = {}
    for a in range(n):
        for b in range(a + 1, n):
            M = zeros(model.N)
            for c in range(n):
                for d in range(n):
                    w = W.get((a, b, c, d), 0)
                    if w:
                        M = M + model.endo_element(c, d) * w
            if Y:
                for c in range(n):
                    y = Y.get((c, a, b), 0)
                    if y:
                        M = M + model.Z[c] * y
            vals[(a, b)] = M
    return Cochain(2, n, vals)
