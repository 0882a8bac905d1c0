"""Exact Gaussian elimination over Q (mpq) or over rational functions.

Entries only need +, -, *, / and truth testing (nonzero is truthy), so the same
routines serve plain rationals and RatFunc.  Matrices are lists of rows.
"""

from .exact_core import ExactError, RatFunc


class SingularError(ExactError, ValueError):
    pass


def _pivot_cost(x):
    # Prefer constant pivots for rational functions: they keep entries small.
    if isinstance(x, RatFunc):
        return 0 if x.is_constant() else len(x.num.terms) + len(x.den.terms)
    return 0


def _tidy(x):
    if isinstance(x, RatFunc) and not x.den.is_one():
        return x.normalize()
    return x


def rref(rows):
    """Reduced row echelon form.  Returns (matrix, pivot columns)."""
    M = [list(r) for r in rows]
    if not M:
        return M, []
    nrows, ncols = len(M), len(M[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        best = None
        for i in range(r, nrows):
            if M[i][c]:
                cost = _pivot_cost(M[i][c])
                if best is None or cost < best[0]:
                    best = (cost, i)
                    if cost == 0:
                        break
        if best is None:
            continue
        i = best[1]
        M[r], M[i] = M[i], M[r]
        inv = 1 / M[r][c]
        M[r] = [_tidy(x * inv) if x else x for x in M[r]]
        for i in range(nrows):
            if i != r and M[i][c]:
                f = M[i][c]
                M[i] = [_tidy(a - f * b) if b else a for a, b in zip(M[i], M[r])]
        pivots.append(c)
        r += 1
    return M, pivots


def rank(rows):
    return len(rref(rows)[1])


def nullspace(rows, ncols=None, zero=0, one=1):
    """Basis of {v : rows v = 0}."""
    if not rows:
        if ncols is None:
            raise ValueError("need ncols for an empty matrix")
        return [[one if i == j else zero for i in range(ncols)] for j in range(ncols)]
    R, piv = rref(rows)
    ncols = len(R[0])
    free = [c for c in range(ncols) if c not in piv]
    basis = []
    for f in free:
        v = [zero] * ncols
        v[f] = one
        for i, p in enumerate(piv):
            v[p] = -R[i][f]
        basis.append(v)
    return basis


def solve(rows, rhs):
    """One solution of rows x = rhs, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, piv = rref(aug)
    ncols = len(rows[0])
    if ncols in piv:
        return None
    zero = rhs[0] * 0 if rhs else 0
    x = [zero] * ncols
    for i, p in enumerate(piv):
        x[p] = R[i][ncols]
    return x


def inverse(rows):
    n = len(rows)
    one = rows[0][0] ** 0 if hasattr(rows[0][0], "__pow__") else 1
    zero = one - one
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularError("matrix is singular")
    return [row[n:] for row in R]


def in_span(basis, v):
    """True if v lies in the span of the given vectors."""
    if not basis:
        return not any(v)
    return rank(list(basis) + [list(v)]) == rank(list(basis))


def coordinates(basis, v):
    """Coefficients c with sum c_i basis_i = v, or None."""
    cols = [[b[k] for b in basis] for k in range(len(v))]
    return solve(cols, list(v))
