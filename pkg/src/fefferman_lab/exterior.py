"""Exterior algebra spinor model shared by the curved and the algebraic side.

A spinor is a map from subsets S of {0..dim-1} (stored as bitmasks) to
coefficients.  Clifford actions pick up factors of sqrt(2); these are kept out
of the coefficients as an integer exponent ``root2``, the represented element
being sqrt(2)**root2 * sum(c_S e_S).
"""


def _popcount(x):
    return bin(x).count("1")


def _sign_before(mask, a):
    # (-1)^(number of elements of mask smaller than a)
    return -1 if _popcount(mask & ((1 << a) - 1)) & 1 else 1


class Spinor:
    __slots__ = ("dim", "comps", "root2")

    def __init__(self, dim, comps=None, root2=0):
        self.dim = dim
        self.comps = {S: c for S, c in (comps or {}).items() if c}
        self.root2 = root2

    def _new(self, comps, root2):
        return Spinor(self.dim, comps, root2)

    @classmethod
    def basis(cls, dim, subset, coeff=1):
        mask = 0
        for i in subset:
            mask |= 1 << i
        return cls(dim, {mask: coeff})

    def is_zero(self):
        return not self.comps

    def __bool__(self):
        return bool(self.comps)

    def degrees(self):
        return sorted({_popcount(S) for S in self.comps})

    def parity(self):
        """0 for even, 1 for odd, None for mixed or zero."""
        ps = {_popcount(S) & 1 for S in self.comps}
        return ps.pop() if len(ps) == 1 else None

    def with_root2(self, r):
        """Same element written with sqrt(2) exponent r (r <= root2, same parity)."""
        d = self.root2 - r
        if d < 0 or d & 1:
            raise ValueError("cannot rewrite sqrt(2)^%d as sqrt(2)^%d rationally" % (self.root2, r))
        if d == 0:
            return self
        f = 2 ** (d // 2)
        return self._new({S: c * f for S, c in self.comps.items()}, r)

    def with_root2_shift(self, k):
        """sqrt(2)**k times this spinor."""
        return self._new(self.comps, self.root2 + k)

    def rational(self):
        """Coefficients of the element itself; requires an even sqrt(2) exponent."""
        return self.with_root2(0) if self.root2 >= 0 else self._lift(0)

    def _lift(self, r):
        # root2 negative and even: divide
        d = r - self.root2
        if d & 1:
            raise ValueError("odd power of sqrt(2) remains")
        f = 2 ** (d // 2)
        return self._new({S: c / f for S, c in self.comps.items()}, r)

    def aligned(self, other):
        if self.root2 == other.root2:
            return self, other
        if (self.root2 - other.root2) & 1:
            raise ValueError("adding spinors with incommensurable sqrt(2) factors")
        r = min(self.root2, other.root2)
        return self.with_root2(r), other.with_root2(r)

    def __add__(self, other):
        if not other.comps:
            return self
        if not self.comps:
            return other
        a, b = self.aligned(other)
        res = dict(a.comps)
        for S, c in b.comps.items():
            res[S] = res[S] + c if S in res else c
        return self._new(res, a.root2)

    def __neg__(self):
        return self._new({S: -c for S, c in self.comps.items()}, self.root2)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c):
        return self._new({S: v * c for S, v in self.comps.items()}, self.root2)

    def map_coeffs(self, fn):
        return self._new({S: fn(v) for S, v in self.comps.items()}, self.root2)

    def wedge(self, a, coeff=1):
        """coeff * e_a ^ self (no sqrt(2) factor)."""
        bit = 1 << a
        res = {}
        for S, c in self.comps.items():
            if not S & bit:
                res[S | bit] = c * coeff if _sign_before(S, a) > 0 else -(c * coeff)
        return self._new(res, self.root2)

    def contract(self, a, coeff=1):
        """coeff * interior product with the dual basis vector of e_a."""
        bit = 1 << a
        res = {}
        for S, c in self.comps.items():
            if S & bit:
                res[S ^ bit] = c * coeff if _sign_before(S, a) > 0 else -(c * coeff)
        return self._new(res, self.root2)

    def component(self, subset):
        mask = 0
        for i in subset:
            mask |= 1 << i
        return self.comps.get(mask, 0)

    def __repr__(self):
        parts = []
        for S in sorted(self.comps, key=lambda m: (_popcount(m), m)):
            idx = [i + 1 for i in range(self.dim) if S >> i & 1]
            name = "e" + "".join(map(str, idx)) if idx else "1"
            parts.append("(%s)%s" % (self.comps[S], name))
        body = " + ".join(parts) or "0"
        return body if not self.root2 else "sqrt2^%d*[%s]" % (self.root2, body)


def top_pairing(s, t):
    """Coefficient of e_0^...^e_{dim-1} in s ^ t (sqrt(2) exponents must cancel)."""
    dim = s.dim
    full = (1 << dim) - 1
    total = 0
    for S, c in s.comps.items():
        T = full ^ S
        d = t.comps.get(T)
        if d is None:
            continue
        # sign of e_S ^ e_T relative to e_full: count pairs i in S, j in T with i > j
        inv = 0
        for i in range(dim):
            if S >> i & 1:
                inv += _popcount(T & ((1 << i) - 1))
        term = c * d
        total = total + (term if inv % 2 == 0 else -term)
    r = s.root2 + t.root2
    if r & 1:
        raise ValueError("pairing leaves an odd power of sqrt(2)")
    return total * 2 ** (r // 2) if r >= 0 else total / 2 ** (-r // 2)
