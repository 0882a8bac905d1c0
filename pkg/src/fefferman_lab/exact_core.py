"""Exact scalars: rationals, sparse multivariate polynomials, rational functions.

Monomials are packed into a single Python int.  Each variable gets a 16 bit
field, variable 0 in the most significant field, and the total degree sits
above all of them.  Comparing packed ints is then graded lexicographic order
and multiplying monomials is integer addition.
"""

from fractions import Fraction

from gmpy2 import mpq

BITS = 16
MASK = (1 << BITS) - 1


class ExactError(Exception):
    """Base class for errors raised by the exact layer."""


class DimensionError(ExactError, ValueError):
    pass


class PoleError(ExactError, ZeroDivisionError):
    """Evaluation hit a zero of the denominator."""


class ZeroDivision(ExactError, ZeroDivisionError):
    pass


def Q(x, den=None):
    """Coerce to an exact rational (gmpy2.mpq)."""
    if den is not None:
        return mpq(x, den)
    if isinstance(x, Fraction):
        return mpq(x.numerator, x.denominator)
    if isinstance(x, float):
        raise TypeError("floats are not exact; pass a Fraction or a string")
    return mpq(x)


_RATIONAL_TYPES = (int, type(mpq(0)), Fraction)


def _shift(i, nvars):
    return BITS * (nvars - 1 - i)


def pack(exps):
    nvars = len(exps)
    m = 0
    for e in exps:
        if e < 0 or e > MASK:
            raise DimensionError("exponent out of range: %r" % (e,))
        m = (m << BITS) | e
    return (sum(exps) << (BITS * nvars)) | m


def unpack(m, nvars):
    return tuple((m >> _shift(i, nvars)) & MASK for i in range(nvars))


def _mono_degree(m, nvars):
    return m >> (BITS * nvars)


class MultiPoly:
    """Sparse polynomial with rational coefficients in ``nvars`` variables.

    ``terms`` maps packed monomials to nonzero mpq coefficients.  Instances
    are treated as immutable.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars, terms=None):
        self.nvars = nvars
        self.terms = terms if terms is not None else {}
        self._hash = None

    # construction helpers
    @classmethod
    def constant(cls, c, nvars):
        c = Q(c)
        return cls(nvars, {0: c} if c else {})

    @classmethod
    def variable(cls, i, nvars):
        if not 0 <= i < nvars:
            raise DimensionError("variable index %d out of range" % i)
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {pack(e): mpq(1)})

    @classmethod
    def from_dict(cls, d, nvars):
        """Build from {exponent tuple: coefficient}."""
        terms = {}
        for exps, c in d.items():
            if len(exps) != nvars:
                raise DimensionError("exponent vector length %d != %d" % (len(exps), nvars))
            c = Q(c)
            if c:
                m = pack(exps)
                v = terms.get(m, 0) + c
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        return cls(nvars, terms)

    def as_dict(self):
        """{exponent tuple: coefficient} in descending graded-lex order."""
        return {unpack(m, self.nvars): c for m, c in sorted(self.terms.items(), reverse=True)}

    # predicates
    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self):
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def is_one(self):
        return len(self.terms) == 1 and self.terms.get(0) == 1

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant polynomial")
        return self.terms.get(0, mpq(0))

    def degree(self):
        if not self.terms:
            return -1
        return _mono_degree(max(self.terms), self.nvars)

    def degree_in(self, i):
        s = _shift(i, self.nvars)
        return max(((m >> s) & MASK for m in self.terms), default=-1)

    def leading(self):
        """(packed monomial, coefficient) of the graded-lex leading term."""
        m = max(self.terms)
        return m, self.terms[m]

    # arithmetic
    def _check(self, other):
        if other.nvars != self.nvars:
            raise DimensionError("nvars mismatch: %d vs %d" % (self.nvars, other.nvars))

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        if isinstance(other, _RATIONAL_TYPES):
            return MultiPoly.constant(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        res = dict(self.terms)
        get = res.get
        for m, c in other.terms.items():
            v = get(m)
            if v is None:
                res[m] = c
            else:
                v = v + c
                if v:
                    res[m] = v
                else:
                    del res[m]
        return MultiPoly(self.nvars, res)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c):
        c = Q(c)
        if not c:
            return MultiPoly(self.nvars)
        if c == 1:
            return self
        return MultiPoly(self.nvars, {m: v * c for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly(self.nvars)
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (mb, cb), = b.items()
            if mb == 0:
                return self.scale(cb) if a is self.terms else other.scale(cb)
            return MultiPoly(self.nvars, {m + mb: c * cb for m, c in a.items()})
        res = {}
        get = res.get
        for m2, c2 in b.items():
            for m1, c1 in a.items():
                m = m1 + m2
                v = get(m)
                res[m] = c1 * c2 if v is None else v + c1 * c2
        return MultiPoly(self.nvars, {m: c for m, c in res.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result = MultiPoly.constant(1, self.nvars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, _RATIONAL_TYPES):
            return self.is_constant() and self.terms.get(0, 0) == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def diff(self, i):
        """Formal partial derivative with respect to variable ``i``."""
        if not 0 <= i < self.nvars:
            raise DimensionError("variable index %d out of range" % i)
        s = _shift(i, self.nvars)
        step = (1 << s) + (1 << (BITS * self.nvars))
        res = {}
        for m, c in self.terms.items():
            e = (m >> s) & MASK
            if e:
                res[m - step] = c * e
        return MultiPoly(self.nvars, res)

    def evaluate(self, point):
        if len(point) != self.nvars:
            raise DimensionError("point has %d coordinates, expected %d" % (len(point), self.nvars))
        pt = [Q(x) for x in point]
        total = mpq(0)
        for m, c in self.terms.items():
            v = c
            for i, e in enumerate(unpack(m, self.nvars)):
                if e:
                    v = v * pt[i] ** e
            total += v
        return total

    def evaluate_float(self, point):
        total = 0.0
        for m, c in self.terms.items():
            v = float(c)
            for i, e in enumerate(unpack(m, self.nvars)):
                if e:
                    v *= point[i] ** e
            total += v
        return total

    def substitute(self, i, value):
        """Replace variable i by a polynomial ``value`` (same nvars)."""
        res = MultiPoly(self.nvars)
        s = _shift(i, self.nvars)
        powers = {}
        for m, c in self.terms.items():
            e = (m >> s) & MASK
            rest = MultiPoly(self.nvars, {m - (e << s) - (e << (BITS * self.nvars)): c})
            if e not in powers:
                powers[e] = value ** e
            res = res + rest * powers[e]
        return res

    def divexact(self, other):
        """Exact quotient self / other, or None if other does not divide self."""
        self._check(other)
        if not other.terms:
            raise ZeroDivision("division by the zero polynomial")
        if not self.terms:
            return MultiPoly(self.nvars)
        if other.is_constant():
            return self.scale(1 / other.terms[0])
        lm, lc = other.leading()
        nv = self.nvars
        lexp = unpack(lm, nv)
        rem = dict(self.terms)
        quot = {}
        while rem:
            m = max(rem)
            c = rem[m]
            mexp = unpack(m, nv)
            if any(a < b for a, b in zip(mexp, lexp)):
                return None
            qm = m - lm
            qc = c / lc
            quot[qm] = qc
            for m2, c2 in other.terms.items():
                k = m2 + qm
                v = rem.get(k, 0) - qc * c2
                if v:
                    rem[k] = v
                else:
                    rem.pop(k, None)
        return MultiPoly(nv, quot)

    def content(self):
        """Positive rational c with self / c primitive over Z with positive leading coefficient."""
        if not self.terms:
            return mpq(1)
        from math import gcd
        nums = [int(c.numerator) for c in self.terms.values()]
        dens = [int(c.denominator) for c in self.terms.values()]
        g = 0
        for x in nums:
            g = gcd(g, x)
        lcm = 1
        for d in dens:
            lcm = lcm * d // gcd(lcm, d)
        c = mpq(g, lcm)
        return c if self.leading()[1] > 0 else -c

    def to_str(self, names=None):
        if names is None:
            names = ["x%d" % (i + 1) for i in range(self.nvars)]
        if not self.terms:
            return "0"
        out = []
        for m, c in sorted(self.terms.items(), reverse=True):
            exps = unpack(m, self.nvars)
            mono = "*".join(
                names[i] if e == 1 else "%s^%d" % (names[i], e)
                for i, e in enumerate(exps) if e
            )
            sign = "-" if c < 0 else "+"
            a = abs(c)
            if mono:
                body = mono if a == 1 else "%s*%s" % (a, mono)
            else:
                body = str(a)
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += " %s %s" % (sign, body)
        return s

    def __repr__(self):
        return "MultiPoly(%d, %s)" % (self.nvars, self.to_str())

    __str__ = to_str


# ---------------------------------------------------------------------------
# gcd via sympy (normalisation is not on the hot path)

def poly_gcd(a, b):
    import sympy
    nv = a.nvars
    gens = sympy.symbols("g0:%d" % nv) if nv else ()
    if not gens:
        return MultiPoly.constant(1, 0)
    pa = _to_sympy(a, gens)
    pb = _to_sympy(b, gens)
    g = sympy.gcd(pa, pb)
    return _from_sympy(g, gens, nv)


def _to_sympy(p, gens):
    import sympy
    d = {unpack(m, p.nvars): sympy.Rational(int(c.numerator), int(c.denominator))
         for m, c in p.terms.items()}
    return sympy.Poly.from_dict(d, *gens, domain="QQ") if d else sympy.Poly(0, *gens, domain="QQ")


def _from_sympy(sp_poly, gens, nv):
    d = {}
    for exps, c in sp_poly.terms():
        d[tuple(exps)] = mpq(int(c.p), int(c.q))
    return MultiPoly.from_dict(d, nv)


class RatFunc:
    """Quotient num/den of MultiPolys.  The universal scalar of the engine.

    Arithmetic keeps denominators small with cheap divisibility checks and only
    runs a real gcd in :meth:`normalize`.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if den is None:
            den = MultiPoly.constant(1, num.nvars)
        else:
            if den.nvars != num.nvars:
                raise DimensionError("numerator and denominator nvars differ")
            if not den.terms:
                raise ZeroDivision("zero denominator")
            if den.is_constant() and not den.is_one():
                num = num.scale(1 / den.terms[0])
                den = MultiPoly.constant(1, num.nvars)
        self.num = num
        self.den = den

    @property
    def nvars(self):
        return self.num.nvars

    @classmethod
    def constant(cls, c, nvars):
        return cls(MultiPoly.constant(c, nvars))

    @classmethod
    def variable(cls, i, nvars):
        return cls(MultiPoly.variable(i, nvars))

    def is_polynomial(self):
        return self.den.is_one()

    def is_zero(self):
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        return self.num.constant_value() / self.den.constant_value()

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.nvars != self.nvars:
                raise DimensionError("nvars mismatch: %d vs %d" % (self.nvars, other.nvars))
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other)
        if isinstance(other, _RATIONAL_TYPES):
            return RatFunc(MultiPoly.constant(other, self.nvars))
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num.terms:
            return self
        if not self.num.terms:
            return o
        b, d = self.den, o.den
        if b.is_one() and d.is_one():
            return RatFunc(self.num + o.num)
        if b == d:
            return RatFunc(self.num + o.num, b)
        q = b.divexact(d)
        if q is not None:
            return RatFunc(self.num + o.num * q, b)
        q = d.divexact(b)
        if q is not None:
            return RatFunc(self.num * q + o.num, d)
        return RatFunc(self.num * d + o.num * b, b * d)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            return RatFunc(self.num.scale(other), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num.terms or not o.num.terms:
            return RatFunc(MultiPoly(self.nvars))
        if self.den.is_one() and o.den.is_one():
            return RatFunc(self.num * o.num)
        a, b, c, d = self.num, self.den, o.num, o.den
        # cheap cancellations between crossed factors
        if not d.is_one():
            q = a.divexact(d)
            if q is not None:
                a, d = q, MultiPoly.constant(1, self.nvars)
        if not b.is_one():
            q = c.divexact(b)
            if q is not None:
                c, b = q, MultiPoly.constant(1, self.nvars)
        return RatFunc(a * c, b * d)

    __rmul__ = __mul__

    def inverse(self):
        if not self.num.terms:
            raise ZeroDivision("division by the zero rational function")
        return RatFunc(self.den, self.num)

    def __truediv__(self, other):
        if isinstance(other, _RATIONAL_TYPES):
            other = Q(other)
            if not other:
                raise ZeroDivision("division by zero")
            return RatFunc(self.num.scale(1 / other), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            raise ValueError("integer powers only")
        if k < 0:
            return self.inverse() ** (-k)
        return RatFunc(self.num ** k, self.den ** k)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return self.num == o.num
        return self.num * o.den == o.num * self.den

    __hash__ = None

    def diff(self, i):
        if self.den.is_one():
            return RatFunc(self.num.diff(i))
        db = self.den.diff(i)
        if not db.terms:
            return RatFunc(self.num.diff(i), self.den)
        return RatFunc(self.num.diff(i) * self.den - self.num * db, self.den * self.den)

    def normalize(self):
        """Cancel the gcd; denominator gets positive leading coefficient."""
        num, den = self.num, self.den
        if not num.terms:
            return RatFunc(MultiPoly(self.nvars))
        if not den.is_constant():
            g = poly_gcd(num, den)
            if not g.is_constant():
                num = num.divexact(g)
                den = den.divexact(g)
        lc = den.leading()[1]
        if lc != 1:
            num = num.scale(1 / lc)
            den = den.scale(1 / lc)
        return RatFunc(num, den)

    def evaluate(self, point):
        d = self.den.evaluate(point)
        if not d:
            raise PoleError("denominator vanishes at %r" % (tuple(point),))
        return self.num.evaluate(point) / d

    def evaluate_float(self, point):
        return self.num.evaluate_float(point) / self.den.evaluate_float(point)

    def to_str(self, names=None):
        f = self.normalize() if not self.den.is_one() else self
        if f.den.is_one():
            return f.num.to_str(names)
        return "(%s)/(%s)" % (f.num.to_str(names), f.den.to_str(names))

    def __repr__(self):
        return "RatFunc(%s)" % self.to_str()

    __str__ = to_str


def as_ratfunc(x, nvars):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc(x)
    return RatFunc.constant(x, nvars)


def poly_add(p, q):
    return p + q


def poly_mul(p, q):
    return p * q


def poly_scale(p, c):
    return p * c if isinstance(c, MultiPoly) else p.scale(c)


def partial_derivative(p, var):
    return p.diff(var)


def is_zero(f):
    return f.is_zero()


def normalize(f):
    return f.normalize()


def evaluate(f, point):
    return f.evaluate(point)


def extend_vars(f, nvars):
    """View a MultiPoly or RatFunc in its first variables as one in ``nvars`` variables."""
    if isinstance(f, RatFunc):
        return RatFunc(extend_vars(f.num, nvars), extend_vars(f.den, nvars))
    if nvars < f.nvars:
        raise DimensionError("cannot shrink the number of variables")
    old = f.nvars
    return MultiPoly(nvars, {pack(unpack(m, old) + (0,) * (nvars - old)): c
                             for m, c in f.terms.items()})
