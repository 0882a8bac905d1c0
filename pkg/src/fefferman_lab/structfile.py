"""Plain-text structure files.

One ``key = value`` per line, ``#`` starts a comment::

    format_version = 1
    name = example
    n = 2
    variables = x1, x2          # optional, defaults to x1..xn
    gamma[1][2][2] = x1^2/3 + 1/2
    volume = 1                  # optional, must be a nonzero constant
    perturb[1][2] = 1           # optional, x-x block of the Walker metric
    conformal_factor = 1 + p1   # optional, used by the rescaled reduced-scale check
    seed = 0                    # optional, informational

Indices are 1-based; gamma[c][a][b] is Γ^c_ab and the symmetric partner is
filled in.  Expressions use + - * / ^ (non-negative integer exponents),
parentheses, rational literals and the chart variables; perturbations and the
conformal factor may also use the fibre variables p1..pn.
"""

import logging
import re
from dataclasses import dataclass, field

from .projective import ProjectiveStructure, is_special
from .pw_fefferman import pw_chart
from .tensor_calc import Chart, Connection

log = logging.getLogger(__name__)

FORMAT_VERSION = 1
_KEY = re.compile(r"^([A-Za-z_]\w*)((?:\[\s*\d+\s*\])*)$")
_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_]\w*)|(\S))")


class StructFileError(ValueError):
    def __init__(self, msg, line=None, col=None, source="<string>"):
        self.msg, self.line, self.col, self.source = msg, line, col, source
        where = source
        if line is not None:
            where += ":%d" % line
            if col is not None:
                where += ":%d" % col
        super().__init__("%s: %s" % (where, msg))


@dataclass
class StructSpec:
    name: str
    n: int
    structure: ProjectiveStructure
    perturbation: dict = field(default_factory=dict)
    conformal_factor: object = None
    seed: object = None
    source: str = "<string>"
    notes: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# expressions

class _Parser:
    def __init__(self, text, chart, line, col0, source):
        self.text, self.chart, self.line, self.col0, self.source = text, chart, line, col0, source
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m or m.end() == pos:
                break
            if m.group(0).strip():
                kind = "num" if m.group(1) else "name" if m.group(2) else "op"
                self.toks.append((kind, m.group(m.lastindex), m.start(m.lastindex)))
            pos = m.end()
        self.i = 0
        self.index = {nm: k for k, nm in enumerate(chart.names)}

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.toks[self.i][2] if self.i < len(self.toks) else len(self.text)
        raise StructFileError(msg, self.line, self.col0 + pos + 1, self.source)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None, len(self.text))

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse(self):
        if not self.toks:
            self.error("empty expression")
        v = self.expr()
        if self.i < len(self.toks):
            self.error("unexpected %r" % self.peek()[1])
        return v

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/"):
            op, _, pos = self.take()[1], None, self.toks[self.i - 1][2]
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                if not w:
                    self.error("division by zero", pos)
                v = v / w
        return v

    def unary(self):
        if self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            v = self.unary()
            return -v if op == "-" else v
        return self.power()

    def power(self):
        v = self.atom()
        if self.peek()[1] == "^":
            self.take()
            kind, tok, pos = self.take()
            if kind != "num" or "." in tok:
                self.error("exponent must be a non-negative integer", pos)
            v = v ** int(tok)
        return v

    def atom(self):
        kind, tok, pos = self.take()
        if kind == "num":
            if "." in tok:
                whole, frac = tok.split(".")
                return self.chart.const(int(whole + frac)) / self.chart.const(10 ** len(frac))
            return self.chart.const(int(tok))
        if kind == "name":
            if tok not in self.index:
                self.error("unknown variable %r" % tok, pos)
            return self.chart.var(self.index[tok])
        if tok == "(":
            v = self.expr()
            if self.peek()[1] != ")":
                self.error("expected ')'")
            self.take()
            return v
        if tok is None:
            self.error("unexpected end of expression", pos)
        self.error("unexpected %r" % tok, pos)


def parse_expression(text, chart, line=None, col0=0, source="<string>"):
    return _Parser(text, chart, line, col0, source).parse()


# ---------------------------------------------------------------------------
# files

def _int_value(val, line, source, key):
    try:
        return int(val)
    except ValueError:
        raise StructFileError("%s must be an integer" % key, line, None, source) from None


def parse_struct(text, source="<string>"):
    entries = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            raise StructFileError("expected 'key = value'", lineno, 1, source)
        key, val = line.split("=", 1)
        col = len(key) + 1 + (len(val) - len(val.lstrip()))
        key, val = key.strip(), val.strip()
        m = _KEY.match(key)
        if not m:
            raise StructFileError("malformed key %r" % key, lineno, 1, source)
        idx = [int(x) for x in re.findall(r"\d+", m.group(2))]
        entries.append((lineno, m.group(1), idx, val, col))
    scalars = {}
    for lineno, k, idx, val, col in entries:
        if not idx:
            if k in scalars:
                raise StructFileError("duplicate key %r" % k, lineno, 1, source)
            scalars[k] = (lineno, val, col)
    if "format_version" in scalars:
        lineno, val, _ = scalars["format_version"]
        if _int_value(val, lineno, source, "format_version") != FORMAT_VERSION:
            raise StructFileError("unsupported format_version %s" % val, lineno, None, source)
    if "n" not in scalars:
        raise StructFileError("missing key 'n'", None, None, source)
    lineno, val, _ = scalars["n"]
    n = _int_value(val, lineno, source, "n")
    if n < 2:
        raise StructFileError("n must be at least 2", lineno, None, source)
    names = ["x%d" % (i + 1) for i in range(n)]
    if "variables" in scalars:
        lineno, val, _ = scalars["variables"]
        names = [s.strip() for s in val.split(",") if s.strip()]
        if len(names) != n or len(set(names)) != n:
            raise StructFileError("expected %d distinct variable names" % n, lineno, None, source)
    chart = Chart(names)
    big = pw_chart(chart)
    gamma, seen, pert = {}, {}, {}
    for lineno, k, idx, val, col in entries:
        if k == "gamma":
            if len(idx) != 3 or not all(1 <= i <= n for i in idx):
                raise StructFileError("gamma needs three indices in 1..%d" % n, lineno, 1, source)
            c, a, b = (i - 1 for i in idx)
            v = parse_expression(val, chart, lineno, col, source)
            if (c, a, b) in seen:
                raise StructFileError("duplicate entry gamma%s" % idx, lineno, 1, source)
            seen[(c, a, b)] = (lineno, v)
        elif k == "perturb":
            if len(idx) != 2 or not all(1 <= i <= n for i in idx):
                raise StructFileError("perturb needs two indices in 1..%d (x-x block only)" % n,
                                      lineno, 1, source)
            i, j = sorted(x - 1 for x in idx)
            v = parse_expression(val, big, lineno, col, source)
            pert[(i, j)] = pert[(i, j)] + v if (i, j) in pert else v
        elif idx:
            raise StructFileError("key %r takes no indices" % k, lineno, 1, source)
        elif k not in ("format_version", "n", "variables", "name", "volume",
                       "conformal_factor", "seed"):
            raise StructFileError("unknown key %r" % k, lineno, 1, source)
    for (c, a, b), (lineno, v) in seen.items():
        other = seen.get((c, b, a))
        if other is not None and other[1] != v:
            raise StructFileError("connection is not symmetric: gamma[%d][%d][%d] != gamma[%d][%d][%d]"
                                  % (c + 1, a + 1, b + 1, c + 1, b + 1, a + 1), lineno, 1, source)
        if v:
            gamma[(c, a, b)] = v
            gamma[(c, b, a)] = v
    volume = 1
    if "volume" in scalars:
        lineno, val, col = scalars["volume"]
        volume = parse_expression(val, chart, lineno, col, source)
    name = scalars["name"][1] if "name" in scalars else source
    D = Connection(chart, gamma)
    notes = []
    if not is_special(D):
        notes.append("representative was not special; normalized by a projective change")
        log.warning("%s: connection is not special; normalizing", source)
    try:
        P = ProjectiveStructure(D, volume=volume, name=name)
    except ValueError as e:
        lineno = scalars.get("volume", (None,))[0]
        raise StructFileError(str(e), lineno, None, source) from None
    omega = None
    if "conformal_factor" in scalars:
        lineno, val, col = scalars["conformal_factor"]
        omega = parse_expression(val, big, lineno, col, source)
        if not omega:
            raise StructFileError("conformal factor vanishes identically", lineno, None, source)
    seed = scalars["seed"][1] if "seed" in scalars else None
    return StructSpec(name, n, P, pert, omega, seed, source, notes)


def load_struct(path):
    with open(path, encoding="utf-8") as fh:
        return parse_struct(fh.read(), str(path))


def parse_structure(path):
    """The projective structure of a structure file."""
    return load_struct(path).structure
