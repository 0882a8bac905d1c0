from pathlib import Path

import pytest

from fefferman_lab.exact_core import Q
from fefferman_lab.projective import is_special
from fefferman_lab.structfile import (StructFileError, load_struct, parse_expression,
                                      parse_struct, parse_structure)
from fefferman_lab.tensor_calc import Chart

STRUCTS = Path(__file__).resolve().parent.parent / "structures"


def test_x1_file():
    P = parse_structure(STRUCTS / "x1.struct")
    x1 = P.chart.var(0)
    assert P.n == 2 and P.representative.gamma[(0, 1, 1)] == x1
    assert not P.normalized


def test_rational_file_normalized():
    spec = load_struct(STRUCTS / "rational.struct")
    assert spec.notes and spec.structure.normalized
    assert is_special(spec.structure.representative)


@pytest.mark.parametrize("path", sorted(STRUCTS.glob("*.struct")), ids=lambda p: p.stem)
def test_shipped_files_load(path):
    spec = load_struct(path)
    assert spec.name == path.stem


def test_expression_grammar():
    ch = Chart(["x1", "x2"])
    x1, x2 = ch.var(0), ch.var(1)
    assert parse_expression("x1^2/3 + 1/2", ch) == x1 * x1 * Q(1, 3) + Q(1, 2)
    assert parse_expression("-(x1 - x2)*2", ch) == (x2 - x1) * 2
    assert parse_expression("0.25*x2", ch) == x2 * Q(1, 4)
    assert parse_expression("x1/(1 + x2)", ch) == x1 / (ch.one() + x2)


def test_perturbation_and_factor():
    spec = parse_struct("n = 2\nperturb[2][1] = p1^2\nconformal_factor = 1 + p1\n")
    assert set(spec.perturbation) == {(0, 1)}
    assert spec.conformal_factor is not None


def test_asymmetric_connection_rejected():
    text = "n = 2\ngamma[1][1][2] = x1\ngamma[1][2][1] = x2\n"
    with pytest.raises(StructFileError, match="not symmetric"):
        parse_struct(text)


def test_unknown_variable_position():
    with pytest.raises(StructFileError) as e:
        parse_struct("n = 2\ngamma[1][2][2] = x1 + y\n", "f.struct")
    assert (e.value.line, e.value.col) == (2, 23)
    assert str(e.value).startswith("f.struct:2:23:")


def test_syntax_error_position():
    with pytest.raises(StructFileError) as e:
        parse_struct("n = 2\n\ngamma[1][2][2] = (x1 + 1\n")
    assert e.value.line == 3 and "')'" in e.value.msg


@pytest.mark.parametrize("text,msg", [
    ("gamma[1][1][1] = 1\n", "missing key 'n'"),
    ("n = 1\n", "at least 2"),
    ("n = 2\ngamma[1][2] = 1\n", "three indices"),
    ("n = 2\nperturb[1][3] = 1\n", "x-x block"),
    ("n = 2\nfoo = 1\n", "unknown key"),
    ("n = 2\ngamma[1][1][1] = x1^x2\n", "exponent"),
    ("n = 2\ngamma[1][1][1] = x1/0\n", "division by zero"),
    ("n = 2\nvolume = x1\n", "volume"),
    ("n = 2\nconformal_factor = 0\n", "vanishes"),
    ("format_version = 2\nn = 2\n", "format_version"),
    ("n = 2\njust text\n", "key = value"),
])
def test_errors(text, msg):
    with pytest.raises(StructFileError, match=msg):
        parse_struct(text)


def test_missing_file():
    with pytest.raises(OSError):
        load_struct(STRUCTS / "does-not-exist.struct")
