import numpy as np
import pytest

from fefferman_lab import oracle
from fefferman_lab.conformal_spin import conformal_rescale
from fefferman_lab.exact_core import Q
from fefferman_lab.tensor_calc import Chart, Metric, Tensor
from fefferman_lab.verify import FeffermanData, random_projective

TOL = 1e-6


def test_compiled_matches_exact():
    ch = Chart(["x", "y"])
    f = (ch.var(0) * ch.var(0) * 3 + ch.var(1) - 1) / (ch.var(1) * ch.var(1) + 2)
    pts = [[Q(1, 3), Q(-2, 7)], [Q(0), Q(5, 7)]]
    got = oracle.Compiled(f)(np.array([[float(x) for x in p] for p in pts]))
    want = [float(f.evaluate(p)) for p in pts]
    assert np.allclose(got, want, rtol=0, atol=1e-14)


def test_partials_on_polynomial():
    # the five-point stencil is exact on quartics up to rounding
    fn = lambda X: (X[:, 0] ** 4 + X[:, 0] * X[:, 1] ** 2)
    X = np.array([[0.3, -0.5], [1.0, 2.0]])
    d = oracle.partials(fn, X)
    want = np.stack([4 * X[:, 0] ** 3 + X[:, 1] ** 2, 2 * X[:, 0] * X[:, 1]], axis=1)
    assert np.allclose(d, want, atol=1e-10)


def test_random_points_in_range():
    pts = oracle.random_points(3, 10, 0)
    assert len(pts) == 10 and all(-1 <= x <= 1 and x.denominator in (1, 7) for p in pts for x in p)


@pytest.mark.parametrize("n,seed", [(2, 5), (3, 5)])
def test_projective_oracle(n, seed):
    D = random_projective(n, seed).representative
    diffs = oracle.compare(oracle.projective_exact(D), oracle.projective_oracle(D), n,
                           oracle.random_points(n, 10, 1))
    assert set(diffs) == {"riemann", "schouten", "weyl", "cotton"}
    assert max(diffs.values()) < TOL


def test_conformal_oracle_n2():
    d = FeffermanData(random_projective(2, 5))
    diffs = oracle.compare(oracle.conformal_exact(d.conf), oracle.conformal_oracle(d.pw.metric),
                           4, oracle.random_points(4, 10, 2))
    assert max(diffs.values()) < TOL


def test_conformal_oracle_non_walker():
    # a rescaled metric with J != 0 exercises every Schouten term; its rational entries
    # need a smaller step, and the error must shrink at the fourth-order rate
    from fefferman_lab.conformal_spin import ConformalData
    d = FeffermanData(random_projective(2, 7))
    ch = d.pw.chart
    m = conformal_rescale(d.pw.metric, ch.one() + ch.var(2) * ch.var(3))
    conf = ConformalData(m)
    assert conf.J
    ex, pts = oracle.conformal_exact(conf), oracle.random_points(4, 10, 3)
    errs = [oracle.compare(ex, oracle.conformal_oracle(m, h), 4, pts) for h in (1e-2, 5e-3, 2.5e-3)]
    assert max(errs[-1].values()) < TOL
    ratio = errs[0]["riemann"] / errs[1]["riemann"]
    assert 10 < ratio < 25


def test_oracle_detects_wrong_value():
    D = random_projective(2, 5).representative
    ex = oracle.projective_exact(D)
    ex["schouten"] = ex["schouten"] + Tensor(D.chart, "dd", {(0, 0): 1})
    diffs = oracle.compare(ex, oracle.projective_oracle(D), 2, oracle.random_points(2, 5, 1))
    assert diffs["schouten"] > 0.5
