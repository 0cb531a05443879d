import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koopseq import contspace as cs
from koopseq import poisson as po
from koopseq import seqspace as sq
from koopseq.contspace import TestFunction
from koopseq.errors import ConvergenceError

n = np.arange(40)


@pytest.mark.parametrize("lam", [1.0, 0.5, 2.0 + 1.0j])
def test_exponential_image(lam):
    # P e_lam (n) = (1 + lam)^{-(n+1)}
    got = po.poisson_forward(TestFunction.exp(lam), 40).values
    assert np.allclose(got, (1 + lam) ** (-(n + 1.0)), rtol=1e-13, atol=0)


def test_sexp_image():
    got = po.poisson_forward(TestFunction([(1.0, 1, 1.0, 0.0)]), 40).values
    assert np.allclose(got, (n + 1) / 2.0 ** (n + 2), rtol=1e-13, atol=0)


def test_shifted_indicator_image():
    # f = 1[s >= a] e^{-(s-a)}: P f(n) = e^{-a} sum_i a^{n-i}/(n-i)! 2^{-(i+1)}
    a = 0.75
    got = po.poisson_forward(TestFunction([(1.0, 0, 1.0, a)]), 12).values
    ref = [math.exp(-a) * sum(a ** (k - i) / math.factorial(k - i) * 2.0 ** (-(i + 1)) for i in range(k + 1))
           for k in range(12)]
    assert np.allclose(got, ref, rtol=1e-13)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.tuples(st.floats(-2, 2), st.integers(0, 3), st.floats(0.3, 3.0), st.floats(0, 2)),
                min_size=1, max_size=3))
def test_closed_vs_laguerre(ts):
    assert po.check_closed_vs_laguerre(TestFunction(ts), 40) < 1e-10


def test_adjoint_of_delta():
    # P* delta_k (t) = e^{-t} t^k / k!
    t = np.array([0.0, 0.5, 1.0, 3.0])
    for k in (0, 2, 5):
        got = po.poisson_adjoint(sq.delta(k, 8), t)
        assert np.allclose(got, np.exp(-t) * t**k / math.factorial(k), rtol=1e-14, atol=0)
    assert po.poisson_adjoint(sq.delta(0, 1), [1.0])[0] == pytest.approx(0.36787944117144233, rel=1e-15)


def test_adjoint_tail_guard():
    a = sq.ones(30)
    with pytest.raises(ConvergenceError):
        po.poisson_adjoint(a, [20.0])
    # the constant sequence maps to the constant function while the tail is negligible
    assert po.poisson_adjoint(sq.ones(80), [2.0])[0] == pytest.approx(1.0, abs=1e-14)


def test_adjoint_function_exact():
    a = sq.TruncatedSequence([1.0, -2.0, 0.5])
    t = np.linspace(0, 4, 9)
    assert np.allclose(cs.evaluate(po.poisson_adjoint_function(a), t), po.poisson_adjoint(a, t), rtol=1e-14)


def test_pp_star_kernel_rows():
    K = po.pp_star_kernel(30, 400)
    assert np.allclose(K[:, :400].sum(axis=1)[:10], 1.0, atol=1e-12)
    assert K[0, 0] == 0.5 and K[1, 1] == pytest.approx(0.25)


def test_pp_star_routes_agree():
    a = sq.TruncatedSequence(np.linspace(1, -1, 20))
    x = po.pp_star(a, 10).values
    assert np.allclose(x, po.pp_star_cesaro_form(a, 10), atol=1e-13)
    assert np.allclose(x, po.pp_star_quadrature(a, 10), atol=1e-12)


def test_p_star_p_exponential():
    # P* P e^{-s} (t) = e^{-t/2} / 2
    f = TestFunction.exp(1.0)
    assert po.p_star_p(f, [0.5])[0] == pytest.approx(0.38940039153570243412, rel=1e-12)
    t = np.array([0.0, 1.0, 3.0])
    for route in ("bessel", "series"):
        assert np.allclose(po.p_star_p(f, t, route=route), np.exp(-t / 2) / 2, rtol=1e-11)


def test_adjoint_pairing_and_homomorphisms():
    f = TestFunction([(1.0, 1, 1.0, 0.0), (0.5, 0, 2.0, 0.4)])
    g = TestFunction.exp(1.5)
    b = sq.TruncatedSequence([1.0, 0.5, -0.25, 0.125])
    assert po.check_adjoint_pairing(f, b).passed
    for r in po.check_convolution_homomorphisms(f, g, b, sq.delta(2, 4)):
        assert r.passed, r
    for r in po.check_transform_conjugation(f, b):
        assert r.passed, r


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
@pytest.mark.parametrize("lam", [0.2, 1.0, 5.0])
def test_norm_ratio_below_one(p, lam):
    r = po.norm_ratio_exponential(lam, p)
    assert 0 < r <= 1.0 + 1e-15
    num = sq.lp_norm(po.poisson_forward(TestFunction.exp(lam), 4000), p)
    assert r == pytest.approx(num / cs.lp_norm_fn(TestFunction.exp(lam), p), rel=1e-9)
