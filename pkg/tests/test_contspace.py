import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koopseq import contspace as cs
from koopseq.contspace import TestFunction
from koopseq.errors import DomainError, ParseError

S = np.linspace(0.0, 5.0, 51)

sexp = TestFunction([(1.0, 1, 1.0, 0.0)])  # s e^{-s}
mixed = TestFunction([(1.0, 1, 1.0, 0.0), (0.5, 2, 2.0, 0.0)])
piecewise = TestFunction([(1.0, 0, 1.0, 0.0), (-0.5, 1, 1.5, 0.8)])

terms = st.tuples(st.floats(-2, 2), st.integers(0, 3), st.floats(0.3, 3.0), st.floats(0, 2))
functions = st.lists(terms, min_size=1, max_size=3).map(TestFunction)


def test_validation():
    with pytest.raises(DomainError):
        TestFunction([(1.0, 0, -1.0, 0.0)])
    with pytest.raises(DomainError):
        TestFunction([(1.0, -1, 1.0, 0.0)])
    assert TestFunction([(0.0, 0, 1.0, 0.0)]).terms == ()


def test_evaluate_and_indicator():
    assert cs.evaluate(piecewise, 0.5) == pytest.approx(math.exp(-0.5))
    v = cs.evaluate(piecewise, 1.0)
    assert v == pytest.approx(math.exp(-1) - 0.5 * 0.2 * math.exp(-0.3))
    assert cs.jumps(piecewise) == []
    assert cs.jumps(TestFunction([(2.0, 0, 1.0, 1.5)])) == [(1.5, 2.0)]


def test_laplace_and_integral():
    assert cs.integral(sexp) == pytest.approx(1.0)
    assert cs.laplace(sexp, 1.0) == pytest.approx(0.25)
    with pytest.raises(DomainError):
        cs.laplace(sexp, -2.0)


@pytest.mark.parametrize("p,ref", [(1.0, 1.0), (2.0, 0.5), (3.5, 0.40267413041071963401), (math.inf, 1 / math.e)])
def test_lp_norm(p, ref):
    # ||s e^{-s}||_p frozen from mpmath
    assert cs.lp_norm_fn(sexp, p) == pytest.approx(ref, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(functions)
def test_derivative_matches_finite_difference(f):
    s = np.array([0.3, 1.1, 2.7, 3.9])
    s = s[np.min(np.abs(s[:, None] - np.array(f.knots() or [99.0])[None, :]), axis=1) > 1e-3]
    h = 1e-6
    fd = (cs.evaluate(f, s + h) - cs.evaluate(f, s - h)) / (2 * h)
    assert np.allclose(cs.evaluate(cs.derivative(f), s), fd, atol=1e-5)


@pytest.mark.parametrize("kind,ref", [
    ("TLeft", lambda s, t, p: np.exp(-(s + t))),
    ("TRight", lambda s, t, p: np.where(s >= t, np.exp(-(s - t)), 0.0)),
    ("TpPlus", lambda s, t, p: np.exp(-t / p) * np.exp(-np.exp(-t) * s)),
    ("TpMinus", lambda s, t, p: np.exp(t / p) * np.exp(-np.exp(t) * s)),
    ("Sp", lambda s, t, p: np.exp(-t / p) * np.exp(-(np.exp(-t) * s + 1 - np.exp(-t)))),
    ("Rp", lambda s, t, p: np.where(s >= 1 - np.exp(-t), np.exp(t / p) * np.exp(-(np.exp(t) * s + 1 - np.exp(t))), 0.0)),
])
def test_semigroup_pointwise(kind, ref):
    t, p = 0.7, 3.0
    g = cs.apply_cont_semigroup(kind, t, TestFunction.exp(1.0), p)
    s = S[np.abs(S - (1 - math.exp(-t))) > 1e-9]
    s = s[np.abs(s - t) > 1e-9]
    assert np.allclose(cs.evaluate(g, s), ref(s, t, p), rtol=1e-13, atol=1e-15)


def test_semigroup_rejects_negative_time():
    with pytest.raises(DomainError):
        cs.apply_cont_semigroup("TLeft", -1.0, sexp)


@settings(max_examples=25, deadline=None)
@given(functions, st.sampled_from(cs.CONT_SEMIGROUPS), st.floats(0, 2), st.floats(0, 2),
       st.sampled_from([1.0, 2.0, 4.0, math.inf]))
def test_semigroup_law(f, kind, t, u, p):
    r = cs.check_cont_semigroup_law(kind, p, t, u, f)
    assert r.passed, r


@pytest.mark.parametrize("kind", cs.CONT_SEMIGROUPS)
@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_contraction(kind, p):
    for f in (mixed, piecewise):
        assert cs.check_cont_contraction(kind, p, 0.6, f).passed


def test_isometries():
    # the p-weighted dilations are isometric on L^p
    for kind in ("TpPlus", "TpMinus"):
        g = cs.apply_cont_semigroup(kind, 0.9, mixed, 2.0)
        assert cs.lp_norm_fn(g, 2.0) == pytest.approx(cs.lp_norm_fn(mixed, 2.0), rel=1e-10)


def test_factorizations():
    reps = cs.check_cont_factorizations(2.0, 0.8, piecewise)
    by = {r.identity_id: r for r in reps}
    assert by["cont.factorization.Sp"].passed and by["cont.factorization.Rp"].passed
    assert not by["cont.factorization.Sp_reversed"].passed
    assert all(r.ok for r in reps)


@pytest.mark.parametrize("kind", ["TLeft", "TpPlus", "Sp", "Rp"])
def test_generators(kind):
    r = cs.check_cont_generator(kind, 2.0, mixed)
    assert r.passed, r.note


def test_right_generator_domain():
    with pytest.raises(DomainError):
        cs.apply_cont_generator("DRight0", TestFunction.exp(1.0))
    assert cs.check_cont_generator("TRight", 2.0, sexp).passed


def test_convolution_closed_form():
    # (e^{-s} * e^{-s})(s) = s e^{-s}; (e^{-s} * e^{-2s}) = e^{-s} - e^{-2s}
    g = cs.convolve_fn(TestFunction.exp(1.0), TestFunction.exp(1.0))
    assert np.allclose(cs.evaluate(g, S), S * np.exp(-S))
    h = cs.convolve_fn(TestFunction.exp(1.0), TestFunction.exp(2.0))
    assert np.allclose(cs.evaluate(h, S), np.exp(-S) - np.exp(-2 * S))


@settings(max_examples=20, deadline=None)
@given(functions, functions)
def test_convolution_laplace(f, g):
    z = 0.4
    assert cs.laplace(cs.convolve_fn(f, g), z) == pytest.approx(cs.laplace(f, z) * cs.laplace(g, z), rel=1e-9, abs=1e-12)


def test_cesaro_hardy_values():
    s = np.array([0.5, 1.0, 3.0])
    c = cs.cesaro_hardy(1.0, TestFunction.exp(1.0), s)
    assert np.allclose(c, (1 - np.exp(-s)) / s, rtol=1e-10)
    # dual of e^{-s} at s = 1 is E_1(1), frozen from mpmath
    d = cs.cesaro_hardy(1.0, TestFunction.exp(1.0), [1.0], dual=True)
    assert d[0] == pytest.approx(0.21938393439552027368, rel=1e-10)


def test_parse_function():
    f = cs.parse_function("exp 2 + term 0.5 1 1 0.25")
    assert len(f.terms) == 2
    assert cs.evaluate(f, 1.0) == pytest.approx(math.exp(-2) + 0.5 * 0.75 * math.exp(-0.75))
    g = cs.function_from_json(cs.function_to_json(TestFunction([(1 + 2j, 1, 1 - 1j, 0.5)])))
    assert g.terms == TestFunction([(1 + 2j, 1, 1 - 1j, 0.5)]).terms
    for bad in ("exp", "term 1 2", "sin 3", "[1, 2"):
        with pytest.raises(ParseError):
            cs.parse_function(bad)
