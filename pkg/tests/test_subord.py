import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koopseq import seqspace as sq
from koopseq import subord as sb
from koopseq.contspace import TestFunction
from koopseq.errors import ConvergenceError, DomainError
from koopseq.specfun import beta


def rand_seq(seed, N=24):
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(N) * np.exp(-np.arange(N) / 6)
    v[16:] = 0.0
    return sq.TruncatedSequence(v)


def test_cesaro_kernel_order_one_is_mean():
    out = sb.discrete_cesaro(1.0, sq.TruncatedSequence([1.0, 2.0, 3.0, 6.0]))
    assert np.allclose(out.values, [1.0, 1.5, 2.0, 3.0])
    d = sb.discrete_cesaro(1.0, sq.delta(4, 6), dual=True)
    assert np.allclose(d.values, [0.2] * 5 + [0.0])


def test_cesaro_fixes_constants():
    for alpha in (0.5, 1.0, 3.0):
        out = sb.discrete_cesaro(alpha, sq.ones(40))
        assert np.allclose(out.values[:out.valid], 1.0, atol=1e-12)


def test_cesaro_domain():
    with pytest.raises(DomainError):
        sb.cesaro_kernel(0.0, 4)
    with pytest.raises(ConvergenceError):
        sb.discrete_cesaro(1.0, sq.ones(10), dual=True)


@settings(max_examples=12, deadline=None)
@given(st.integers(0, 1000), st.sampled_from([0.5, 1.0, 1.7, 3.0]), st.booleans(), st.sampled_from([1.0, 2.0, 4.0]))
def test_cesaro_by_subordination(seed, alpha, dual, p):
    a = rand_seq(seed, 16)
    x = sb.cesaro_by_subordination(alpha, a, dual, p)
    y = sb.discrete_cesaro(alpha, a, dual)
    v = min(x.valid, y.valid)
    assert v > 0
    assert np.allclose(x.values[:v], y.values[:v], rtol=0, atol=1e-9)


@pytest.mark.parametrize("mu,nu,p", [(1.0, 0.5, 2.0), (0.3, 2.5, 3.0), (1.0 + 0.5j, 1.5, 2.0)])
def test_subordinated_koopman_t_on_delta(mu, nu, p):
    # T_p(t) delta_0 (n) = e^{-t/p} beta^n, so the operator gives B(nu + n, mu + 1/p)
    out = sb.subordinate_sequence("KoopmanT", p, mu, nu, sq.delta(0, 12))
    ref = [complex(beta(nu + n, mu + 1 / p)) for n in range(12)]
    assert np.allclose(out.values, ref, rtol=1e-10, atol=1e-14)


def test_parameter_domain():
    with pytest.raises(DomainError):
        sb.subordinate_sequence("KoopmanT", 2.0, 1.0, 0.0, sq.delta(0, 4))
    with pytest.raises(DomainError):
        sb.subordinate_sequence("KoopmanS", 2.0, -0.6, 1.0, sq.delta(0, 4))
    # mu = 0 is fine for T_1, whose kernel carries e^{-t}
    sb.subordinate_sequence("KoopmanT", 1.0, 0.0, 1.0, sq.delta(0, 4))


@pytest.mark.parametrize("p", [1.0, 2.0, 3.0])
def test_subordination_checks(p):
    for r in sb.check_subordination(p, rand_seq(2, 16)):
        assert r.passed, r


# exact norms are available only for p in {1, 2, inf}; elsewhere operator_norm
# returns the interpolation bound, which may exceed the operator norm
@pytest.mark.parametrize("p", [1.0, 2.0, math.inf])
def test_perturbed_norms(p):
    for r in sb.check_perturbed_norms(p, N=32):
        assert r.passed, r.note


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_perturbed_adjoint(p):
    assert sb.check_perturbed_adjoint(p, 0.7, 1.3).passed


def test_perturbed_cesaro_fixes_delta0_row():
    # row 0 of the Delta side on delta_0 is B1(mu + 1/p, nu)
    from koopseq.specfun import beta1
    out = sb.perturbed_cesaro(1.0, 1.0, 2.0, "DeltaSide", sq.delta(0, 8))
    assert out.values[0] == pytest.approx(beta1(1.5, 1.0), rel=1e-13)


def test_spectrum_curves():
    assert sb.spectrum_curve("Cesaro", [0.0])[0] == pytest.approx(2.0, rel=1e-14)
    assert sb.spectrum_curve("CesaroDual", [0.0], p=2.0)[0] == pytest.approx(2.0, rel=1e-14)
    assert sb.spectrum_curve("Perturbed", [0.0])[0] == pytest.approx(1.0, rel=1e-15)
    far = sb.spectrum_curve("Cesaro", [200.0])[0]
    assert abs(far) < 1e-2
    with pytest.raises(DomainError):
        sb.spectrum_curve("Other", [0.0])


def test_chen_routes():
    f = TestFunction([(1.0, 1, 1.0, 0.0), (0.5, 2, 2.0, 0.0)])
    reps = sb.check_chen_routes(1.0, 1.5, 2.0, f)
    for r in reps:
        assert r.ok, r
    by = {r.identity_id: r for r in reps}
    assert by["chen.routes.Sp"].passed and by["chen.routes.Rp"].passed
    assert not by["chen.Rp.range_r_to_1"].passed


def test_cesaro_intertwinings():
    f = TestFunction([(1.0, 1, 1.0, 0.0), (0.5, 2, 2.0, 0.0)])
    a = sq.TruncatedSequence([0.5, -1.0, 0.25, 0.0, 2.0])
    for r in sb.check_cesaro_intertwinings(1.0, 2.0, f, a, N=24):
        assert r.passed, r


def test_poisson_forward_decayed_stops():
    P = sb.poisson_forward_decayed(TestFunction.exp(1.0), 16)
    assert P.is_finite and abs(P.values[-1]) < 1e-22
