import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from koopseq import seqspace as sq
from koopseq.errors import DomainError, ParseError

finite = st.floats(-1e3, 1e3, allow_nan=False)
vecs = arrays(np.float64, st.integers(1, 40), elements=finite)
# numpy's unscaled norm underflows on tiny entries, so keep the oracle's range moderate
moderate = arrays(np.float64, st.integers(1, 40),
                  elements=finite.filter(lambda x: x == 0 or abs(x) > 1e-100))


def test_constructors():
    d = sq.delta(3, 8)
    assert d.N == 8 and d.values[3] == 1 and d.values.sum() == 1 and d.is_finite
    o = sq.ones(5)
    assert not o.is_finite and o.tail_bound == 1.0
    g = sq.geometric(0.5, 10)
    assert g.tail_bound == pytest.approx(0.5**10)
    assert sq.geometric(2.0, 4).tail_bound == math.inf
    with pytest.raises(DomainError):
        sq.delta(9, 8)


def test_immutable_and_validated():
    a = sq.TruncatedSequence([1.0, 2.0])
    with pytest.raises(ValueError):
        a.values[0] = 3.0
    with pytest.raises(DomainError):
        sq.TruncatedSequence([])
    with pytest.raises(DomainError):
        sq.TruncatedSequence([1.0], 1, -1.0)


def test_padding_and_truncation():
    a = sq.TruncatedSequence([1.0, 2.0, 3.0])
    p = a.padded(6)
    assert p.N == 6 and p.is_finite and list(p.values[3:]) == [0, 0, 0]
    t = a.truncated(2)
    assert t.tail_bound == 3.0 and t.valid == 2


def test_lp_norms():
    a = sq.TruncatedSequence([3.0, -4.0])
    assert sq.lp_norm(a, 2) == pytest.approx(5.0)
    assert sq.lp_norm(a, 1) == 7.0
    assert sq.lp_norm(a, math.inf) == 4.0
    assert sq.conjugate_exponent(1) == math.inf and sq.conjugate_exponent(4) == pytest.approx(4 / 3)
    assert sq.inv_p(math.inf) == 0.0


@settings(max_examples=50, deadline=None)
@given(moderate, st.sampled_from([1.0, 1.5, 2.0, 3.0, math.inf]))
def test_lp_norm_matches_numpy(v, p):
    ref = np.linalg.norm(v, ord=p)
    assert sq.lp_norm(sq.TruncatedSequence(v), p) == pytest.approx(ref, rel=1e-12, abs=1e-300)


def test_lp_norm_is_scaled():
    assert sq.lp_norm(sq.TruncatedSequence([9e-299]), 1.5) == pytest.approx(9e-299, rel=1e-14)
    assert sq.lp_norm(sq.TruncatedSequence([1e300, 1e300]), 2) == pytest.approx(math.sqrt(2) * 1e300, rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(vecs, vecs)
def test_full_convolution_is_exact(a, b):
    c = sq.convolve(sq.TruncatedSequence(a), sq.TruncatedSequence(b), full=True)
    assert np.allclose(c.values, np.convolve(a, b))
    assert c.is_finite


def test_differences():
    a = sq.TruncatedSequence([1.0, 4.0, 9.0])
    assert list(sq.forward_diff(a).values) == [3.0, 5.0, -9.0]
    assert list(sq.backward_diff(a).values) == [-1.0, -3.0, -5.0]
    inf = sq.TruncatedSequence([1.0, 4.0, 9.0], 3, math.inf)
    assert sq.forward_diff(inf).valid == 2


def test_zeta_transform_geometric():
    a = sq.geometric(0.5, 60)
    val, tail = sq.zeta_transform(a, 0.3)
    assert abs(val - 1 / (1 - 0.15)) <= tail + 1e-15
    with pytest.raises(DomainError):
        sq.zeta_transform(a, 1.0)


def test_apply_kernel_certificates():
    N = 10
    K = np.eye(N) * 0.5
    K[:, -1] = 0.25
    a = sq.TruncatedSequence(np.ones(N), 6, 1.0)
    out = sq.apply_kernel(K, a, outside_mass=np.zeros(N), row_bound=1.0)
    # every row touches the untrusted last column
    assert out.valid == 0
    K2 = np.eye(N)
    out2 = sq.apply_kernel(K2, a, row_bound=1.0)
    assert out2.valid == 6
    fin = sq.apply_kernel(np.tril(np.ones((N, N))), sq.delta(0, N), row_bound=math.inf, lower_bandwidth=None)
    assert not fin.is_finite


def test_operator_norms():
    K = np.array([[1.0, -2.0], [0.5, 0.25]])
    assert sq.operator_norm(K, 1) == 2.25
    assert sq.operator_norm(K, math.inf) == 3.0
    assert sq.operator_norm(K, 2) == pytest.approx(np.linalg.norm(K, 2))


@settings(max_examples=30, deadline=None)
@given(vecs, arrays(np.float64, st.integers(1, 40), elements=finite))
def test_csv_json_roundtrip(re, im):
    n = min(re.size, im.size)
    a = sq.TruncatedSequence(re[:n] + 1j * im[:n])
    for back in (sq.from_csv(sq.to_csv(a)), sq.from_json(sq.to_json(a))):
        assert np.array_equal(back.values, a.values)


def test_parse_errors():
    with pytest.raises(ParseError):
        sq.from_csv("")
    with pytest.raises(ParseError):
        sq.from_csv("index,re,im\nx,1,2\n")
    with pytest.raises(ParseError):
        sq.from_json("{oops")
    with pytest.raises(ParseError):
        sq.from_json('{"nothing": 1}')
