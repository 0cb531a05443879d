import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from koopseq import charlier as ch
from koopseq.errors import DomainError


def test_oeis_prefixes():
    assert ch.charlier_p_sequence(1, 6) == [1, 2, 5, 16, 65, 326]
    assert ch.charlier_p_sequence(2, 6) == [1, 3, 11, 49, 261, 1631]
    assert all(isinstance(x, int) for x in ch.charlier_p_sequence(2, 10))


def test_cubic_expansion():
    # p_3(z) = z^3 + 6 z^2 + 8 z + 1
    for z in (-1, 0, 2, 5):
        assert ch.charlier_p(3, z) == z**3 + 6 * z**2 + 8 * z + 1
    assert ch.charlier_p(3, -1) == -2


def test_negative_degree():
    with pytest.raises(DomainError):
        ch.charlier_p(-1, 1.0)


@settings(max_examples=50, deadline=None)
@given(st.integers(-10, 10), st.integers(0, 25))
def test_recurrence_matches_direct_sum_exactly(z, n):
    assert ch.charlier_p(n, z) == ch.charlier_p_direct(n, z)


@settings(max_examples=50, deadline=None)
@given(st.integers(-10, 10), st.integers(1, 20))
def test_nabla_identity_exact(z, n):
    assert ch.nabla_p(n, z) == n * ch.charlier_p(n - 1, z)


@settings(max_examples=30, deadline=None)
@given(st.fractions(-5, 5, max_denominator=7), st.integers(1, 12))
def test_nabla_identity_rational(z, n):
    z = Fraction(z)
    assert ch.nabla_p(n, z) == n * ch.charlier_p(n - 1, z)


def test_q_at_minus_one():
    # q_n(-1) = 1/n! - 1/(n-1)! for n >= 1
    q = ch.charlier_q_sequence(-1.0, 15)
    ref = [1.0] + [1 / math.factorial(n) - 1 / math.factorial(n - 1) for n in range(1, 15)]
    assert np.allclose(q, ref, rtol=0, atol=1e-15)
    assert ch.charlier_q_exact(4, -1) == Fraction(1, 24) - Fraction(1, 6)


@pytest.mark.parametrize("z", [0.0, 1.0, 2.5, 1 - 0.5j])
@pytest.mark.parametrize("w", [0.5, -0.5, 0.3j])
def test_generating_function(z, w):
    ps = ch.charlier_generating_partial(z, w, 120)
    ref = ch.charlier_generating_closed(z, w)
    assert abs(ps.value - ref) < 1e-10 * max(1, abs(ref))
    assert ps.last_term < 1e-20


def test_generating_closed_domain():
    with pytest.raises(DomainError):
        ch.charlier_generating_closed(1.0, 1.0)


def test_float_q_matches_exact():
    for n in range(12):
        assert ch.charlier_q(n, 2.5) == pytest.approx(float(ch.charlier_q_exact(n, Fraction(5, 2))), rel=1e-13)


def test_lp_membership_trend():
    blocks = [(2**k, 2 ** (k + 1)) for k in range(3, 9)]
    s_in = ch.block_power_sums(-0.5, 2.0, blocks)
    s_out = ch.block_power_sums(1.0, 2.0, blocks)
    assert all(b < a for a, b in zip(s_in, s_in[1:]))
    assert s_out[-1] > s_out[-2]
