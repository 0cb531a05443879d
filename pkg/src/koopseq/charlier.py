"""Charlier-type polynomials p_n(z) and their normalised companions q_n(z).

p_n satisfies p_0 = 1, p_1 = z + 1, p_{n+1} = (z + n + 1) p_n - n p_{n-1},
and q_n = p_n / n!.  When ``z`` is a Python ``int`` (or ``Fraction``) the
recurrences run in exact arithmetic.
"""

from math import comb, factorial
from typing import NamedTuple

import numpy as np

from .errors import DomainError


class PartialSum(NamedTuple):
    value: complex
    last_term: float


def _check_n(n):
    if n < 0:
        raise DomainError(f"degree must be non-negative, got {n}")


def charlier_p(n, z):
    """p_n(z) by the three-term recurrence."""
    _check_n(n)
    p_prev, p = 0, 1
    for m in range(n):
        p_prev, p = p, (z + m + 1) * p - m * p_prev
    return p


def charlier_p_direct(n, z):
    """p_n(z) = sum_j C(n, j) z (z + 1) ... (z + j - 1)."""
    _check_n(n)
    total = 0
    rising = 1
    for j in range(n + 1):
        total = total + comb(n, j) * rising
        rising = rising * (z + j)
    return total


def charlier_p_sequence(z, N):
    """[p_0(z), ..., p_{N-1}(z)] as a list (exact for exact z)."""
    out = []
    p_prev, p = 0, 1
    for m in range(N):
        out.append(p)
        p_prev, p = p, (z + m + 1) * p - m * p_prev
    return out


def charlier_q(n, z):
    """q_n(z) = p_n(z) / n! by (n + 1) q_{n+1} = (z + n + 1) q_n - q_{n-1}."""
    _check_n(n)
    return charlier_q_sequence(z, n + 1)[-1]


def charlier_q_sequence(z, N):
    """Vector [q_0(z), ..., q_{N-1}(z)] in floating point."""
    dtype = complex if np.iscomplexobj(z) or isinstance(z, complex) else float
    out = np.empty(N, dtype=dtype)
    q_prev, q = 0.0, 1.0
    for m in range(N):
        out[m] = q
        q_prev, q = q, ((z + m + 1) * q - q_prev) / (m + 1)
    return out


def charlier_q_exact(n, z):
    """q_n(z) for exact z; returns a Fraction when needed."""
    from fractions import Fraction

    return Fraction(charlier_p(n, z)) / factorial(n)


def charlier_generating_partial(z, w, N):
    """Partial sum of sum_n p_n(z) w**n / n! over n < N.

    The closed form is exp(w) (1 - w)**(-z) for |w| < 1.
    """
    q = charlier_q_sequence(z, N)
    powers = np.asarray(w, dtype=complex) ** np.arange(N)
    terms = q * powers
    return PartialSum(complex(np.sum(terms)), float(abs(terms[-1])))


def charlier_generating_closed(z, w):
    if abs(w) >= 1:
        raise DomainError("generating function needs |w| < 1")
    return complex(np.exp(w) * (1 - complex(w)) ** (-z))


def nabla_p(n, z):
    """p_n(z) - p_n(z - 1)."""
    return charlier_p(n, z) - charlier_p(n, z - 1)


def block_power_sums(z, p, blocks):
    """sum_{n in block} |q_n(z)|**p for each half-open index block.

    Used to read off whether (q_n(z)) lies in l^p: the sums shrink along
    dyadic blocks when Re z < 1 - 1/p and grow otherwise.
    """
    top = max(b for _, b in blocks)
    q = np.abs(charlier_q_sequence(z, top))
    return [float(np.sum(q[a:b] ** p)) for a, b in blocks]
