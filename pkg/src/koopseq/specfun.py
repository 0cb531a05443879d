"""Special functions: Gamma, Beta, the truncated-exponential Beta function,
Kummer's 1F1, Cesaro numbers, the Prabhakar function, I0 and Poisson weights.

Scalars may be real or complex.  Gamma and log-Gamma are vectorised over numpy
arrays; the remaining functions are scalar unless noted.
"""

import math
import cmath

import numpy as np
from scipy import special as _sp

from .errors import ConvergenceError, DomainError, PoleError
from . import quadrature as quad

EPS = 1e-15
MAX_TERMS = 10_000

# Lanczos approximation, g = 7, nine coefficients.
_LG = 7.0
_LC = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)


def _is_pole(z):
    z = np.asarray(z)
    re = np.real(z)
    return (np.imag(z) == 0) & (re <= 0) & (re == np.round(re))


def _lanczos_log(z):
    # log Gamma(z) for Re z >= 1/2
    z = z - 1.0
    x = _LC[0]
    for i in range(1, 9):
        x = x + _LC[i] / (z + i)
    t = z + _LG + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * np.log(t) - t + np.log(x)


def _scalarize(out, was_scalar):
    if was_scalar:
        out = out[()]
        return complex(out) if np.iscomplexobj(out) else float(out)
    return out


def gamma(z):
    """Gamma function: scipy for real input, reflection plus Lanczos series
    for complex input."""
    was_scalar = np.ndim(z) == 0
    z = np.asarray(z)
    if np.any(_is_pole(z)):
        raise PoleError(f"Gamma has a pole at {z[_is_pole(z)].ravel()[0]}")
    cplx = np.iscomplexobj(z)
    if not cplx:
        return _scalarize(_sp.gamma(z.astype(float)), was_scalar)
    z = z.astype(complex)
    out = np.empty_like(z)
    refl = np.real(z) < 0.5
    ok = ~refl
    out[ok] = np.exp(_lanczos_log(z[ok]))
    if np.any(refl):
        zr = z[refl]
        out[refl] = math.pi / (np.sin(math.pi * zr) * np.exp(_lanczos_log(1.0 - zr)))
    return _scalarize(out, was_scalar)


def loggamma(z):
    """Logarithm of Gamma.

    For complex input the branch is chosen so that ``exp(loggamma(z)) ==
    gamma(z)``; it need not be the principal log-Gamma.  For real input the
    result is ``log|Gamma(x)|``.
    """
    was_scalar = np.ndim(z) == 0
    z = np.asarray(z)
    if np.any(_is_pole(z)):
        raise PoleError("log-Gamma evaluated at a pole")
    cplx = np.iscomplexobj(z)
    if not cplx:
        return _scalarize(_sp.gammaln(z.astype(float)), was_scalar)
    z = z.astype(complex)
    out = np.empty_like(z)
    refl = np.real(z) < 0.5
    ok = ~refl
    out[ok] = _lanczos_log(z[ok])
    if np.any(refl):
        zr = z[refl]
        s = np.sin(math.pi * zr)
        if not cplx:
            s = np.abs(s)
        out[refl] = math.log(math.pi) - np.log(s) - _lanczos_log(1.0 - zr)
    return _scalarize(out, was_scalar)


def rgamma(z):
    """Reciprocal Gamma, zero at the poles."""
    was_scalar = np.ndim(z) == 0
    z = np.asarray(z)
    cplx = np.iscomplexobj(z)
    z = z.astype(complex if cplx else float)
    out = np.zeros_like(z)
    good = ~_is_pole(z)
    if np.any(good):
        out[good] = 1.0 / np.asarray(gamma(z[good]))
    return _scalarize(out, was_scalar)


def _check_right_half(name, *args):
    for a in args:
        if np.any(np.real(a) <= 0):
            raise DomainError(f"{name} requires positive real parts, got {a}")


def beta(u, v):
    """Euler Beta function, Re u > 0 and Re v > 0 (vectorised)."""
    _check_right_half("beta", u, v)
    lb = np.asarray(loggamma(u)) + np.asarray(loggamma(v)) - np.asarray(loggamma(np.add(u, v)))
    return _scalarize(np.exp(lb), np.ndim(u) == 0 and np.ndim(v) == 0)


def sum_series(terms, eps=EPS, max_terms=MAX_TERMS, what="series"):
    """Sum an iterable of terms with the three-small-terms stopping rule.

    Stops once ``|term| <= eps * |partial sum|`` holds for three consecutive,
    non-increasing terms.  A finite iterable may end earlier.
    """
    s = 0.0
    small = 0
    prev = math.inf
    n = 0
    for n, t in enumerate(terms, start=1):
        s += t
        a = abs(t)
        if a <= eps * abs(s) and a <= prev:
            small += 1
            if small >= 3:
                return s
        else:
            small = 0
        prev = a
        if n >= max_terms:
            raise ConvergenceError(f"{what}: no convergence after {max_terms} terms")
    return s


def kummer_1f1(a, c, z, eps=EPS, max_terms=MAX_TERMS):
    """Confluent hypergeometric 1F1(a; c; z) by its power series."""
    if _is_pole(c) and not (_is_pole(a) and np.real(a) > np.real(c)):
        raise PoleError(f"1F1 lower parameter {c} is a non-positive integer")

    def terms():
        t = 1.0
        n = 0
        while True:
            yield t
            t = t * (a + n) / (c + n) * z / (n + 1)
            n += 1

    return sum_series(terms(), eps, max_terms, "1F1")


def kummer_1f1_integral(a, c, z, tol=1e-13):
    """1F1 through its Euler integral, valid for Re c > Re a > 0."""
    if not (np.real(c) > np.real(a) > 0):
        raise DomainError("integral representation needs Re c > Re a > 0")
    pref = np.exp(loggamma(complex(c)) - loggamma(complex(a)) - loggamma(complex(c - a)))

    def f(t, tc):
        return tc ** (c - a - 1.0 + 0j) * t ** (a - 1.0 + 0j) * np.exp(z * t)

    val, _ = quad.tanh_sinh(f, tol=tol)
    out = pref * val
    if not any(np.iscomplexobj(x) or isinstance(x, complex) for x in (a, c, z)):
        return float(out.real)
    return complex(out)


def _as_number(x):
    return complex(x) if isinstance(x, complex) or np.iscomplexobj(x) else float(x)


def beta1(u, v, method="series", order=64):
    """Truncated-exponential Beta function

        B1(u, v) = int_0^1 (1 - t)**(u - 1) * t**(v - 1) * exp(-t) dt.

    ``method`` selects the route: ``"series"`` (sum of shifted Beta values
    over n!), ``"kummer"`` (Beta times 1F1(u; u + v; 1)) or ``"quadrature"``
    (Gauss-Jacobi with the Beta weight for real arguments; for complex ones
    the interval is split at 1/2, the leading endpoint terms are integrated
    exactly and tanh-sinh handles the smooth remainders).
    """
    _check_right_half("beta1", u, v)
    u = _as_number(u)
    v = _as_number(v)
    cplx = isinstance(u, complex) or isinstance(v, complex)
    if method == "series":
        b = beta(u, v)

        def terms():
            t = b
            n = 0
            while True:
                yield t
                t = t * (u + n) / (u + v + n) / (n + 1)
                n += 1

        val = sum_series(terms(), what="beta1 series") / math.e
    elif method == "kummer":
        val = beta(u, v) * kummer_1f1(u, u + v, 1.0) / math.e
    elif method == "quadrature":
        if not cplx:
            vals = []
            for n in (order, order + 32):
                x, w = quad.gauss_jacobi01(n, v - 1.0, u - 1.0)
                vals.append(float(np.dot(w, np.exp(-x))))
            # scipy's Jacobi nodes carry ~1e-12 relative error for exponents near -1
            if abs(vals[1] - vals[0]) > 1e-11 * abs(vals[1]):
                raise quad.QuadratureError("Gauss-Jacobi orders disagree for beta1")
            val = vals[1]
        else:
            val = _beta1_split(u, v)
    else:
        raise ValueError(f"unknown beta1 method {method!r}")
    return complex(val) if cplx else float(np.real(val))


def _taylor_pow_exp(a, sign, n):
    """Taylor coefficients of (1 - x)**a * exp(sign * x) at x = 0."""
    b = np.empty(n, dtype=complex)
    e = np.empty(n)
    b[0], e[0] = 1.0, 1.0
    for k in range(1, n):
        b[k] = b[k - 1] * (k - 1 - a) / k
        e[k] = e[k - 1] * sign / k
    return np.convolve(b, e)[:n]


def _endpoint_piece(a, c, sign, K=8, terms=70):
    """int_0^{1/2} x**(c - 1) (1 - x)**a exp(sign x) dx.

    The first K Taylor terms are integrated exactly; the remainder
    x**(c - 1 + K) * (tail series) is smooth at 0 and goes to tanh-sinh.
    """
    co = _taylor_pow_exp(a, sign, K + terms)
    k = np.arange(K)
    head = np.sum(co[:K] * 0.5 ** (c + k) / (c + k))
    tail = co[K:]
    j = np.arange(terms)

    def g(x, xc):
        y = 0.5 * x
        series = (y[:, None] ** j[None, :]) @ tail
        return 0.5 * np.exp((c - 1.0 + K) * np.log(y)) * series

    rem, _ = quad.tanh_sinh(g, tol=1e-15)
    return head + rem


def _beta1_split(u, v):
    # (0, 1/2) in t and (0, 1/2) in s = 1 - t, each with its endpoint power
    left = _endpoint_piece(u - 1.0, v, -1.0)
    right = _endpoint_piece(v - 1.0, u, 1.0) / math.e
    return left + right


def beta1_factor(u, v, max_terms=400):
    """Vectorised ratio ``B1(u, v) / B(u, v) = e**-1 * 1F1(u; u + v; 1)``.

    Used by kernels that combine the Beta part in log form.
    """
    u = np.asarray(u)
    v = np.asarray(v)
    uv = u + v
    t = np.ones(np.broadcast(u, v).shape, dtype=np.result_type(u, v, float))
    s = t.copy()
    for n in range(max_terms):
        t = t * (u + n) / (uv + n) / (n + 1)
        s = s + t
        if np.all(np.abs(t) <= 1e-17 * np.abs(s)):
            return s / math.e
    raise ConvergenceError("beta1_factor series did not converge")


def beta1_array(u, v):
    """Vectorised B1 by the shifted-Beta series."""
    _check_right_half("beta1", u, v)
    lb = np.asarray(loggamma(np.asarray(u))) + np.asarray(loggamma(np.asarray(v))) - np.asarray(
        loggamma(np.asarray(u) + np.asarray(v))
    )
    return np.exp(lb) * beta1_factor(u, v)


def cesaro_number(alpha, n):
    """k^alpha(n) = Gamma(n + alpha) / (Gamma(alpha) n!), by recurrence.

    Integer ``alpha`` gives an exact integer.
    """
    if n < 0:
        return 0
    if isinstance(alpha, (int, np.integer)) and not isinstance(alpha, bool):
        alpha = int(alpha)
        if alpha > 0:
            return math.comb(n + alpha - 1, n)
        return (-1) ** n * math.comb(-alpha, n)
    k = 1.0
    for m in range(1, n + 1):
        k = k * (alpha + m - 1) / m
    return k


def cesaro_numbers(alpha, N):
    """Array of k^alpha(n) for n < N."""
    dtype = complex if isinstance(alpha, complex) else float
    out = np.empty(N, dtype=dtype)
    k = 1.0
    for m in range(N):
        if m:
            k = k * (alpha + m - 1) / m
        out[m] = k
    return out


def prabhakar(gamma_, alpha, beta_, z, eps=EPS, max_terms=MAX_TERMS):
    """Prabhakar function sum_n (gamma)_n / n! * z**n / Gamma(alpha n + beta)."""
    if np.real(alpha) <= 0:
        raise DomainError("Prabhakar function needs Re alpha > 0")

    def terms():
        c = 1.0  # (gamma)_n / n!
        zn = 1.0
        n = 0
        while True:
            yield c * zn * rgamma(alpha * n + beta_)
            c = c * (gamma_ + n) / (n + 1)
            zn = zn * z
            n += 1

    return sum_series(terms(), eps, max_terms, "Prabhakar")


def bessel_i0(z, eps=EPS, max_terms=MAX_TERMS):
    """Modified Bessel I0 by its power series (scalar or array)."""
    if np.ndim(z) == 0:
        q = z * z / 4.0

        def terms():
            t = 1.0
            n = 0
            while True:
                yield t
                n += 1
                t = t * q / (n * n)

        return sum_series(terms(), eps, max_terms, "I0")
    z = np.asarray(z)
    q = z * z / 4.0
    t = np.ones_like(q)
    s = t.copy()
    for n in range(1, max_terms):
        t = t * q / (n * n)
        s = s + t
        if n > np.max(np.abs(np.sqrt(q)), initial=0) and np.all(np.abs(t) <= eps * np.abs(s)):
            return s
    raise ConvergenceError("I0 series did not converge")


def log_factorials(N):
    """log(n!) for n < N."""
    out = np.zeros(N)
    if N > 1:
        out[1:] = np.cumsum(np.log(np.arange(1, N)))
    return out


def poisson_kernel(n, t):
    """Poisson weight exp(-t) t**n / n!."""
    if n < 0:
        return 0.0
    if t == 0:
        return 1.0 if n == 0 else 0.0
    if isinstance(t, complex):
        return cmath.exp(n * cmath.log(t) - t - math.lgamma(n + 1))
    if t < 0:
        return math.exp(-t) * t**n / math.factorial(n)
    return math.exp(n * math.log(t) - t - math.lgamma(n + 1))


def poisson_weights(t, N):
    """Vector of Poisson weights for n < N at a real t >= 0."""
    if t < 0:
        raise DomainError("Poisson weights need t >= 0")
    if t == 0:
        out = np.zeros(N)
        out[0] = 1.0
        return out
    n = np.arange(N)
    return np.exp(n * math.log(t) - t - log_factorials(N))


def lower_incomplete_gamma(s, x):
    """gamma(s, x) = int_0^x u**(s-1) e**-u du for real s > 0, x >= 0."""
    if s <= 0 or x < 0:
        raise DomainError("lower incomplete gamma needs s > 0 and x >= 0")
    return float(_sp.gammainc(s, x) * _sp.gamma(s))
