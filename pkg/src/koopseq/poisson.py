"""Poisson transform between functions on the half-line and sequences.

    P f(n)  = int_0^inf f(t) e^{-t} t^n / n! dt
    P* a(t) = e^{-t} sum_n a(n) t^n / n!
"""

import math
import time

import numpy as np

from . import contspace as cs
from . import quadrature as quad
from . import seqspace as sq
from .errors import ConvergenceError, QuadratureError
from .report import VerificationReport
from .specfun import bessel_i0, cesaro_numbers, log_factorials, poisson_weights

ADJOINT_TAIL_TOL = 1e-14


def _term_transform(t, N, logf):
    # c e^{-a} sum_j a^{n-j}/(n-j)! (k+j)!/j! (1+lam)^{-(k+j+1)}
    c, k, lam, a = t
    w = 1.0 + lam
    n = np.arange(N)
    # (k+j)!/(j! k!) * k! = (k+j)!/j!
    log_kj = np.array([math.lgamma(k + j + 1) - math.lgamma(j + 1) for j in range(N)])
    powers = np.asarray(w, dtype=complex) ** (-(k + 1.0 + n))
    g = np.exp(log_kj) * powers  # indexed by j
    if a == 0:
        out = g
    else:
        # convolution with a^i / i!
        h = np.exp(n * math.log(a) - logf)
        out = np.convolve(h, g)[:N]
    out = c * math.exp(-a) * out
    return out


def poisson_forward(f, N=sq.DEFAULT_N, method="closed"):
    """Poisson transform of a test function, first N entries.

    ``method="closed"`` uses the binomial closed form per term;
    ``method="laguerre"`` uses Gauss-Laguerre (order 96) in the variable
    (1 + lam)(s - a), where each term integrand is a polynomial.  The rotated
    nodes cancel badly for complex lam at large n, so the Laguerre route is
    a cross-check for real rates only.
    """
    logf = log_factorials(N)
    total = np.zeros(N, dtype=complex)
    for t in f.terms:
        if method == "closed":
            total += _term_transform(t, N, logf)
        elif method == "laguerre":
            total += _term_laguerre(t, N, logf)
        else:
            raise ValueError(f"unknown method {method!r}")
    if not f.is_complex:
        total = total.real
    # |P f(n)| <= sup |f| since the Poisson weights integrate to one
    return sq.TruncatedSequence(total, N, cs.sup_bound(f) or 0.0)


def _term_laguerre(t, N, logf, order=96):
    c, k, lam, a = t
    x, w = quad.gauss_laguerre(order)
    z = 1.0 + lam
    u = x / z  # formal rotation; exact for the polynomial integrand
    n = np.arange(N)[:, None]
    s = u[None, :] + a
    with np.errstate(divide="ignore"):
        logs = np.log(s.astype(complex))
    vals = np.exp(n * logs - logf[:, None]) * (u**k)[None, :]
    res = vals @ w / z * math.exp(-a)
    return c * res


def check_closed_vs_laguerre(f, N=sq.DEFAULT_N, tol=1e-10):
    a = poisson_forward(f, N).values
    b = poisson_forward(f, N, method="laguerre").values
    err = float(np.max(np.abs(a - b)) / max(1.0, np.max(np.abs(a))))
    if err > tol:
        raise QuadratureError(f"closed form and Gauss-Laguerre disagree ({err:.2e})")
    return err


def poisson_adjoint(a, t_samples, tail_tol=ADJOINT_TAIL_TOL):
    """P* a at the sample points, summing the valid prefix.

    Raises ConvergenceError unless the first omitted Poisson weight at the
    largest sample, times the last kept entry, is below ``tail_tol``.
    """
    a = sq.as_sequence(a)
    ts = np.atleast_1d(np.asarray(t_samples, dtype=float))
    Nv = a.valid
    if not a.is_finite:
        tmax = float(np.max(ts))
        last = abs(a.values[Nv - 1]) if Nv else (a.tail_bound or 0.0)
        bound = (poisson_weights(tmax, Nv + 1)[Nv] if tmax > 0 else 0.0) * max(last, a.tail_bound)
        if not bound < tail_tol:
            raise ConvergenceError(f"P* tail bound {bound:.2e} exceeds {tail_tol:.0e}")
    else:
        Nv = a.N
    W = np.array([poisson_weights(t, Nv) for t in ts])
    out = W @ a.values[:Nv]
    return out


def poisson_adjoint_function(a):
    """P* of a finitely supported sequence as an exact test function."""
    a = sq.as_sequence(a)
    logf = log_factorials(a.N)
    terms = [(a.values[n] * math.exp(-logf[n]), n, 1.0, 0.0) for n in range(a.N) if a.values[n] != 0]
    return cs.TestFunction(terms)


def pp_star_kernel(M, N):
    """K[m, n] = 2^{-(m+n+1)} C(m + n, n); rows sum to one."""
    m = np.arange(M)[:, None]
    n = np.arange(N)[None, :]
    logf = log_factorials(M + N)
    logc = logf[m + n] - logf[m] - logf[n]
    return np.exp(logc - (m + n + 1) * math.log(2.0))


def pp_star(a, m_max=None):
    """P P* a(m) = 2^{-(m+1)} sum_n k^{m+1}(n) 2^{-n} a(n)."""
    a = sq.as_sequence(a)
    M = a.N if m_max is None else m_max
    K = pp_star_kernel(M, a.N)
    outside = np.clip(1.0 - K.sum(axis=1), 0.0, None)
    return sq.apply_kernel(K, a, outside_mass=outside, row_bound=1.0)


def pp_star_cesaro_form(a, m_max=None):
    """Same operator written with Cesaro numbers k^{m+1}(n)."""
    a = sq.as_sequence(a)
    M = a.N if m_max is None else m_max
    out = np.zeros(M, dtype=a.values.dtype)
    for m in range(M):
        k = cesaro_numbers(m + 1, a.N)
        out[m] = 2.0 ** (-(m + 1)) * np.sum(k * 2.0 ** (-np.arange(a.N)) * a.values)
    return out


def pp_star_quadrature(a, m_max=None, order=96):
    """P(P* a) by Gauss-Laguerre: P* a evaluated by its series at the nodes."""
    a = sq.as_sequence(a)
    M = a.N if m_max is None else m_max
    x, w = quad.gauss_laguerre(order)
    t = x / 2.0  # weight e^{-2t}: e^{-t} from P, e^{-t} from P*
    logf = log_factorials(max(M, a.N))
    series = np.array([np.dot(a.values, np.exp(np.arange(a.N) * math.log(ti) - logf[: a.N]))
                       for ti in t])
    out = np.empty(M, dtype=complex)
    for m in range(M):
        out[m] = np.sum(w * np.exp(m * np.log(t) - logf[m]) * series) / 2.0
    return out if np.iscomplexobj(a.values) else out.real


def p_star_p(f, t_samples, route="bessel", N=128, tol=1e-12):
    """P* P f(t) = e^{-t} int_0^inf f(s) e^{-s} I0(2 sqrt(ts)) ds.

    ``route="bessel"`` integrates against I0 adaptively; ``route="series"``
    sums Poisson weights against the closed-form P f.
    """
    ts = np.atleast_1d(np.asarray(t_samples, dtype=float))
    if route == "series":
        Pf = poisson_forward(f, N)
        W = np.array([poisson_weights(t, N) for t in ts])
        tail = np.max([1.0 - w.sum() for w in W]) * Pf.tail_bound
        if tail > 1e-12:
            raise ConvergenceError("P* P series truncated too early")
        return W @ Pf.values
    out = []
    for t in ts:
        def g(s, t=t):
            return complex(evaluate_scalar(f, s)) * math.exp(-s - t) * float(bessel_i0(2.0 * math.sqrt(t * s)))

        val, _ = quad.adaptive(g, 0.0, math.inf, points=f.knots(), tol=tol)
        out.append(val)
    out = np.array(out)
    return out if f.is_complex else out.real


def evaluate_scalar(f, s):
    return cs.evaluate(f, float(s))


def _report(identity, params, residual, tol, t0, expected_failure=False, note=""):
    return VerificationReport(
        identity_id=identity,
        params=params,
        residual=float(residual),
        tolerance=tol,
        passed=bool(residual <= tol),
        runtime_ms=(time.perf_counter() - t0) * 1e3,
        expected_failure=expected_failure,
        note=note,
    )


def check_adjoint_pairing(f, b, tol=1e-9):
    """<P f, b> = <f, P* b> (bilinear), the right side by adaptive quadrature."""
    t0 = time.perf_counter()
    b = sq.as_sequence(b)
    Pf = poisson_forward(f, b.N)
    lhs = complex(np.dot(Pf.values, b.values))
    Pb = poisson_adjoint_function(b)

    def g(s):
        return complex(cs.evaluate(f, s)) * complex(cs.evaluate(Pb, s))

    rhs, _ = quad.adaptive(g, 0.0, math.inf, points=f.knots(), tol=1e-13)
    res = abs(lhs - rhs) / max(1.0, abs(lhs))
    return _report("poisson.adjoint_pairing", {"N": b.N}, res, tol, t0)


def check_convolution_homomorphisms(f, g, a, b, t_samples=(0.5, 1.0, 2.0, 4.0), tol=1e-10):
    """P(f * g) = P f * P g and P*(delta_1 * (a * b)) = P* a * P* b."""
    reports = []
    t0 = time.perf_counter()
    a, b = sq.as_sequence(a), sq.as_sequence(b)
    N = max(a.N, b.N)
    lhs = poisson_forward(cs.convolve_fn(f, g), N).values
    rhs = sq.convolve(poisson_forward(f, N), poisson_forward(g, N)).values
    res = float(np.max(np.abs(lhs - rhs)))
    reports.append(_report("poisson.conv_forward", {"N": N}, res, tol, t0))

    t0 = time.perf_counter()
    ab = sq.convolve(a, b, full=True)
    shifted = sq.TruncatedSequence(np.concatenate([[0.0], ab.values]))
    lhs = poisson_adjoint(shifted, t_samples)
    conv = cs.convolve_fn(poisson_adjoint_function(a), poisson_adjoint_function(b))
    rhs = cs.evaluate(conv, np.asarray(t_samples, dtype=float))
    res = float(np.max(np.abs(lhs - rhs)) / max(1.0, np.max(np.abs(rhs))))
    reports.append(_report("poisson.conv_adjoint", {"N": N}, res, tol, t0))
    return reports


def check_transform_conjugation(f, a, z_samples=(0.3, -0.5, 0.2 + 0.4j),
                                w_samples=(0.5, 1.0, 2.0 + 1.0j), N=sq.DEFAULT_N, tol=1e-10):
    """Z(P f)(z) = L f(1 - z) for |z| < 1, and
    L(P* a)(w) = Z(a)(1/(1 + w)) / (1 + w) for Re w > 0."""
    reports = []
    t0 = time.perf_counter()
    Pf = poisson_forward(f, N)
    res = 0.0
    for z in z_samples:
        zv, tail = sq.zeta_transform(Pf, z)
        res = max(res, abs(zv - cs.laplace(f, 1 - complex(z))) - tail)
    reports.append(_report("poisson.zeta_laplace", {"N": N}, max(res, 0.0), tol, t0))

    t0 = time.perf_counter()
    a = sq.as_sequence(a)
    Pa = poisson_adjoint_function(a)
    res = 0.0
    for w in w_samples:
        w = complex(w)
        zv, tail = sq.zeta_transform(a, 1 / (1 + w))
        res = max(res, abs(cs.laplace(Pa, w) - zv / (1 + w)) - tail)
    reports.append(_report("poisson.laplace_zeta", {"N": a.N}, max(res, 0.0), tol, t0))
    return reports


def norm_ratio_exponential(lam, p):
    """||P e_lam||_p / ||e_lam||_p from the geometric closed forms."""
    w = 1.0 + lam
    num = 1.0 / (w**p - 1.0)
    den = 1.0 / (p * lam)
    return (num / den) ** (1.0 / p)
