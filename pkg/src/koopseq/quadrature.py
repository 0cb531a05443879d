"""Quadrature rules used as independent numerical routes.

Node/weight generation for the Gaussian rules is delegated to
``scipy.special.roots_*``; the double-exponential rule is implemented here
because it needs endpoint distances supplied separately from the node.
"""

from dataclasses import dataclass
from functools import lru_cache
import math
import warnings

import numpy as np
from scipy import integrate, special

from .errors import QuadratureError


@dataclass(frozen=True)
class QuadratureScheme:
    kind: str  # GaussLaguerre | GaussJacobi | GaussLegendre | TanhSinh | Adaptive
    order: int = 0
    error_estimate: float = 0.0


@lru_cache(maxsize=64)
def gauss_laguerre(n):
    x, w = special.roots_laguerre(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=64)
def gauss_legendre(n):
    x, w = np.polynomial.legendre.leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@lru_cache(maxsize=256)
def gauss_jacobi01(n, a, b):
    """Nodes and weights on [0, 1] for the weight ``x**a * (1 - x)**b``.

    Requires ``a, b > -1``.
    """
    if not (a > -1 and b > -1):
        raise QuadratureError(f"Jacobi exponents must exceed -1, got {a}, {b}")
    y, w = special.roots_jacobi(n, b, a)
    x = 0.5 * (1.0 + y)
    w = w * 2.0 ** (-(a + b + 1.0))
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def legendre_interval(f, lo, hi, n=32):
    """Gauss-Legendre on [lo, hi] for a vectorised ``f`` (leading axis = nodes)."""
    y, w = gauss_legendre(n)
    half = 0.5 * (hi - lo)
    s = lo + half * (1.0 + y)
    vals = np.asarray(f(s))
    return half * np.tensordot(w, vals, axes=(0, 0))


# Double-exponential (tanh-sinh) rule on (0, 1).
_TS_UMAX = 6.0  # distances to the endpoints stay above ~1e-300


def _ts_nodes(h, odd_only):
    k_max = int(math.floor(_TS_UMAX / h))
    if odd_only:
        k = np.arange(1, k_max + 1, 2)
        k = np.concatenate([-k[::-1], k])
    else:
        k = np.arange(-k_max, k_max + 1)
    u = k * h
    y = 0.5 * math.pi * np.sinh(u)
    x = 1.0 / (1.0 + np.exp(-2.0 * y))
    xc = 1.0 / (1.0 + np.exp(2.0 * y))
    w = math.pi * np.cosh(u) * x * xc
    keep = (x > 0) & (xc > 0)
    return x[keep], xc[keep], w[keep]


def tanh_sinh(g, tol=1e-13, min_level=3, max_level=8, atol=1e-300):
    """Integrate ``g`` over (0, 1) with the tanh-sinh rule.

    ``g(x, xc)`` receives nodes and their complements ``xc = 1 - x`` (computed
    without cancellation) and returns an array whose leading axis runs over
    nodes.  Levels are refined by halving the step until two successive
    estimates agree to ``tol`` (relative, in max norm).

    Returns ``(value, error_estimate)``.
    """
    h = 1.0
    x, xc, w = _ts_nodes(h, odd_only=False)
    total = h * np.tensordot(w, np.asarray(g(x, xc)), axes=(0, 0))
    err = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        x, xc, w = _ts_nodes(h, odd_only=True)
        new = 0.5 * total + h * np.tensordot(w, np.asarray(g(x, xc)), axes=(0, 0))
        err = float(np.max(np.abs(new - total)))
        scale = float(np.max(np.abs(new))) if np.size(new) else 0.0
        total = new
        if level >= min_level and err <= max(tol * scale, atol):
            return total, err
    scale = float(np.max(np.abs(total))) if np.size(total) else 0.0
    if err > max(1e3 * tol * scale, atol):
        raise QuadratureError(f"tanh-sinh did not converge: error estimate {err:.3e}")
    return total, err


def tanh_sinh_interval(f, lo, hi, tol=1e-13, **kw):
    """Integrate ``f(s, s - lo, hi - s)`` over (lo, hi) with tanh-sinh."""
    width = hi - lo

    def g(x, xc):
        da = width * x
        db = width * xc
        vals = np.asarray(f(lo + da, da, db))
        return width * vals

    return tanh_sinh(g, tol=tol, **kw)


def tanh_sinh_halfline(f, lo, tol=1e-13, **kw):
    """Integrate ``f(s, s - lo)`` over (lo, inf) via ``s = lo + x / (1 - x)``."""

    def g(x, xc):
        d = x / xc
        vals = np.asarray(f(lo + d, d))
        jac = 1.0 / (xc * xc)
        return vals * jac.reshape((-1,) + (1,) * (vals.ndim - 1))

    return tanh_sinh(g, tol=tol, **kw)


def adaptive(f, lo, hi, points=None, tol=1e-12, limit=400):
    """Adaptive (QUADPACK) integral of a scalar complex-valued ``f``.

    ``hi`` may be ``inf``; breakpoints in ``points`` are used to split.
    Returns ``(value, error_estimate)``.
    """
    cuts = [lo]
    if points is not None:
        cuts += sorted(p for p in points if lo < p < hi)
    cuts.append(hi)
    val = 0j
    err = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b <= a:
            continue
        for part, unit in ((lambda s: complex(f(s)).real, 1.0), (lambda s: complex(f(s)).imag, 1j)):
            with warnings.catch_warnings():
                # the error estimate is checked below
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                v, e = integrate.quad(part, a, b, epsabs=tol * 1e-2, epsrel=tol, limit=limit)
            val += unit * v
            err += e
    scale = max(abs(val), 1.0)
    if err > 1e2 * tol * scale:
        raise QuadratureError(f"adaptive quadrature error estimate {err:.3e} too large")
    return val, err
