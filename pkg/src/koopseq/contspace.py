"""Closed-form test functions on the half-line and the continuous semigroups.

A :class:`TestFunction` is a finite sum of terms

    c * (s - a)**k * exp(-lam * (s - a)) * 1[s >= a],     a >= 0, Re lam > 0,

which is closed under every semigroup and generator used here, so those act
on the term list exactly.  A knot pushed below zero is re-expanded
binomially around zero.
"""

from dataclasses import dataclass
from math import comb, factorial
from typing import NamedTuple
import json
import math
import time

import numpy as np
from scipy import integrate, optimize

from .errors import DomainError, ParseError, QuadratureError
from . import quadrature as quad
from .seqspace import inv_p

CONT_SEMIGROUPS = ("TLeft", "TRight", "TpPlus", "TpMinus", "Sp", "Rp")
CONT_GENERATORS = ("DLeft", "DRight0", "LambdaP", "Ap", "Bp")


class Term(NamedTuple):
    c: complex
    k: int
    lam: complex
    a: float


def _num(x):
    x = complex(x)
    return x.real if x.imag == 0 else x


class TestFunction:
    __test__ = False  # keep pytest from collecting this class

    def __init__(self, terms=()):
        ts = []
        for t in terms:
            t = Term(_num(t[0]), int(t[1]), _num(t[2]), float(t[3]))
            if t.k < 0:
                raise DomainError("term degree must be non-negative")
            if np.real(t.lam) <= 0:
                raise DomainError("term decay rate needs Re lam > 0")
            if t.c != 0:
                ts.append(t)
        self.terms = tuple(ts)

    @classmethod
    def exp(cls, lam, c=1.0):
        """c * exp(-lam s)."""
        return cls([(c, 0, lam, 0.0)])

    def __repr__(self):
        return f"TestFunction({list(self.terms)!r})"

    def __add__(self, other):
        return TestFunction(self.terms + other.terms).merged()

    def __sub__(self, other):
        return self + other.scaled(-1.0)

    def scaled(self, c):
        return TestFunction([(t.c * c, t.k, t.lam, t.a) for t in self.terms])

    def knots(self):
        return sorted({t.a for t in self.terms})

    def merged(self):
        """Combine terms with identical (k, lam, a)."""
        acc = {}
        for t in self.terms:
            key = (t.k, t.lam, t.a)
            acc[key] = acc.get(key, 0.0) + t.c
        return TestFunction([(c, k, lam, a) for (k, lam, a), c in acc.items()])

    def __call__(self, s):
        return evaluate(self, s)

    @property
    def is_complex(self):
        return any(isinstance(t.c, complex) or isinstance(t.lam, complex) for t in self.terms)


def _rebase(t):
    """Re-expand a term whose knot is negative around zero."""
    if t.a >= 0:
        return [t]
    shift = -t.a  # (s - a)^k = (s + shift)^k
    damp = np.exp(-t.lam * shift)
    return [
        Term(t.c * comb(t.k, i) * shift ** (t.k - i) * damp, i, t.lam, 0.0)
        for i in range(t.k + 1)
    ]


def _build(terms):
    out = []
    for t in terms:
        out.extend(_rebase(t))
    return TestFunction(out).merged()


def evaluate(f, s):
    """Evaluate at scalar or array ``s`` (s >= 0)."""
    s_arr = np.asarray(s, dtype=float)
    out = np.zeros(s_arr.shape, dtype=complex if f.is_complex else float)
    for t in f.terms:
        x = s_arr - t.a
        on = x >= 0
        xs = np.where(on, x, 0.0)
        if t.k == 0:
            poly = np.ones_like(xs)
        else:
            poly = xs**t.k
        val = t.c * poly * np.exp(-t.lam * xs)
        out = out + np.where(on, val, 0.0)
    return out[()] if out.ndim == 0 else out


def laplace(f, z):
    """Laplace transform sum c e^{-z a} k! / (z + lam)^{k+1}."""
    total = 0j
    for t in f.terms:
        w = z + t.lam
        if np.real(w) <= 0:
            raise DomainError("Laplace transform outside the half-plane of convergence")
        total += t.c * np.exp(-z * t.a) * factorial(t.k) / w ** (t.k + 1)
    return total if isinstance(z, complex) or f.is_complex else total.real


def integral(f):
    """int_0^inf f(s) ds."""
    return laplace(f, 0.0)


def sup_bound(f):
    """A cheap upper bound for sup |f|."""
    b = 0.0
    for t in f.terms:
        r = float(np.real(t.lam))
        b += abs(t.c) * ((t.k / (math.e * r)) ** t.k if t.k else 1.0)
    return b


def lp_norm_fn(f, p, tol=1e-12):
    """L^p(0, inf) norm by adaptive quadrature split at the knots."""
    if p == math.inf:
        hi = max(f.knots() + [0.0]) + 60.0 / min(float(np.real(t.lam)) for t in f.terms)
        grid = np.unique(np.concatenate([np.linspace(0, hi, 20001), np.asarray(f.knots())]))
        vals = np.abs(evaluate(f, grid))
        i = int(np.argmax(vals))
        best = float(vals[i])
        # polish the grid maximum between its neighbours (no knot lies inside)
        lo_, hi_ = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
        if hi_ > lo_:
            r = optimize.minimize_scalar(lambda s: -abs(evaluate(f, s)), bounds=(lo_, hi_),
                                         method="bounded", options={"xatol": 1e-12})
            best = max(best, float(-r.fun))
        return best
    if not f.terms:
        return 0.0
    pts = f.knots()

    def g(s):
        return abs(evaluate(f, s)) ** p

    val, _ = quad.adaptive(g, 0.0, math.inf, points=pts, tol=tol)
    return float(val.real) ** (1.0 / p)


def derivative(f):
    """Pointwise derivative off the knots (jumps reported by :func:`jumps`)."""
    out = []
    for t in f.terms:
        if t.k:
            out.append(Term(t.c * t.k, t.k - 1, t.lam, t.a))
        out.append(Term(-t.c * t.lam, t.k, t.lam, t.a))
    return TestFunction(out).merged()


def jumps(f, tol=0.0):
    """[(knot, jump)] for knots a > 0 where f is discontinuous."""
    acc = {}
    for t in f.terms:
        if t.k == 0 and t.a > 0:
            acc[t.a] = acc.get(t.a, 0.0) + t.c
    return sorted((a, c) for a, c in acc.items() if abs(c) > tol)


def _times_s(f):
    # s * (s - a)^m = (s - a)^{m+1} + a (s - a)^m
    out = []
    for t in f.terms:
        out.append(Term(t.c, t.k + 1, t.lam, t.a))
        if t.a:
            out.append(Term(t.c * t.a, t.k, t.lam, t.a))
    return TestFunction(out)


def apply_cont_generator(kind, f, p=2.0):
    """Apply a continuous generator to a test function.

    DLeft:    f'
    DRight0:  -f'            (needs f(0) = 0)
    LambdaP:  -s f' - f/p
    Ap:       (1 - s) f' - f/p
    Bp:       (s - 1) f' + f/p
    """
    ip = inv_p(p)
    df = derivative(f)
    if kind == "DLeft":
        return df
    if kind == "DRight0":
        if abs(evaluate(f, 0.0)) > 1e-12 * max(1.0, sup_bound(f)):
            raise DomainError("right-translation generator needs f(0) = 0")
        return df.scaled(-1.0)
    sdf = _times_s(df)
    if kind == "LambdaP":
        return (sdf.scaled(-1.0) + f.scaled(-ip)).merged()
    if kind == "Ap":
        return (df + sdf.scaled(-1.0) + f.scaled(-ip)).merged()
    if kind == "Bp":
        return (sdf + df.scaled(-1.0) + f.scaled(ip)).merged()
    raise DomainError(f"unknown continuous generator {kind!r}")


@dataclass(frozen=True)
class SemigroupIdCont:
    variant: str
    p: float = 2.0
    t: float = 0.0


def apply_cont_semigroup(kind, t, f, p=2.0):
    """Apply a continuous semigroup at time t >= 0 to a test function.

    TLeft:   f(s + t)
    TRight:  f(s - t) 1[s > t]
    TpPlus:  e^{-t/p} f(e^{-t} s)
    TpMinus: e^{t/p} f(e^{t} s)
    Sp:      e^{-t/p} f(e^{-t} s + 1 - e^{-t})
    Rp:      e^{t/p} f(e^{t} s + 1 - e^{t}) 1[s > 1 - e^{-t}]
    """
    if t < 0 and kind not in ("TpPlus", "TpMinus"):
        raise DomainError("semigroup time must be non-negative")
    ip = inv_p(p)
    et = math.exp(t)
    emt = math.exp(-t)
    beta = -math.expm1(-t)
    new = []
    for s in f.terms:
        c, k, lam, a = s
        if kind == "TLeft":
            new.append(Term(c, k, lam, a - t))
        elif kind == "TRight":
            new.append(Term(c, k, lam, a + t))
        elif kind == "TpPlus":
            new.append(Term(c * math.exp(-t * ip - k * t), k, lam * emt, a * et))
        elif kind == "TpMinus":
            new.append(Term(c * math.exp(t * ip + k * t), k, lam * et, a * emt))
        elif kind == "Sp":
            new.append(Term(c * math.exp(-t * ip - k * t), k, lam * emt, (a - beta) * et))
        elif kind == "Rp":
            new.append(Term(c * math.exp(t * ip + k * t), k, lam * et, a * emt + beta))
        else:
            raise DomainError(f"unknown continuous semigroup {kind!r}")
    return _build(new)


def knot_crossings(kind, a, s, p=2.0):
    """Values x in (0, 1) where, with t = -log(1 - x), the image of a knot at
    ``a`` under the semigroup passes through the point ``s``."""
    xs = []
    if kind == "TpPlus" and s > 0:
        xs.append(1.0 - a / s)
    elif kind == "TpMinus" and a > 0:
        xs.append(1.0 - s / a)
    elif kind == "Sp" and s != 1:
        xs.append((a - s) / (1.0 - s))
    elif kind == "Rp" and a != 1:
        xs.append((s - a) / (1.0 - a))
    elif kind == "TLeft" and a > s:
        xs.append(-math.expm1(-(a - s)))
    elif kind == "TRight" and s > a:
        xs.append(-math.expm1(-(s - a)))
    return [x for x in xs if 0.0 < x < 1.0]


def terms_close(f, g, rtol=1e-12):
    """Compare two term lists after merging parameters that agree to rtol."""

    def canon(h):
        ts = sorted(h.terms, key=lambda t: (t.a, np.real(t.lam), np.imag(t.lam), t.k))
        out = []
        for t in ts:
            if out:
                u = out[-1]
                if (u.k == t.k and abs(u.a - t.a) <= rtol * (1 + abs(t.a))
                        and abs(u.lam - t.lam) <= rtol * (1 + abs(t.lam))):
                    out[-1] = Term(u.c + t.c, u.k, u.lam, u.a)
                    continue
            out.append(t)
        scale = max([abs(t.c) for t in out] + [1e-300])
        return [t for t in out if abs(t.c) > rtol * scale]

    cf, cg = canon(f), canon(g)
    if len(cf) != len(cg):
        return False
    for u, t in zip(cf, cg):
        if u.k != t.k or abs(u.a - t.a) > rtol * (1 + abs(t.a)):
            return False
        if abs(u.lam - t.lam) > rtol * (1 + abs(t.lam)):
            return False
        if abs(u.c - t.c) > 1e3 * rtol * max(abs(u.c), abs(t.c)):
            return False
    return True


def _conv_base(k, lam, m, mu, tol=1e-12):
    """(x^k e^{-lam x}) * (x^m e^{-mu x}) as a list of (c, deg, rate)."""
    d = mu - lam
    if abs(d) <= tol * (1 + abs(lam)):
        return [(factorial(k) * factorial(m) / factorial(k + m + 1), k + m + 1, lam)]
    if abs(d) < 0.5 * max(np.real(lam), np.real(mu)):
        # nearby rates: partial fractions cancel, expand e^{-d u} instead
        if np.real(mu) > np.real(lam):
            k, lam, m, mu, d = m, mu, k, lam, -d
        ratio = abs(d) / np.real(lam)
        out = []
        c = factorial(k) * factorial(m) / factorial(k + m + 1)
        for r in range(400):
            out.append((c, k + m + r + 1, lam))
            if ratio ** r * (k + m + r + 2) ** (k + 1) < 1e-18:
                break
            c = c * (-d) * (m + r + 1) / ((r + 1) * (k + m + r + 2))
        return out
    out = []
    for i in range(k + 1):
        coef = comb(k, i) * (-1) ** i * factorial(m + i) / d ** (m + i + 1)
        out.append((coef, k - i, lam))
        for r in range(m + i + 1):
            out.append((-coef * d**r / factorial(r), k - i + r, mu))
    return out


def convolve_fn(f, g):
    """Convolution (f * g)(s) = int_0^s f(s - u) g(u) du, in closed form."""
    out = []
    for t in f.terms:
        for u in g.terms:
            for c, deg, rate in _conv_base(t.k, t.lam, u.k, u.lam):
                out.append(Term(t.c * u.c * c, deg, rate, t.a + u.a))
    return TestFunction(out).merged()


def cesaro_hardy(alpha, f, s_samples, dual=False, p=2.0, tol=1e-8):
    """Continuous Cesaro-Hardy operator (or its dual) at sample points.

    Direct route:
        C_alpha f(s)  = alpha s^-alpha int_0^s (s - u)^{alpha-1} f(u) du
        C*_alpha f(s) = alpha int_s^inf (u - s)^{alpha-1} u^-alpha f(u) du
    Second route: subordination of T_p^+ (resp. T_p^-) with weight
    alpha (1 - e^{-t})^{alpha-1} e^{-t(1-1/p)} (resp. e^{-t/p}).
    The two must agree within ``tol``.
    """
    from .subord import subordinate_function

    s_samples = np.atleast_1d(np.asarray(s_samples, dtype=float))
    direct = np.array([_cesaro_direct(alpha, f, s, dual) for s in s_samples])
    ip = inv_p(p)
    if dual:
        sub = subordinate_function("TpMinus", p, ip, alpha, f, s_samples) * alpha
    else:
        sub = subordinate_function("TpPlus", p, 1.0 - ip, alpha, f, s_samples) * alpha
    scale = max(1.0, float(np.max(np.abs(direct))))
    if np.max(np.abs(direct - sub)) > tol * scale:
        raise QuadratureError("Cesaro-Hardy routes disagree")
    return direct


def chen_integral(mu, nu, p, which, f, r_samples, tol=1e-8):
    """Chen fractional integral C^{S_p} or C^{R_p} at sample points; see
    :func:`koopseq.subord.chen_integral`."""
    from .subord import chen_integral as _chen

    return _chen(mu, nu, p, which, f, r_samples, tol=tol)


def _alg_quad(fn, lo, hi, wl, wr, pieces):
    """int_lo^hi (x - lo)^wl (hi - x)^wr fn(x) dx split at ``pieces``.

    The algebraic weight is handed to QUADPACK on the end pieces, where it is
    singular, and multiplied into the integrand elsewhere.
    """
    cuts = [lo] + sorted(x for x in pieces if lo < x < hi) + [hi]
    n = len(cuts) - 1
    total = 0j
    for i in range(n):
        a, b = cuts[i], cuts[i + 1]
        use_l = i == 0 and wl != 0
        use_r = i == n - 1 and wr != 0

        def h(x, use_l=use_l, use_r=use_r):
            v = complex(fn(x))
            if wl and not use_l:
                v *= (x - lo) ** wl
            if wr and not use_r:
                v *= (hi - x) ** wr
            return v

        kw = dict(epsabs=1e-14, epsrel=1e-12, limit=200)
        if use_l or use_r:
            kw.update(weight="alg", wvar=(wl if use_l else 0.0, wr if use_r else 0.0))
        re, _ = integrate.quad(lambda x: h(x).real, a, b, **kw)
        im, _ = integrate.quad(lambda x: h(x).imag, a, b, **kw)
        total += re + 1j * im
    return total


def _cesaro_direct(alpha, f, s, dual):
    if s <= 0:
        raise DomainError("Cesaro-Hardy sample points must be positive")
    if not dual:
        # alpha int_0^1 (1 - x)^{alpha-1} f(s x) dx
        pieces = [a / s for a in f.knots() if 0 < a < s]
        val = _alg_quad(lambda x: evaluate(f, s * x), 0.0, 1.0, 0.0, alpha - 1.0, pieces)
    else:
        # alpha int_0^1 (1 - x)^{alpha-1} f(s / x) / x dx
        pieces = [s / a for a in f.knots() if a > s]

        def g(x):
            return evaluate(f, s / x) / x if x > 0 else 0.0

        val = _alg_quad(g, 0.0, 1.0, 0.0, alpha - 1.0, pieces)
    val = alpha * val
    return val if f.is_complex else val.real


# serialization

def function_to_json(f):
    def enc(x):
        return [x.real, x.imag] if isinstance(x, complex) else x

    return json.dumps([[enc(t.c), t.k, enc(t.lam), t.a] for t in f.terms])


def function_from_json(text):
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from exc

    def dec(x):
        return complex(x[0], x[1]) if isinstance(x, list) else x

    try:
        return TestFunction([(dec(r[0]), r[1], dec(r[2]), r[3]) for r in rows])
    except (TypeError, IndexError, KeyError) as exc:
        raise ParseError(f"bad term list: {exc}") from exc


def parse_function(text):
    """Parse ``"exp LAM"``, ``"term C K LAM A"`` (several joined by '+') or a
    JSON term list."""
    text = text.strip()
    if text.startswith("["):
        return function_from_json(text)
    out = TestFunction()
    for part in text.split("+"):
        tok = part.split()
        try:
            if tok[0] == "exp" and len(tok) == 2:
                out = out + TestFunction.exp(complex(tok[1]).real if "j" not in tok[1] else complex(tok[1]))
            elif tok[0] == "term" and len(tok) == 5:
                c, k, lam, a = tok[1:]
                out = out + TestFunction([(complex(c), int(k), complex(lam), float(a))])
            else:
                raise ParseError(f"cannot parse function {part.strip()!r}")
        except (ValueError, IndexError) as exc:
            raise ParseError(f"cannot parse function {part.strip()!r}") from exc
    return out


# checks

def _report(identity, params, residual, tol, t0, **kw):
    from .report import VerificationReport

    return VerificationReport(identity, params, float(residual), tol, bool(residual <= tol),
                              (time.perf_counter() - t0) * 1e3, **kw)


def _max_diff(f, g, s):
    return float(np.max(np.abs(evaluate(f, s) - evaluate(g, s))))


_GRID = np.linspace(0.0, 6.0, 121)


def check_cont_semigroup_law(kind, p, t, u, f, tol=1e-12):
    """T(t) T(u) f = T(t + u) f, both as term lists and pointwise."""
    t0 = time.perf_counter()
    lhs = apply_cont_semigroup(kind, t, apply_cont_semigroup(kind, u, f, p), p)
    rhs = apply_cont_semigroup(kind, t + u, f, p)
    res = _max_diff(lhs, rhs, _GRID) / max(1.0, sup_bound(f))
    same = terms_close(lhs, rhs, 1e-10)
    return _report(f"cont.law.{kind}", {"p": p, "t": t, "s": u}, res if same else max(res, 1.0), tol, t0)


def check_cont_factorizations(p, t, f, tol=1e-12):
    """S_p(t) = T_p^+(t) o T_left(b) and R_p(t) = T_right(b) o T_p^-(t) with
    b = 1 - e^{-t} (right factor applied first).  The opposite orders are
    reported as expected failures."""
    b = -math.expm1(-t)
    out = []
    sp = apply_cont_semigroup("Sp", t, f, p)
    rp = apply_cont_semigroup("Rp", t, f, p)
    cases = (
        ("cont.factorization.Sp", sp, apply_cont_semigroup("TpPlus", t, apply_cont_semigroup("TLeft", b, f), p), False),
        ("cont.factorization.Rp", rp, apply_cont_semigroup("TRight", b, apply_cont_semigroup("TpMinus", t, f, p)), False),
        ("cont.factorization.Sp_reversed", sp,
         apply_cont_semigroup("TLeft", b, apply_cont_semigroup("TpPlus", t, f, p)), True),
        ("cont.factorization.Rp_reversed", rp,
         apply_cont_semigroup("TpMinus", t, apply_cont_semigroup("TRight", b, f), p), True),
    )
    for name, lhs, rhs, xfail in cases:
        t0 = time.perf_counter()
        res = _max_diff(lhs, rhs, _GRID) / max(1.0, sup_bound(f))
        note = "holds only when the left factor is applied first" if xfail else ""
        out.append(_report(name, {"p": p, "t": t}, res, tol, t0, expected_failure=xfail, note=note))
    return out


def check_cont_contraction(kind, p, t, f, tol=1e-9):
    t0 = time.perf_counter()
    a = lp_norm_fn(apply_cont_semigroup(kind, t, f, p), p)
    b = lp_norm_fn(f, p)
    return _report(f"cont.contraction.{kind}", {"p": p, "t": t}, max(a - b, 0.0) / max(b, 1e-300), tol, t0)


_GEN_OF = {"TLeft": "DLeft", "TRight": "DRight0", "TpPlus": "LambdaP", "Sp": "Ap", "Rp": "Bp"}


def generator_order(kind, p, f, s_samples=(0.7, 1.3, 2.5), hs=(1e-2, 1e-3, 1e-4)):
    """Observed order of (T(h) f - f)/h -> G f at the sample points."""
    s = np.asarray(s_samples, dtype=float)
    g = evaluate(apply_cont_generator(_GEN_OF[kind], f, p), s)
    errs = []
    for h in hs:
        d = (evaluate(apply_cont_semigroup(kind, h, f, p), s) - evaluate(f, s)) / h
        errs.append(float(np.max(np.abs(d - g))))
    orders = [math.log10(errs[i] / errs[i + 1]) for i in range(len(errs) - 1) if errs[i + 1] > 0]
    return min(orders) if orders else math.inf, errs


def check_cont_generator(kind, p, f, min_order=0.9):
    t0 = time.perf_counter()
    order, errs = generator_order(kind, p, f)
    return _report(f"cont.generator.{kind}", {"p": p}, max(min_order - order, 0.0), 0.0, t0,
                   note=f"observed order {order:.3f}")
