"""Semigroups, generators and resolvents on sequence spaces.

With q = e^{-t} and beta = 1 - e^{-t}:

    ExpDelta    e^{t Delta} a(n)   = e^{-t} sum_j a(n + j) t^j / j!
    ExpNabla    e^{t Nabla} a(n)   = e^{-t} sum_{j<=n} a(j) t^{n-j} / (n-j)!
    KoopmanT    T_p(t) a(n)        = e^{-t/p} sum_{j<=n} C(n,j) q^j beta^{n-j} a(j)
    KoopmanS    S_p(t) a(n)        = e^{-t(1-1/p)} q^n sum_{j>=n} C(j,n) beta^{j-n} a(j)
    PerturbedT  T_{Delta,p}(t)     = T_p(t) e^{beta Delta}       (kernel built directly)
    PerturbedS  S_{Nabla,p}(t)     = e^{beta Nabla} S_p(t)       (kernel built directly)

Kernels are truncated N x N matrices; :func:`seqspace.apply_kernel` turns the
mass a row places beyond the trusted input into a per-row certificate.
"""

from dataclasses import dataclass
import math
import time

import numpy as np
from scipy import special as _sp

from . import contspace as cs
from . import poisson as po
from . import seqspace as sq
from .charlier import charlier_p_sequence, charlier_q_sequence
from .errors import DomainError
from .quadrature import gauss_legendre, tanh_sinh
from .report import VerificationReport
from .specfun import beta1_factor, log_factorials, loggamma, poisson_weights

DISC_SEMIGROUPS = ("ExpDelta", "ExpNabla", "KoopmanT", "KoopmanS", "PerturbedT", "PerturbedS")
DISC_GENERATORS = ("Delta", "Nabla", "Ap", "Bp", "ApDelta", "BpNabla")

# exponent sigma with T(t) = q^sigma * (smooth in beta); see subordinate()
_SIGMA_T = ("KoopmanT", "PerturbedT")
_SIGMA_S = ("KoopmanS", "PerturbedS")


@dataclass(frozen=True)
class SemigroupIdDisc:
    variant: str
    p: float = 2.0
    t: float = 0.0


@dataclass
class Kernel:
    K: np.ndarray
    outside: np.ndarray
    row_bound: float
    lower_bandwidth: int | None


def sigma(kind, p):
    """Power of q = e^{-t} factored out of the kernel for subordination."""
    ip = sq.inv_p(p)
    if kind in _SIGMA_T:
        return ip
    if kind in _SIGMA_S:
        return 1.0 - ip
    return 0.0


def _log_binom_matrix(rows, cols, logf):
    # log C(n, j) for n < rows, j < cols, -inf where j > n
    n = np.arange(rows)[:, None]
    j = np.arange(cols)[None, :]
    out = np.full((rows, cols), -np.inf)
    m = j <= n
    nn = np.broadcast_to(n, out.shape)[m]
    jj = np.broadcast_to(j, out.shape)[m]
    out[m] = logf[nn] - logf[jj] - logf[nn - jj]
    return out


def _xlog(x, logy):
    # x * log y with 0 * (-inf) = 0
    with np.errstate(invalid="ignore"):
        r = x * logy
    return np.where(x == 0, 0.0, r)


def _binomial_matrix(N, logq, logb, logf):
    """A[n, j] = C(n, j) q^j beta^{n-j} for j <= n."""
    lb = _log_binom_matrix(N, N, logf)
    n = np.arange(N)[:, None]
    j = np.arange(N)[None, :]
    with np.errstate(invalid="ignore"):
        la = lb + _xlog(j, logq) + _xlog(np.maximum(n - j, 0), logb)
    return np.where(j <= n, np.exp(la), 0.0)


def _poisson_upper(N, t):
    """P[n, m] = e^{-t} t^{m-n} / (m-n)! for m >= n."""
    w = poisson_weights(t, N)
    idx = np.arange(N)[None, :] - np.arange(N)[:, None]
    return np.where(idx >= 0, w[np.clip(idx, 0, None)], 0.0)


def _poisson_tail(k, t):
    """P(Poisson(t) >= k) for integer arrays k."""
    k = np.asarray(k)
    if t == 0:
        return np.where(k <= 0, 1.0, 0.0)
    return np.where(k <= 0, 1.0, _sp.gammainc(np.maximum(k, 1), t))


def kernel(kind, t, N, p=2.0, q=None, beta=None, strip_sigma=False):
    """Truncated kernel of a discrete semigroup.

    ``q`` and ``beta`` may be passed directly (they must satisfy
    q + beta = 1, q = e^{-t}); ``strip_sigma`` drops the factor q^sigma.
    """
    if kind not in DISC_SEMIGROUPS:
        raise DomainError(f"unknown discrete semigroup {kind!r}")
    if t < 0:
        raise DomainError("semigroup time must be non-negative")
    if q is None:
        q = math.exp(-t)
        beta = -math.expm1(-t)
    ip = sq.inv_p(p)
    logq = math.log(q) if q > 0 else -np.inf
    logb = math.log(beta) if beta > 0 else -np.inf
    logf = log_factorials(N + 1)
    zeros = np.zeros(N)
    n = np.arange(N)

    if kind == "ExpDelta":
        K = _poisson_upper(N, t)
        outside = _poisson_tail(N - n, t)
        return Kernel(K, outside, 1.0, 0)
    if kind == "ExpNabla":
        return Kernel(_poisson_upper(N, t).T.copy(), zeros, 1.0, None)

    pref_t = 1.0 if strip_sigma else math.exp(-t * ip)
    pref_s = 1.0 if strip_sigma else math.exp(-t * (1.0 - ip))
    if kind == "KoopmanT":
        A = _binomial_matrix(N, logq, logb, logf)
        return Kernel(pref_t * A, zeros, pref_t, None)
    if kind == "KoopmanS":
        # C(j, n) q^n beta^{j-n}, j >= n
        A = _binomial_matrix(N, logq, logb, logf)  # A[j, n] = C(j,n) q^n beta^{j-n}
        K = pref_s * A.T
        # sum_{j>=N} C(j,n) beta^{j-n} q^n = q^{-1} P(NB(n+1, q) >= N - n)
        tail = _sp.betainc(np.maximum(N - n, 1), n + 1, beta) if beta > 0 else zeros
        rb = pref_s / q if q > 0 else math.inf
        return Kernel(K, rb * tail, rb, 0)
    if kind == "PerturbedT":
        A = _binomial_matrix(N, logq, logb, logf)
        B = _poisson_upper(N, beta)  # e^{-beta} beta^{n-j}/(n-j)!
        K = pref_t * (A @ B)
        # beyond N: sum_j A[l, j] P(Poisson(beta) >= N - j)
        outside = pref_t * (A @ _poisson_tail(N - n, beta))
        return Kernel(K, outside, pref_t, None)
    # PerturbedS
    C = _poisson_upper(N, beta).T  # e^{-beta} beta^{l-j}/(l-j)!
    A = _binomial_matrix(N, logq, logb, logf)
    K = pref_s * (C @ A.T)
    tail = _sp.betainc(np.maximum(N - n, 1), n + 1, beta) if beta > 0 else zeros
    rb = pref_s / q if q > 0 else math.inf
    outside = rb * (C @ tail)
    return Kernel(K, outside, rb, None)


def kernel_entry(kind, t, n, m, p=2.0):
    """Single kernel entry by the explicit defining sums (slow, for checks)."""
    ip = sq.inv_p(p)
    q = math.exp(-t)
    b = -math.expm1(-t)
    f = math.factorial
    if kind == "ExpDelta":
        return math.exp(-t) * t ** (m - n) / f(m - n) if m >= n else 0.0
    if kind == "ExpNabla":
        return math.exp(-t) * t ** (n - m) / f(n - m) if m <= n else 0.0
    if kind == "KoopmanT":
        return math.exp(-t * ip) * math.comb(n, m) * q**m * b ** (n - m) if m <= n else 0.0
    if kind == "KoopmanS":
        return (math.exp(-t * (1 - ip)) * math.exp(-t * n) * math.comb(m, n) * b ** (m - n)
                if m >= n else 0.0)
    if kind == "PerturbedT":
        s = sum(math.comb(n, j) * b ** (n - j) * math.exp(-t * j) * b ** (m - j) / f(m - j)
                for j in range(min(n, m) + 1))
        return math.exp(-(t * ip + b)) * s
    if kind == "PerturbedS":
        s = sum(b ** (n - j) / f(n - j) * math.exp(-t * j) * math.comb(m, j) * b ** (m - j)
                for j in range(min(n, m) + 1))
        return math.exp(-(t * (1 - ip) + b)) * s
    raise DomainError(f"unknown discrete semigroup {kind!r}")


def apply_disc_semigroup(kind, t, a, p=2.0, N=None):
    """Apply a discrete semigroup at time t to a truncated sequence."""
    a = sq.as_sequence(a)
    N = a.N if N is None else N
    if t == 0:
        if kind not in DISC_SEMIGROUPS:
            raise DomainError(f"unknown discrete semigroup {kind!r}")
        return a.padded(N) if N > a.N else a.truncated(N)
    k = kernel(kind, t, N, p)
    return sq.apply_kernel(k.K, a, outside_mass=k.outside, row_bound=k.row_bound,
                           lower_bandwidth=k.lower_bandwidth)


def working_length(N, t, cap=2048):
    """Input length needed so rows n < N of the S-type kernels at time t
    leave less than 1e-18 of their mass beyond it (row n sits near e^t n)."""
    b = -math.expm1(-t)
    if b <= 0:
        return N + 8
    M = N + 8
    while M < cap and _sp.betainc(M - N + 1, N, b) > 1e-18:
        M = int(M * 1.25) + 8
    return min(M, cap)


# generators

def generator_matrix(kind, N, p=2.0):
    """(G, outside, row_bound, lower_bandwidth) for a discrete generator."""
    ip = sq.inv_p(p)
    n = np.arange(N, dtype=float)
    G = np.zeros((N, N))
    outside = np.zeros(N)
    if kind in ("Delta", "ApDelta"):
        G[n[:-1].astype(int), n[:-1].astype(int) + 1] += 1.0
        G[np.arange(N), np.arange(N)] -= 1.0
        outside[-1] += 1.0
    if kind in ("Nabla", "BpNabla"):
        G[np.arange(1, N), np.arange(N - 1)] += 1.0
        G[np.arange(N), np.arange(N)] -= 1.0
    if kind in ("Ap", "ApDelta"):
        G[np.arange(1, N), np.arange(N - 1)] += n[1:]
        G[np.arange(N), np.arange(N)] -= n + ip
    if kind in ("Bp", "BpNabla"):
        G[np.arange(N - 1), np.arange(1, N)] += n[1:]
        G[np.arange(N), np.arange(N)] -= n + (1.0 - ip)
        outside[-1] += N
    if kind not in DISC_GENERATORS:
        raise DomainError(f"unknown discrete generator {kind!r}")
    bw = {"Delta": 0, "Nabla": 1, "Ap": 1, "Bp": 0, "ApDelta": 1, "BpNabla": 1}[kind]
    rb = 2.0 if kind in ("Delta", "Nabla") else math.inf
    return G, outside, rb, bw


def apply_disc_generator(kind, a, p=2.0):
    a = sq.as_sequence(a)
    G, outside, rb, bw = generator_matrix(kind, a.N, p)
    return sq.apply_kernel(G, a, outside_mass=outside, row_bound=rb, lower_bandwidth=bw)


# resolvents

def b1_kernel(u0, v0, rows, cols):
    """K[l, n] = sum_{j<=min(l,n)} C(l,j)/(n-j)! B1(u0 + j, v0 + (l-j) + (n-j))."""
    J = min(rows, cols)
    logf = log_factorials(rows + cols + 1)
    cplx = isinstance(u0, complex) or isinstance(v0, complex)
    dtype = complex if cplx else float
    j = np.arange(J)[:, None]
    i = np.arange(rows + cols)[None, :]
    u = u0 + j + 0 * i
    v = v0 + i + 0 * j
    logB = np.asarray(loggamma(u.astype(dtype))) + np.asarray(loggamma(v.astype(dtype))) - np.asarray(
        loggamma((u + v).astype(dtype)))
    logT = logB + np.log(beta1_factor(u.astype(dtype), v.astype(dtype)).astype(complex if cplx else float))
    K = np.zeros((rows, cols), dtype=dtype)
    for jj in range(J):
        i1 = np.arange(rows - jj)[:, None]
        i2 = np.arange(cols - jj)[None, :]
        lb = logf[jj + i1] - logf[jj] - logf[i1]
        K[jj:, jj:] += np.exp(lb - logf[i2] + logT[jj, i1 + i2])
    return K


def resolvent_kernel(kind, lam, N, p=2.0, pad=40):
    """Closed-form resolvent (lam - G)^{-1} as a Kernel."""
    ip = sq.inv_p(p)
    lam = complex(lam) if isinstance(lam, complex) else float(lam)
    cplx = isinstance(lam, complex)
    dtype = complex if cplx else float
    logf = log_factorials(N + 1)
    n = np.arange(N)
    zeros = np.zeros(N)
    re = float(np.real(lam))
    if re <= 0:
        raise DomainError("resolvent is evaluated for Re lam > 0 only")
    bound_t = 1.0 / (re + ip) if re + ip > 0 else math.inf
    bound_s = 1.0 / (re - ip) if re - ip > 0 else math.inf
    if kind == "Ap":
        if re + ip <= 0:
            raise DomainError("resolvent needs Re lam > -1/p")
        la = np.asarray(loggamma((lam + ip + n).astype(dtype)))
        lb = np.asarray(loggamma((n + lam + ip + 1).astype(dtype)))
        L = (logf[n] - lb)[:, None] + (la - logf[n])[None, :]
        K = np.where(n[None, :] <= n[:, None], np.exp(L), 0)
        return Kernel(K, zeros, bound_t, None)
    if kind == "Bp":
        if re + 1 - ip <= 0:
            raise DomainError("resolvent needs Re lam > 1/p - 1")
        la = np.asarray(loggamma((n + lam + 1 - ip).astype(dtype)))
        lb = np.asarray(loggamma((lam + 2 - ip + n).astype(dtype)))
        L = (la - logf[n])[:, None] + (logf[n] - lb)[None, :]
        K = np.where(n[None, :] >= n[:, None], np.exp(L), 0)
        return Kernel(K, np.full(N, math.inf), bound_s, 0)
    if kind == "ApDelta":
        if re + ip <= 0:
            raise DomainError("resolvent needs Re lam > -1/p")
        Kx = b1_kernel(lam + ip, 1.0, N, N + pad)
        outside = np.abs(Kx[:, N:]).sum(axis=1)
        return Kernel(Kx[:, :N].copy(), outside, bound_t, None)
    if kind == "BpNabla":
        if re + 1 - ip <= 0:
            raise DomainError("resolvent needs Re lam > 1/p - 1")
        K = b1_kernel(lam + 1 - ip, 1.0, N, N).T.copy()
        return Kernel(K, np.full(N, math.inf), bound_s, None)
    raise DomainError(f"no closed-form resolvent for {kind!r}")


def apply_resolvent(kind, lam, a, p=2.0):
    a = sq.as_sequence(a)
    k = resolvent_kernel(kind, lam, a.N, p)
    return sq.apply_kernel(k.K, a, outside_mass=k.outside, row_bound=k.row_bound,
                           lower_bandwidth=k.lower_bandwidth)


def eigen_sequence_B(p, lam, N):
    """b(n) = q_n(lam + 1 - 1/p), a formal eigen-sequence of the perturbed
    generator B_{Nabla,p} with eigenvalue lam."""
    z = lam + 1.0 - sq.inv_p(p)
    return sq.TruncatedSequence(charlier_q_sequence(z, N), N, math.inf)


def formal_eigen_A(p, lam, N):
    """a(n) = p_n(lam + 1/p) a(0): the formal solution of A_{Delta,p} a = lam a."""
    z = lam + sq.inv_p(p)
    return np.array(charlier_p_sequence(z, N), dtype=complex if isinstance(z, complex) else float)


# checks

def _rep(identity, params, residual, tol, t0, **kw):
    return VerificationReport(identity, params, float(residual), tol, bool(residual <= tol),
                              (time.perf_counter() - t0) * 1e3, **kw)


def _compare(x, y, scale=1.0):
    """Max difference over the common valid prefix (relative to scale)."""
    v = min(x.valid, y.valid)
    if v == 0:
        return math.inf, 0
    d = float(np.max(np.abs(x.values[:v] - y.values[:v])))
    return d / max(scale, 1e-300), v


def check_semigroup_law(kind, p, t, s, a, tol=1e-8):
    t0 = time.perf_counter()
    a = sq.as_sequence(a)
    N = a.N
    M = working_length(N, max(t, s, t + s))
    ap = a.padded(M)
    lhs = apply_disc_semigroup(kind, t, apply_disc_semigroup(kind, s, ap, p), p).truncated(N)
    rhs = apply_disc_semigroup(kind, t + s, ap, p).truncated(N)
    scale = max(1.0, float(np.max(np.abs(a.values))))
    res, v = _compare(lhs, rhs, scale)
    return _rep(f"semigroup.law.{kind}", {"p": p, "t": t, "s": s, "N": N, "valid": v}, res, tol, t0)


def contraction_norm(kind, p, t, N):
    k = kernel(kind, t, N, p)
    return sq.operator_norm(k.K, p)


def check_contraction(kind, p, t, N, tol=1e-10):
    t0 = time.perf_counter()
    nrm = contraction_norm(kind, p, t, N)
    return _rep(f"semigroup.contraction.{kind}", {"p": p, "t": t, "N": N}, max(nrm - 1.0, 0.0),
                tol, t0, note=f"norm={nrm:.15f}")


def strong_continuity_profile(kind, p, a, ts=(1e-1, 1e-2, 1e-3)):
    a = sq.as_sequence(a)
    M = working_length(a.N, max(ts))
    ap = a.padded(M)
    out = []
    for t in ts:
        d = apply_disc_semigroup(kind, t, ap, p).truncated(a.N) - a
        out.append(sq.lp_norm(d, p))
    return out


def check_factorization(p, t, a, tol=1e-10):
    """T_{Delta,p}(t) = T_p(t) e^{beta Delta} and S_{Nabla,p}(t) = e^{beta Nabla} S_p(t)."""
    reps = []
    a = sq.as_sequence(a)
    N = a.N
    beta = -math.expm1(-t)
    M = working_length(N, max(t, beta))
    ap = a.padded(M)
    scale = max(1.0, float(np.max(np.abs(a.values))))
    t0 = time.perf_counter()
    lhs = apply_disc_semigroup("PerturbedT", t, ap, p).truncated(N)
    rhs = apply_disc_semigroup("KoopmanT", t, apply_disc_semigroup("ExpDelta", beta, ap), p).truncated(N)
    res, v = _compare(lhs, rhs, scale)
    reps.append(_rep("factorization.T_delta", {"p": p, "t": t, "N": N, "valid": v}, res, tol, t0))
    t0 = time.perf_counter()
    lhs = apply_disc_semigroup("PerturbedS", t, ap, p).truncated(N)
    rhs = apply_disc_semigroup("ExpNabla", beta, apply_disc_semigroup("KoopmanS", t, ap, p)).truncated(N)
    res, v = _compare(lhs, rhs, scale)
    reps.append(_rep("factorization.S_nabla", {"p": p, "t": t, "N": N, "valid": v}, res, tol, t0))
    return reps


def check_adjointness(p, t, N, tol=1e-12):
    """Kernel of T_{Delta,p}(t) is the transpose of that of S_{Nabla,p'}(t),
    and A_p is the transpose of B_{p'} away from the truncation edge."""
    t0 = time.perf_counter()
    pc = sq.conjugate_exponent(p)
    K1 = kernel("PerturbedT", t, N, p).K
    K2 = kernel("PerturbedS", t, N, pc).K
    res = float(np.max(np.abs(K1 - K2.T)))
    r1 = _rep("adjoint.perturbed_kernels", {"p": p, "t": t, "N": N}, res, tol, t0)
    t0 = time.perf_counter()
    GA = generator_matrix("Ap", N, p)[0]
    GB = generator_matrix("Bp", N, pc)[0]
    res = float(np.max(np.abs(GA[:-1, :-1] - GB.T[:-1, :-1])))
    r2 = _rep("adjoint.generators", {"p": p, "N": N}, res, tol, t0)
    return [r1, r2]


def check_resolvent_identity(kind, lam, p, a, tol=1e-8):
    """(lam - G) R(lam) a = a on the valid prefix."""
    t0 = time.perf_counter()
    a = sq.as_sequence(a)
    r = apply_resolvent(kind, lam, a, p)
    g = apply_disc_generator(kind, r, p)
    out = r * lam - g
    scale = max(1.0, float(np.max(np.abs(a.values))))
    res, v = _compare(out, a, scale)
    return _rep(f"resolvent.inverse.{kind}", {"p": p, "lam": lam, "N": a.N, "valid": v}, res, tol, t0)


def check_eigen_sequence(p, lam, N, tol=1e-9):
    t0 = time.perf_counter()
    b = eigen_sequence_B(p, lam, N)
    g = apply_disc_generator("BpNabla", b, p)
    d = g - b * lam
    v = d.valid
    res = float(np.max(np.abs(d.values[:v]))) / max(1.0, float(np.max(np.abs(b.values[:v]))))
    return _rep("spectral.eigen_B_nabla", {"p": p, "lam": lam, "N": N, "valid": v}, res, tol, t0)


def check_noncommutation(p, a, tol=1e-10):
    """A_p Delta a(n) and Delta A_p a(n) against their explicit forms, n >= 1."""
    t0 = time.perf_counter()
    ip = sq.inv_p(p)
    a = sq.as_sequence(a).values
    N = a.size
    n = np.arange(1, N - 2)
    da = np.zeros(N)
    da[:-1] = a[1:] - a[:-1]
    AD = np.zeros(N)
    AD[1:] = np.arange(1, N) * (da[:-1] - da[1:]) - ip * da[1:]
    Aa = np.zeros(N)
    Aa[0] = -ip * a[0]
    Aa[1:] = np.arange(1, N) * (a[:-1] - a[1:]) - ip * a[1:]
    DA = np.zeros(N)
    DA[:-1] = Aa[1:] - Aa[:-1]
    form1 = n * (2 * a[n] - a[n + 1] - a[n - 1]) - ip * (a[n + 1] - a[n])
    form2 = (2 * n + 1) * a[n] - (n + 1) * a[n + 1] - n * a[n - 1] - ip * (a[n + 1] - a[n])
    res = max(float(np.max(np.abs(AD[n] - form1))), float(np.max(np.abs(DA[n] - form2))))
    scale = max(1.0, float(np.max(np.abs(a))) * N)
    return _rep("noncommutation.explicit_forms", {"p": p, "N": N}, res / scale, tol, t0)


def variation_of_parameters(which, p, t, a, nodes=24):
    """Both sides of the variation-of-parameters formula on a common prefix.

    which="T": T_{Delta,p}(t) a - T_p(t) a = int_0^t T_p(t-s) Delta T_{Delta,p}(s) a ds
    which="S": S_{Nabla,p}(t) a - S_p(t) a = int_0^t S_p(t-s) Nabla S_{Nabla,p}(s) a ds

    Returns (lhs, rhs, rhs0_literal) where rhs0_literal is the row-0 value of
    -int_0^t S_p(t-s) (S_{Nabla,p}(s) a) ds, i.e. the n = 0 row with Nabla
    replaced by minus the identity before the outer semigroup acts.
    """
    a = sq.as_sequence(a)
    N = a.N
    M = working_length(N, t)
    ap = a.padded(M)
    pert, base = ("PerturbedT", "KoopmanT") if which == "T" else ("PerturbedS", "KoopmanS")
    diff = sq.forward_diff if which == "T" else sq.backward_diff
    lhs = (apply_disc_semigroup(pert, t, ap, p) - apply_disc_semigroup(base, t, ap, p)).truncated(N)
    y, w = gauss_legendre(nodes)
    s_nodes = 0.5 * t * (1.0 + y)
    acc = np.zeros(M, dtype=ap.values.dtype)
    lit0 = 0.0
    valid = M
    for s, wt in zip(s_nodes, w):
        inner = apply_disc_semigroup(pert, s, ap, p)
        outer = apply_disc_semigroup(base, t - s, diff(inner), p)
        acc = acc + 0.5 * t * wt * outer.values
        valid = min(valid, outer.valid)
        if which == "S":
            lit0 -= 0.5 * t * wt * apply_disc_semigroup(base, t - s, inner, p).values[0]
    rhs = sq.TruncatedSequence(acc, valid, math.inf).truncated(N)
    return lhs, rhs, lit0


def check_variation_of_parameters(which, p, t, a, tol=1e-6):
    """Quadrature residual of the formula; for which="S" a second report
    compares the n = 0 row against the row-0 variant with Nabla replaced by
    minus the identity, which does not hold and is marked as expected."""
    t0 = time.perf_counter()
    lhs, rhs, lit0 = variation_of_parameters(which, p, t, a)
    scale = max(1.0, float(np.max(np.abs(sq.as_sequence(a).values))))
    res, v = _compare(lhs, rhs, scale)
    out = [_rep(f"variation_of_parameters.{which}", {"p": p, "t": t, "valid": v}, res, tol, t0)]
    if which == "S":
        t0 = time.perf_counter()
        out.append(_rep("variation_of_parameters.S.row0_identity_variant", {"p": p, "t": t},
                        abs(lhs.values[0] - lit0) / scale, tol, t0, expected_failure=True,
                        note="at n = 0 Nabla a(0) = a(0), so the row keeps the outer semigroup's coupling"))
    return out


_GEN_OF = {"ExpDelta": "Delta", "ExpNabla": "Nabla", "KoopmanT": "Ap", "KoopmanS": "Bp",
           "PerturbedT": "ApDelta", "PerturbedS": "BpNabla"}


def generator_order(kind, p, a, hs=(1e-2, 1e-3, 1e-4)):
    """Errors of (T(h) a - a)/h against G a, and the smallest observed order."""
    a = sq.as_sequence(a)
    M = working_length(a.N, max(hs))
    ap = a.padded(M)
    g = apply_disc_generator(_GEN_OF[kind], ap, p).truncated(a.N)
    errs = []
    for h in hs:
        d = (apply_disc_semigroup(kind, h, ap, p).truncated(a.N) - a) * (1.0 / h)
        v = min(d.valid, g.valid)
        errs.append(float(np.max(np.abs(d.values[:v] - g.values[:v]))))
    orders = [math.log10(errs[i] / errs[i + 1]) for i in range(len(errs) - 1) if errs[i + 1] > 0]
    return (min(orders) if orders else math.inf), errs


def check_generator_consistency(kind, p, a, min_order=0.9):
    t0 = time.perf_counter()
    order, errs = generator_order(kind, p, a)
    return _rep(f"generator.consistency.{kind}", {"p": p, "N": sq.as_sequence(a).N},
                max(min_order - order, 0.0), 0.0, t0,
                note=f"observed order {order:.3f}, errors {errs[0]:.2e}..{errs[-1]:.2e}")


def block_growth(p, lam, N=60, blocks=6):
    """l^p norms of consecutive blocks of the formal eigen-recurrence of A_{Delta,p}."""
    a = formal_eigen_A(p, lam, N)
    w = N // blocks
    return [sq.lp_norm(sq.TruncatedSequence(a[i * w:(i + 1) * w]), p) for i in range(blocks)]


def check_point_spectrum_proxy(p, lams=(0.5, -0.3, 1.0 + 1.0j, -1.0 + 0.5j, 2.0)):
    """Block norms of p_n(lam + 1/p) must strictly increase for every sample.

    The residual is the largest ratio of a block norm to the next one.
    """
    t0 = time.perf_counter()
    worst = 0.0
    for lam in lams:
        b = block_growth(p, lam)
        worst = max(worst, max(b[i] / b[i + 1] for i in range(len(b) - 1)))
    return _rep("spectral.point_spectrum_proxy", {"p": p}, worst, 1.0 - 1e-12, t0)


def resolvent_by_laplace(kind, lam, a, p=2.0, tol=1e-12):
    """int_0^inf e^{-lam t} T(t) a dt with tanh-sinh in x = 1 - e^{-t}."""
    a = sq.as_sequence(a)
    if not a.is_finite:
        raise DomainError("Laplace route needs a finitely supported sequence")
    sem = {v: k for k, v in _GEN_OF.items()}[kind]
    N = a.N

    def g(x, xc):
        rows = []
        for xi, xci in zip(x, xc):
            k = kernel(sem, -math.log(xci), N, p, q=xci, beta=xi)
            rows.append(xci ** (lam - 1.0) * (k.K @ a.values))
        return np.array(rows)

    val, _ = tanh_sinh(g, tol=tol, max_level=7)
    return val


def check_resolvent_laplace(kind, lam, p, a, tol=1e-8):
    t0 = time.perf_counter()
    a = sq.as_sequence(a)
    lap = resolvent_by_laplace(kind, lam, a, p)
    r = apply_resolvent(kind, lam, a, p)
    v = r.valid
    res = float(np.max(np.abs(lap[:v] - r.values[:v]))) / max(1.0, float(np.max(np.abs(r.values[:v]))))
    return _rep(f"resolvent.laplace.{kind}", {"p": p, "lam": lam, "N": a.N, "valid": v}, res, tol, t0)


def check_resolvent_beta(p, lam, N, tol=1e-9):
    """(lam - A_p)^{-1} delta_0 (n) = B(lam + 1/p, n + 1)."""
    t0 = time.perf_counter()
    r = apply_resolvent("Ap", lam, sq.delta(0, N), p)
    n = np.arange(N)
    z = lam + sq.inv_p(p)
    ref = np.array([np.exp(loggamma(z) + loggamma(k + 1.0) - loggamma(z + k + 1.0)) for k in n])
    res = float(np.max(np.abs(r.values - ref)))
    return _rep("resolvent.beta_oracle.Ap", {"p": p, "lam": lam, "N": N}, res, tol, t0)


INTERTWINING_IDS = (
    "eliz.i", "eliz.ii", "eliz.iii", "eliz.iv",
    "intert2.i", "intert2.ii", "intert2.iii", "intert2.iv",
    "conmutante.i", "conmutante.ii",
)


def _seq_residual(lhs, rhs):
    v = min(lhs.valid, rhs.valid)
    scale = max(1.0, float(np.max(np.abs(rhs.values[:v]))) if v else 1.0)
    return (float(np.max(np.abs(lhs.values[:v] - rhs.values[:v]))) / scale if v else math.inf), v


def _fn_residual(vals, g, s):
    ref = cs.evaluate(g, s)
    scale = max(1.0, float(np.max(np.abs(ref))))
    return float(np.max(np.abs(vals - ref))) / scale


def check_intertwinings(p, t, f, a, N=sq.DEFAULT_N, s_samples=(0.5, 1.0, 2.0, 3.0), tol=1e-8):
    """Residuals of the ten identities moving semigroups and generators
    through P (sequence side, first N entries) and P* (at ``s_samples``).

    ``f`` must be continuous with f(0) = 0; ``a`` must be finitely supported.
    """
    if cs.jumps(f) or abs(cs.evaluate(f, 0.0)) > 1e-14:
        raise DomainError("intertwining checks need a continuous f with f(0) = 0")
    a = sq.as_sequence(a)
    if not a.is_finite:
        raise DomainError("intertwining checks need a finitely supported sequence")
    s = np.asarray(s_samples, dtype=float)
    beta = -math.expm1(-t)
    M = working_length(N, max(t, beta))
    Pf = po.poisson_forward(f, M)
    Pa = po.poisson_adjoint_function(a)
    params = {"p": p, "t": t, "N": N}
    out = []

    def seq_case(name, lhs, g):
        t0 = time.perf_counter()
        res, v = _seq_residual(lhs.truncated(N), po.poisson_forward(g, N))
        out.append(_rep(f"intertwine.{name}", {**params, "valid": v}, res, tol, t0))

    def fn_case(name, seq, g):
        t0 = time.perf_counter()
        if seq.is_finite:
            vals = cs.evaluate(po.poisson_adjoint_function(seq), s)
        else:
            vals = po.poisson_adjoint(seq, s)
        out.append(_rep(f"intertwine.{name}", dict(params), _fn_residual(vals, g, s), tol, t0))

    # Nabla P f = -P f'
    seq_case("eliz.i", sq.backward_diff(Pf), cs.derivative(f).scaled(-1.0))
    # e^{t Nabla} P = P T_right(t)
    seq_case("eliz.ii", apply_disc_semigroup("ExpNabla", t, Pf), cs.apply_cont_semigroup("TRight", t, f))
    # P*(Delta a) = (P* a)'
    fn_case("eliz.iii", sq.forward_diff(a.padded(a.N + 1)), cs.derivative(Pa))
    # P* e^{t Delta} = T_left(t) P*
    fn_case("eliz.iv", apply_disc_semigroup("ExpDelta", t, a), cs.apply_cont_semigroup("TLeft", t, Pa))
    # B_p P = P(-Lambda_p)
    seq_case("intert2.i", apply_disc_generator("Bp", Pf, p),
             cs.apply_cont_generator("LambdaP", f, p).scaled(-1.0))
    # S_p(t) P = P T_p^-(t)
    seq_case("intert2.ii", apply_disc_semigroup("KoopmanS", t, Pf, p), cs.apply_cont_semigroup("TpMinus", t, f, p))
    # P* A_p = Lambda_p P*
    fn_case("intert2.iii", apply_disc_generator("Ap", a.padded(a.N + 1), p),
            cs.apply_cont_generator("LambdaP", Pa, p))
    # P* T_p(t) = T_p^+(t) P*
    Ma = a.N + 200
    fn_case("intert2.iv", apply_disc_semigroup("KoopmanT", t, a.padded(Ma), p),
            cs.apply_cont_semigroup("TpPlus", t, Pa, p))
    # S_{Nabla,p}(t) P = P R_p(t)
    seq_case("conmutante.i", apply_disc_semigroup("PerturbedS", t, Pf, p), cs.apply_cont_semigroup("Rp", t, f, p))
    # P* T_{Delta,p}(t) = S_p(t) P*
    fn_case("conmutante.ii", apply_disc_semigroup("PerturbedT", t, a.padded(Ma), p),
            cs.apply_cont_semigroup("Sp", t, Pa, p))
    return out
