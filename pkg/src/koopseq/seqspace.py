"""Truncated sequences on N_0 and the elementary operations on them.

A :class:`TruncatedSequence` stores the first ``N`` entries of an infinite
sequence.  Entries with index below ``valid`` are trusted to working
precision; ``tail_bound`` bounds the error of every entry at or beyond
``valid`` (entries past ``N`` are taken as zero).  ``tail_bound == 0`` means
the sequence is exactly the stored prefix followed by zeros.

Operators act through :func:`apply_kernel`, which evaluates a truncated
matrix and certifies each output row by bounding the contribution of
untrusted input entries.  Rows that fail the certificate are cut from the
valid prefix.
"""

from dataclasses import dataclass, field
import csv
import io
import json
import math

import numpy as np

from .errors import DomainError, ParseError

DEFAULT_N = 64
CERT_TOL = 1e-13


@dataclass(frozen=True)
class TruncatedSequence:
    values: np.ndarray
    valid: int = -1
    tail_bound: float = 0.0
    tail_note: str | None = field(default=None, compare=False)

    def __post_init__(self):
        v = np.array(self.values)
        if v.ndim != 1 or v.size == 0:
            raise DomainError("a truncated sequence needs a non-empty 1-d array")
        if not np.iscomplexobj(v):
            v = v.astype(float)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)
        valid = self.valid
        if valid < 0 or self.tail_bound == 0:
            valid = v.size
        object.__setattr__(self, "valid", int(min(valid, v.size)))
        if self.tail_bound < 0 or math.isnan(self.tail_bound):
            raise DomainError("tail bound must be a non-negative number")

    @property
    def N(self):
        return self.values.size

    @property
    def prefix(self):
        return self.values[: self.valid]

    @property
    def is_finite(self):
        return self.tail_bound == 0

    def __len__(self):
        return self.N

    def __getitem__(self, i):
        return self.values[i]

    def with_values(self, values, valid=None, tail_bound=None):
        return TruncatedSequence(
            values,
            self.valid if valid is None else valid,
            self.tail_bound if tail_bound is None else tail_bound,
        )

    def padded(self, M):
        """Extend to length M.  Exact (zero) for finitely supported sequences."""
        if M <= self.N:
            return self
        v = np.zeros(M, dtype=self.values.dtype)
        v[: self.N] = self.values
        return TruncatedSequence(v, self.valid, self.tail_bound)

    def truncated(self, M):
        if M >= self.N:
            return self
        tb = self.tail_bound
        if tb == 0 and np.any(self.values[M:] != 0):
            tb = float(np.max(np.abs(self.values[M:])))
        return TruncatedSequence(self.values[:M], min(self.valid, M), tb)

    def __add__(self, other):
        return _combine(self, other, 1.0)

    def __sub__(self, other):
        return _combine(self, other, -1.0)

    def __mul__(self, c):
        return TruncatedSequence(self.values * c, self.valid, self.tail_bound * abs(c))

    __rmul__ = __mul__


def _combine(a, b, sign):
    N = max(a.N, b.N)
    a, b = a.padded(N), b.padded(N)
    return TruncatedSequence(
        a.values + sign * b.values, min(a.valid, b.valid), a.tail_bound + b.tail_bound
    )


def as_sequence(x, N=None):
    if isinstance(x, TruncatedSequence):
        return x if N is None else x.padded(N)
    return TruncatedSequence(np.asarray(x))


# constructors

def delta(k, N=DEFAULT_N):
    if not 0 <= k < N:
        raise DomainError("delta index outside the truncation")
    v = np.zeros(N)
    v[k] = 1.0
    return TruncatedSequence(v)


def ones(N=DEFAULT_N):
    return TruncatedSequence(np.ones(N), N, 1.0, "constant continuation")


def geometric(lam, N=DEFAULT_N):
    """n -> lam**n; tail bounded by |lam|**N when |lam| < 1."""
    v = np.asarray(lam, dtype=complex if isinstance(lam, complex) else float) ** np.arange(N)
    r = abs(lam)
    tb = r**N if r < 1 else math.inf
    return TruncatedSequence(v, N, tb)


def from_function(fn, N=DEFAULT_N, tail_bound=math.inf):
    return TruncatedSequence(np.array([fn(n) for n in range(N)]), N, tail_bound)


def cesaro_sequence(alpha, N=DEFAULT_N):
    from .specfun import cesaro_numbers

    v = cesaro_numbers(alpha, N)
    tb = float(np.max(np.abs(v[-4:]))) if np.real(alpha) <= 1 else math.inf
    return TruncatedSequence(v, N, tb)


# norms and simple operations

def lp_norm(a, p):
    """l^p norm of the valid prefix; p may be math.inf."""
    a = as_sequence(a)
    x = np.abs(a.prefix)
    if p == math.inf:
        return float(np.max(x)) if x.size else 0.0
    if p < 1:
        raise DomainError("l^p norm needs p >= 1")
    m = float(np.max(x)) if x.size else 0.0
    if m == 0:
        return 0.0
    return m * float(np.sum((x / m) ** p)) ** (1.0 / p)


def conjugate_exponent(p):
    if p == 1:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1.0)


def inv_p(p):
    """1/p with 1/inf = 0."""
    if p == math.inf:
        return 0.0
    if p < 1:
        raise DomainError(f"exponent p must be >= 1, got {p}")
    return 1.0 / p


def convolve(a, b, full=False):
    """Cauchy product (a * b)(n) = sum_{j <= n} a(j) b(n - j).

    With ``full=True`` the result has length N_a + N_b - 1, which is exact for
    finitely supported inputs.
    """
    a, b = as_sequence(a), as_sequence(b)
    c = np.convolve(a.values, b.values)
    finite = a.is_finite and b.is_finite
    if full:
        return TruncatedSequence(c) if finite else TruncatedSequence(c, min(a.valid, b.valid), math.inf)
    N = max(a.N, b.N)
    out = np.zeros(N, dtype=c.dtype)
    out[: min(N, c.size)] = c[:N]
    if finite:
        tb = float(np.max(np.abs(c[N:]))) if c.size > N else 0.0
        return TruncatedSequence(out, N, tb)
    return TruncatedSequence(out, min(a.valid, b.valid), math.inf)


def forward_diff(a):
    """(Delta a)(n) = a(n + 1) - a(n); the last entry is marked invalid unless
    the sequence is exactly finitely supported."""
    a = as_sequence(a)
    v = np.empty_like(a.values)
    v[:-1] = a.values[1:] - a.values[:-1]
    v[-1] = -a.values[-1]
    if a.is_finite:
        return TruncatedSequence(v)
    return TruncatedSequence(v, max(a.valid - 1, 0), 2.0 * a.tail_bound)


def backward_diff(a):
    """(Nabla a)(n) = a(n - 1) - a(n), with (Nabla a)(0) = -a(0)."""
    a = as_sequence(a)
    v = -a.values.copy()
    v[1:] += a.values[:-1]
    return TruncatedSequence(v, a.valid, 2.0 * a.tail_bound)


def zeta_transform(a, z):
    """Z(a)(z) = sum_n a(n) z**n over the stored entries, |z| < 1.

    Returns ``(value, tail_estimate)``; the estimate is geometric, using the
    tail bound (or the largest stored entry when the tail is unknown).
    """
    a = as_sequence(a)
    r = abs(z)
    if r >= 1:
        raise DomainError("Z-transform evaluated outside the unit disc")
    zn = np.asarray(z, dtype=complex) ** np.arange(a.N)
    val = complex(np.dot(a.values, zn))
    if a.is_finite:
        tail = 0.0
    else:
        bound = a.tail_bound if math.isfinite(a.tail_bound) else float(np.max(np.abs(a.values)))
        tail = bound * r ** a.valid / (1.0 - r)
    return val, tail


# kernel application with row certificates

def apply_kernel(K, a, *, outside_mass=None, row_bound=math.inf, lower_bandwidth=None,
                 cert_tol=CERT_TOL):
    """Apply a truncated kernel matrix to a sequence.

    Parameters
    ----------
    K : (N, Nin) array
        Entries K[n, m] for n < N, m < Nin.
    outside_mass : (N,) array, optional
        sum_{m >= Nin} |K[n, m]|; ``inf`` where unknown.  Zero if omitted.
    row_bound : float
        Bound on sup_n sum_m |K[n, m]| over all rows (including n >= N), used
        for the tail of the output.
    lower_bandwidth : int or None
        Number of sub-diagonals (None = unbounded).  With a finitely supported
        input this tells whether the output is again finitely supported.
    """
    a = as_sequence(a)
    N, Nin = K.shape
    if a.N != Nin:
        a = a.padded(Nin) if a.N < Nin else a.truncated(Nin)
    vals = K @ a.values
    absK = np.abs(K)
    if outside_mass is None:
        outside_mass = np.zeros(N)
    sup_in = float(np.max(np.abs(a.values)))
    if a.is_finite:
        if lower_bandwidth is not None:
            nz = np.nonzero(a.values)[0]
            last = int(nz[-1]) if nz.size else -1
            spills = last + lower_bandwidth >= N
        else:
            spills = bool(np.any(a.values != 0))
        tail = row_bound * sup_in if spills else 0.0
        return TruncatedSequence(vals, N, tail)
    untrusted = absK[:, a.valid:].sum(axis=1) if a.valid < Nin else np.zeros(N)
    with np.errstate(invalid="ignore"):
        mass = untrusted + np.asarray(outside_mass, dtype=float)
        err = np.where(mass == 0, 0.0, a.tail_bound * mass)
    scale = max(sup_in, 1e-300)
    bad = np.nonzero(~(err <= cert_tol * scale))[0]
    valid = int(bad[0]) if bad.size else N
    tail = row_bound * (sup_in + a.tail_bound)
    return TruncatedSequence(vals, valid, max(tail, cert_tol * scale))


def operator_norm(K, p):
    """l^p -> l^p norm of a finite matrix for p in {1, 2, inf} (Riesz-Thorin
    bound for other p)."""
    A = np.abs(K) if p not in (2,) else K
    if p == 1:
        return float(np.max(np.abs(K).sum(axis=0)))
    if p == math.inf:
        return float(np.max(np.abs(K).sum(axis=1)))
    if p == 2:
        return float(np.linalg.norm(K, 2))
    n1 = float(np.max(A.sum(axis=0)))
    ninf = float(np.max(A.sum(axis=1)))
    return n1 ** (1.0 / p) * ninf ** (1.0 - 1.0 / p)


# I/O

def to_csv(a):
    a = as_sequence(a)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["index", "re", "im"])
    for n, x in enumerate(a.values):
        x = complex(x)
        w.writerow([n, repr(x.real), repr(x.imag)])
    return buf.getvalue()


def from_csv(text):
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise ParseError("empty CSV")
    if rows[0] and rows[0][0].strip().lower() == "index":
        rows = rows[1:]
    vals = {}
    try:
        for r in rows:
            if not r:
                continue
            n = int(r[0])
            re = float(r[1])
            im = float(r[2]) if len(r) > 2 and r[2].strip() else 0.0
            vals[n] = complex(re, im)
    except (ValueError, IndexError) as exc:
        raise ParseError(f"bad CSV row: {exc}") from exc
    if not vals or min(vals) < 0:
        raise ParseError("CSV indices must be non-negative")
    N = max(vals) + 1
    v = np.zeros(N, dtype=complex)
    for n, x in vals.items():
        v[n] = x
    if not np.any(v.imag):
        v = v.real
    return TruncatedSequence(v)


def to_json(a):
    a = as_sequence(a)
    if np.iscomplexobj(a.values):
        data = [[float(x.real), float(x.imag)] for x in a.values]
    else:
        data = [float(x) for x in a.values]
    tb = a.tail_bound if math.isfinite(a.tail_bound) else "inf"
    return json.dumps({"values": data, "valid": a.valid, "tail_bound": tb})


def from_json(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"bad JSON: {exc}") from exc
    if isinstance(obj, list):
        obj = {"values": obj}
    if not isinstance(obj, dict) or "values" not in obj:
        raise ParseError("JSON sequence needs a 'values' list")
    try:
        raw = obj["values"]
        if any(isinstance(x, list) for x in raw):
            v = np.array([complex(x[0], x[1]) if isinstance(x, list) else complex(x) for x in raw])
        else:
            v = np.array([float(x) for x in raw])
        tb = obj.get("tail_bound", 0.0)
        tb = math.inf if tb == "inf" else float(tb)
        return TruncatedSequence(v, int(obj.get("valid", -1)), tb)
    except (TypeError, ValueError, IndexError) as exc:
        raise ParseError(f"bad JSON sequence: {exc}") from exc
