"""Command-line entry point: ``koopseq verify|table|eval|spectrum``."""

import argparse
import csv
import io
import math
import os
import sys

import numpy as np

from . import charlier as ch
from . import contspace as cs
from . import discsemi as ds
from . import poisson as po
from . import seqspace as sq
from . import specfun as sf
from . import subord as sb
from .errors import ConfigError, KoopseqError, ParseError
from .report import SuiteConfig
from .suites import B1_44, SUITES, B1_CLOSED_FORMS, run_suite

TABLE_CAP = 200

SEQ_SEMIGROUPS = {
    "exp_delta": "ExpDelta", "exp_nabla": "ExpNabla", "koopman_t": "KoopmanT",
    "koopman_s": "KoopmanS", "perturbed_t": "PerturbedT", "perturbed_s": "PerturbedS",
}
SEQ_GENERATORS = {
    "delta": "Delta", "nabla": "Nabla", "a_p": "Ap", "b_p": "Bp",
    "a_p_delta": "ApDelta", "b_p_nabla": "BpNabla",
}
FN_SEMIGROUPS = {
    "t_left": "TLeft", "t_right": "TRight", "tp_plus": "TpPlus",
    "tp_minus": "TpMinus", "s_p": "Sp", "r_p": "Rp",
}
OTHER_OPS = ("poisson_forward", "poisson_adjoint", "cesaro", "cesaro_dual",
             "perturbed_cesaro_delta", "perturbed_cesaro_nabla", "chen_sp", "chen_rp")


def eval_ops():
    ops = list(SEQ_SEMIGROUPS) + list(SEQ_GENERATORS) + list(FN_SEMIGROUPS) + list(OTHER_OPS)
    ops += [f"resolvent_{g}" for g in ("a_p", "b_p", "a_p_delta", "b_p_nabla")]
    return ops


# argument helpers

def parse_p(text):
    if str(text).lower() in ("inf", "infinity"):
        return math.inf
    p = float(text)
    if p < 1:
        raise argparse.ArgumentTypeError("p must be >= 1")
    return p


def parse_complex(text):
    try:
        return complex(str(text).replace(" ", "").replace("i", "j"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from exc


def _num(z):
    """Real when the imaginary part vanishes."""
    return z.real if z.imag == 0 else z


def parse_range(text):
    """``"3"`` -> [3]; ``"a..b"`` -> a, a+1, ..., b (inclusive, integers)."""
    text = str(text)
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return list(range(int(lo), int(hi) + 1))
        return [int(text)]
    except ValueError as exc:
        raise ParseError(f"cannot parse index range {text!r}") from exc


def parse_samples(args):
    """Sample list from --t/--z values or a --from/--to/--num grid."""
    vals = []
    for v in args.at_values or []:
        vals.extend(v)
    if args.num is not None:
        if args.num < 0:
            raise ParseError("--num must be non-negative")
        vals.extend(np.linspace(args.lo, args.hi, args.num).tolist() if args.num else [])
    return vals


def load_sequence(text, N):
    """deltaK (or "delta K") / ones / geom LAM / CSV or JSON file / inline JSON or comma list."""
    t = text.strip()
    if t.startswith("delta") and t[5:].strip().isdigit():
        k = int(t[5:])
        return sq.delta(k, max(N, k + 1))
    if t == "ones":
        return sq.ones(N)
    if t.startswith("geom "):
        return sq.geometric(parse_complex(t[5:]), N)
    if os.path.isfile(t):
        with open(t) as fh:
            body = fh.read()
        return sq.from_json(body) if body.lstrip()[:1] in "[{" else sq.from_csv(body)
    if t[:1] in "[{":
        return sq.from_json(t)
    try:
        vals = [complex(x.replace("i", "j")) for x in t.split(",") if x.strip()]
    except ValueError as exc:
        raise ParseError(f"cannot parse sequence input {text!r}") from exc
    if not vals:
        raise ParseError("empty sequence input")
    v = np.array(vals)
    return sq.TruncatedSequence(v if np.any(v.imag) else v.real)


def load_function(text):
    t = text.strip()
    if os.path.isfile(t):
        with open(t) as fh:
            t = fh.read()
    return cs.parse_function(t)


# output helpers

def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def samples_csv(xs, vals, head="param"):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([head, "re", "im"])
    for x, v in zip(xs, vals):
        v = complex(v)
        w.writerow([repr(float(np.real(x))) if np.imag(x) == 0 else repr(complex(x)), repr(v.real), repr(v.imag)])
    return buf.getvalue()


# commands

def cmd_verify(args):
    cfg = SuiteConfig()
    if args.config:
        try:
            with open(args.config) as fh:
                cfg = SuiteConfig.from_json(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config: {exc}") from exc
    if args.tol is not None:
        cfg.tol = args.tol
    if args.n is not None:
        cfg.trunc_len = args.n
    if args.seed is not None:
        cfg.seed = args.seed
    cfg.validate()
    reports = run_suite(args.suite, cfg)
    lines = "".join(r.to_json(args.timings) + "\n" for r in reports)
    _emit(lines, args.out)
    bad = [r for r in reports if not r.ok]
    for r in bad:
        print(r.summary_line(), file=sys.stderr)
    return 1 if bad else 0


def table_beta1(ns, ms, fmt):
    rows = []
    for n in ns:
        for m in ms:
            val = sf.beta1(n, m, method="quadrature")
            note = ""
            if (n, m) in B1_CLOSED_FORMS:
                a, b = B1_CLOSED_FORMS[(n, m)]
                closed = a + b * math.exp(-1)
                if abs(closed - val) > 1e-10:
                    note = (f"tabulated {a}{b:+d}/e = {closed:.6g} is wrong; "
                            f"exact {B1_44[0]}{B1_44[1]:+d}/e" if (n, m) == (4, 4) else "tabulated form is wrong")
                else:
                    note = f"{a}{b:+d}/e"
            rows.append((n, m, val, note))
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "m", "beta1", "note"])
        for n, m, v, note in rows:
            w.writerow([n, m, repr(v), note])
        return buf.getvalue()
    lines = [f"{'n':>3} {'m':>3} {'B1(n,m)':>22}  note"]
    lines += [f"{n:>3} {m:>3} {v:>22.15e}  {note}" for n, m, v, note in rows]
    return "\n".join(lines) + "\n"


def _simple_table(head, rows, fmt):
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(head)
        w.writerows(rows)
        return buf.getvalue()
    lines = ["  ".join(f"{h:>14}" for h in head)]
    lines += ["  ".join(f"{str(c):>14}" for c in r) for r in rows]
    return "\n".join(lines) + "\n"


def cmd_table(args):
    ns = parse_range(args.n)
    if len(ns) > TABLE_CAP or (ns and max(ns) > 10 * TABLE_CAP):
        raise ParseError(f"range too large (cap {TABLE_CAP} entries)")
    if not ns:
        head = {"beta1": "n,m,beta1,note", "charlier_p": "n,p_n", "cesaro_numbers": "n,k^alpha(n)"}
        _emit(head[args.which] + "\n", args.out)
        return 0
    if args.which == "beta1":
        ms = parse_range(args.m)
        if min(ns + ms) < 1:
            raise ParseError("beta1 table needs n, m >= 1")
        text = table_beta1(ns, ms, args.format)
    elif args.which == "charlier_p":
        z = parse_complex(args.z)
        zv = int(z.real) if z.imag == 0 and z.real == int(z.real) else _num(z)
        vals = ch.charlier_p_sequence(zv, max(ns) + 1)
        text = _simple_table(["n", "p_n"], [(n, vals[n]) for n in ns], args.format)
    else:
        k = sf.cesaro_numbers(args.alpha, max(ns) + 1)
        text = _simple_table(["n", "k^alpha(n)"], [(n, repr(float(k[n]))) for n in ns], args.format)
    _emit(text, args.out)
    return 0


def cmd_eval(args):
    op = args.op
    p, t, N = args.p, args.t, args.n
    lam, mu, nu = _num(args.lam), _num(args.mu), _num(args.nu)
    at = [s for v in (args.at or []) for s in v]
    if op in SEQ_SEMIGROUPS:
        a = load_sequence(args.input, N)
        out = ds.apply_disc_semigroup(SEQ_SEMIGROUPS[op], t, a.padded(ds.working_length(a.N, t)), p)
        res = out.truncated(a.N)
    elif op in SEQ_GENERATORS:
        res = ds.apply_disc_generator(SEQ_GENERATORS[op], load_sequence(args.input, N), p)
    elif op.startswith("resolvent_"):
        res = ds.apply_resolvent(SEQ_GENERATORS[op[len("resolvent_"):]], lam, load_sequence(args.input, N), p)
    elif op == "poisson_forward":
        res = po.poisson_forward(load_function(args.input), N)
    elif op == "cesaro" or op == "cesaro_dual":
        res = sb.discrete_cesaro(args.alpha, load_sequence(args.input, N), dual=op == "cesaro_dual")
    elif op.startswith("perturbed_cesaro_"):
        which = "DeltaSide" if op.endswith("delta") else "NablaSide"
        res = sb.perturbed_cesaro(mu, nu, p, which, load_sequence(args.input, N))
    elif op == "poisson_adjoint":
        a = load_sequence(args.input, N)
        xs = at or [1.0]
        _emit(samples_csv(xs, po.poisson_adjoint(a, xs), "s"), args.out)
        return 0
    elif op in FN_SEMIGROUPS:
        g = cs.apply_cont_semigroup(FN_SEMIGROUPS[op], t, load_function(args.input), p)
        xs = at or [1.0]
        _emit(samples_csv(xs, cs.evaluate(g, np.asarray(xs, dtype=float)), "s"), args.out)
        return 0
    elif op in ("chen_sp", "chen_rp"):
        xs = at or [2.0]
        vals = sb.chen_integral(mu, nu, p, "Sp" if op == "chen_sp" else "Rp", load_function(args.input), xs)
        _emit(samples_csv(xs, vals, "s"), args.out)
        return 0
    else:
        raise ParseError(f"unknown operator {op!r}; choose from {', '.join(eval_ops())}")
    text = sq.to_json(res) + "\n" if args.format == "json" else sq.to_csv(res.truncated(res.valid))
    _emit(text, args.out)
    return 0


_CURVES = {"cesaro": "Cesaro", "cesaro_dual": "CesaroDual", "perturbed": "Perturbed"}


def cmd_spectrum(args):
    xs = parse_samples(args)
    vals = sb.spectrum_curve(_CURVES[args.which], xs, alpha=args.alpha, p=args.p,
                             mu=_num(args.mu), nu=_num(args.nu))
    _emit(samples_csv(xs, vals), args.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="koopseq", description="Semigroups on sequence spaces and the "
                                 "Poisson transform: verification suites, tables, evaluation.")
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run an identity suite, one JSON report per line")
    v.add_argument("suite", choices=SUITES + ("all",))
    v.add_argument("--config", help="JSON file with SuiteConfig fields")
    v.add_argument("--tol", type=float)
    v.add_argument("--n", type=int, help="truncation length")
    v.add_argument("--seed", type=int)
    v.add_argument("--out")
    v.add_argument("--timings", action="store_true", help="include runtime_ms (breaks byte-identity)")
    v.set_defaults(func=cmd_verify)

    t = sub.add_parser("table", help="beta1, charlier_p or cesaro_numbers table")
    t.add_argument("which", choices=("beta1", "charlier_p", "cesaro_numbers"))
    t.add_argument("--n", default=None, help="index or range a..b")
    t.add_argument("--m", default="1..4", help="column range for beta1")
    t.add_argument("--z", default="1", help="argument of p_n")
    t.add_argument("--alpha", type=float, default=2.0)
    t.add_argument("--format", choices=("text", "csv"), default="text")
    t.add_argument("--out")
    t.set_defaults(func=cmd_table)

    e = sub.add_parser("eval", help="apply an operator to an input sequence or function")
    e.add_argument("op", metavar="op", help="one of: " + ", ".join(eval_ops()))
    e.add_argument("--input", required=True,
                   help="sequence: delta0, ones, 'geom 0.5', file, [..] or 1,2,3; function: 'exp 1', "
                        "'term C K LAM A + ...', JSON term list or file")
    e.add_argument("--p", type=parse_p, default=2.0)
    e.add_argument("--t", type=float, default=1.0)
    e.add_argument("--n", type=int, default=sq.DEFAULT_N)
    e.add_argument("--lam", type=parse_complex, default=1.0)
    e.add_argument("--mu", type=parse_complex, default=1.0)
    e.add_argument("--nu", type=parse_complex, default=1.0)
    e.add_argument("--alpha", type=float, default=1.0)
    e.add_argument("--at", type=float, nargs="+", action="append", help="sample points")
    e.add_argument("--format", choices=("csv", "json"), default="csv")
    e.add_argument("--out")
    e.set_defaults(func=cmd_eval)

    s = sub.add_parser("spectrum", help="sample a spectrum boundary curve as CSV (param,re,im)")
    s.add_argument("which", choices=tuple(_CURVES))
    s.add_argument("--alpha", type=float, default=1.0)
    s.add_argument("--p", type=parse_p, default=2.0)
    s.add_argument("--mu", type=parse_complex, default=1.0)
    s.add_argument("--nu", type=parse_complex, default=1.0)
    s.add_argument("--t", "--z", dest="at_values", type=float, nargs="+", action="append",
                   help="explicit sample values")
    s.add_argument("--from", dest="lo", type=float, default=-10.0)
    s.add_argument("--to", dest="hi", type=float, default=10.0)
    s.add_argument("--num", type=int, help="grid size between --from and --to (0 gives header only)")
    s.add_argument("--out")
    s.set_defaults(func=cmd_spectrum)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    if getattr(args, "command", None) == "table" and args.n is None:
        args.n = {"beta1": "1..4", "charlier_p": "0..5", "cesaro_numbers": "0..4"}[args.which]
    try:
        return args.func(args)
    except KoopseqError as exc:
        print(f"koopseq: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
