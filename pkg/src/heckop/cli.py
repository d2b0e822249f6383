"""Command-line harness emitting reproducible CSV (or JSON) tables.

Subcommands: gram (normalized Gram matrix), eig (Cherednik eigenvalue
residuals), kernel-check (direct vs closed kernel on seeded random
queries), converge (partial-sum error sweep), counterexample (paired
term norms).  Identical configuration, including the seed, produces
byte-identical output.  Exit statuses: 0 success, 2 I/O failure,
64 usage, 65 when every experiment row failed numerically.
"""

import argparse
import json
import math
import sys

import numpy as np

from . import exppoly, fourier, specfun
from .errors import ConvergenceError, EvaluationError, IntegrabilityError

EXIT_OK = 0
EXIT_IO = 2
EXIT_USAGE = 64
EXIT_NUMERIC = 65

MAX_TRUNCATION = exppoly.DEFAULT_DEGREE_CAP - 1


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # raise instead of sys.exit so main controls the status code
    def error(self, message):
        raise UsageError(message)


def _fmt(v):
    if isinstance(v, str):
        return v
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _emit(columns, rows, out, as_json, comments=()):
    if as_json:
        records = [{c: (v if isinstance(v, (int, str)) else float(v))
                    for c, v in zip(columns, row)} for row in rows]
        text = json.dumps(records, indent=1) + "\n"
    else:
        lines = [",".join(columns)]
        lines += [",".join(_fmt(v) for v in row) for row in rows]
        lines += [f"# {c}" for c in comments]
        text = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _parse_int_list(text):
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..", 1)
            out.extend(range(int(lo), int(hi) + 1))
        elif part:
            out.append(int(part))
    if not out:
        raise UsageError(f"empty integer list: {text!r}")
    return out


def _parse_float_list(text):
    try:
        return [float(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise UsageError(f"bad float list: {text!r}") from None


def _validate(args, n_values=()):
    if not math.isfinite(args.k) or args.k < 0:
        raise UsageError(f"--k must be finite and >= 0, got {args.k}")
    for n in n_values:
        if abs(int(n)) > MAX_TRUNCATION:
            raise UsageError(f"truncation {n} exceeds the cap {MAX_TRUNCATION}")
    if args.M is not None and args.M < 1:
        raise UsageError(f"--M must be >= 1, got {args.M}")
    if getattr(args, "grid", 1) < 1:
        raise UsageError("--grid must be >= 1")


def _cmd_gram(args):
    n_max = _parse_int_list(args.N)[-1]
    _validate(args, [n_max])
    rows = []
    for n in range(-n_max, n_max + 1):
        en = exppoly.build_E_gram_schmidt(n, args.k)
        gn = specfun.gamma_coeff(n, args.k)
        for m in range(-n_max, n_max + 1):
            em = exppoly.build_E_gram_schmidt(m, args.k)
            val = exppoly.inner_product(en, em, args.k) * gn * specfun.gamma_coeff(m, args.k)
            rows.append((n, m, val.real, val.imag))
    _emit(("n", "m", "re", "im"), rows, args.out, args.json)
    return EXIT_OK


def _cmd_eig(args):
    n_max = _parse_int_list(args.N)[-1]
    _validate(args, [n_max])
    rows = []
    for n in range(-n_max, n_max + 1):
        rep = exppoly.identity_checks(n, args.k)
        rows.append((n, rep.eigenvalue, rep.eigen_residual))
    _emit(("n", "eigenvalue", "residual"), rows, args.out, args.json)
    return EXIT_OK


def _cmd_kernel_check(args):
    n_val = _parse_int_list(args.N)[-1]
    _validate(args, [n_val])
    rng = np.random.default_rng(args.seed)
    queries = [(float(x), float(y))
               for x, y in rng.uniform(-math.pi, math.pi, size=(args.grid, 2))]
    queries += [(0.3, 0.3), (-1.1, -1.1)]   # exercise the diagonal fallback
    rows = []
    worst = 0.0
    for x, y in queries:
        q = fourier.KernelQuery(x=x, y=y, N=n_val, k=args.k)
        d = fourier.kernel_direct(q)
        c = fourier.kernel_closed(q)
        diff = abs(d - c)
        worst = max(worst, diff)
        rows.append((x, y, d, c, diff))
    _emit(("x", "y", "direct", "closed", "absdiff"), rows, args.out, args.json,
          comments=(f"max_absdiff = {_fmt(worst)}",))
    return EXIT_OK


def _cmd_converge(args):
    n_values = _parse_int_list(args.N)
    _validate(args, n_values)
    p_values = _parse_float_list(args.p)
    for p in p_values:
        if p < 1.0:
            raise UsageError(f"--p entries must be >= 1, got {p}")
    try:
        f = fourier.builtin_function(args.f, args.k)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = []
    failures = 0
    for p in sorted(p_values):
        for n in sorted(n_values):
            try:
                rep = fourier.converge_experiment(f, args.k, p, [n], m_nodes=args.M)
                rows.append(rep.rows[0])
            except (ConvergenceError, EvaluationError, IntegrabilityError):
                rows.append((n, p, args.k, "NA"))
                failures += 1
    _emit(("N", "p", "k", "error"), rows, args.out, args.json)
    return EXIT_NUMERIC if failures == len(rows) else EXIT_OK


def _cmd_counterexample(args):
    n_values = _parse_int_list(args.n)
    if any(n < 1 for n in n_values):
        raise UsageError("--n entries must be positive")
    _validate(args, n_values)
    p = float(args.p)
    if p < 1.0:
        raise UsageError(f"--p must be >= 1, got {p}")
    rows = []
    failures = 0
    for n in sorted(n_values):
        try:
            rep = fourier.counterexample_experiment(args.k, p, [n], m_nodes=args.M)
            rows.append(rep.rows[0])
        except (ConvergenceError, EvaluationError, IntegrabilityError):
            rows.append((n, "NA"))
            failures += 1
    _emit(("n", "b_n"), rows, args.out, args.json)
    return EXIT_NUMERIC if failures == len(rows) else EXIT_OK


def _build_parser():
    top = _Parser(prog="heckop",
                  description="Heckman-Opdam Fourier analysis harness")
    sub = top.add_subparsers(dest="command", required=True)

    def common(p, n_default="8"):
        p.add_argument("--k", type=float, default=1.0, help="weight exponent")
        p.add_argument("--N", default=n_default, help="truncation (last of a comma list)")
        p.add_argument("--p", default="2.0", help="Lp exponent or comma list")
        p.add_argument("--M", type=int, default=None, help="node count override")
        p.add_argument("--grid", type=int, default=64, help="query/grid size")
        p.add_argument("--seed", type=int, default=0, help="random seed")
        p.add_argument("--f", default="expcos",
                       help="expcos | abssin | counterexample | basis:<m>")
        p.add_argument("--out", default=None, help="output path (default stdout)")
        p.add_argument("--json", action="store_true", help="emit JSON records")

    common(sub.add_parser("gram", help="normalized Gram matrix entries"))
    common(sub.add_parser("eig", help="Cherednik eigenvalue residuals"))
    common(sub.add_parser("kernel-check", help="direct vs closed kernel"))
    common(sub.add_parser("converge", help="partial-sum error sweep"),
           n_default="4,8,16,32")
    ce = sub.add_parser("counterexample", help="paired term norms b_n")
    common(ce)
    ce.add_argument("--n", default="10,20,50,100,200",
                    help="term indices: comma list and/or lo..hi ranges")
    return top


_COMMANDS = {
    "gram": _cmd_gram,
    "eig": _cmd_eig,
    "kernel-check": _cmd_kernel_check,
    "converge": _cmd_converge,
    "counterexample": _cmd_counterexample,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
