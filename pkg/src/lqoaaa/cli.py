"""Command-line interface: ``lqoaaa {bench,sample,fit,eval,compare,simulate}``.

Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 numerical
failure (singular shift, state overflow, non-convergence with ``--strict``).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .barycentric import realize
from .errors import DataError, NumericalError
from .fitting import FitConfig, fit_lqo_aaa
from .model import BENCHMARK_KINDS, TimeSignal, eval_h1, eval_h2, make_benchmark, simulate, state_responses

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _num(x) -> str:
    return format(float(x) + 0.0, ".17g")


def parse_points(spec: str, conj: bool = False) -> np.ndarray:
    """``imlog:a:b:N`` (i*10^t, t in [a, b]), ``imlin:a:b:N`` or ``file:<path>``.

    With ``conj`` the conjugates of strictly complex points are appended.
    """
    kind, _, rest = spec.partition(":")
    if kind in ("imlog", "imlin"):
        try:
            a, b, n = rest.split(":")
            a, b, n = float(a), float(b), int(n)
        except ValueError:
            raise UsageError(f"bad point spec {spec!r}; expected {kind}:a:b:N") from None
        if n < 1:
            raise UsageError("point count must be positive")
        pts = 1j * (np.logspace(a, b, n) if kind == "imlog" else np.linspace(a, b, n))
    elif kind == "file" and rest:
        pts = io.read_points(rest)
    else:
        raise UsageError(f"bad point spec {spec!r}; use imlog:a:b:N, imlin:a:b:N or file:<path>")
    if conj:
        extra = np.conj(pts[pts.imag != 0])
        pts = np.concatenate([pts, extra])
    return pts


def parse_input(spec: str, t1: float, dt: float) -> TimeSignal:
    """``step``, ``sin:<omega>`` (u = sin(omega t)) or ``file:<path>``."""
    if spec.startswith("file:"):
        return io.read_signal(spec[5:])
    if not (dt > 0 and t1 > 0):
        raise UsageError("--t1 and --dt must be positive")
    t = dt * np.arange(int(round(t1 / dt)) + 1)
    if spec == "step":
        return TimeSignal(0.0, dt, np.ones_like(t))
    if spec == "zero":
        return TimeSignal(0.0, dt, np.zeros_like(t))
    if spec.startswith("sin:"):
        try:
            omega = float(spec[4:])
        except ValueError:
            raise UsageError(f"bad input spec {spec!r}") from None
        return TimeSignal(0.0, dt, np.sin(omega * t))
    raise UsageError(f"bad input spec {spec!r}; use step, zero, sin:<omega> or file:<path>")


def _complex_arg(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from None


def cmd_bench(args):
    if args.order < 1:
        raise UsageError("--order must be >= 1")
    model = make_benchmark(args.kind, args.order, args.seed)
    io.write_model(model, args.out)


def cmd_sample(args):
    model = io.read_model(args.model)
    pts = parse_points(args.points, args.conj)
    samples = io.sample_model(model, pts, real_symmetric=args.conj)
    io.write_samples(samples, args.out)


def cmd_fit(args):
    samples = io.read_samples(args.samples)
    config = FitConfig(tol=args.tol, n_max=args.nmax, weight_strategy=args.strategy)
    interp, report = fit_lqo_aaa(samples, config)
    model = realize(interp, real=samples.real_symmetric)
    io.write_model(model, args.out_model)
    if args.out_report:
        io.write_report(report, args.out_report)
    if args.out_interp:
        io.write_interpolant(interp, args.out_interp)
    last = report.final
    print(
        f"status={report.status} order={interp.order} "
        f"max_err_h1={last.max_err_h1:.3e} max_err_h2={last.max_err_h2:.3e}"
    )
    if not report.converged:
        print(f"warning: fit did not reach tol={args.tol:g} ({report.status})", file=sys.stderr)
        if args.strict:
            return EXIT_NUMERIC
    return EXIT_OK


def cmd_eval(args):
    model = io.read_model(args.model)
    val = eval_h1(model, args.s) if args.z is None else eval_h2(model, args.s, args.z)
    print(f"{_num(val.real)} {_num(val.imag)}")


def _transfer_values(model, pts):
    X = state_responses(model, pts)
    return model.c @ X, X.T @ model.M @ X


def cmd_compare(args):
    a = io.read_model(args.model_a)
    b = io.read_model(args.model_b)
    pts = parse_points(args.points, args.conj)
    h1a, h2a = _transfer_values(a, pts)
    h1b, h2b = _transfer_values(b, pts)
    d1, d2 = np.abs(h1a - h1b), np.abs(h2a - h2b)
    s1 = np.max(np.abs(h1a)) or 1.0
    s2 = np.max(np.abs(h2a)) or 1.0
    if args.out:
        with open(args.out, "w", encoding="utf-8") as f:
            f.write("kind,i,j,s_re,s_im,z_re,z_im,abs_err,rel_err\n")
            for i, p in enumerate(pts):
                f.write(f"h1,{i},,{_num(p.real)},{_num(p.imag)},,,{_num(d1[i])},{_num(d1[i] / s1)}\n")
            for i, p in enumerate(pts):
                for j, q in enumerate(pts):
                    f.write(
                        f"h2,{i},{j},{_num(p.real)},{_num(p.imag)},{_num(q.real)},{_num(q.imag)},"
                        f"{_num(d2[i, j])},{_num(d2[i, j] / s2)}\n"
                    )
    print(
        f"h1_max_rel={d1.max() / s1:.3e} h1_mean_rel={d1.mean() / s1:.3e} "
        f"h2_max_rel={d2.max() / s2:.3e} h2_mean_rel={d2.mean() / s2:.3e}"
    )


def cmd_simulate(args):
    model = io.read_model(args.model)
    u = parse_input(args.input, args.t1, args.dt)
    y = simulate(model, u)
    io.write_signal(y, args.out)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lqoaaa", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    q = sub.add_parser("bench", help="write a synthetic benchmark model")
    q.add_argument("--kind", choices=BENCHMARK_KINDS, default="diag")
    q.add_argument("--order", type=int, required=True)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_bench)

    q = sub.add_parser("sample", help="sample H1 and the H2 grid of a model")
    q.add_argument("--model", required=True)
    q.add_argument("--points", required=True, help="imlog:a:b:N, imlin:a:b:N or file:<path>")
    q.add_argument("--conj", action="store_true", help="add conjugate points, mark real-symmetric")
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_sample)

    q = sub.add_parser("fit", help="fit an LQO model to samples")
    q.add_argument("--samples", required=True)
    q.add_argument("--tol", type=float, default=1e-8)
    q.add_argument("--nmax", type=int, default=None)
    q.add_argument("--strategy", choices=("h1-only", "alternating"), default="alternating")
    q.add_argument("--out-model", required=True)
    q.add_argument("--out-report", default=None)
    q.add_argument("--out-interp", default=None)
    q.add_argument("--strict", action="store_true", help="exit 3 if the fit does not converge")
    q.set_defaults(func=cmd_fit)

    q = sub.add_parser("eval", help="evaluate H1(s) or H2(s, z)")
    q.add_argument("--model", required=True)
    q.add_argument("--s", type=_complex_arg, required=True)
    q.add_argument("--z", type=_complex_arg, default=None)
    q.set_defaults(func=cmd_eval)

    q = sub.add_parser("compare", help="compare the transfer functions of two models")
    q.add_argument("--model-a", required=True)
    q.add_argument("--model-b", required=True)
    q.add_argument("--points", required=True)
    q.add_argument("--conj", action="store_true")
    q.add_argument("--out", default=None)
    q.set_defaults(func=cmd_compare)

    q = sub.add_parser("simulate", help="time-domain output from zero initial state")
    q.add_argument("--model", required=True)
    q.add_argument("--input", default="step", help="step, zero, sin:<omega> or file:<path>")
    q.add_argument("--t1", type=float, default=10.0)
    q.add_argument("--dt", type=float, default=1e-3)
    q.add_argument("--out", required=True)
    q.set_defaults(func=cmd_simulate)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code
    try:
        code = args.func(args)
    except UsageError as e:
        print(f"lqoaaa {args.command}: {e}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as e:
        print(f"lqoaaa {args.command}: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DataError, OSError, ValueError) as e:
        print(f"lqoaaa {args.command}: {e}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK if code is None else code


if __name__ == "__main__":
    sys.exit(main())
