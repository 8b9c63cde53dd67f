"""Command-line front end.

    weierlab eval <function> --tau T --z Z [--scheme lattice|qseries] [--shell N] [--terms M]
    weierlab verify [--suite all|a,b,...] [--seed S] [--tau-samples K] [--z-samples J]
                    [--tol-scale F] [--json] [--shell N] [--terms M]
    weierlab grid <function> --tau T --nx NX --ny NY --box aMin,aMax,bMin,bMax --out PATH
                  [--scheme lattice|qseries] [--shell N] [--terms M]

Exit codes: 0 ok, 1 verification failed, 2 usage error, 3 pole,
4 tau outside the upper half-plane, 5 output not writable.
"""

from __future__ import annotations

import argparse
import csv
import os
import sys

import numpy as np

from . import modular, verify
from .lattice import (
    DEFAULT_POLICY,
    NotInUpperHalfPlane,
    PoleAtLatticePoint,
    TruncationPolicy,
    lattice_distance,
    make_tau,
    parse_complex,
)
from .weierstrass import (
    Scheme,
    sigma_product,
    wp_lattice,
    zeta_hat,
    zeta_lattice,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_POLE = 3
EXIT_TAU = 4
EXIT_IO = 5

SHELL_ENV = "WEIERLAB_SHELL_RADIUS"

FUNCTIONS = ("zeta", "zetaHat", "wp", "sigma", "theta", "indexZeroQuotient")
# functions with poles on the lattice
POLAR = {"zeta", "zetaHat", "wp", "indexZeroQuotient"}


class UsageError(Exception):
    pass


def evaluate(function: str, z, tau, policy: TruncationPolicy, scheme: Scheme | str):
    """Dispatch one of :data:`FUNCTIONS`; ``z`` may be an array."""
    scheme = Scheme(scheme)
    terms = modular.QSeriesTerms.from_policy(policy)
    lattice = scheme is Scheme.LATTICE
    if function == "zeta":
        if lattice:
            return zeta_lattice(z, tau, policy)
        return modular.zeta_qseries(z, tau, terms)
    if function == "zetaHat":
        return zeta_hat(z, tau, policy, scheme).total
    if function == "wp":
        return wp_lattice(z, tau, policy) if lattice else modular.wp_qseries(z, tau, terms)
    if function == "sigma":
        return sigma_product(z, tau, policy) if lattice else modular.sigma_qseries(z, tau, terms)
    if function == "theta":
        return modular.jacobi_theta(z, tau, terms)
    if function == "indexZeroQuotient":
        return modular.index_zero_quotient(z, tau, terms)
    raise UsageError(f"unknown function {function!r}")


def _complex_arg(text: str) -> complex:
    try:
        return parse_complex(text, strict=True)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _box_arg(text: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad box {text!r}") from None
    if len(vals) != 4 or not (vals[0] < vals[1] and vals[2] < vals[3]):
        raise argparse.ArgumentTypeError("box must be aMin,aMax,bMin,bMax with min < max")
    return vals


def _grid_size(text: str) -> int:
    n = int(text)
    if n < 2:
        raise argparse.ArgumentTypeError("grid dimensions must be >= 2")
    return n


def _add_truncation(p: argparse.ArgumentParser):
    p.add_argument("--shell", type=int, default=None, help="lattice shell radius N")
    p.add_argument("--terms", type=int, default=None, help="q-series term count M")


def _add_scheme(p: argparse.ArgumentParser):
    p.add_argument("--scheme", choices=[s.value for s in Scheme], default=Scheme.QSERIES.value)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weierlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", help="evaluate a function at one point")
    ev.add_argument("function", choices=FUNCTIONS)
    ev.add_argument("--tau", type=_complex_arg, required=True)
    ev.add_argument("--z", type=_complex_arg, required=True)
    _add_scheme(ev)
    _add_truncation(ev)

    vf = sub.add_parser("verify", help="run the identity suite, JSON report on stdout")
    vf.add_argument("--suite", default="all")
    vf.add_argument("--seed", type=int, default=verify.SampleSpec.seed)
    vf.add_argument("--tau-samples", type=int, default=verify.SampleSpec.tau_count)
    vf.add_argument("--z-samples", type=int, default=verify.SampleSpec.z_count)
    vf.add_argument("--tol-scale", type=float, default=1.0)
    vf.add_argument("--json", action="store_true", help="suppress the per-check summary on stderr")
    _add_truncation(vf)

    gr = sub.add_parser("grid", help="sample a function on a lattice-coordinate grid, CSV out")
    gr.add_argument("function", choices=FUNCTIONS)
    gr.add_argument("--tau", type=_complex_arg, required=True)
    gr.add_argument("--nx", type=_grid_size, required=True)
    gr.add_argument("--ny", type=_grid_size, required=True)
    gr.add_argument("--box", type=_box_arg, default=(0.0, 1.0, 0.0, 1.0))
    gr.add_argument("--out", required=True)
    _add_scheme(gr)
    _add_truncation(gr)
    return parser


def _policy(args) -> TruncationPolicy:
    shell = args.shell
    if shell is None and os.environ.get(SHELL_ENV):
        try:
            shell = int(os.environ[SHELL_ENV])
        except ValueError:
            raise UsageError(f"{SHELL_ENV} must be an integer") from None
    try:
        return TruncationPolicy(
            shell_radius=DEFAULT_POLICY.shell_radius if shell is None else shell,
            q_terms=DEFAULT_POLICY.q_terms if args.terms is None else args.terms,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _fixed(x: float) -> str:
    text = f"{x:.15f}"
    return "0.000000000000000" if text == "-0.000000000000000" else text


def cmd_eval(args, out) -> int:
    policy = _policy(args)
    tau = make_tau(args.tau)
    value = complex(evaluate(args.function, args.z, tau, policy, args.scheme))
    out.write(f"{_fixed(value.real)} {_fixed(value.imag)}\n")
    return EXIT_OK


def cmd_verify(args, out, err) -> int:
    policy = _policy(args)
    if args.suite == "all":
        selection: list[str] = []
    else:
        selection = [s.strip() for s in args.suite.split(",") if s.strip()]
    try:
        spec = verify.SampleSpec(tau_count=args.tau_samples, z_count=args.z_samples, seed=args.seed)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    try:
        checks = verify.run_suite(spec, policy, selection=selection, tol_scale=args.tol_scale)
    except verify.UnknownCheckName as exc:
        raise UsageError(f"unknown check name(s): {exc.args[0]}") from None
    if not args.json:
        for line in verify.report_lines(checks):
            err.write(line + "\n")
    out.write(verify.report_json(checks).decode("ascii"))
    return EXIT_OK if all(c.passed for c in checks) else EXIT_FAILED


def grid_values(function, tau, nx, ny, box, policy, scheme):
    """Row-major (b outer, a inner) samples; NaN where the function has a pole."""
    a_min, a_max, b_min, b_max = box
    a = a_min + (a_max - a_min) * np.arange(nx) / nx
    b = b_min + (b_max - b_min) * np.arange(ny) / ny
    bb, aa = np.meshgrid(b, a, indexing="ij")
    aa, bb = aa.ravel(), bb.ravel()
    z = aa + bb * tau.tau
    f = np.full(z.shape, np.nan + 0j)
    ok = np.ones(z.shape, dtype=bool)
    if function in POLAR:
        ok = lattice_distance(z, tau) >= 1e-12
    if ok.any():
        f[ok] = evaluate(function, z[ok], tau, policy, scheme)
    return aa, bb, z, f


def cmd_grid(args, out) -> int:
    policy = _policy(args)
    tau = make_tau(args.tau)
    aa, bb, z, f = grid_values(args.function, tau, args.nx, args.ny, args.box, policy, args.scheme)
    try:
        handle = open(args.out, "w", newline="")
    except OSError as exc:
        raise _Unwritable(str(exc)) from None
    with handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["a", "b", "re_z", "im_z", "re_f", "im_f"])
        for a, b, zv, fv in zip(aa, bb, z, f):
            vals = ["", ""] if np.isnan(fv) else [repr(float(fv.real)), repr(float(fv.imag))]
            writer.writerow([repr(float(a)), repr(float(b)), repr(float(zv.real)), repr(float(zv.imag)), *vals])
    return EXIT_OK


class _Unwritable(Exception):
    pass


def main(argv=None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "eval":
            return cmd_eval(args, out)
        if args.command == "verify":
            return cmd_verify(args, out, err)
        return cmd_grid(args, out)
    except UsageError as exc:
        err.write(f"weierlab: error: {exc}\n")
        return EXIT_USAGE
    except PoleAtLatticePoint as exc:
        err.write(f"weierlab: pole: {exc}\n")
        return EXIT_POLE
    except NotInUpperHalfPlane as exc:
        err.write(f"weierlab: {exc}\n")
        return EXIT_TAU
    except _Unwritable as exc:
        err.write(f"weierlab: cannot write output: {exc}\n")
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
