"""hamspec command line: JSON reports, CSV curves, exit 0/1/2 for pass/fail/usage."""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from fractions import Fraction

import numpy as np

from . import (
    ball_spectrum,
    codes,
    conjecture_lab,
    cube_fourier,
    ensemble,
    krawchouk,
    lp_certificate,
    rate_bounds,
    selftest,
    theorem_verifier,
)
from .errors import HamspecError, ParameterError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [_jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, Fraction):
        return str(x)
    return x


def emit(obj, out=None) -> None:
    out = out or sys.stdout
    out.write(json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n")


def thread_count(args) -> int | None:
    if getattr(args, "threads", None):
        return args.threads
    env = os.environ.get("HAMSPEC_THREADS")
    if env:
        try:
            t = int(env)
        except ValueError as exc:
            raise UsageError(f"HAMSPEC_THREADS must be an integer, got {env!r}") from exc
        if t < 1:
            raise UsageError("HAMSPEC_THREADS must be >= 1")
        return t
    return None


def _need(args, *names):
    missing = [n for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError("missing required argument(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _positive(name):
    def conv(s):
        try:
            v = int(s)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}") from exc
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {v}")
        return v

    return conv


def _nonneg(name):
    def conv(s):
        try:
            v = int(s)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}") from exc
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name} must be >= 0, got {v}")
        return v

    return conv


# ---------------------------------------------------------------------------
# subcommands; each returns an exit code


def cmd_transform(args):
    _need(args, "input")
    f = cube_fourier.load_csv(args.input, domain=cube_fourier.FOURIER if args.inverse else cube_fourier.POINT)
    if args.norms:
        if args.inverse:
            raise UsageError("--norms applies to point-domain input")
        rep = cube_fourier.norms_and_inner(f)
        emit({k: getattr(rep, k) for k in ("norm_1", "norm_4_3", "norm_2", "norm_4", "inner_self", "fourier_energy")}
             | {"parseval_gap": rep.parseval_gap})
        return EXIT_OK
    g = cube_fourier.inverse_walsh_transform(f) if args.inverse else cube_fourier.walsh_transform(f)
    sys.stdout.write("index,value\n")
    for i, v in enumerate(g.values):
        sys.stdout.write(f"{i},{float(v)!r}\n")
    return EXIT_OK


def cmd_krawchouk(args):
    _need(args, "n")
    t = krawchouk.build_table(args.n)
    rows = [args.s] if args.s is not None else list(range(args.n + 1))
    if any(not 0 <= s <= args.n for s in rows):
        raise UsageError(f"--s must lie in [0, {args.n}]")
    report = {"n": args.n, "rows": {s: t.row(s) for s in rows}}
    ok = True
    if args.roots:
        report["roots"] = {s: list(krawchouk.find_roots(s, t).roots) for s in rows if s >= 1}
    orth = t.orthogonality()
    diag_ok = all(orth[s][u] == (math.comb(args.n, s) if s == u else 0) for s in rows for u in range(args.n + 1))
    report["orthogonality_exact"] = diag_ok
    ok &= diag_ok
    emit(report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ball(args):
    _need(args, "n")
    n = args.n
    if args.r is None and args.threshold is None:
        raise UsageError("give --r or --threshold")
    r = args.r if args.r is not None else ball_spectrum.radius_search(n, args.threshold)
    table = krawchouk.build_table(n)
    data = ball_spectrum.ball_top_eigen(n, r, table)
    report = {"n": n, "r": r, "lambda_r": data.lambda_r, "profile": data.profile, "f_levels": data.f_levels}
    ok = True
    if r < n:
        try:
            ident = ball_spectrum.verify_eigen_identities(data, table)
            report["identities"] = {"pass": True, "c": ident.c, "identity_residual": ident.identity_residual,
                                    "root_point": ident.root_point, "root_distance": ident.root_distance}
        except HamspecError as exc:
            report["identities"] = {"pass": False, "error": str(exc)}
            ok = False
    if n <= 14:
        dense = ball_spectrum.induced_ball_top_eigenvalue(n, r)
        report["induced_lambda"] = dense
        agree = abs(dense - data.lambda_r) <= 1e-8 * max(1.0, dense)
        report["induced_agrees"] = agree
        ok &= agree
    emit(report)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_code(args):
    if args.action == "stats":
        _need(args, "file")
        c = codes.read_code(args.file)
        report = {"n": c.n, "size": len(c), "linear": isinstance(c, codes.LinearCode)}
        if len(c) >= 2:
            report["min_distance"] = c.min_distance
            report["distance_distribution"] = c.distance_distribution
        if isinstance(c, codes.LinearCode):
            report["dimension"] = c.dimension
            if c.n <= 24:
                report["dual_size"] = len(codes.dual_code(c))
        emit(report)
        return EXIT_OK
    if args.action == "sample-linear":
        _need(args, "n", "k")
        c = codes.sample_random_linear(args.n, args.k, args.seed)
    elif args.action == "sample-general":
        _need(args, "n", "R")
        c = codes.sample_random_general(codes.model_params(args.n, args.R, args.tau), args.seed)
    else:
        raise UsageError(f"unknown code action {args.action!r}")
    if args.out:
        codes.write_code(c, args.out)
        emit({"n": c.n, "size": len(c), "path": args.out})
    else:
        sys.stdout.write(codes.format_code(c))
    return EXIT_OK


def cmd_verify_theorem(args):
    _need(args, "file")
    c = codes.read_code(args.file)
    rep = theorem_verifier.build_gram(c)
    tr = theorem_verifier.verify_trace_inequality(rep, c.words if c.n <= 14 else None)
    out = rep.to_dict()
    out["trace_identity_gap"] = tr.identity_rel_gap
    out["chain_holds"] = tr.chain_holds
    out["pass"] = bool(rep.passed and tr.passed)
    emit(out)
    return EXIT_OK if out["pass"] else EXIT_FAIL


def cmd_conjecture(args):
    _need(args, "file")
    c = codes.read_code(args.file)
    if len(c) < 2:
        raise UsageError("code needs at least two words")
    dists = [args.i] if args.i is not None else conjecture_lab.distance_scan(c.min_distance, args.eps0)
    rows, ok = [], True
    for i in dists:
        if args.kind == "linear":
            if not isinstance(c, codes.LinearCode):
                raise UsageError("'conjecture linear' needs a generator-matrix file")
            a = codes.weight_slice(c, i)
            if a.size == 0:
                rows.append({"i": i, "skipped": "empty slice"})
                continue
            rep = conjecture_lab.slice_norm_ratio(conjecture_lab.SliceFunction(c.n, a))
            rows.append({"i": i, "ratio": rep.ratio, "bound": rep.bound, "|A|": rep.size, "pass": rep.passed})
            ok &= rep.passed
        else:
            g = conjecture_lab.DistanceGraph(c, i)
            m = conjecture_lab.distance_graph_moments(g)
            if m.ratio is None:
                rows.append({"i": i, "skipped": "no edges"})
                continue
            bound = conjecture_lab.moment_bound(g) ** 0.25
            t = conjecture_lab.estimate_balancedness(g, seed=args.seed) if g.size <= 4096 else None
            passed = m.ratio <= bound * (1 + 1e-12)
            rows.append({"i": i, "ratio": m.ratio, "bound": bound, "t_lower": t.t_lower if t else None,
                         "t_method": t.method if t else None, "pass": passed})
            ok &= passed
    emit(rows[0] if args.i is not None and len(rows) == 1 else {"distances": rows, "pass": ok})
    return EXIT_OK if ok else EXIT_FAIL


def cmd_ensemble(args):
    _need(args, "model", "n", "R")
    summ = ensemble.run_ensemble(args.model, args.n, args.R, args.trials, args.seed, args.tau,
                                 threads=thread_count(args))
    out = summ.to_dict()
    if args.model == "general" and args.trials >= 30:
        stats = codes.ensemble_statistics(args.trials, codes.model_params(args.n, args.R, args.tau), args.seed,
                                          threads=thread_count(args))
        out["pair_statistics"] = stats.to_dict()
        out["pair_statistics_ok"] = codes.ensemble_statistics_ok(stats)
    emit(out)
    return EXIT_OK


def cmd_lp_cert(args):
    _need(args, "n", "d")
    cert, r = lp_certificate.certificate_from_ball(args.n, args.d)
    out = {
        "n": args.n,
        "d": args.d,
        "r": r,
        "lambda": cert.lam,
        "feasible": cert.feasible,
        "s": cert.s,
        "raw": cert.raw,
        "exponent": lp_certificate.bound_exponent(cert.raw, args.n),
        "s_exponent": lp_certificate.bound_exponent(cert.s, args.n),
        "first_lp_exponent": rate_bounds.first_lp_bound(args.d / args.n),
        "identity_residual": cert.identity_residual,
    }
    emit(out)
    return EXIT_OK if cert.feasible else EXIT_FAIL


def cmd_rates(args):
    sys.stdout.write(rate_bounds.curves_csv(args.grid, args.eps))
    return EXIT_OK


def cmd_analytic_checks(args):
    rep = rate_bounds.analytic_checks()
    out = {
        "checks": rep.checks,
        "h_min_location": rep.h_min_location,
        "h_min_value": rep.h_min_value,
        "p_coefficients": rep.p_coefficients,
        "q_root": rep.q_root,
        "q_endpoints": rep.q_endpoints,
        "tau_derivative_max": rep.tau_derivative_max,
    }
    exps = []
    for R in args.R:
        e = rate_bounds.exponent_margin_check(R, args.eps)
        exps.append({"R": R, "delta": e.delta, "max_margin": e.max_margin, "alpha": e.alpha, "pass": e.passed})
    out["exponent_checks"] = exps
    ok = rep.passed and all(e["pass"] for e in exps)
    out["pass"] = ok
    emit(out)
    return EXIT_OK if ok else EXIT_FAIL


COMMANDS = {
    "transform": cmd_transform,
    "krawchouk": cmd_krawchouk,
    "ball": cmd_ball,
    "code": cmd_code,
    "verify-theorem": cmd_verify_theorem,
    "conjecture": cmd_conjecture,
    "ensemble": cmd_ensemble,
    "lp-cert": cmd_lp_cert,
    "rates": cmd_rates,
    "analytic-checks": cmd_analytic_checks,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hamspec", description="Spectral tools for binary codes on the Hamming cube.")
    parser.add_argument("--threads", type=_positive("--threads"), help="worker threads (default: HAMSPEC_THREADS or all cores)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text)
        p.add_argument("--selftest", action="store_true", help="run this command's invariant suite and exit")
        p.add_argument("--threads", type=_positive("--threads"), default=argparse.SUPPRESS,
                       help="worker threads (overrides the global flag)")
        return p

    p = add("transform", "Walsh-Fourier transform of a function file (CSV 'index,value').")
    p.add_argument("input", nargs="?", help="function file")
    p.add_argument("--inverse", action="store_true", help="input is Fourier-domain; output the point values")
    p.add_argument("--norms", action="store_true", help="print L_p norms and the Parseval check instead")

    p = add("krawchouk", "Exact Krawchouk table rows, roots and orthogonality.")
    p.add_argument("--n", type=_positive("--n"))
    p.add_argument("--s", type=_nonneg("--s"), help="single degree (default: all)")
    p.add_argument("--roots", action="store_true")

    p = add("ball", "Top eigenpair of the Hamming ball and its Krawchouk identities.")
    p.add_argument("--n", type=_positive("--n"))
    p.add_argument("--r", type=_nonneg("--r"))
    p.add_argument("--threshold", type=float, help="use the smallest r with lambda_r >= threshold")

    p = add("code", "Code statistics and random samplers.")
    p.add_argument("action", nargs="?", choices=["stats", "sample-linear", "sample-general"])
    p.add_argument("file", nargs="?", help="code file (for stats)")
    p.add_argument("--n", type=_positive("--n"))
    p.add_argument("--k", type=_nonneg("--k"))
    p.add_argument("--R", type=float)
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write the sampled code here instead of stdout")

    p = add("verify-theorem", "Rank bound and trace inequality for a code file.")
    p.add_argument("file", nargs="?")

    p = add("conjecture", "Norm ratios for weight slices (linear) or distance graphs (general).")
    p.add_argument("kind", nargs="?", choices=["linear", "general"])
    p.add_argument("file", nargs="?")
    p.add_argument("--i", type=_positive("--i"), help="distance; default scans d..ceil((1+eps0) d)")
    p.add_argument("--eps0", type=float, default=0.2)
    p.add_argument("--seed", type=int, default=0)

    p = add("ensemble", "Monte-Carlo over the random linear or general code model.")
    p.add_argument("--model", choices=["linear", "general"])
    p.add_argument("--n", type=_positive("--n"))
    p.add_argument("--R", type=float)
    p.add_argument("--tau", type=float, default=0.05)
    p.add_argument("--trials", type=_positive("--trials"), default=100)
    p.add_argument("--seed", type=int, default=0)

    p = add("lp-cert", "Dual LP certificate from the ball eigenfunction.")
    p.add_argument("--n", type=_positive("--n"))
    p.add_argument("--d", type=_positive("--d"))

    p = add("rates", "CSV of GV, first LP, c(delta) and the improved curve.")
    p.add_argument("--grid", type=_positive("--grid"), default=100)
    p.add_argument("--eps", type=float, default=0.01)

    p = add("analytic-checks", "One-variable checks behind the |D(x)| exponent estimate.")
    p.add_argument("--R", type=float, nargs="+", default=[0.25, 0.5, 0.75])
    p.add_argument("--eps", type=float, default=0.01)
    return parser


def run_selftest(name: str) -> int:
    results = selftest.run(name)
    emit({"selftest": name, "results": {label: ok for label, ok in results}, "pass": all(ok for _, ok in results)})
    return EXIT_OK if all(ok for _, ok in results) else EXIT_FAIL


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    try:
        thread_count(args)
        if args.selftest:
            return run_selftest(args.command)
        if args.command == "code" and args.action is None:
            raise UsageError("code needs an action: stats, sample-linear or sample-general")
        if args.command == "conjecture" and args.kind is None:
            raise UsageError("conjecture needs a kind: linear or general")
        return COMMANDS[args.command](args)
    except (UsageError, ParameterError, FileNotFoundError) as exc:
        print(f"hamspec {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except HamspecError as exc:
        print(f"hamspec {args.command}: verification failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
