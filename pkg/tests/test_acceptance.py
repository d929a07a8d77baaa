"""One test per acceptance criterion; each prints a PASS/FAIL line (collected again in the terminal summary)."""

import math
import time

import numpy as np
import pytest

from hamspec import (
    ball_spectrum,
    codes,
    conjecture_lab,
    cube_fourier,
    ensemble,
    krawchouk,
    lp_certificate,
    rate_bounds,
    theorem_verifier,
)
from hamspec.errors import VerificationError

EXACT_METHODS = ("distinct-characters+modular-certified", "elimination+modular-certified",
                 "distinct-characters+elimination", "elimination+elimination")


def _desk_codes():
    out = [("hamming[7,4]", codes.hamming_7_4())]
    out += [(f"repetition n={n}", codes.repetition_code(n)) for n in range(2, 15)]
    rng = np.random.default_rng(20240611)
    for t in range(200):
        n = int(rng.integers(4, 17))
        k = int(rng.integers(1, min(10, n - 1) + 1))
        out.append((f"random n={n} k={k} seed={t}", codes.sample_random_linear(n, k, t)))
    return out


@pytest.fixture(scope="module")
def desk_reports():
    t0 = time.perf_counter()
    rows = []
    for label, c in _desk_codes():
        if len(c) < 2:
            continue
        rep = theorem_verifier.build_gram(c)
        tr = theorem_verifier.verify_trace_inequality(rep, c.words)
        rows.append((label, c, rep, tr))
    return rows, time.perf_counter() - t0


def test_criterion_01_rank_bound(desk_reports, verdict):
    rows, elapsed = desk_reports
    bad = [label for label, _, rep, _ in rows if not rep.rank_holds]
    inexact = [label for label, _, rep, _ in rows if rep.rank_method not in EXACT_METHODS]
    ok = not bad and not inexact and elapsed < 300
    verdict(1, ok, f"{len(rows)} codes, rank failures={len(bad)}, non-exact ranks={len(inexact)}, {elapsed:.0f}s (< 300s)")


def test_criterion_02_trace_inequality(desk_reports, verdict):
    rows, _ = desk_reports
    worst = min((rep.trace_lhs - rep.trace_rhs) / abs(rep.trace_lhs) for _, _, rep, _ in rows)
    bad = [label for label, _, _, tr in rows if not tr.inequality_holds]
    verdict(2, not bad, f"{len(rows)} codes, min relative slack {worst:.3g}, failures={len(bad)}")


def test_criterion_03_ball_eigenfunction(verdict):
    worst_ident = worst_root = worst_dense = 0.0
    failures = []
    for n in range(2, 21):
        table = krawchouk.build_table(n)
        for r in range(0, n // 2 + 1):
            data = ball_spectrum.ball_top_eigen(n, r, table)
            try:
                rep = ball_spectrum.verify_eigen_identities(data, table, rel_tol=1e-8, root_tol=1e-6)
            except VerificationError as exc:
                failures.append((n, r, str(exc)))
                continue
            worst_ident = max(worst_ident, rep.identity_residual)
            worst_root = max(worst_root, rep.root_value)
            if n <= 14:
                dense = ball_spectrum.induced_ball_top_eigenvalue(n, r)
                rel = abs(dense - data.lambda_r) / max(1.0, abs(dense))
                worst_dense = max(worst_dense, rel)
                if rel > 1e-8:
                    failures.append((n, r, f"dense {dense} vs {data.lambda_r}"))
    verdict(3, not failures, f"identity {worst_ident:.2g}, root {worst_root:.2g}, dense gap {worst_dense:.2g}, "
            f"failures={failures[:3]}")


def test_criterion_04_fourier_engine(verdict):
    rng = np.random.default_rng(4)
    fails = {"parseval": 0, "inversion": 0, "convolution": 0, "adjacency": 0}
    cases = 1000
    for _ in range(cases):
        n = int(rng.integers(4, 13))
        f = cube_fourier.BooleanFunction(n, rng.normal(size=1 << n))
        g = cube_fourier.BooleanFunction(n, rng.normal(size=1 << n))
        fh = cube_fourier.walsh_transform(f).values
        gh = cube_fourier.walsh_transform(g).values
        if abs(np.mean(f.values**2) - np.sum(fh**2)) > 1e-10 * max(1.0, np.mean(f.values**2)):
            fails["parseval"] += 1
        back = cube_fourier.inverse_walsh_transform(cube_fourier.BooleanFunction(n, fh, cube_fourier.FOURIER))
        if np.max(np.abs(back.values - f.values)) > 1e-10:
            fails["inversion"] += 1
        conv = cube_fourier.walsh_transform(cube_fourier.convolve(f, g)).values
        if np.max(np.abs(conv - fh * gh)) > 1e-10:
            fails["convolution"] += 1
        af = cube_fourier.walsh_transform(cube_fourier.adjacency_apply(f)).values
        if np.max(np.abs(af - (n - 2 * cube_fourier.weights(n)) * fh)) > 1e-10:
            fails["adjacency"] += 1
    verdict(4, not any(fails.values()), f"{cases} cases per property, failures {fails}")


def test_criterion_05_krawchouk_orthogonality(verdict):
    bad = []
    for n in range(1, 21):
        orth = krawchouk.build_table(n).orthogonality()
        for s in range(n + 1):
            if orth[s][s] != math.comb(n, s) or any(orth[s][t] != 0 for t in range(n + 1) if t != s):
                bad.append((n, s))
    verdict(5, not bad, f"n = 1..20 exact integer orthogonality, failures={bad[:5]}")


def test_criterion_06_dual_certificate(verdict):
    infeasible, below = [], []
    checked = 0
    for n in range(2, 17):
        for d in range(1, n // 2 + 1):
            cert, _ = lp_certificate.certificate_from_ball(n, d)
            checked += 1
            if not cert.feasible:
                infeasible.append((n, d))
                continue
            if n <= 6 and cert.raw < lp_certificate.max_code_size(n, d) * (1 - 1e-12):
                below.append((n, d, cert.raw))
    verdict(6, not infeasible and not below,
            f"{checked} (n, d) pairs, infeasible={infeasible}, bound below A(n,d)={below}")


def test_criterion_07_slice_norms(verdict):
    pool = [codes.hamming_7_4()]
    pool += [codes.sample_random_linear(n, k, 700 + n * 16 + k) for n in range(4, 15) for k in (2, n // 2, n - 2) if k >= 1]
    slices = ratio_bad = norm_bad = 0
    worst = 0.0
    for c in pool:
        for i in range(1, c.n + 1):
            sf = conjecture_lab.SliceFunction.from_code(c, i)
            if len(sf) == 0:
                continue
            slices += 1
            rep = conjecture_lab.slice_norm_ratio(sf)
            worst = max(worst, rep.ratio / rep.bound)
            ratio_bad += not rep.passed
            norm_bad += rep.norm4_4 != conjecture_lab.cube_norm4_4(sf)
    verdict(7, ratio_bad == 0 and norm_bad == 0,
            f"{slices} slices, max ratio/|A|^(1/4) = {worst:.4f}, ratio failures={ratio_bad}, norm mismatches={norm_bad}")


def test_criterion_08_ensemble_ratios(verdict):
    t0 = time.perf_counter()
    lines, ok = [], True
    for model, R in (("linear", 0.5), ("general", 0.25)):
        maxima = []
        for n in (20, 24, 28):
            s = ensemble.run_ensemble(model, n, R, trials=100, seed=8)
            maxima.append(s.max_ratio)
            ok = ok and s.max_ratio is not None and s.max_ratio <= s.constant
            const = s.constant
        flag = ensemble.growth_flag(maxima)
        lines.append(f"{model}: max {['%.3f' % m for m in maxima]} (K={const:g}, growth flag={'yes' if flag else 'no'})")
    elapsed = time.perf_counter() - t0
    ok = ok and elapsed < 1800
    verdict(8, ok, "; ".join(lines) + f"; {elapsed:.0f}s")


def test_criterion_09_pair_statistics(verdict):
    p = codes.model_params(20, 0.3, 0.05)
    rep = codes.ensemble_statistics(200, p, seed=9)
    zs = {ell: round(row["z"], 2) for ell, row in rep.pre.items()}
    vr = {ell: round(row["variance_ratio"], 3) for ell, row in rep.pre.items()}
    ok = set(rep.pre) == {p.d_0, p.n // 2} and codes.ensemble_statistics_ok(rep, z_max=4.0, var_factor=2.0)
    verdict(9, ok, f"n=20 N={p.N} d0={p.d_0}, z={zs}, variance ratio={vr}")


def test_criterion_10_analytic_suite(verdict):
    rep = rate_bounds.analytic_checks()
    verdict(10, rep.passed, f"checks {rep.checks}")


def test_criterion_11_counterexample(verdict):
    rows, ok = [], True
    for size in (64, 256, 1024):
        base = conjecture_lab.spread_code(24, size - 2, 6, seed=size)
        cp, k = conjecture_lab.build_counterexample(base, seed=size)
        rep = conjecture_lab.counterexample_report(cp, k, eig_tol=1e-8)
        ok = ok and len(cp) == size and rep.passed
        rows.append(f"|C'|={rep.size}: nonzero eig={rep.nonzero_eigenvalues}, ratio {rep.ratio:.8f} vs {rep.closed_form:.8f}")
    verdict(11, ok, "; ".join(rows))


def test_criterion_12_rate_curves(verdict):
    at_half = rate_bounds.first_lp_bound(0.5)
    near_zero = rate_bounds.first_lp_bound(1e-9)
    gap = 1.0 - near_zero
    grid_eps = [0.001, 0.005, 0.01, 0.05, 0.1]
    worse = []
    for delta in np.linspace(0.01, 0.49, 49):
        for eps in grid_eps:
            if eps > rate_bounds.epsilon_guard(delta):
                continue
            if not rate_bounds.improved_bound(delta, eps).value < rate_bounds.first_lp_bound(delta):
                worse.append((round(float(delta), 3), eps))
    ok = at_half == 0.0 and gap <= 1e-9 and not worse
    verdict(12, ok, f"firstLP(0.5)={at_half}, 1 - firstLP(1e-9)={gap:.4g} (needs <= 1e-9), improved >= firstLP at {worse[:5]}")
