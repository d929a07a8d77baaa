"""Quick invariant suites behind each CLI subcommand's --selftest flag."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from . import (
    ball_spectrum,
    codes,
    conjecture_lab,
    cube_fourier,
    krawchouk,
    lp_certificate,
    rate_bounds,
    theorem_verifier,
)


def _fourier():
    rng = np.random.default_rng(0)
    out = []
    for n in (3, 6, 9):
        f = cube_fourier.BooleanFunction(n, rng.normal(size=1 << n))
        g = cube_fourier.BooleanFunction(n, rng.normal(size=1 << n))
        fh = cube_fourier.walsh_transform(f)
        back = cube_fourier.inverse_walsh_transform(fh)
        out.append((f"inversion n={n}", np.allclose(back.values, f.values, atol=1e-10)))
        rep = cube_fourier.norms_and_inner(f)
        out.append((f"parseval n={n}", rep.parseval_gap <= 1e-10 * max(1, rep.inner_self)))
        conv = cube_fourier.walsh_transform(cube_fourier.convolve(f, g)).values
        out.append((f"convolution n={n}", np.allclose(conv, fh.values * cube_fourier.walsh_transform(g).values, atol=1e-10)))
        af = cube_fourier.walsh_transform(cube_fourier.adjacency_apply(f)).values
        w = cube_fourier.weights(n)
        out.append((f"adjacency n={n}", np.allclose(af, (n - 2 * w) * fh.values, atol=1e-10)))
    return out


def _krawchouk():
    out = []
    for n in (5, 10, 14):
        t = krawchouk.build_table(n)
        orth = t.orthogonality()
        ok = all(orth[s][u] == (math.comb(n, s) if s == u else 0) for s in range(n + 1) for u in range(n + 1))
        out.append((f"orthogonality n={n}", ok))
        out.append((f"roots n={n}", all(len(krawchouk.find_roots(s, t).roots) == s for s in range(1, n + 1))))
    return out


def _ball():
    out = []
    for n, r in ((8, 2), (10, 3), (12, 5)):
        data = ball_spectrum.ball_top_eigen(n, r)
        dense = ball_spectrum.induced_ball_top_eigenvalue(n, r)
        out.append((f"lambda n={n} r={r}", abs(data.lambda_r - dense) <= 1e-8 * max(1, dense)))
        try:
            ball_spectrum.verify_eigen_identities(data, krawchouk.build_table(n))
            out.append((f"identities n={n} r={r}", True))
        except Exception:
            out.append((f"identities n={n} r={r}", False))
    return out


def _codes():
    h = codes.hamming_7_4()
    out = [
        ("hamming d=3", h.min_distance == 3),
        ("hamming B", list(h.distance_distribution) == [1, 0, 0, 7, 7, 0, 0, 1]),
        ("dual size", len(h) * len(codes.dual_code(h)) == 1 << 7),
        ("simplex weights", set(codes.dual_code(h).weights().tolist()) == {0, 4}),
    ]
    p = codes.model_params(16, 0.3, 0.05)
    c = codes.sample_random_general(p, 1)
    out.append(("general min distance >= d_0", len(c) < 2 or c.min_distance >= p.d_0))
    c2 = codes.sample_random_linear(12, 5, 3)
    out.append(("linear min weight = min distance", c2.min_distance == int(np.flatnonzero(c2.pair_histogram)[0])))
    return out


def _theorem():
    out = []
    for c in (codes.hamming_7_4(), codes.repetition_code(9), codes.sample_random_linear(10, 5, 2)):
        rep = theorem_verifier.build_gram(c)
        tr = theorem_verifier.verify_trace_inequality(rep, c.words)
        out.append((f"rank bound |C|={len(c)}", bool(rep.rank_holds)))
        out.append((f"trace |C|={len(c)}", tr.passed))
        out.append((f"numeric rank |C|={len(c)}", rep.numeric_rank == rep.rank))
    cov = theorem_verifier.verify_covering_equivalence(codes.hamming_7_4(), 1)
    out.append(("covering identity", cov.passed))
    return out


def _conjecture():
    h = codes.hamming_7_4()
    sf = conjecture_lab.SliceFunction.from_code(h, 3)
    rep = conjecture_lab.slice_norm_ratio(sf)
    out = [
        ("quadruple count = cube norm", rep.norm4_4 == conjecture_lab.cube_norm4_4(sf)),
        ("ratio <= |A|^(1/4)", rep.passed),
        ("spectrum equivalence", conjecture_lab.linear_code_spectrum_equivalence(h, 3).passed),
        ("rhombic = Tr B^4", conjecture_lab.count_rhombic(h, 3).consistent),
        ("|D(x)| example", conjecture_lab.d_set_size(10, 4, 4) == 90),
    ]
    base = conjecture_lab.spread_code(24, 62, 6, 0)
    if base.min_distance // 3 == 2:
        cp, k = conjecture_lab.build_counterexample(base, 0)
        out.append(("counterexample triangle", conjecture_lab.counterexample_report(cp, k).passed))
    return out


def _lp():
    out = []
    for n, d in ((6, 2), (5, 2), (8, 3)):
        cert, _ = lp_certificate.certificate_from_ball(n, d)
        out.append((f"feasible n={n} d={d}", cert.feasible and cert.identity_residual <= 1e-10))
    cert, _ = lp_certificate.certificate_from_ball(6, 2)
    out.append(("raw >= A(6,2)", cert.raw >= lp_certificate.max_code_size(6, 2)))
    return out


def _rates():
    out = [
        ("first LP at 1/2", rate_bounds.first_lp_bound(0.5) == 0.0),
        ("entropy round trip", abs(rate_bounds.entropy(rate_bounds.entropy_inverse(0.37)) - 0.37) <= 1e-10),
        ("constant forms agree", rate_bounds.conjecture_constant(0.25).relative_gap <= 1e-12),
        ("improved below first LP", rate_bounds.improved_bound(0.2, 0.05).value < rate_bounds.first_lp_bound(0.2)),
    ]
    return out


def _analytic():
    rep = rate_bounds.analytic_checks(grid=2000)
    out = [(k, v) for k, v in rep.checks.items()]
    out.append(("Q(1/2) = 1/4", rep.q_endpoints[1] == Fraction(1, 4)))
    out.append(("exponent margin R=0.5", rate_bounds.exponent_margin_check(0.5).passed))
    return out


def _ensemble():
    p = codes.model_params(20, 0.2, 0.05)
    rep = codes.ensemble_statistics(40, p, seed=1)
    return [("post-erasure distance >= d_0", rep.post["min_distance_at_least_d0"])]


SUITES = {
    "transform": _fourier,
    "krawchouk": _krawchouk,
    "ball": _ball,
    "code": _codes,
    "verify-theorem": _theorem,
    "conjecture": _conjecture,
    "ensemble": _ensemble,
    "lp-cert": _lp,
    "rates": _rates,
    "analytic-checks": _analytic,
}


def run(name: str) -> list[tuple[str, bool]]:
    return [(label, bool(ok)) for label, ok in SUITES[name]()]
