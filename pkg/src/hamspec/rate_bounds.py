"""Rate-versus-relative-distance curves and the one-variable analytic checks behind them.

H is the binary entropy, g(x) = 2 sqrt(x (1 - x)) and rho_0(delta) = 1/2 - sqrt(delta (1 - delta)),
so the first linear programming curve is H(rho_0) and g(rho_0) = 1 - 2 delta.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from .errors import ParameterError

BISECT_TOL = 1e-13
GRID_POINTS = 10_000
ENDPOINT_MARGIN = 1e-3


def entropy(x):
    """H(x) = -x log2 x - (1 - x) log2 (1 - x), with 0 log 0 = 0. Accepts arrays."""
    arr = np.asarray(x, dtype=np.float64)
    if np.any((arr < 0) | (arr > 1)):
        raise ParameterError("entropy argument must lie in [0, 1]")
    with np.errstate(divide="ignore", invalid="ignore"):
        out = -np.where(arr > 0, arr * np.log2(arr), 0.0) - np.where(arr < 1, (1 - arr) * np.log2(1 - arr), 0.0)
    out = out + 0.0  # no negative zero
    return float(out) if out.ndim == 0 else out


def entropy_derivative(x: float) -> float:
    return math.log2((1 - x) / x)


def entropy_inverse(y: float) -> float:
    """The root of H(x) = y on [0, 1/2]."""
    if not 0 <= y <= 1:
        raise ParameterError(f"entropy_inverse needs y in [0, 1], got {y}")
    if y == 0:
        return 0.0
    if y == 1:
        return 0.5
    return brentq(lambda x: entropy(x) - y, 0.0, 0.5, xtol=BISECT_TOL, rtol=4 * np.finfo(float).eps)


def _check_delta(delta, lo_open=False, hi_open=False):
    if not (0 <= delta <= 0.5) or (lo_open and delta == 0) or (hi_open and delta == 0.5):
        raise ParameterError(f"relative distance {delta} outside the allowed range in [0, 1/2]")


def rho0(delta: float) -> float:
    return 0.5 - math.sqrt(delta * (1 - delta))


def g(x: float) -> float:
    return 2.0 * math.sqrt(x * (1 - x))


def g_derivative(x: float) -> float:
    return (1 - 2 * x) / math.sqrt(x * (1 - x))


def gv_bound(delta: float) -> float:
    """Rate 1 - H(delta) achieved by random codes."""
    _check_delta(delta)
    return 1.0 - entropy(delta)


def first_lp_bound(delta: float) -> float:
    _check_delta(delta)
    return entropy(max(0.0, rho0(delta)))


@dataclass(frozen=True)
class ConstantReport:
    delta: float
    c_explicit: float
    c_derivative: float
    relative_gap: float
    slope_ratio: float
    slope_ratio_fd: float
    fd_relative_error: float


def conjecture_constant(delta: float, step: float = 1e-6) -> ConstantReport:
    """c(delta) from the closed formula and from (1/8) (H'(rho_0) / g'(rho_0)) 2 delta."""
    _check_delta(delta, lo_open=True, hi_open=True)
    s = math.sqrt(delta * (1 - delta))
    c_explicit = delta * (1 - 2 * delta) * math.log2((0.5 + s) / (0.5 - s)) / (16 * s)
    r0 = rho0(delta)
    ratio = entropy_derivative(r0) / g_derivative(r0)
    c_derivative = ratio * 2 * delta / 8
    h_fd = (entropy(r0 + step) - entropy(r0 - step)) / (2 * step)
    g_fd = (g(r0 + step) - g(r0 - step)) / (2 * step)
    ratio_fd = h_fd / g_fd
    return ConstantReport(
        delta=delta,
        c_explicit=c_explicit,
        c_derivative=c_derivative,
        relative_gap=abs(c_explicit - c_derivative) / abs(c_explicit),
        slope_ratio=ratio,
        slope_ratio_fd=ratio_fd,
        fd_relative_error=abs(ratio_fd - ratio) / abs(ratio),
    )


@dataclass(frozen=True)
class ImprovedBound:
    delta: float
    epsilon: float
    rho: float
    value: float
    first_order: float


def improved_bound(delta: float, epsilon: float) -> ImprovedBound:
    """H(rho) + 4 c epsilon, rho solving g(rho) = 1 - 2 delta - 2 delta epsilon on [0, 1/2]."""
    _check_delta(delta, lo_open=True, hi_open=True)
    if epsilon < 0:
        raise ParameterError("epsilon must be nonnegative")
    target = 1 - 2 * delta - 2 * delta * epsilon
    if target < 0:
        raise ParameterError(f"no rho: 1 - 2 delta (1 + epsilon) = {target:.3g} < 0")
    c = conjecture_constant(delta).c_explicit
    if epsilon == 0:
        rho = rho0(delta)
    elif target == 0:
        rho = 0.0
    else:
        rho = brentq(lambda x: g(x) - target, 0.0, 0.5, xtol=BISECT_TOL)
    return ImprovedBound(
        delta=delta,
        epsilon=epsilon,
        rho=rho,
        value=entropy(rho) + 4 * c * epsilon,
        first_order=first_lp_bound(delta) - 4 * c * epsilon,
    )


def epsilon_guard(delta: float) -> float:
    """Largest epsilon for which g(rho) = 1 - 2 delta (1 + epsilon) has a root."""
    return (1 - 2 * delta) / (2 * delta)


# ---------------------------------------------------------------------------
# analytic checks for the |D(x)| exponent estimate


def h_curve(delta):
    """h(delta) = delta + (1 - delta) H(delta / (2 - 2 delta)) - H(delta)."""
    delta = np.asarray(delta, dtype=np.float64)
    return delta + (1 - delta) * entropy(delta / (2 - 2 * delta)) - entropy(delta)


def _poly_mul(p, q):
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _poly_pow(p, k):
    out = [Fraction(1)]
    for _ in range(k):
        out = _poly_mul(out, p)
    return out


def _poly_sub(p, q):
    m = max(len(p), len(q))
    p = list(p) + [0] * (m - len(p))
    q = list(q) + [0] * (m - len(q))
    return [a - b for a, b in zip(p, q)]


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _poly_eval(p, x):
    return sum(c * x**i for i, c in enumerate(p))


# coefficients lowest degree first
Q_COEFFS = [Fraction(-1), Fraction(10), Fraction(-22), Fraction(14)]


def p_polynomial():
    """delta (2 - 3 delta)^3 - (1 - delta)^4, expanded exactly."""
    return _trim(_poly_sub(_poly_mul([0, 1], _poly_pow([2, -3], 3)), _poly_pow([1, -1], 4)))


def p_factored():
    """(1 - 2 delta) Q(delta), expanded exactly."""
    return _trim(_poly_mul([Fraction(1), Fraction(-2)], Q_COEFFS))


@dataclass
class AnalyticReport:
    h_endpoints: tuple
    h_max_interior: float
    h_negative: bool
    h_min_location: float
    h_min_value: float
    tau_derivative_max: float
    tau_derivative_ok: bool
    log_identity_gap: float
    p_coefficients: list
    p_identity: bool
    q_endpoints: tuple
    q_sign_changes: int
    q_root: float
    q_derivative_endpoints: tuple

    @property
    def checks(self) -> dict:
        return {
            "h_endpoints_zero": all(abs(v) <= 1e-10 for v in self.h_endpoints),
            "h_negative_interior": self.h_negative,
            "tau_derivative_nonpositive": self.tau_derivative_ok,
            "p_factorization": self.p_identity,
            "q_sign_pattern": self.q_endpoints == (Fraction(-1), Fraction(1, 4)) and self.q_sign_changes == 1,
        }

    @property
    def passed(self) -> bool:
        return all(self.checks.values())


def analytic_checks(grid: int = GRID_POINTS) -> AnalyticReport:
    """Grid and exact-polynomial checks that h(delta) < 0 strictly inside (0, 1/2)."""
    h0 = float(h_curve(0.0))
    h_half = float(h_curve(0.5))
    deltas = np.linspace(ENDPOINT_MARGIN, 0.5 - ENDPOINT_MARGIN, grid)
    hv = h_curve(deltas)
    res = minimize_scalar(lambda t: float(h_curve(t)), bounds=(ENDPOINT_MARGIN, 0.5 - ENDPOINT_MARGIN), method="bounded",
                          options={"xatol": 1e-12})

    xs = np.linspace(0, 1, grid + 2)[1:-1]
    with np.errstate(divide="ignore"):
        slope_term = (0.5 - xs) * np.log2((1 - xs) / xs)
    dtau = 1 - entropy(xs) - slope_term
    ident = np.max(np.abs(entropy(xs) + slope_term - 0.5 * np.log2(1 / (xs * (1 - xs)))))

    p_lhs, p_rhs = p_polynomial(), p_factored()
    q_vals = [_poly_eval(Q_COEFFS, Fraction(k, grid)) for k in range(grid // 2 + 1)]
    signs = [v > 0 for v in q_vals if v != 0]
    changes = sum(1 for a, b in zip(signs, signs[1:]) if a != b)
    q_root = brentq(lambda t: float(_poly_eval(Q_COEFFS, t)), 0.0, 0.5, xtol=BISECT_TOL)
    dq = [c * i for i, c in enumerate(Q_COEFFS)][1:]
    return AnalyticReport(
        h_endpoints=(h0, h_half),
        h_max_interior=float(hv.max()),
        h_negative=bool(np.all(hv < 0)),
        h_min_location=float(res.x),
        h_min_value=float(res.fun),
        tau_derivative_max=float(dtau.max()),
        tau_derivative_ok=bool(np.all(dtau <= 1e-12)),
        log_identity_gap=float(ident),
        p_coefficients=[int(c) for c in p_lhs],
        p_identity=p_lhs == p_rhs,
        q_endpoints=(_poly_eval(Q_COEFFS, Fraction(0)), _poly_eval(Q_COEFFS, Fraction(1, 2))),
        q_sign_changes=changes,
        q_root=q_root,
        q_derivative_endpoints=(_poly_eval(dq, Fraction(0)), _poly_eval(dq, Fraction(1, 2))),
    )


def d_exponent(xi, tau):
    """tau + (1 - tau) H((2 xi - tau) / (2 - 2 tau)), the growth rate of |D(x)|."""
    xi = np.asarray(xi, dtype=np.float64)
    tau = np.asarray(tau, dtype=np.float64)
    return tau + (1 - tau) * entropy(np.clip((2 * xi - tau) / (2 - 2 * tau), 0.0, 1.0))


@dataclass(frozen=True)
class ExponentReport:
    R: float
    delta: float
    epsilon: float
    max_margin: float
    argmax: tuple
    alpha: float

    @property
    def passed(self) -> bool:
        return self.max_margin < 0


def exponent_margin_check(R: float, epsilon: float = 0.01, grid: int = 400) -> ExponentReport:
    """max over delta <= xi <= (1+eps) delta, delta <= tau <= 2 xi of d_exponent - (1 - R)."""
    if not 0 < R < 1:
        raise ParameterError(f"rate must lie in (0, 1), got {R}")
    delta = entropy_inverse(1 - R)
    u = np.linspace(0, 1, grid)
    xi = delta * (1 + epsilon * u)[:, None]
    tau = delta + (2 * xi - delta) * u[None, :]
    vals = d_exponent(xi, tau) - (1 - R)
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    best = float(vals[i, j])
    return ExponentReport(R, delta, epsilon, best, (float(xi[i, 0]), float(tau[i, j])), -best)


def epsilon_threshold(R: float, eps_max: float = 1.0, tol: float = 1e-6) -> float:
    """Smallest epsilon where the exponent margin stops being negative (eps_max if never)."""
    if exponent_margin_check(R, eps_max).passed:
        return eps_max
    return brentq(lambda e: exponent_margin_check(R, e).max_margin, 0.0, eps_max, xtol=tol)


# ---------------------------------------------------------------------------


def rate_curves(grid: int, epsilon: float = 0.01) -> list[dict]:
    """Rows at delta_j = j / (2 (grid + 1)), j = 1..grid."""
    if grid < 1:
        raise ParameterError("grid must be >= 1")
    rows = []
    for j in range(1, grid + 1):
        delta = j / (2.0 * (grid + 1))
        try:
            imp = improved_bound(delta, epsilon).value
        except ParameterError:
            imp = float("nan")
        rows.append(
            {
                "delta": delta,
                "GV": gv_bound(delta),
                "firstLP": first_lp_bound(delta),
                "cdelta": conjecture_constant(delta).c_explicit,
                "improved": imp,
            }
        )
    return rows


def curves_csv(grid: int, epsilon: float = 0.01) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["delta", "GV", "firstLP", "cdelta", f"improved({epsilon:g})"])
    for row in rate_curves(grid, epsilon):
        writer.writerow([f"{row[k]:.12g}" for k in ("delta", "GV", "firstLP", "cdelta", "improved")])
    return buf.getvalue()
