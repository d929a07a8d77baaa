"""Krawchouk polynomials K_s on {0..n}: exact tables, roots, ratio bounds.

``K_s(x) = sum_k (-1)^k C(x, k) C(n - x, s - k)``; at an integer weight it is the
sum of all weight-s characters evaluated at a point of that weight. Values are
Python integers, so orthogonality checks are exact equalities.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .errors import ConsistencyError, ParameterError

ROOT_TOL = 1e-9


def explicit_value(n: int, s: int, k: int) -> int:
    """K_s(k) from the defining alternating sum (integer k)."""
    return sum((-1) ** j * comb(k, j) * comb(n - k, s - j) for j in range(s + 1))


@dataclass(frozen=True)
class KrawchoukTable:
    """Exact K_s(k) for 0 <= s, k <= n; ``values[s][k]``."""

    n: int
    values: tuple

    def __call__(self, s: int, k: int) -> int:
        return self.values[s][k]

    def row(self, s: int) -> list[int]:
        return list(self.values[s])

    def as_float(self) -> np.ndarray:
        return np.array([[float(v) for v in row] for row in self.values])

    def orthogonality(self) -> list[list[Fraction]]:
        """Matrix 2^-n sum_k C(n,k) K_s(k) K_t(k), exact."""
        n = self.n
        w = [comb(n, k) for k in range(n + 1)]
        out = []
        for s in range(n + 1):
            rs = self.values[s]
            out.append(
                [Fraction(sum(w[k] * rs[k] * self.values[t][k] for k in range(n + 1)), 1 << n) for t in range(n + 1)]
            )
        return out


def build_table(n: int, crosscheck_upto: int = 6) -> KrawchoukTable:
    """Table from the three-term recurrence in s, cross-checked against the defining sum."""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    rows = [[1] * (n + 1), [n - 2 * k for k in range(n + 1)]]
    for s in range(1, n):
        nxt = []
        for k in range(n + 1):
            num = (n - 2 * k) * rows[s][k] - (n - s + 1) * rows[s - 1][k]
            q, rem = divmod(num, s + 1)
            if rem:
                raise ConsistencyError(f"non-integral K_{s + 1}({k}) for n={n}")
            nxt.append(q)
        rows.append(nxt)
    rows = rows[: n + 1]
    for s in range(min(crosscheck_upto, n) + 1):
        for k in range(n + 1):
            if rows[s][k] != explicit_value(n, s, k):
                raise ConsistencyError(f"recurrence disagrees with defining sum at s={s}, k={k}")
    return KrawchoukTable(n, tuple(tuple(r) for r in rows))


def value(n: int, s: int, x):
    """K_s(x) for real x by the recurrence; exact when x is an int or Fraction."""
    if isinstance(x, int):
        x = Fraction(x)
    prev, cur = 1, n - 2 * x
    if s == 0:
        return prev
    for t in range(1, s):
        prev, cur = cur, ((n - 2 * x) * cur - (n - t + 1) * prev) / (t + 1)
    return cur


def derivative(n: int, s: int, x: float) -> float:
    """dK_s/dx at real x, by differentiating the recurrence."""
    if s == 0:
        return 0.0
    p_prev, p_cur = 1.0, n - 2.0 * x
    d_prev, d_cur = 0.0, -2.0
    for t in range(1, s):
        p_next = ((n - 2 * x) * p_cur - (n - t + 1) * p_prev) / (t + 1)
        d_next = (-2.0 * p_cur + (n - 2 * x) * d_cur - (n - t + 1) * d_prev) / (t + 1)
        p_prev, p_cur = p_cur, p_next
        d_prev, d_cur = d_cur, d_next
    return d_cur


@dataclass(frozen=True)
class RootData:
    s: int
    roots: tuple
    min_root: float
    min_gap: float


def _bisect(n, s, lo, hi, sign_lo, tol):
    lo, hi = Fraction(lo), Fraction(hi)
    while hi - lo > tol:
        mid = (lo + hi) / 2
        v = value(n, s, mid)
        if v == 0:
            return float(mid)
        if (v > 0) == (sign_lo > 0):
            lo = mid
        else:
            hi = mid
    return float((lo + hi) / 2)


def find_roots(s: int, table: KrawchoukTable, tol: float = ROOT_TOL) -> RootData:
    """All s roots of K_s, from sign changes of the exact integer values plus bisection."""
    n = table.n
    if not 1 <= s <= n:
        raise ParameterError(f"degree s={s} outside [1, {n}]")
    vals = table.row(s)
    roots = []
    last_k = None
    for k in range(n + 1):
        v = vals[k]
        if v == 0:
            roots.append(float(k))
            last_k = None
            continue
        if last_k is not None and (vals[last_k] > 0) != (v > 0):
            roots.append(_bisect(n, s, last_k, k, vals[last_k], Fraction(tol)))
        last_k = k
    if len(roots) != s:
        raise ConsistencyError(f"found {len(roots)} roots of K_{s} (n={n}), expected {s}")
    roots.sort()
    gaps = np.diff(roots)
    return RootData(s, tuple(roots), roots[0], float(gaps.min()) if len(gaps) else float("inf"))


@dataclass(frozen=True)
class BoundReport:
    """Checks of ||g||_2^2 >= C(n,s)/n^2 and g(k)^2 <= 4n^3 2^n C(n,s)/C(n,k), g = K_s/(x - a)."""

    n: int
    s: int
    a: float
    norm_sq: float
    norm_lower: float
    worst_k: int
    max_ratio: float
    ratio_cap: float

    @property
    def norm_holds(self) -> bool:
        return self.norm_sq >= self.norm_lower

    @property
    def pointwise_holds(self) -> bool:
        return self.max_ratio <= self.ratio_cap

    @property
    def holds(self) -> bool:
        return self.norm_holds and self.pointwise_holds


def check_ratio_bounds(s: int, a: float, table: KrawchoukTable) -> BoundReport:
    n = table.n
    rd = find_roots(s, table)
    if min(abs(a - x) for x in rd.roots) > ROOT_TOL:
        raise ParameterError(f"a={a} is not a root of K_{s} (n={n})")
    row = table.row(s)
    g = np.empty(n + 1)
    for k in range(n + 1):
        if abs(k - a) < 1e-6:
            g[k] = derivative(n, s, a)
        else:
            g[k] = row[k] / (k - a)
    binom = np.array([float(comb(n, k)) for k in range(n + 1)])
    cns = float(comb(n, s))
    norm_sq = float(np.sum(binom * g * g)) / 2.0**n
    ratios = g * g * binom / (2.0**n * cns)
    worst = int(np.argmax(ratios))
    return BoundReport(
        n=n,
        s=s,
        a=a,
        norm_sq=norm_sq,
        norm_lower=cns / n**2,
        worst_k=worst,
        max_ratio=float(ratios[worst]),
        ratio_cap=4.0 * n**3,
    )
