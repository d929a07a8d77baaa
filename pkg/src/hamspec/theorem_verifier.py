"""Rank and trace checks for the Gram matrix of a code against the ball eigenfunction.

For a code C with minimum distance d, take r minimal with lambda_r >= n - 2d + 1
and f = f_r. The |C| x |C| matrix m[y, z] = f(|y + z|) factors as M D M^t with
M[y, S] = W_S(y) over |S| <= r and D = diag(phi(S)) > 0, so rank(m) = rank(M),
and the claim checked here is rank(M) >= |C| / (2d).

Exact ranks: rank(M) is computed over the integers (M is a +-1 matrix). For
m, the mpmath profile is dyadic, so m scales to an integer matrix; its rank
modulo a large prime is a lower bound on its rational rank, and
rank(m) <= rank(M) always, so a modular rank equal to rank(M) certifies
rank(m) = rank(M) exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import flint
import numpy as np

from . import ball_spectrum, cube_fourier, kernels, krawchouk
from .codes import Code, LinearCode, dual_code
from .errors import CapacityError, ParameterError

MAX_GRAM = 4096
MAX_CHAR_ENTRIES = 1 << 24
EXACT_ENTRIES = 1 << 19
SVD_TOL = 1e-9
PRIMES = (2305843009213693951, 2305843009213693921)


def character_matrix(words, n: int, r: int) -> np.ndarray:
    """M[y, S] = (-1)^{<y, S>} for y in C and |S| <= r (columns by weight, then value)."""
    cols = np.array(sorted(range(1 << n), key=lambda s: (bin(s).count("1"), s))[: ball_size(n, r)], dtype=np.uint64)
    w = np.asarray(words, dtype=np.uint64)
    parity = np.bitwise_count(w[:, None] & cols[None, :]) & 1
    return 1 - 2 * parity.astype(np.int64)


def ball_size(n: int, r: int) -> int:
    return sum(math.comb(n, k) for k in range(r + 1))


def bareiss_rank(rows) -> int:
    """Fraction-free Gaussian elimination over the integers; small inputs only."""
    a = [list(map(int, row)) for row in rows]
    if not a:
        return 0
    m, ncols = len(a), len(a[0])
    rank, prev = 0, 1
    for col in range(ncols):
        piv = next((i for i in range(rank, m) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, m):
            for j in range(col + 1, ncols):
                a[i][j] = (a[i][j] * p - a[i][col] * a[rank][j]) // prev
            a[i][col] = 0
        prev = p
        rank += 1
        if rank == m:
            break
    return rank


def exact_rank(mat) -> int:
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0
    rows = mat.tolist() if mat.dtype != object else [[int(v) for v in row] for row in mat]
    return int(flint.fmpz_mat(rows).rank())


def numeric_rank(mat: np.ndarray, tol: float = SVD_TOL) -> int:
    """Singular values below tol * sigma_max count as zero; symmetric input uses eigvalsh."""
    if mat.shape[0] == mat.shape[1] and np.array_equal(mat, mat.T):
        s = np.sort(np.abs(np.linalg.eigvalsh(mat)))[::-1]
    else:
        s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def _dyadic(x) -> Fraction:
    man, exp = x.man_exp
    return Fraction(int(man) * 2**exp) if exp >= 0 else Fraction(int(man), 2 ** (-exp))


def integer_levels(n: int, r: int, table: krawchouk.KrawchoukTable, dps: int = 60) -> list[int]:
    """f_r(k) for k = 0..n from the high-precision profile, scaled by a power of 2 to integers."""
    _, prof = ball_spectrum.high_precision_profile(n, r, dps=dps)
    a = [_dyadic(x) for x in prof]
    if any(x <= 0 for x in a):
        raise ParameterError("profile must be positive for the rank identity")
    vals = [sum(a[i] * table(i, k) for i in range(r + 1)) for k in range(n + 1)]
    den = max(v.denominator for v in vals)
    return [int(v * den) for v in vals]


@dataclass(frozen=True)
class GramReport:
    n: int
    d: int
    r: int
    size: int
    lambda_r: float
    f_levels: np.ndarray
    gram: np.ndarray | None
    rank: int | None
    rank_M: int | None
    rank_method: str
    numeric_rank: int | None
    rank_bound: Fraction
    trace_lhs: float
    trace_rhs: float
    distance_counts: np.ndarray

    @property
    def rank_holds(self) -> bool | None:
        if self.rank is None:
            return None
        return self.rank >= math.ceil(self.rank_bound)

    @property
    def trace_holds(self) -> bool:
        return bool(self.trace_lhs - self.trace_rhs >= -1e-9 * abs(self.trace_lhs))

    @property
    def passed(self) -> bool:
        return self.trace_holds and self.rank_holds is not False

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "r": self.r,
            "size": self.size,
            "lambda_r": float(self.lambda_r),
            "rank": self.rank,
            "rank_M": self.rank_M,
            "rank_method": self.rank_method,
            "numeric_rank": self.numeric_rank,
            "bound": str(self.rank_bound),
            "bound_ceil": math.ceil(self.rank_bound),
            "trace_lhs": float(self.trace_lhs),
            "trace_rhs": float(self.trace_rhs),
            "pass": bool(self.passed),
        }


def radius_for_distance(n: int, d: int) -> int:
    return ball_spectrum.radius_search(n, n - 2 * d + 1)


def build_gram(
    c: Code,
    ball: ball_spectrum.BallEigenData | None = None,
    d: int | None = None,
    exact: bool = True,
    numeric: bool = True,
) -> GramReport:
    """Assemble m[y, z] = f_r(|y + z|) and compute its rank and both sides of the trace inequality.

    Codes larger than MAX_GRAM skip the matrix and report the trace inequality only.
    """
    n = c.n
    if d is None:
        d = c.min_distance
    if d < 1:
        raise ParameterError("minimum distance must be >= 1")
    table = krawchouk.build_table(n)
    if ball is None:
        ball = ball_spectrum.ball_top_eigen(n, radius_for_distance(n, d), table)
    r = ball.r
    if ball.lambda_r < n - 2 * d + 1 - ball_spectrum.RADIUS_TOL:
        raise ParameterError(f"lambda_{r} = {ball.lambda_r:.6g} is below n - 2d + 1 = {n - 2 * d + 1}")
    f = ball.f_levels
    size = len(c)
    hist = c.pair_histogram.astype(np.float64)
    counts = 2.0 * hist
    counts[0] = size
    trace_lhs = 2.0 * d * size * f[0] ** 2
    trace_rhs = float(np.dot(counts, f**2))
    bound = Fraction(size, 2 * d)

    if size > MAX_GRAM:
        return GramReport(n, d, r, size, ball.lambda_r, f, None, None, None, "trace-only", None, bound,
                          trace_lhs, trace_rhs, counts)

    dist = kernels.distance_matrix(c.words).astype(np.intp)
    gram = f[dist]
    rank = rank_m = nrank = None
    method = "none"
    if exact:
        basis = c.basis if isinstance(c, LinearCode) else None
        rank_m, m_method = rank_of_characters(c.words, n, r, basis)
        levels = integer_levels(n, r, table)
        # rank(m) <= rank(M), and a modular rank of m is a lower bound on its rational rank
        for p in PRIMES:
            lv = np.array([v % p for v in levels], dtype=np.int64)
            mod_rank = int(flint.nmod_mat(lv[dist].tolist(), p).rank())
            if mod_rank == rank_m:
                rank = mod_rank
                method = f"{m_method}+modular-certified" if m_method != "modular" else "modular-lower-bound"
                break
        else:
            if size <= 256:
                rank, method = exact_rank(np.array(levels, dtype=object)[dist]), f"{m_method}+elimination"
            else:
                rank, method = mod_rank, "modular-lower-bound"
    if numeric:
        nrank = numeric_rank(gram)
    return GramReport(n, d, r, size, ball.lambda_r, f, gram, rank, rank_m, method, nrank, bound,
                      trace_lhs, trace_rhs, counts)


def elimination_rank(words, n: int, r: int) -> int:
    """Exact rank of M by integer elimination, on M itself or on M M^t, whichever is smaller."""
    size, cols = len(words), ball_size(n, r)
    if cols <= size:
        return exact_rank(character_matrix(words, n, r))
    # (M M^t)[y, z] = sum_{k <= r} K_k(|y + z|)
    table = krawchouk.build_table(n)
    levels = [sum(table(k, j) for k in range(r + 1)) for j in range(n + 1)]
    dist = kernels.distance_matrix(np.asarray(words, dtype=np.uint64)).astype(np.intp)
    return exact_rank(np.array(levels, dtype=np.int64)[dist])


def linear_character_rank(n: int, r: int, basis) -> int:
    """rank(M) for a linear code: distinct characters of a group are orthogonal, so the rank is
    the number of distinct restrictions W_S|_C over |S| <= r, i.e. distinct syndromes."""
    if n > 24:
        raise CapacityError("syndrome enumeration needs n <= 24")
    pts = np.arange(1 << n, dtype=np.uint64)
    ball = pts[np.bitwise_count(pts) <= r]
    synd = np.zeros(ball.size, dtype=np.uint64)
    for j, b in enumerate(basis):
        synd |= (np.bitwise_count(ball & np.uint64(b)) & 1).astype(np.uint64) << np.uint64(j)
    return int(np.unique(synd).size)


def rank_of_characters(words, n: int, r: int, basis=None) -> tuple[int, str]:
    """rank(M) and how it was obtained; "modular" is a lower bound on the rational rank."""
    if basis is not None:
        return linear_character_rank(n, r, basis), "distinct-characters"
    size, cols = len(words), ball_size(n, r)
    if min(size, cols) * max(size, cols) <= EXACT_ENTRIES or min(size, cols) <= 64:
        return elimination_rank(words, n, r), "elimination"
    mat = character_matrix(words, n, r) if cols <= size else None
    if mat is None:
        table = krawchouk.build_table(n)
        levels = [sum(table(k, j) for k in range(r + 1)) for j in range(n + 1)]
        dist = kernels.distance_matrix(np.asarray(words, dtype=np.uint64)).astype(np.intp)
        mat = np.array(levels, dtype=np.int64)[dist]
    rows = mat.tolist()
    best = max(int(flint.nmod_mat([[v % p for v in row] for row in rows], p).rank()) for p in PRIMES)
    return best, "modular"


@dataclass(frozen=True)
class TraceReport:
    inequality_holds: bool
    slack: float
    identity_lhs: float
    identity_rhs: float | None
    identity_rel_gap: float | None
    chain_lower: float
    chain_holds: bool
    eig_min_rel: float | None
    trace_sum_gap: float | None
    trace_square_gap: float | None

    @property
    def passed(self) -> bool:
        ok = self.inequality_holds and self.chain_holds
        if self.identity_rel_gap is not None:
            ok = ok and self.identity_rel_gap <= 1e-9
        return ok


def verify_trace_inequality(report: GramReport, words=None, rel_tol: float = 1e-9) -> TraceReport:
    """Check 2d N f(0)^2 >= sum_{y,z} f(y+z)^2 and the identity and bound it comes from.

    The identity sum_{y,z} (n - 2|y+z|) f^2(y+z) = 2^{3n} <(A phi) * phi, 1hat_C^2>_F
    is evaluated on the full cube when ``words`` is given and n <= 16.
    """
    n, f, counts = report.n, report.f_levels, report.distance_counts
    k = np.arange(n + 1)
    slack = report.trace_lhs - report.trace_rhs
    holds = bool(slack >= -rel_tol * abs(report.trace_lhs))

    ident_lhs = float(np.dot(counts, (n - 2 * k) * f**2))
    # pointwise A phi >= lambda phi with phi >= 0 gives the lower bound below
    chain = report.lambda_r * float(np.dot(counts, f**2))
    chain_ok = ident_lhs - chain >= -rel_tol * max(abs(ident_lhs), abs(chain))

    ident_rhs = gap = None
    if words is not None and n <= 16:
        data = ball_spectrum.ball_top_eigen(n, report.r)
        phi = data.on_cube()
        conv = cube_fourier.convolve(cube_fourier.adjacency_apply(phi), phi)
        ind_hat = cube_fourier.walsh_transform(cube_fourier.indicator(n, [int(w) for w in words]))
        ident_rhs = 2.0 ** (3 * n) * float(np.dot(conv.values, ind_hat.values**2))
        gap = abs(ident_lhs - ident_rhs) / max(abs(ident_lhs), 1e-300)

    eig_min = s1 = s2 = None
    if report.gram is not None and report.size <= 512:
        ev = np.linalg.eigvalsh(report.gram)
        scale = float(np.max(np.abs(ev))) or 1.0
        eig_min = float(ev.min() / scale)
        s1 = abs(float(ev.sum()) - report.size * f[0]) / abs(report.size * f[0])
        s2 = abs(float(np.dot(ev, ev)) - report.trace_rhs) / report.trace_rhs
    return TraceReport(holds, slack, ident_lhs, ident_rhs, gap, chain, chain_ok, eig_min, s1, s2)


@dataclass(frozen=True)
class RateDiagnostic:
    size: int
    columns: int
    dimension_bound: int
    rank_within_columns: bool | None
    size_exponent: float
    bound_exponent: float
    entropy_exponent: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def rank_vs_dimension_bound(report: GramReport) -> RateDiagnostic:
    """|C| against 2d sum_{k <= r} C(n, k), with the normalized log2 exponents."""
    from .rate_bounds import entropy

    n = report.n
    cols = ball_size(n, report.r)
    bound = 2 * report.d * cols
    return RateDiagnostic(
        size=report.size,
        columns=cols,
        dimension_bound=bound,
        rank_within_columns=None if report.rank is None else report.rank <= cols,
        size_exponent=math.log2(report.size) / n,
        bound_exponent=math.log2(bound) / n,
        entropy_exponent=entropy(report.r / n) if report.r <= n / 2 else 1.0,
    )


@dataclass(frozen=True)
class CoveringReport:
    r: int
    rank: int
    covered: int
    dual_size: int

    @property
    def passed(self) -> bool:
        return self.covered == self.rank * self.dual_size


def covered_count(n: int, centers, r: int) -> int:
    """|union of radius-r balls around ``centers``| by r rounds of neighbour dilation."""
    mask = np.zeros(1 << n, dtype=bool)
    mask[np.asarray(centers, dtype=np.int64)] = True
    idx = np.arange(1 << n, dtype=np.int64)
    for _ in range(r):
        grown = mask.copy()
        for i in range(n):
            grown |= mask[idx ^ (1 << i)]
        mask = grown
    return int(mask.sum())


def verify_covering_equivalence(c: LinearCode, r: int) -> CoveringReport:
    """dim span{Lambda_r delta_x : x in C} against |union_{z in C-perp} (z + B(r))| / |C-perp|."""
    n = c.n
    if n > 20:
        raise CapacityError("covering check needs n <= 20")
    if not 0 <= r <= n:
        raise ParameterError(f"radius {r} outside [0, {n}]")
    if min(len(c), ball_size(n, r)) > MAX_GRAM or len(c) * ball_size(n, r) > MAX_CHAR_ENTRIES:
        raise CapacityError("code too large for an exact rank of M")
    rank = elimination_rank(c.words, n, r)
    dual = dual_code(c)
    return CoveringReport(r, rank, covered_count(n, dual.words, r), len(dual))
