"""Binary codes, GF(2) linear codes and the two random-code ensembles.

Words are Python/numpy integers; bit i of a word is coordinate i, and in the
text file format character i of a row is coordinate i.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations

import numpy as np

from . import kernels
from .errors import CapacityError, ParameterError

MAX_LENGTH = 63
MAX_SPAN = 1 << 24


def popcount(words) -> np.ndarray:
    return np.bitwise_count(np.asarray(words, dtype=np.uint64)).astype(np.int64)


class Code:
    """A set of distinct n-bit words with lazily cached distance statistics."""

    def __init__(self, n: int, words):
        if not 1 <= n <= MAX_LENGTH:
            raise ParameterError(f"code length must be in [1, {MAX_LENGTH}], got {n}")
        arr = np.asarray([int(w) for w in words] if not isinstance(words, np.ndarray) else words, dtype=np.uint64)
        arr = arr.reshape(-1)
        if arr.size and int(arr.max()) >> n:
            raise ParameterError(f"word does not fit in {n} bits")
        if np.unique(arr).size != arr.size:
            raise ParameterError("code words must be distinct")
        arr.flags.writeable = False
        self.n = n
        self.words = arr

    def __len__(self):
        return int(self.words.size)

    def __iter__(self):
        return (int(w) for w in self.words)

    def __repr__(self):
        return f"{type(self).__name__}(n={self.n}, size={len(self)})"

    @cached_property
    def pair_histogram(self) -> np.ndarray:
        """Unordered pairs {x, y}, x != y, by distance."""
        return kernels.distance_histogram(self.words, self.n)

    @cached_property
    def min_distance(self) -> int:
        if len(self) < 2:
            raise ParameterError("minimum distance needs at least two words")
        return int(np.flatnonzero(self.pair_histogram)[0])

    @cached_property
    def distance_distribution(self) -> np.ndarray:
        """B_k = |{(x, y) in C^2 : |x - y| = k}| / |C|."""
        b = 2.0 * self.pair_histogram / len(self)
        b[0] = 1.0
        return b

    def weights(self) -> np.ndarray:
        return popcount(self.words)


def _reduce(basis: dict, v: int) -> int:
    """Reduce v against an echelon basis {pivot bit: row}."""
    while v:
        top = v.bit_length() - 1
        row = basis.get(top)
        if row is None:
            return v
        v ^= row
    return 0


def echelon(vectors) -> dict:
    basis: dict[int, int] = {}
    for v in vectors:
        v = _reduce(basis, int(v))
        if v:
            basis[v.bit_length() - 1] = v
    return basis


def span_words(vectors) -> np.ndarray:
    """All GF(2) combinations of ``vectors``; rank-deficient inputs are fine."""
    words = np.zeros(1, dtype=np.uint64)
    for v in echelon(vectors).values():
        if words.size * 2 > MAX_SPAN:
            raise CapacityError(f"span larger than {MAX_SPAN} words")
        words = np.concatenate([words, words ^ np.uint64(v)])
    return words


class LinearCode(Code):
    """GF(2) span of the generator rows v_1..v_k, materialized."""

    def __init__(self, n: int, generators):
        gens = tuple(int(g) for g in generators)
        if any(g >> n for g in gens):
            raise ParameterError(f"generator does not fit in {n} bits")
        self.generators = gens
        self.basis = tuple(sorted(echelon(gens).values(), reverse=True))
        super().__init__(n, span_words(self.basis))

    @property
    def dimension(self) -> int:
        return len(self.basis)

    @cached_property
    def min_distance(self) -> int:
        if len(self) < 2:
            raise ParameterError("minimum distance needs at least two words")
        w = self.weights()
        return int(w[w > 0].min())


def min_distance(c: Code) -> int:
    return c.min_distance


def distance_distribution(c: Code) -> np.ndarray:
    return c.distance_distribution


def weight_slice(c: Code, i: int) -> np.ndarray:
    """Words of C of Hamming weight exactly i."""
    if not 0 <= i <= c.n:
        raise ParameterError(f"weight {i} outside [0, {c.n}]")
    return np.sort(c.words[c.weights() == i])


def dual_code(c: LinearCode) -> LinearCode:
    """C-perp = {y : <x, y> = 0 mod 2 for all x in C}."""
    n = c.n
    if n > 24:
        raise CapacityError("dual code materialization is limited to n <= 24")
    basis = echelon(c.basis)
    # full reduction so each pivot column appears in exactly one row
    pivots = sorted(basis)
    for p in pivots:
        for q in pivots:
            if q != p and (basis[q] >> p) & 1:
                basis[q] ^= basis[p]
    free = [j for j in range(n) if j not in basis]
    dual = []
    for j in free:
        v = 1 << j
        for p, row in basis.items():
            if (row >> j) & 1:
                v |= 1 << p
        dual.append(v)
    return LinearCode(n, dual)


def sample_random_linear(n: int, k: int, seed: int) -> LinearCode:
    """Span of k independent uniform words (the dimension may come out below k)."""
    if k < 0 or k > min(n, 24):
        raise ParameterError(f"need 0 <= k <= min(n, 24), got k={k}, n={n}")
    if n > MAX_LENGTH:
        raise ParameterError(f"n must be <= {MAX_LENGTH}")
    rng = np.random.default_rng(seed)
    gens = rng.integers(0, 1 << n, size=k, dtype=np.uint64, endpoint=False) if k else []
    return LinearCode(n, [int(g) for g in gens])


def _prescribed_size(n: int, rate: float) -> int:
    e = rate * n
    if abs(e - round(e)) < 1e-9:
        return 1 << int(round(e))
    return math.floor(2.0**e)


@dataclass(frozen=True)
class RandomModelParams:
    """Parameters of the random-code model: N points, then erase close pairs.

    d_0 is the largest integer in [1, N] with (N / 2^n) sum_{l < d_0} C(n, l) <= tau,
    and theta = C(n, d_0) N / 2^n.
    """

    n: int
    R: float
    tau: float
    N: int
    d_0: int
    theta: float

    @property
    def M(self) -> int:
        return self.N * (self.N - 1) // 2

    def p(self, ell: int) -> float:
        return math.comb(self.n, ell) / 2.0**self.n


def model_params(n: int, R: float, tau: float = 0.05) -> RandomModelParams:
    if not 0 < R < 1:
        raise ParameterError(f"rate must lie in (0, 1), got {R}")
    if tau <= 0:
        raise ParameterError(f"tau must be positive, got {tau}")
    if n > MAX_LENGTH:
        raise ParameterError(f"n must be <= {MAX_LENGTH}")
    N = _prescribed_size(n, R)
    budget = Fraction(str(tau)) * (1 << n)
    d0, acc = 0, 0
    while d0 < min(N, n) and (acc + math.comb(n, d0)) * N <= budget:
        acc += math.comb(n, d0)
        d0 += 1
    if d0 < 1:
        raise ParameterError(f"tau={tau} too small: N/2^n = {N / 2.0**n:.3g} already exceeds it, so d_0 < 1")
    theta = math.comb(n, d0) * N / 2.0**n
    if theta > 0.5:
        raise ParameterError(f"theta = {theta:.3g} > 1/2 for tau={tau}; choose a smaller tau")
    return RandomModelParams(n=n, R=R, tau=tau, N=N, d_0=d0, theta=theta)


def draw_points(params: RandomModelParams, seed: int) -> np.ndarray:
    """The pre-erasure list x_1..x_N (duplicates possible)."""
    if params.N > 1 << 20:
        raise CapacityError("random general codes are limited to N <= 2^20")
    rng = np.random.default_rng(seed)
    return rng.integers(0, 1 << params.n, size=params.N, dtype=np.uint64)


def _ball_offsets(n: int, radius: int) -> np.ndarray:
    out = []
    for w in range(1, radius + 1):
        for bits in combinations(range(n), w):
            out.append(sum(1 << b for b in bits))
    return np.array(out, dtype=np.uint64)


def _close_mask_by_ball(points, radius, n):
    uniq, inverse, counts = np.unique(points, return_inverse=True, return_counts=True)
    flagged = counts > 1
    for e in _ball_offsets(n, radius):
        shifted = uniq ^ e
        pos = np.searchsorted(uniq, shifted)
        pos[pos == uniq.size] = 0
        flagged |= uniq[pos] == shifted
    return flagged[inverse]


def close_pair_mask(points, radius: int, n: int) -> np.ndarray:
    """mask[a]: some other list entry lies within distance ``radius`` of points[a]."""
    points = np.asarray(points, dtype=np.uint64)
    size = points.size
    ball = sum(math.comb(n, w) for w in range(1, radius + 1))
    if size * ball < size * size // 2:
        return _close_mask_by_ball(points, radius, n)
    return kernels.close_pair_mask(points, radius)


def erase_close_pairs(points, d_0: int, n: int) -> np.ndarray:
    """Drop both endpoints of every pair at distance <= d_0 - 1 (duplicates included)."""
    points = np.asarray(points, dtype=np.uint64)
    return points[~close_pair_mask(points, d_0 - 1, n)]


def sample_random_general(params: RandomModelParams, seed: int) -> Code:
    pts = draw_points(params, seed)
    return Code(params.n, erase_close_pairs(pts, params.d_0, params.n))


def trial_seed(master: int, t: int) -> int:
    return int(master) ^ int(t)


# ---------------------------------------------------------------------------
# ensemble statistics for the pre- and post-erasure lists


def triple_count(dmat: np.ndarray, ell: int, close_radius: int) -> int:
    """Triples {a, b, c} with one pairwise distance equal to ell and one <= close_radius.

    Requires ell > close_radius so the two edge types are disjoint.
    """
    size = dmat.shape[0]
    off = ~np.eye(size, dtype=bool)
    e = ((dmat == ell) & off).astype(np.int64)
    cl = ((dmat <= close_radius) & off).astype(np.int64)
    apex = int((e.sum(axis=1) * cl.sum(axis=1)).sum())
    two_e = int(((e @ e) * cl).sum()) // 2
    two_cl = int(((cl @ cl) * e).sum()) // 2
    return apex - two_e - two_cl


@dataclass
class _Trial:
    x_counts: dict
    y_counts: dict
    indicators: dict
    survivor_fraction: float
    min_distance: int | None
    pair_ratio: dict


@dataclass
class StatsReport:
    n: int
    R: float
    tau: float
    N: int
    d_0: int
    theta: float
    trials: int
    pre: dict = field(default_factory=dict)
    triples: dict = field(default_factory=dict)
    independence: dict = field(default_factory=dict)
    post: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "R": self.R,
            "tau": self.tau,
            "N": self.N,
            "d_0": self.d_0,
            "theta": self.theta,
            "trials": self.trials,
            "pre_erasure": self.pre,
            "triples": self.triples,
            "pairwise_independence": self.independence,
            "post_erasure": self.post,
        }


def _run_trial(params: RandomModelParams, seed: int, ells, ks) -> _Trial:
    n, d0 = params.n, params.d_0
    pts = draw_points(params, seed)
    hist = kernels.distance_histogram(pts, n)
    x_counts = {ell: int(hist[ell]) for ell in ells}
    y_counts = {}
    if params.N <= 2048:
        dmat = kernels.distance_matrix(pts)
        y_counts = {ell: triple_count(dmat, ell, d0 - 1) for ell in ells if ell >= d0}
    # Z_{01}, Z_{02} share a vertex, Z_{01}, Z_{23} do not
    indicators = {}
    if params.N >= 4:
        d01 = int(np.bitwise_count(pts[0] ^ pts[1]))
        d02 = int(np.bitwise_count(pts[0] ^ pts[2]))
        d23 = int(np.bitwise_count(pts[2] ^ pts[3]))
        indicators = {ell: (d01 == ell, d02 == ell, d23 == ell) for ell in ells}
    survivors = erase_close_pairs(pts, d0, n)
    code_hist = kernels.distance_histogram(survivors, n)
    nz = np.flatnonzero(code_hist)
    mind = int(nz[0]) if survivors.size >= 2 and nz.size else None
    expected = {k: params.M * params.p(k) for k in ks}
    pair_ratio = {k: (int(code_hist[k]) / expected[k]) for k in ks}
    return _Trial(x_counts, y_counts, indicators, survivors.size / params.N, mind, pair_ratio)


def ensemble_statistics(
    trials: int,
    params: RandomModelParams,
    seed: int = 0,
    ells=None,
    ks=None,
    threads: int | None = None,
) -> StatsReport:
    """Monte-Carlo check of pair statistics before and after the erasure step.

    Trial t draws its list with seed ``seed ^ t``; results do not depend on
    ``threads``.
    """
    if trials < 30:
        raise ParameterError("ensemble statistics need at least 30 trials")
    n, d0 = params.n, params.d_0
    if ells is None:
        ells = sorted({d0, n // 2})
    if ks is None:
        ks = list(range(d0, n // 2 + 1))
    seeds = [trial_seed(seed, t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=threads or None) as pool:
        results = list(pool.map(lambda s: _run_trial(params, s, ells, ks), seeds))

    rep = StatsReport(n, params.R, params.tau, params.N, d0, params.theta, trials)
    for ell in ells:
        xs = np.array([t.x_counts[ell] for t in results], dtype=np.float64)
        p = params.p(ell)
        mean_exp = params.M * p
        var_exp = params.M * p * (1 - p)
        std_err = math.sqrt(var_exp / trials)
        rep.pre[ell] = {
            "mean": float(xs.mean()),
            "expected_mean": mean_exp,
            "z": float((xs.mean() - mean_exp) / std_err) if std_err > 0 else 0.0,
            "variance": float(xs.var(ddof=1)),
            "expected_variance": var_exp,
            "variance_ratio": float(xs.var(ddof=1) / var_exp) if var_exp > 0 else float("nan"),
        }
        if results[0].y_counts and ell in results[0].y_counts:
            ys = np.array([t.y_counts[ell] for t in results], dtype=np.float64)
            scale = params.tau * mean_exp
            rep.triples[ell] = {
                "mean": float(ys.mean()),
                "tau_M_p": scale,
                "ratio": float(ys.mean() / scale) if scale > 0 else float("nan"),
            }
        if results[0].indicators:
            z = np.array([t.indicators[ell] for t in results], dtype=np.float64)
            rep.independence[ell] = {
                "p": p,
                "cov_shared_vertex": float(np.cov(z[:, 0], z[:, 1])[0, 1]),
                "cov_disjoint": float(np.cov(z[:, 0], z[:, 2])[0, 1]),
                "p_times_1_minus_p": p * (1 - p),
            }
    surv = np.array([t.survivor_fraction for t in results])
    dists = [t.min_distance for t in results]
    lower = 1 - 5 * params.tau
    ratios = {k: np.array([t.pair_ratio[k] for t in results]) for k in ks}
    rep.post = {
        "survivor_fraction_mean": float(surv.mean()),
        "survivor_fraction_min": float(surv.min()),
        "survivor_threshold": lower,
        "fraction_survivors_ok": float(np.mean(surv >= lower)),
        "fraction_min_distance_d0": float(np.mean([d == d0 for d in dists])),
        "min_distance_at_least_d0": all(d is None or d >= d0 for d in dists),
        "pair_count_ratio_mean": {k: float(v.mean()) for k, v in ratios.items()},
        "pair_count_lower_factor": lower,
    }
    return rep


def ensemble_statistics_ok(rep: StatsReport, z_max: float = 4.0, var_factor: float = 2.0) -> bool:
    for row in rep.pre.values():
        if abs(row["z"]) > z_max:
            return False
        vr = row["variance_ratio"]
        if not (1.0 / var_factor <= vr <= var_factor):
            return False
    return rep.post["min_distance_at_least_d0"]


# ---------------------------------------------------------------------------
# text file format


def _word_to_str(w: int, n: int) -> str:
    return "".join("1" if (w >> i) & 1 else "0" for i in range(n))


def _str_to_word(s: str, n: int) -> int:
    if len(s) != n or set(s) - {"0", "1"}:
        raise ParameterError(f"bad codeword row {s!r} for n={n}")
    return sum(1 << i for i, ch in enumerate(s) if ch == "1")


def format_code(c: Code) -> str:
    lines = [f"n={c.n}"]
    if isinstance(c, LinearCode):
        lines.append(f"linear k={len(c.generators)}")
        lines.extend(_word_to_str(g, c.n) for g in c.generators)
    else:
        lines.extend(_word_to_str(int(w), c.n) for w in c.words)
    return "\n".join(lines) + "\n"


def write_code(c: Code, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_code(c))


def parse_code(text: str) -> Code:
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines or not lines[0].startswith("n="):
        raise ParameterError("code file must start with 'n=<int>'")
    try:
        n = int(lines[0][2:])
    except ValueError as exc:
        raise ParameterError(f"bad header {lines[0]!r}") from exc
    body = lines[1:]
    if body and body[0].startswith("linear"):
        head = body[0].split()
        if len(head) != 2 or not head[1].startswith("k="):
            raise ParameterError(f"bad header {body[0]!r}; expected 'linear k=<int>'")
        k = int(head[1][2:])
        rows = body[1:]
        if len(rows) != k:
            raise ParameterError(f"header says k={k} but {len(rows)} generator rows follow")
        return LinearCode(n, [_str_to_word(r, n) for r in rows])
    return Code(n, [_str_to_word(r, n) for r in body])


def read_code(path) -> Code:
    with open(path) as fh:
        return parse_code(fh.read())


def hamming_7_4() -> LinearCode:
    """The [7,4,3] Hamming code from its standard systematic generator."""
    rows = ["1000110", "0100101", "0010011", "0001111"]
    return LinearCode(7, [_str_to_word(r, 7) for r in rows])


def repetition_code(n: int) -> LinearCode:
    return LinearCode(n, [(1 << n) - 1])
