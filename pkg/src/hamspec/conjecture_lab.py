"""Norm ratios of weight-slice character sums and eigenvalue moments of distance graphs.

For a code C and distance i, G(C, i) joins codewords at distance exactly i; B is its
adjacency matrix and lambda its spectrum with the uniform measure on C, so
||lambda||_2^2 = Tr B^2 / |C| and ||lambda||_4^4 = Tr B^4 / |C|. Tr B^4 is the number of
closed 4-walks, computed as sum_{x,y} M_{x,y}^2 with M_{x,y} the common-neighbour count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations

import numpy as np

from . import kernels
from .codes import Code, LinearCode, weight_slice
from .errors import CapacityError, ParameterError

DENSE_EIG_MAX = 2000
EXACT_BALANCE_MAX = 20


# ---------------------------------------------------------------------------
# weight slices of linear codes


@dataclass(frozen=True)
class SliceFunction:
    """f = sum_{a in A} W_a for a set A of words (typically a weight slice of a linear code)."""

    n: int
    A: np.ndarray

    @classmethod
    def from_code(cls, c: LinearCode, i: int) -> SliceFunction:
        return cls(c.n, weight_slice(c, i))

    def __len__(self):
        return int(self.A.size)


@dataclass(frozen=True)
class SliceReport:
    size: int
    norm4_4: int
    ratio: float
    bound: float
    max_pair_multiplicity: int

    @property
    def passed(self) -> bool:
        return self.ratio <= self.bound * (1 + 1e-12)


def xor_multiplicities(words) -> np.ndarray:
    """cnt(s) = #{(a, b) in A^2 : a + b = s}, over the values s that occur."""
    a = np.asarray(words, dtype=np.uint64)
    chunks = []
    for start in range(0, a.size, 2048):
        chunks.append((a[start : start + 2048, None] ^ a[None, :]).ravel())
    _, counts = np.unique(np.concatenate(chunks), return_counts=True)
    return counts.astype(np.int64)


def slice_norm_ratio(sf: SliceFunction) -> SliceReport:
    """||f||_4 / ||f||_2 with ||f||_4^4 = #{a + b + c + d = 0} and ||f||_2^2 = |A|."""
    if len(sf) == 0:
        raise ParameterError("slice is empty")
    cnt = xor_multiplicities(sf.A)
    q = int(np.dot(cnt, cnt))
    size = len(sf)
    return SliceReport(
        size=size,
        norm4_4=q,
        ratio=(q ** 0.25) / math.sqrt(size),
        bound=size ** 0.25,
        max_pair_multiplicity=int(cnt.max()),
    )


def slice_function_on_cube(sf: SliceFunction) -> np.ndarray:
    """Values of f on all 2^n points (integers stored as int64)."""
    if sf.n > 24:
        raise CapacityError("full-cube evaluation needs n <= 24")
    ind = np.zeros(1 << sf.n)
    ind[sf.A.astype(np.int64)] = 1.0
    return np.rint(kernels.fwht(ind)).astype(np.int64)


def cube_norm4_4(sf: SliceFunction) -> int:
    """2^-n sum_x f(x)^4 in exact integer arithmetic."""
    vals = slice_function_on_cube(sf)
    sq = [int(v) * int(v) for v in vals]
    total = sum(s * s for s in sq)
    q, rem = divmod(total, 1 << sf.n)
    if rem:
        raise ParameterError("cube fourth moment is not an integer multiple of 2^n")
    return q


# ---------------------------------------------------------------------------
# distance graphs


class DistanceGraph:
    """G(C, i): codewords joined when their distance is exactly i."""

    def __init__(self, c: Code, i: int):
        if not 1 <= i <= c.n:
            raise ParameterError(f"distance {i} outside [1, {c.n}]")
        self.code = c
        self.i = i

    @property
    def size(self) -> int:
        return len(self.code)

    @cached_property
    def _stats(self):
        return kernels.common_neighbor_stats(self.code.words, self.i)

    @property
    def degrees(self) -> np.ndarray:
        return np.asarray(self._stats[0], dtype=np.int64)

    @property
    def edge_count(self) -> int:
        return int(self.degrees.sum()) // 2

    @property
    def trace4(self) -> int:
        return int(self._stats[1])

    @property
    def max_common(self) -> int:
        """max over x != y of M_{x,y}."""
        return int(self._stats[2])

    def adjacency(self) -> np.ndarray:
        if self.size > 8192:
            raise CapacityError("dense adjacency limited to 8192 vertices")
        return (kernels.distance_matrix(self.code.words) == self.i).astype(np.float64)

    def eigenvalues(self) -> np.ndarray:
        if self.size > DENSE_EIG_MAX:
            raise CapacityError(f"dense eigensolver limited to {DENSE_EIG_MAX} vertices")
        return np.linalg.eigvalsh(self.adjacency())


@dataclass(frozen=True)
class MomentReport:
    size: int
    edges: int
    trace2: int
    trace4: int
    norm2_sq: float
    norm4_4: float
    ratio: float | None


def distance_graph_moments(g: DistanceGraph) -> MomentReport:
    """||lambda||_4 / ||lambda||_2 from walk counts; ratio is None for an edgeless graph."""
    deg = g.degrees
    t2 = int(deg.sum())
    t4 = g.trace4
    n2 = t2 / g.size
    n4 = t4 / g.size
    ratio = (n4 ** 0.25) / math.sqrt(n2) if t2 > 0 else None
    return MomentReport(g.size, t2 // 2, t2, t4, n2, n4, ratio)


def moment_bound(g: DistanceGraph) -> float:
    """Upper bound on ratio^4 from Tr B^4 <= sum D^2 + max M * sum D (D - 1)."""
    deg = g.degrees.astype(np.float64)
    if deg.sum() == 0:
        return math.nan
    t4_bound = float(np.sum(deg**2) + g.max_common * np.sum(deg * (deg - 1)))
    size = g.size
    return (t4_bound / size) / (deg.sum() / size) ** 2


@dataclass(frozen=True)
class SpectrumReport:
    eigenvalues: np.ndarray
    cube_values: np.ndarray
    max_abs_diff: float
    method: str

    @property
    def passed(self) -> bool:
        return self.max_abs_diff <= 1e-8


def linear_code_spectrum_equivalence(c: LinearCode, i: int) -> SpectrumReport:
    """Sorted values of F = sum_{|a| = i, a in C} W_a over the cube, one per C-perp coset,
    against the sorted spectrum of G(C, i)."""
    n = c.n
    if n > 20:
        raise CapacityError("spectrum equivalence needs n <= 20")
    sf = SliceFunction.from_code(c, i)
    big_f = np.sort(slice_function_on_cube(sf).astype(np.float64))
    dual_size = (1 << n) // len(c)
    cube_side = big_f[::dual_size]
    g = DistanceGraph(c, i)
    if g.size <= 2048:
        eig = np.sort(g.eigenvalues())
        method = "dense"
    else:
        # characters of C in its own coordinates: word index j has coordinates j
        ind = np.zeros(len(c))
        ind[np.flatnonzero(c.weights() == i)] = 1.0
        eig = np.sort(kernels.fwht(ind))
        method = "cayley"
    return SpectrumReport(eig, cube_side, float(np.max(np.abs(eig - cube_side))), method)


# ---------------------------------------------------------------------------
# balancedness


@dataclass(frozen=True)
class BalancednessEstimate:
    t_lower: float
    subset: tuple
    method: str


def _ratio(edges_in: int, k: int, base: float) -> float:
    return (edges_in / k) / base


def _exact_balancedness(adj_bits, size, edges):
    base = edges / size
    masks = np.arange(1, 1 << size, dtype=np.int64)
    inside = np.zeros(masks.size, dtype=np.int64)
    for v in range(size):
        member = (masks >> v) & 1
        inside += member * np.bitwise_count(masks & adj_bits[v]).astype(np.int64)
    inside //= 2
    k = np.bitwise_count(masks).astype(np.int64)
    ratios = (inside / k) / base
    best = int(np.argmax(ratios))
    m = int(masks[best])
    return float(ratios[best]), tuple(v for v in range(size) if (m >> v) & 1)


def estimate_balancedness(g: DistanceGraph, budget: int = 2000, seed: int = 0) -> BalancednessEstimate:
    """Largest found (|E(X)| / |X|) / (|E| / |V|): a lower bound on the balancedness constant t."""
    edges = g.edge_count
    if edges == 0:
        raise ParameterError("graph has no edges")
    size = g.size
    adj = g.adjacency().astype(bool)
    if size <= EXACT_BALANCE_MAX:
        bits = [int(sum(1 << u for u in np.flatnonzero(adj[v]))) for v in range(size)]
        t, sub = _exact_balancedness(bits, size, edges)
        return BalancednessEstimate(t, sub, "exact")
    base = edges / size

    # greedy peeling: drop a minimum-degree vertex, remember the densest prefix
    alive = np.ones(size, dtype=bool)
    deg = adj.sum(axis=1).astype(np.int64)
    e_in = edges
    best_t, best_set = _ratio(e_in, size, base), alive.copy()
    for k in range(size, 1, -1):
        cand = np.where(alive, deg, np.iinfo(np.int64).max)
        v = int(np.argmin(cand))
        alive[v] = False
        e_in -= int(deg[v])
        deg[adj[v] & alive] -= 1
        deg[v] = 0
        t = _ratio(e_in, k - 1, base)
        if t > best_t:
            best_t, best_set = t, alive.copy()

    # local search: flip single vertices while it helps
    rng = np.random.default_rng(seed)
    cur = best_set.copy()
    cur_in = int(adj[np.ix_(cur, cur)].sum()) // 2
    cur_k = int(cur.sum())
    for _ in range(budget):
        v = int(rng.integers(size))
        links = int(adj[v, cur].sum())
        if cur[v]:
            if cur_k == 1:
                continue
            new_in, new_k = cur_in - links, cur_k - 1
        else:
            new_in, new_k = cur_in + links, cur_k + 1
        if _ratio(new_in, new_k, base) >= _ratio(cur_in, cur_k, base):
            cur[v] = not cur[v]
            cur_in, cur_k = new_in, new_k
            t = _ratio(cur_in, cur_k, base)
            if t > best_t:
                best_t, best_set = t, cur.copy()
    return BalancednessEstimate(best_t, tuple(int(v) for v in np.flatnonzero(best_set)), "peeling+local")


# ---------------------------------------------------------------------------
# rhombic tuples, common neighbours, degree moments


@dataclass(frozen=True)
class RhombicReport:
    count: int
    trace4_common: int
    size_times_Bi_sq: float

    @property
    def consistent(self) -> bool:
        return self.count == self.trace4_common


def count_rhombic(c: Code, i: int) -> RhombicReport:
    """#{(x, y, z, w) in C^4 : |x-y| = |y-z| = |z-w| = |w-x| = i}, by 4-walks on the sparse graph."""
    from scipy.sparse import csr_matrix

    if len(c) > 10_000:
        raise CapacityError("rhombic count limited to |C| <= 10^4")
    g = DistanceGraph(c, i)
    rows, cols = np.nonzero(kernels.distance_matrix(c.words) == i)
    b = csr_matrix((np.ones(rows.size, dtype=np.int64), (rows, cols)), shape=(len(c), len(c)))
    b2 = b @ b
    count = int(b2.multiply(b2).sum())
    bi = c.distance_distribution[i]
    return RhombicReport(count, g.trace4, len(c) * bi * bi)


def pairwise_common_neighbors(c: Code, i: int) -> int:
    """max over x != y in C of |{z in C : |x - z| = |y - z| = i}|."""
    if len(c) > 10_000:
        raise CapacityError("pair scan limited to |C| <= 10^4")
    return DistanceGraph(c, i).max_common


def d_set_size(n: int, t: int, i: int) -> int:
    """|{y : |y| = |x - y| = i}| for |x| = t: C(t, t/2) C(n - t, i - t/2), zero unless integral."""
    if t % 2:
        return 0
    h = t // 2
    if not (0 <= h <= t and 0 <= i - h <= n - t):
        return 0
    return math.comb(t, h) * math.comb(n - t, i - h)


def moment_ratio_Dxk(c: Code, k: int) -> float:
    """E_x D_{x,k}^2 / (E_x D_{x,k})^2 over uniform x in C."""
    deg = kernels.distance_matrix(c.words) == k
    dx = deg.sum(axis=1).astype(np.float64)
    if dx.sum() == 0:
        raise ParameterError(f"no pairs at distance {k} (B_k = 0)")
    return float(np.mean(dx**2) / np.mean(dx) ** 2)


# ---------------------------------------------------------------------------
# counterexample with a triangle component


def spread_code(n: int, size: int, d: int, seed: int, max_tries: int = 1_000_000) -> Code:
    """Random words accepted greedily while they keep distance >= d from all earlier ones."""
    rng = np.random.default_rng(seed)
    words = np.empty(0, dtype=np.uint64)
    tries = 0
    while words.size < size:
        tries += 1
        if tries > max_tries:
            raise ParameterError(f"could not place {size} words at distance {d} in n={n}")
        w = rng.integers(0, 1 << n, dtype=np.uint64)
        if words.size == 0 or int(np.bitwise_count(words ^ w).min()) >= d:
            words = np.append(words, w)
    return Code(n, words)


def build_counterexample(c: Code, seed: int = 0) -> tuple[Code, int]:
    """Add y = x + 1_{P u Q} and z = x + 1_{P u R} (|P| = |Q| = |R| = k/2, k = floor(d/3)).

    x, y, z are pairwise at distance k and every other distance stays above k, so G(C', k)
    is a triangle plus isolated vertices. Returns (C', k).
    """
    d = c.min_distance
    k = d // 3
    if d < 3 or k % 2 or k == 0:
        raise ParameterError(f"need floor(d/3) even and positive, got d={d}")
    h = k // 2
    if 3 * h > c.n:
        raise ParameterError("not enough coordinates for three disjoint blocks")
    rng = np.random.default_rng(seed)
    x = int(c.words[int(rng.integers(len(c)))])
    coords = rng.permutation(c.n)[: 3 * h]
    p, q, r = (sum(1 << int(j) for j in coords[s * h : (s + 1) * h]) for s in range(3))
    y, z = x ^ p ^ q, x ^ p ^ r
    return Code(c.n, np.append(c.words, np.array([y, z], dtype=np.uint64))), k


@dataclass(frozen=True)
class CounterexampleReport:
    size: int
    k: int
    nonzero_eigenvalues: int
    ratio: float
    closed_form: float
    min_distance: int

    @property
    def passed(self) -> bool:
        return (
            self.nonzero_eigenvalues == 3
            and abs(self.ratio - self.closed_form) <= 1e-6 * self.closed_form
            and self.min_distance == self.k
        )


def counterexample_report(c_prime: Code, k: int, eig_tol: float = 1e-8) -> CounterexampleReport:
    g = DistanceGraph(c_prime, k)
    ev = g.eigenvalues()
    m = distance_graph_moments(g)
    return CounterexampleReport(
        size=len(c_prime),
        k=k,
        nonzero_eigenvalues=int(np.sum(np.abs(ev) > eig_tol)),
        ratio=float(m.ratio),
        closed_form=(len(c_prime) / 2.0) ** 0.25,
        min_distance=c_prime.min_distance,
    )


def distance_scan(d: int, eps0: float = 0.2) -> list[int]:
    """Distances d .. ceil((1 + eps0) d)."""
    return list(range(d, math.ceil((1 + eps0) * d) + 1))


def brute_force_balancedness(adj: np.ndarray) -> float:
    """Max over all nonempty subsets; tiny graphs only, used as a test oracle."""
    size = adj.shape[0]
    edges = int(adj.sum()) // 2
    base = edges / size
    best = 0.0
    for k in range(1, size + 1):
        for sub in combinations(range(size), k):
            idx = list(sub)
            e = int(adj[np.ix_(idx, idx)].sum()) // 2
            best = max(best, (e / k) / base)
    return best
