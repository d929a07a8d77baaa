"""Top eigenpair of the Hamming ball B_r and the induced symmetric function f_r.

The Perron eigenfunction phi_r of the subgraph induced by B_r is constant on
spheres, so the problem reduces to the (r+1)x(r+1) level operator
T[i][i-1] = i, T[i][i+1] = n - i. Conjugating by sqrt(C(n, i)) makes it a
symmetric tridiagonal matrix with off-diagonal sqrt((i+1)(n-i)).

Normalization: ||phi||_2 = 1 under the uniform measure, i.e.
2^-n sum_i C(n,i) a_i^2 = 1, and f_r = 2^n phihat_r = sum_i a_i K_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, lgamma, log

import numpy as np
from scipy.linalg import eigh_tridiagonal

from . import krawchouk
from .cube_fourier import BooleanFunction, weights
from .errors import CapacityError, ParameterError, VerificationError

RADIUS_TOL = 1e-9


@dataclass(frozen=True)
class BallEigenData:
    n: int
    r: int
    lambda_r: float
    profile: np.ndarray
    f_levels: np.ndarray

    def on_cube(self) -> BooleanFunction:
        """phi_r extended by zero outside B_r, as a point-domain function."""
        w = weights(self.n)
        vals = np.zeros(1 << self.n)
        inside = w <= self.r
        vals[inside] = self.profile[w[inside]]
        return BooleanFunction(self.n, vals)


def _log_binom(n, k):
    return lgamma(n + 1) - lgamma(k + 1) - lgamma(n - k + 1)


def level_operator(n: int, r: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal and off-diagonal of the symmetrized level operator."""
    i = np.arange(r, dtype=np.float64)
    return np.zeros(r + 1), np.sqrt((i + 1.0) * (n - i))


def ball_top_eigen(n: int, r: int, table: krawchouk.KrawchoukTable | None = None) -> BallEigenData:
    if n < 1 or not 0 <= r <= n:
        raise ParameterError(f"need n >= 1 and 0 <= r <= n, got n={n}, r={r}")
    if r == 0:
        lam = 0.0
        u = np.ones(1)
    else:
        d, e = level_operator(n, r)
        vals, vecs = eigh_tridiagonal(d, e, select="i", select_range=(r, r))
        lam = float(vals[0])
        u = vecs[:, 0]
        if u.sum() < 0:
            u = -u
    scale = np.array([0.5 * (n * log(2.0) - _log_binom(n, i)) for i in range(r + 1)])
    profile = u * np.exp(scale)
    if table is None or table.n != n:
        table = krawchouk.build_table(n)
    kf = np.array([[float(v) for v in table.values[i]] for i in range(r + 1)])
    f_levels = profile @ kf
    return BallEigenData(n, r, lam, profile, f_levels)


def top_eigenvalue(n: int, r: int) -> float:
    """lambda_r only; cheap for n in the thousands."""
    if r == 0:
        return 0.0
    d, e = level_operator(n, r)
    return float(eigh_tridiagonal(d, e, eigvals_only=True, select="i", select_range=(r, r))[0])


def radius_search(n: int, threshold: float) -> int:
    """Smallest r with lambda_r >= threshold (lambda_r increases with r)."""
    if threshold > n + RADIUS_TOL:
        raise ParameterError(f"no radius: lambda_r <= n={n} < threshold={threshold}")
    for r in range(n + 1):
        if top_eigenvalue(n, r) >= threshold - RADIUS_TOL:
            return r
    return n


def induced_ball_top_eigenvalue(n: int, r: int) -> float:
    """Brute-force oracle: top eigenvalue of the explicit induced subgraph on B_r."""
    if n > 14:
        raise CapacityError("explicit ball subgraph oracle is limited to n <= 14")
    from scipy.sparse import coo_matrix
    from scipy.sparse.linalg import eigsh

    w = weights(n)
    pts = np.flatnonzero(w <= r)
    index = -np.ones(1 << n, dtype=np.int64)
    index[pts] = np.arange(pts.size)
    rows, cols = [], []
    for i in range(n):
        nb = index[pts ^ (1 << i)]
        ok = nb >= 0
        rows.append(np.flatnonzero(ok))
        cols.append(nb[ok])
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    size = pts.size
    if size <= 2000:
        dense = np.zeros((size, size))
        dense[rows, cols] = 1.0
        return float(np.linalg.eigvalsh(dense)[-1])
    adj = coo_matrix((np.ones(rows.size), (rows, cols)), shape=(size, size)).tocsr()
    return float(eigsh(adj, k=1, which="LA", tol=1e-14, return_eigenvectors=False)[0])


def high_precision_profile(n: int, r: int, dps: int = 60):
    """lambda_r and the profile a_0..a_r as mpmath numbers at ``dps`` digits."""
    import mpmath

    with mpmath.workdps(dps):
        if r == 0:
            lam = mpmath.mpf(0)
            u = [mpmath.mpf(1)]
        else:
            mat = mpmath.zeros(r + 1, r + 1)
            for i in range(r):
                v = mpmath.sqrt(mpmath.mpf((i + 1) * (n - i)))
                mat[i, i + 1] = v
                mat[i + 1, i] = v
            evals, evecs = mpmath.eigsy(mat)
            top = max(range(r + 1), key=lambda j: evals[j])
            lam = evals[top]
            u = [evecs[i, top] for i in range(r + 1)]
            if sum(u) < 0:
                u = [-x for x in u]
        norm = mpmath.sqrt(mpmath.fsum(x * x for x in u))
        two_n = mpmath.mpf(2) ** n
        profile = [x / norm * mpmath.sqrt(two_n / comb(n, i)) for i, x in enumerate(u)]
        return +lam, [+a for a in profile]


@dataclass(frozen=True)
class IdentityReport:
    n: int
    r: int
    c: float
    c_fit: float
    identity_residual: float
    root_point: float
    root_value: float
    root_distance: float
    lambda_gap: float
    sphere_value: float
    sphere_expected: float
    off_sphere_residual: float


def level_adjacency(profile, n: int) -> np.ndarray:
    """(A phi) on each weight level j = 0..n for phi = sum_i a_i L_i."""
    a = np.zeros(n + 2)
    a[: len(profile)] = profile
    j = np.arange(n + 1)
    below = np.where(j >= 1, a[np.maximum(j - 1, 0)], 0.0)
    return j * below + (n - j) * a[j + 1]


def verify_eigen_identities(
    data: BallEigenData,
    table: krawchouk.KrawchoukTable,
    rel_tol: float = 1e-8,
    root_tol: float = 1e-6,
) -> IdentityReport:
    """Check f_r against K_{r+1}, the root of K_{r+1} at (n - lambda_r)/2 and A phi on spheres."""
    n, r, lam = data.n, data.r, data.lambda_r
    if r >= n:
        raise ParameterError("identities need r < n")
    k = np.arange(n + 1)
    kr1 = np.array([float(v) for v in table.values[r + 1]])
    c = (r + 1) * data.profile[r]
    lhs = (n - lam - 2 * k) * data.f_levels
    rhs = c * kr1
    scale = np.max(np.abs(rhs))
    resid = np.abs(lhs - rhs) / scale
    worst = int(np.argmax(resid))
    if resid[worst] > rel_tol:
        raise VerificationError(
            f"(n - lambda - 2k) f_r(k) != c K_{r + 1}(k) at k={worst}: rel residual {resid[worst]:.3g}", witness=worst
        )
    c_fit = float(lhs @ kr1 / (kr1 @ kr1))

    x0 = (n - lam) / 2.0
    kmax = float(np.max(np.abs(kr1)))
    root_value = abs(float(krawchouk.value(n, r + 1, x0))) / kmax
    if root_value > root_tol:
        raise VerificationError(f"K_{r + 1}((n - lambda)/2) = {root_value:.3g} (relative) is not zero", witness=x0)
    roots = krawchouk.find_roots(r + 1, table).roots
    root_distance = min(abs(x0 - x) for x in roots)

    a_phi = level_adjacency(data.profile, n)
    phi = np.zeros(n + 1)
    phi[: r + 1] = data.profile
    excess = a_phi - lam * phi
    sphere_expected = (r + 1) * data.profile[r]
    off = np.delete(excess, r + 1)
    off_resid = float(np.max(np.abs(off))) / float(np.max(data.profile))
    if off_resid > rel_tol or abs(excess[r + 1] - sphere_expected) > rel_tol * abs(sphere_expected):
        bad = int(np.argmax(np.abs(off)))
        raise VerificationError("A phi - lambda phi is not supported on the sphere of radius r+1", witness=bad)

    return IdentityReport(
        n=n,
        r=r,
        c=float(c),
        c_fit=c_fit,
        identity_residual=float(resid[worst]),
        root_point=x0,
        root_value=root_value,
        root_distance=root_distance,
        lambda_gap=lam - 2.0 * np.sqrt(r * (n - r)),
        sphere_value=float(excess[r + 1]),
        sphere_expected=float(sphere_expected),
        off_sphere_residual=off_resid,
    )
