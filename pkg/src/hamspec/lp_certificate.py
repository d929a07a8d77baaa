"""Delsarte dual certificates built from a nonnegative function f with A f >= lambda f.

G = (A f) * f - (lambda - 1)(f * f) has Ghat(alpha) = (n - 2|alpha| - lambda + 1) fhat(alpha)^2.
With d = (n - lambda + 1) / 2, Ghat <= 0 on weights >= d and G >= 0 pointwise, so Ghat is a
feasible dual polynomial, giving A(n, d) <= 2^n Ghat(0) / G(0) (the ``raw`` bound below).
The other reported number is s = 2^n (E f)^2 / E f^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import ball_spectrum
from .cube_fourier import (
    BooleanFunction,
    adjacency_apply,
    convolve,
    walsh_transform,
    weights,
)
from .errors import CapacityError, ParameterError, VerificationError

SIGN_TOL = 1e-10
MAX_CERT_DIM = 20


@dataclass(frozen=True)
class DualCertificate:
    f: BooleanFunction
    lam: float
    G: BooleanFunction
    Ghat: BooleanFunction
    d: float
    identity_residual: float
    min_G: float
    max_Ghat_far: float
    Ghat_zero: float
    s: float
    raw: float

    @property
    def n(self) -> int:
        return self.f.n

    @property
    def feasible(self) -> bool:
        return self.min_G >= -SIGN_TOL and self.max_Ghat_far <= SIGN_TOL and self.Ghat_zero > 0

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "lambda": self.lam,
            "d": self.d,
            "feasible": self.feasible,
            "s": self.s,
            "raw": self.raw,
            "identity_residual": self.identity_residual,
        }


def build_certificate(f: BooleanFunction, lam: float) -> DualCertificate:
    """Assemble G and Ghat; raise with a witness if f < 0 or A f < lambda f somewhere."""
    n = f.n
    if n > MAX_CERT_DIM:
        raise CapacityError(f"certificates are built on the full cube, n <= {MAX_CERT_DIM}")
    norm = math.sqrt(float(np.mean(f.values**2)))
    if norm == 0:
        raise ParameterError("f must not vanish identically")
    f = f.scale(1.0 / norm)
    neg = np.flatnonzero(f.values < -SIGN_TOL)
    if neg.size:
        raise VerificationError("f must be nonnegative", witness=int(neg[0]))
    af = adjacency_apply(f)
    gap = af.values - lam * f.values
    bad = np.flatnonzero(gap < -SIGN_TOL)
    if bad.size:
        raise VerificationError(f"A f >= lambda f fails (gap {gap[bad[0]]:.3g})", witness=int(bad[0]))
    d = (n - lam + 1) / 2.0
    if d < 1:
        raise ParameterError(f"target distance (n - lambda + 1)/2 = {d:g} is below 1")

    G = convolve(af, f) - convolve(f, f).scale(lam - 1.0)
    Ghat = walsh_transform(G)
    fhat = walsh_transform(f).values
    w = weights(n)
    expected = (n - 2 * w - lam + 1) * fhat**2
    scale = max(1.0, float(np.max(np.abs(expected))))
    resid = float(np.max(np.abs(Ghat.values - expected))) / scale

    far = w >= d - 1e-12
    max_far = float(Ghat.values[far].max()) if far.any() else -np.inf
    ef = float(np.mean(f.values))
    ef2 = float(np.mean(f.values**2))
    g0 = float(G.values[0])
    return DualCertificate(
        f=f,
        lam=float(lam),
        G=G,
        Ghat=Ghat,
        d=d,
        identity_residual=resid,
        min_G=float(G.values.min()),
        max_Ghat_far=max_far,
        Ghat_zero=float(Ghat.values[0]),
        s=2.0**n * ef**2 / ef2,
        raw=2.0**n * float(Ghat.values[0]) / g0 if g0 > 0 else math.inf,
    )


def extract_bound(cert: DualCertificate) -> dict:
    """Both candidate bounds; ``raw`` is the one the dual LP argument proves."""
    if not cert.feasible:
        raise VerificationError("certificate is not dual feasible")
    return {"s": cert.s, "raw": cert.raw}


def certificate_from_ball(n: int, d: int) -> tuple[DualCertificate, int]:
    """f = phi_r for the smallest r with lambda_r >= n - 2d + 1, and lambda = n - 2d + 1."""
    if not 1 <= d <= n / 2:
        raise ParameterError(f"need 1 <= d <= n/2, got d={d}, n={n}")
    lam = n - 2 * d + 1
    r = ball_spectrum.radius_search(n, lam)
    data = ball_spectrum.ball_top_eigen(n, r)
    return build_certificate(data.on_cube(), lam), r


def bound_exponent(bound: float, n: int) -> float:
    return math.log2(bound) / n


# ---------------------------------------------------------------------------
# brute-force A(n, d): maximum clique in the "distance >= d" graph on {0,1}^n


def _max_clique(adj: list[int]) -> int:
    """Exact maximum clique size; adjacency given as bitmasks. Greedy colouring bounds."""
    best = 0

    def colour_order(cand: int):
        order, bounds = [], []
        colour = 0
        uncoloured = cand
        while uncoloured:
            colour += 1
            avail = uncoloured
            while avail:
                v = (avail & -avail).bit_length() - 1
                avail &= ~(1 << v)
                avail &= ~adj[v]
                uncoloured &= ~(1 << v)
                order.append(v)
                bounds.append(colour)
        return order, bounds

    def expand(size: int, cand: int):
        nonlocal best
        order, bounds = colour_order(cand)
        for idx in range(len(order) - 1, -1, -1):
            if size + bounds[idx] <= best:
                return
            v = order[idx]
            new = cand & adj[v]
            if new:
                expand(size + 1, new)
            elif size + 1 > best:
                best = size + 1
            cand &= ~(1 << v)

    expand(0, (1 << len(adj)) - 1)
    return best


def max_code_size(n: int, d: int) -> int:
    """A(n, d) by exhaustive branch and bound, n <= 7. Word 0 is fixed by translation."""
    if n > 7:
        raise CapacityError("exhaustive A(n, d) is limited to n <= 7")
    if d <= 1:
        return 1 << n
    if d > n:
        return 1
    size = 1 << n
    far = [[bin(x ^ y).count("1") >= d for y in range(size)] for x in range(size)]
    # codes containing 0: clique among the words at distance >= d from 0
    nbrs = [y for y in range(size) if far[0][y]]
    index = {y: i for i, y in enumerate(nbrs)}
    adj = [0] * len(nbrs)
    for y in nbrs:
        for z in nbrs:
            if y != z and far[y][z]:
                adj[index[y]] |= 1 << index[z]
    return 1 + (_max_clique(adj) if adj else 0)
