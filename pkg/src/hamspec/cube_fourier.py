"""Real functions on the Hamming cube {0,1}^n and their Walsh-Fourier analysis.

Conventions, shared by every module:

* a point x is an integer whose bit i is coordinate i;
* ``<f, g> = 2^-n sum_x f(x) g(x)`` (uniform probability measure);
* ``f = sum_alpha fhat(alpha) W_alpha`` with ``W_alpha(x) = (-1)^{<alpha,x>}``,
  hence ``fhat(alpha) = 2^-n sum_x f(x) W_alpha(x)``;
* ``(f * g)(x) = 2^-n sum_y f(y) g(x + y)``, so ``(f * g)^ = fhat . ghat``.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import CapacityError, ParameterError, VerificationError

MAX_DIM = 24

POINT = "point"
FOURIER = "fourier"


def _check_dim(n):
    if n < 0:
        raise ParameterError(f"dimension must be nonnegative, got {n}")
    if n > MAX_DIM:
        raise CapacityError(f"full-cube arrays are capped at n={MAX_DIM}, got n={n}")


def weights(n: int) -> np.ndarray:
    """Hamming weight of every point 0..2^n-1."""
    _check_dim(n)
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


@dataclass(frozen=True)
class BooleanFunction:
    """A real function on {0,1}^n, stored in the point or the Fourier domain."""

    n: int
    values: np.ndarray
    domain: str = POINT

    def __post_init__(self):
        _check_dim(self.n)
        vals = np.asarray(self.values, dtype=np.float64)
        if vals.shape != (1 << self.n,):
            raise ParameterError(f"expected {1 << self.n} values for n={self.n}, got shape {vals.shape}")
        if self.domain not in (POINT, FOURIER):
            raise ParameterError(f"unknown domain tag {self.domain!r}")
        vals = vals.copy()
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)

    def __len__(self):
        return self.values.shape[0]

    def _same_shape(self, other):
        if not isinstance(other, BooleanFunction) or other.n != self.n:
            raise ParameterError("dimension mismatch")
        if other.domain != self.domain:
            raise ParameterError("domain mismatch")

    def __add__(self, other):
        self._same_shape(other)
        return BooleanFunction(self.n, self.values + other.values, self.domain)

    def __sub__(self, other):
        self._same_shape(other)
        return BooleanFunction(self.n, self.values - other.values, self.domain)

    def scale(self, c: float) -> BooleanFunction:
        return BooleanFunction(self.n, c * self.values, self.domain)


def point_mass(n: int, x: int = 0) -> BooleanFunction:
    """delta_x: indicator of a single point."""
    vals = np.zeros(1 << n)
    vals[x] = 1.0
    return BooleanFunction(n, vals)


def indicator(n: int, points) -> BooleanFunction:
    vals = np.zeros(1 << n)
    vals[np.asarray(list(points), dtype=np.int64)] = 1.0
    return BooleanFunction(n, vals)


def character(n: int, alpha: int) -> BooleanFunction:
    """W_alpha(x) = (-1)^{<alpha, x>}."""
    _check_dim(n)
    x = np.arange(1 << n, dtype=np.uint64)
    parity = np.bitwise_count(x & np.uint64(alpha)) & 1
    return BooleanFunction(n, 1.0 - 2.0 * parity)


def constant(n: int, c: float = 1.0) -> BooleanFunction:
    _check_dim(n)
    return BooleanFunction(n, np.full(1 << n, float(c)))


def walsh_transform(f: BooleanFunction) -> BooleanFunction:
    """fhat(alpha) = 2^-n sum_x f(x) (-1)^{<alpha,x>}, by the O(n 2^n) butterfly."""
    if f.domain != POINT:
        raise ParameterError("walsh_transform expects a point-domain function")
    return BooleanFunction(f.n, kernels.fwht(f.values) / float(1 << f.n), FOURIER)


def inverse_walsh_transform(fhat: BooleanFunction) -> BooleanFunction:
    """f(x) = sum_alpha fhat(alpha) (-1)^{<alpha,x>}."""
    if fhat.domain != FOURIER:
        raise ParameterError("inverse_walsh_transform expects a Fourier-domain function")
    return BooleanFunction(fhat.n, kernels.fwht(fhat.values), POINT)


def convolve(f: BooleanFunction, g: BooleanFunction) -> BooleanFunction:
    """(f * g)(x) = 2^-n sum_y f(y) g(x + y), computed through the transform."""
    if f.n != g.n:
        raise ParameterError(f"dimension mismatch: {f.n} vs {g.n}")
    if f.domain != POINT or g.domain != POINT:
        raise ParameterError("convolve expects point-domain functions")
    prod = walsh_transform(f).values * walsh_transform(g).values
    return inverse_walsh_transform(BooleanFunction(f.n, prod, FOURIER))


def adjacency_apply(f: BooleanFunction) -> BooleanFunction:
    """(Af)(x) = sum over the n neighbours x + e_i of f."""
    if f.domain != POINT:
        raise ParameterError("adjacency_apply expects a point-domain function")
    idx = np.arange(1 << f.n, dtype=np.int64)
    out = np.zeros(1 << f.n)
    for i in range(f.n):
        out += f.values[idx ^ (1 << i)]
    return BooleanFunction(f.n, out)


def project_low_degree(f: BooleanFunction, r: int) -> BooleanFunction:
    """Orthogonal projection onto characters of weight at most r."""
    if not 0 <= r <= f.n:
        raise ParameterError(f"level r={r} outside [0, {f.n}]")
    fhat = walsh_transform(f)
    kept = np.where(weights(f.n) <= r, fhat.values, 0.0)
    return inverse_walsh_transform(BooleanFunction(f.n, kept, FOURIER))


def inner(f: BooleanFunction, g: BooleanFunction) -> float:
    """<f, g> under the uniform probability measure (point domain)."""
    if f.n != g.n:
        raise ParameterError("dimension mismatch")
    return float(np.mean(f.values * g.values))


def fourier_inner(fhat: BooleanFunction, ghat: BooleanFunction) -> float:
    """<fhat, ghat>_F = sum_alpha fhat(alpha) ghat(alpha)."""
    if fhat.n != ghat.n:
        raise ParameterError("dimension mismatch")
    return float(np.dot(fhat.values, ghat.values))


@dataclass(frozen=True)
class NormReport:
    norm_1: float
    norm_4_3: float
    norm_2: float
    norm_4: float
    inner_self: float
    fourier_energy: float

    @property
    def parseval_gap(self) -> float:
        return abs(self.inner_self - self.fourier_energy)

    @property
    def ratio_4_2(self) -> float:
        return self.norm_4 / self.norm_2 if self.norm_2 > 0 else float("nan")


def _pnorm(values, p):
    return float(np.mean(np.abs(values) ** p) ** (1.0 / p))


def norms_and_inner(f: BooleanFunction, tol: float = 1e-10) -> NormReport:
    """L_p norms for p in {1, 4/3, 2, 4} and the Parseval check <f,f> = sum fhat^2."""
    if f.domain != POINT:
        raise ParameterError("norms_and_inner expects a point-domain function")
    v = f.values
    energy = float(np.sum(walsh_transform(f).values ** 2))
    rep = NormReport(
        norm_1=_pnorm(v, 1.0),
        norm_4_3=_pnorm(v, 4.0 / 3.0),
        norm_2=_pnorm(v, 2.0),
        norm_4=_pnorm(v, 4.0),
        inner_self=float(np.mean(v * v)),
        fourier_energy=energy,
    )
    scale = max(1.0, rep.inner_self)
    if rep.parseval_gap > tol * scale:
        raise VerificationError(f"Parseval violated: gap {rep.parseval_gap:g}")
    return rep


def dump_csv(f: BooleanFunction, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["index", "value"])
        for i, v in enumerate(f.values):
            writer.writerow([i, repr(float(v))])


def load_csv(path, domain: str = POINT) -> BooleanFunction:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["index", "value"]:
        raise ParameterError("function file must start with header 'index,value'")
    body = [r for r in rows[1:] if r]
    size = len(body)
    n = size.bit_length() - 1
    if size == 0 or (1 << n) != size:
        raise ParameterError(f"function file holds {size} rows, not a power of two")
    vals = np.zeros(size)
    seen = np.zeros(size, dtype=bool)
    for idx_s, val_s in body:
        idx = int(idx_s)
        if not 0 <= idx < size or seen[idx]:
            raise ParameterError(f"bad or repeated index {idx}")
        seen[idx] = True
        vals[idx] = float(val_s)
    return BooleanFunction(n, vals, domain)
