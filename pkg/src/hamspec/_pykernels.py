"""Numpy implementations of the hot loops, used when the extension is absent."""

import numpy as np

BACKEND = "numpy"

_ROW_BLOCK = 512


def _popcount(a):
    return np.bitwise_count(a)


def fwht(a):
    out = np.array(a, dtype=np.float64, copy=True)
    size = out.shape[0]
    h = 1
    while h < size:
        view = out.reshape(-1, 2, h)
        x = view[:, 0, :].copy()
        y = view[:, 1, :]
        view[:, 0, :] += y
        view[:, 1, :] = x - y
        h *= 2
    return out


def _row_blocks(size):
    for start in range(0, size, _ROW_BLOCK):
        yield start, min(size, start + _ROW_BLOCK)


def distance_histogram(words, n):
    w = np.asarray(words, dtype=np.uint64)
    hist = np.zeros(n + 1, dtype=np.int64)
    for lo, hi in _row_blocks(w.shape[0]):
        block = _popcount(w[lo:hi, None] ^ w[None, :])
        hist += np.bincount(block.ravel(), minlength=n + 1)[: n + 1]
    hist[0] -= w.shape[0]
    return hist // 2


def distance_matrix(words):
    w = np.asarray(words, dtype=np.uint64)
    return _popcount(w[:, None] ^ w[None, :]).astype(np.uint8)


def close_pair_mask(words, radius):
    w = np.asarray(words, dtype=np.uint64)
    size = w.shape[0]
    mask = np.zeros(size, dtype=bool)
    for lo, hi in _row_blocks(size):
        close = _popcount(w[lo:hi, None] ^ w[None, :]) <= radius
        close[np.arange(hi - lo), np.arange(lo, hi)] = False
        mask[lo:hi] |= close.any(axis=1)
    return mask


def common_neighbor_stats(words, dist):
    adj = (distance_matrix(words) == dist).astype(np.float64)
    np.fill_diagonal(adj, 0.0)
    deg = adj.sum(axis=1).astype(np.int64)
    common = adj @ adj
    tr4 = int(round(float((common * common).sum())))
    np.fill_diagonal(common, 0.0)
    best = int(common.max()) if common.size else 0
    return deg, tr4, best
