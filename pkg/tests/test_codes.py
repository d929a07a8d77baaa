import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hamspec import codes, krawchouk
from hamspec.errors import ParameterError


def _hd(a, b):
    return bin(int(a) ^ int(b)).count("1")


def test_hamming_code_basics():
    h = codes.hamming_7_4()
    assert len(h) == 16 and h.dimension == 4
    assert h.min_distance == 3
    # weight enumerator 1 + 7z^3 + 7z^4 + z^7
    assert h.weights().tolist().count(3) == 7
    assert list(h.distance_distribution) == [1, 0, 0, 7, 7, 0, 0, 1]


def test_repetition_code():
    c = codes.repetition_code(9)
    assert sorted(c.words.tolist()) == [0, (1 << 9) - 1]
    assert c.min_distance == 9


@given(st.sets(st.integers(0, 255), min_size=2, max_size=25))
def test_min_distance_brute_force(words):
    c = codes.Code(8, sorted(words))
    assert c.min_distance == min(_hd(a, b) for a, b in itertools.combinations(words, 2))
    hist = c.pair_histogram
    assert int(hist.sum()) == math.comb(len(words), 2)


@given(st.integers(3, 12), st.data())
def test_linear_sampling(n, data):
    k = data.draw(st.integers(1, n - 1))
    seed = data.draw(st.integers(0, 10**6))
    c = codes.sample_random_linear(n, k, seed)
    words = set(c.words.tolist())
    assert len(words) == 1 << c.dimension
    # closed under xor
    sample = list(words)[:8]
    assert all(a ^ b in words for a in sample for b in sample)
    if len(c) > 1:
        assert c.min_distance == min(w for w in c.weights().tolist() if w)


def test_sampling_is_seeded():
    a = codes.sample_random_linear(14, 6, 42)
    b = codes.sample_random_linear(14, 6, 42)
    assert np.array_equal(a.words, b.words)


@pytest.mark.parametrize("seed", range(5))
def test_dual_satisfies_macwilliams(seed):
    n = 10
    c = codes.sample_random_linear(n, 4, seed)
    dual = codes.dual_code(c)
    assert len(c) * len(dual) == 1 << n
    assert all(bin(int(a) & int(b)).count("1") % 2 == 0 for a in c.words for b in dual.words)
    t = krawchouk.build_table(n)
    a = np.bincount(c.weights(), minlength=n + 1)
    b = np.bincount(dual.weights(), minlength=n + 1)
    for k in range(n + 1):
        assert b[k] * len(c) == sum(int(a[j]) * t(k, j) for j in range(n + 1))


def test_weight_slice():
    h = codes.hamming_7_4()
    s = codes.weight_slice(h, 4)
    assert s.size == 7 and all(bin(int(w)).count("1") == 4 for w in s)
    assert list(s) == sorted(s)


def test_model_params_definition():
    p = codes.model_params(20, 0.3, 0.05)
    assert p.N == 64
    tail = lambda d: p.N / 2**20 * sum(math.comb(20, l) for l in range(d))  # noqa: E731
    assert tail(p.d_0) <= 0.05 < tail(p.d_0 + 1)
    assert p.theta == pytest.approx(math.comb(20, p.d_0) * 64 / 2**20)
    assert p.M == 64 * 63 // 2


def test_model_params_rejects():
    with pytest.raises(ParameterError):
        codes.model_params(20, 1.2)
    with pytest.raises(ParameterError):
        codes.model_params(20, 0.3, tau=0.0)


@given(st.lists(st.integers(0, 1023), min_size=2, max_size=40), st.integers(1, 5))
def test_erasure_brute_force(points, d0):
    pts = np.array(points, dtype=np.uint64)
    kept = codes.erase_close_pairs(pts, d0, 10).tolist()
    ref = [points[a] for a in range(len(points))
           if not any(_hd(points[a], points[b]) <= d0 - 1 for b in range(len(points)) if b != a)]
    assert kept == ref


def test_ball_and_pairwise_routes_agree():
    rng = np.random.default_rng(5)
    pts = rng.integers(0, 1 << 16, size=300, dtype=np.uint64)
    for radius in (1, 2, 3):
        assert np.array_equal(codes._close_mask_by_ball(pts, radius, 16),
                              codes.kernels.close_pair_mask(pts, radius).astype(bool))


def test_general_code_distance():
    p = codes.model_params(18, 0.3, 0.05)
    for seed in range(5):
        c = codes.sample_random_general(p, seed)
        assert len(c) < 2 or c.min_distance >= p.d_0


def test_trial_seed():
    assert codes.trial_seed(12, 5) == 12 ^ 5


def test_triple_count_brute_force():
    rng = np.random.default_rng(2)
    pts = rng.integers(0, 1 << 8, size=25, dtype=np.uint64)
    dmat = codes.kernels.distance_matrix(pts)
    ell, close = 4, 2
    ref = 0
    for a, b, c in itertools.combinations(range(25), 3):
        ds = [dmat[a, b], dmat[a, c], dmat[b, c]]
        ref += any(d == ell for d in ds) and any(d <= close for d in ds)
    assert codes.triple_count(dmat, ell, close) == ref


def test_ensemble_statistics_deterministic_across_threads():
    p = codes.model_params(16, 0.3, 0.05)
    a = codes.ensemble_statistics(30, p, seed=3, threads=1).to_dict()
    b = codes.ensemble_statistics(30, p, seed=3, threads=4).to_dict()
    assert a == b


def test_ensemble_statistics_needs_trials():
    with pytest.raises(ParameterError):
        codes.ensemble_statistics(10, codes.model_params(16, 0.3))


def test_file_roundtrip(tmp_path):
    for c in (codes.hamming_7_4(), codes.Code(5, [0, 3, 28])):
        path = tmp_path / "c.txt"
        codes.write_code(c, path)
        back = codes.read_code(path)
        assert back.n == c.n
        assert sorted(back.words.tolist()) == sorted(c.words.tolist())
        assert isinstance(back, codes.LinearCode) == isinstance(c, codes.LinearCode)


def test_file_bit_order():
    c = codes.parse_code("n=4\n1000\n0011\n")
    assert sorted(c.words.tolist()) == [1, 12]


@pytest.mark.parametrize("text", ["", "4\n0000", "n=4\n012", "n=4\nlinear k=2\n1000", "n=3\n0000"])
def test_parse_errors(text):
    with pytest.raises(ParameterError):
        codes.parse_code(text)


def test_random_linear_distance_near_gv():
    from hamspec.rate_bounds import entropy_inverse

    n, k = 30, 9
    target = entropy_inverse(1 - k / n) * n
    near = [abs(codes.sample_random_linear(n, k, s).min_distance - target) <= 0.15 * n for s in range(200)]
    assert np.mean(near) >= 0.9
