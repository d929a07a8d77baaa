import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hamspec import codes, krawchouk
from hamspec import theorem_verifier as tv


def _fraction_rank(rows):
    """Plain Gauss-Jordan over the rationals."""
    m = [[Fraction(int(v)) for v in row] for row in rows]
    rank, cols = 0, len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank


@given(st.lists(st.lists(st.integers(-4, 4), min_size=5, max_size=5), min_size=1, max_size=7))
def test_exact_ranks_agree(rows):
    ref = _fraction_rank(rows)
    assert tv.bareiss_rank(rows) == ref
    assert tv.exact_rank(np.array(rows, dtype=object)) == ref


def test_character_matrix_entries():
    m = tv.character_matrix(np.array([0, 5, 6], dtype=np.uint64), 3, 1)
    # columns: S = {}, then weight-1 sets
    assert m.shape == (3, tv.ball_size(3, 1))
    assert np.all(m[0] == 1)
    assert sorted(m[1].tolist()) == [-1, -1, 1, 1]


@settings(max_examples=40)
@given(st.integers(4, 10), st.data())
def test_syndrome_rank_matches_elimination(n, data):
    k = data.draw(st.integers(1, min(6, n - 1)))
    r = data.draw(st.integers(0, n // 2))
    c = codes.sample_random_linear(n, k, data.draw(st.integers(0, 10**6)))
    assert tv.linear_character_rank(n, r, c.basis) == tv.elimination_rank(c.words, n, r)


@pytest.mark.parametrize("r", range(4))
def test_covering_equivalence_hamming(r):
    rep = tv.verify_covering_equivalence(codes.hamming_7_4(), r)
    assert rep.passed
    assert rep.dual_size == 8


@pytest.mark.parametrize("seed", range(4))
def test_covering_equivalence_random(seed):
    c = codes.sample_random_linear(9, 4, seed)
    for r in range(5):
        assert tv.verify_covering_equivalence(c, r).passed


def test_hamming_gram_report():
    rep = tv.build_gram(codes.hamming_7_4())
    assert rep.d == 3 and rep.size == 16
    assert rep.rank_bound == Fraction(16, 6)
    assert rep.rank_holds and rep.trace_holds
    assert rep.rank == rep.numeric_rank
    assert rep.rank <= tv.ball_size(7, rep.r)
    assert rep.to_dict()["pass"] is True


def test_gram_entries_are_f_at_distance():
    c = codes.sample_random_linear(8, 3, 1)
    rep = tv.build_gram(c)
    w = c.words
    for a in range(len(c)):
        for b in range(len(c)):
            k = bin(int(w[a]) ^ int(w[b])).count("1")
            assert rep.gram[a, b] == rep.f_levels[k]


def test_integer_levels_proportional():
    n, r = 10, 3
    t = krawchouk.build_table(n)
    rep = tv.build_gram(codes.repetition_code(n), d=4)
    lv = tv.integer_levels(n, rep.r, t)
    ratio = np.array(lv, dtype=float) / rep.f_levels
    assert np.allclose(ratio, ratio[0], rtol=1e-9)


def test_general_code_rank():
    c = codes.Code(10, [0, 7, 56, 448, 1023, 99, 612, 930])
    rep = tv.build_gram(c)
    assert rep.rank_method.endswith("modular-certified") or rep.rank_method.endswith("elimination")
    assert rep.rank == rep.numeric_rank
    assert rep.rank_holds


@pytest.mark.parametrize("seed", range(6))
def test_trace_identity_on_cube(seed):
    c = codes.sample_random_linear(10, 4, seed)
    rep = tv.build_gram(c)
    tr = tv.verify_trace_inequality(rep, c.words)
    assert tr.passed
    assert tr.identity_rel_gap <= 1e-9
    assert tr.eig_min_rel >= -1e-9  # the Gram matrix is positive semidefinite
    assert tr.trace_sum_gap <= 1e-9 and tr.trace_square_gap <= 1e-9


def test_large_code_is_trace_only():
    c = codes.sample_random_linear(16, 13, 0)
    rep = tv.build_gram(c)
    assert rep.rank is None and rep.rank_method == "trace-only"
    assert rep.trace_holds


def test_rate_diagnostic():
    rep = tv.build_gram(codes.hamming_7_4())
    diag = tv.rank_vs_dimension_bound(rep)
    assert diag.size <= diag.dimension_bound
    assert diag.rank_within_columns
    assert diag.size_exponent == pytest.approx(4 / 7)


def test_radius_for_distance():
    # lambda_1 = sqrt(7) ~ 2.65 >= 7 - 6 + 1 = 2 > lambda_0
    assert tv.radius_for_distance(7, 3) == 1
    assert math.isclose(tv.build_gram(codes.hamming_7_4()).lambda_r, math.sqrt(7))
