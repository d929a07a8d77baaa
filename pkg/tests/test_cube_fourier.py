import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hamspec import cube_fourier as cf
from hamspec.errors import ParameterError

finite = st.floats(-1e3, 1e3, allow_nan=False)


@st.composite
def functions(draw, n_min=1, n_max=8):
    n = draw(st.integers(n_min, n_max))
    vals = draw(arrays(np.float64, 1 << n, elements=finite))
    return cf.BooleanFunction(n, vals)


def _brute_transform(f):
    n, size = f.n, 1 << f.n
    return np.array([sum(f.values[x] * (-1) ** bin(a & x).count("1") for x in range(size)) / size
                     for a in range(size)])


def test_character_transform_is_point_mass():
    for alpha in range(16):
        hat = cf.walsh_transform(cf.character(4, alpha)).values
        expected = np.zeros(16)
        expected[alpha] = 1.0
        np.testing.assert_allclose(hat, expected, atol=1e-15)


def test_point_mass_transform_is_flat():
    hat = cf.walsh_transform(cf.point_mass(5, 0)).values
    np.testing.assert_allclose(hat, np.full(32, 1 / 32))


def test_transform_against_definition():
    rng = np.random.default_rng(3)
    f = cf.BooleanFunction(5, rng.normal(size=32))
    np.testing.assert_allclose(cf.walsh_transform(f).values, _brute_transform(f), atol=1e-12)


def test_bit_order_convention():
    # bit i of the integer is coordinate i
    assert cf.weights(3).tolist() == [0, 1, 1, 2, 1, 2, 2, 3]
    assert cf.character(3, 0b001).values.tolist() == [1, -1, 1, -1, 1, -1, 1, -1]


@given(functions())
def test_inversion(f):
    back = cf.inverse_walsh_transform(cf.walsh_transform(f))
    np.testing.assert_allclose(back.values, f.values, atol=1e-9)


@given(functions())
def test_parseval(f):
    rep = cf.norms_and_inner(f, tol=1e-9)
    assert rep.parseval_gap <= 1e-9 * max(1.0, rep.inner_self)


@given(functions(n_max=6), st.data())
def test_convolution_theorem(f, data):
    g = cf.BooleanFunction(f.n, data.draw(arrays(np.float64, 1 << f.n, elements=finite)))
    lhs = cf.walsh_transform(cf.convolve(f, g)).values
    rhs = cf.walsh_transform(f).values * cf.walsh_transform(g).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-7)


@given(functions())
def test_adjacency_diagonal_in_fourier(f):
    lhs = cf.walsh_transform(cf.adjacency_apply(f)).values
    rhs = (f.n - 2 * cf.weights(f.n)) * cf.walsh_transform(f).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-7)


def test_adjacency_matches_neighbour_sum():
    rng = np.random.default_rng(0)
    f = cf.BooleanFunction(4, rng.normal(size=16))
    ref = [sum(f.values[x ^ (1 << i)] for i in range(4)) for x in range(16)]
    np.testing.assert_allclose(cf.adjacency_apply(f).values, ref)


@given(functions(n_max=6), st.data())
def test_low_degree_projection_is_idempotent(f, data):
    r = data.draw(st.integers(0, f.n))
    p = cf.project_low_degree(f, r)
    np.testing.assert_allclose(cf.project_low_degree(p, r).values, p.values, atol=1e-8)
    hat = cf.walsh_transform(p).values
    assert np.all(np.abs(hat[cf.weights(f.n) > r]) <= 1e-8 * (1 + np.abs(f.values).max()))


def test_norm_ordering():
    rng = np.random.default_rng(7)
    rep = cf.norms_and_inner(cf.BooleanFunction(6, rng.normal(size=64)))
    assert rep.norm_1 <= rep.norm_4_3 <= rep.norm_2 <= rep.norm_4


def test_csv_roundtrip(tmp_path):
    f = cf.BooleanFunction(3, np.arange(8) * 0.5 - 1)
    path = tmp_path / "f.csv"
    cf.dump_csv(f, path)
    g = cf.load_csv(path)
    np.testing.assert_array_equal(g.values, f.values)


def test_rejects_wrong_length():
    with pytest.raises(ParameterError):
        cf.BooleanFunction(3, np.zeros(7))


def test_domain_mismatch():
    f = cf.constant(2)
    with pytest.raises(ParameterError):
        f + cf.walsh_transform(f)
