import itertools
import math

import networkx as nx
import numpy as np
import pytest
from scipy.optimize import linprog

from hamspec import ball_spectrum, krawchouk
from hamspec import lp_certificate as lp
from hamspec.cube_fourier import BooleanFunction, constant, point_mass
from hamspec.errors import ParameterError, VerificationError


def _clique_oracle(n, d):
    g = nx.Graph()
    g.add_nodes_from(range(1 << n))
    g.add_edges_from((x, y) for x, y in itertools.combinations(range(1 << n), 2) if bin(x ^ y).count("1") >= d)
    return max(len(c) for c in nx.find_cliques(g))


def _delsarte(n, d):
    """Optimum of the Delsarte LP in the distance-distribution variables, via scipy."""
    t = krawchouk.build_table(n)
    ks = list(range(d, n + 1))
    c = -np.ones(len(ks))
    a_ub = [[-t(s, k) for k in ks] for s in range(1, n + 1)]
    b_ub = [math.comb(n, s) for s in range(1, n + 1)]
    res = linprog(c, A_ub=a_ub, b_ub=b_ub, bounds=[(0, None)] * len(ks), method="highs")
    return 1 - res.fun


@pytest.mark.parametrize("n,d", [(n, d) for n in range(2, 6) for d in range(1, n + 1)])
def test_max_code_size_vs_networkx(n, d):
    assert lp.max_code_size(n, d) == _clique_oracle(n, d)


def test_max_code_size_n7():
    # classical values, e.g. the [7,4] Hamming code is perfect
    assert lp.max_code_size(7, 3) == 16
    assert lp.max_code_size(7, 4) == 8


@pytest.mark.parametrize("n", range(4, 13))
def test_certificate_bound_dominates_delsarte_optimum(n):
    for d in range(1, n // 2 + 1):
        cert, _ = lp.certificate_from_ball(n, d)
        assert cert.feasible
        assert cert.raw >= _delsarte(n, d) * (1 - 1e-9)


def test_certificate_structure():
    cert, r = lp.certificate_from_ball(10, 3)
    assert cert.lam == 10 - 6 + 1
    assert ball_spectrum.top_eigenvalue(10, r) >= cert.lam - 1e-9
    assert cert.identity_residual <= 1e-10
    assert np.all(cert.G.values >= -1e-10)
    w = np.array([bin(a).count("1") for a in range(1 << 10)])
    assert np.all(cert.Ghat.values[w >= cert.d] <= 1e-10)
    assert cert.raw == pytest.approx(2**10 * cert.Ghat.values[0] / cert.G.values[0])
    bounds = lp.extract_bound(cert)
    assert set(bounds) == {"s", "raw"}


def test_bound_is_scale_invariant():
    data = ball_spectrum.ball_top_eigen(8, 2)
    f = data.on_cube()
    a = lp.build_certificate(f, 3.0)
    b = lp.build_certificate(f.scale(7.5), 3.0)
    assert a.raw == pytest.approx(b.raw) and a.s == pytest.approx(b.s)


def test_negative_function_rejected():
    f = BooleanFunction(4, -np.ones(16))
    with pytest.raises(VerificationError):
        lp.build_certificate(f, 1.0)


def test_eigen_condition_rejected():
    # a point mass has A f = 0 < lambda f at its support
    with pytest.raises(VerificationError) as exc:
        lp.build_certificate(point_mass(4, 0), 1.0)
    assert exc.value.witness is not None


def test_constant_function():
    # f = 1 has A f = n f; lambda = n - 1 gives d = 1, lambda = n would give d < 1
    cert = lp.build_certificate(constant(5), 4.0)
    assert cert.d == 1 and cert.feasible
    with pytest.raises(ParameterError):
        lp.build_certificate(constant(5), 5.0)


def test_bad_distance():
    with pytest.raises(ParameterError):
        lp.certificate_from_ball(6, 4)


def test_bound_exponent():
    assert lp.bound_exponent(2**6, 12) == pytest.approx(0.5)
