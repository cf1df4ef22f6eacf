import math

import numpy as np
import pytest
from scipy.special import eval_laguerre

from beamsplit import gauss_laguerre_rule, laguerre_eval, laguerre_functions
from beamsplit.laguerre import laguerre_table


def test_laguerre_examples():
    for x in (-3.0, 0.0, 0.7, 12.0):
        assert laguerre_eval(0, x) == 1
    assert laguerre_eval(1, 0.5) == pytest.approx(0.5)
    assert laguerre_eval(2, 2.0) == pytest.approx(-1.0)


def test_laguerre_matches_scipy():
    x = np.linspace(-5, 40, 19)
    table = laguerre_table(30, x)
    for n in range(31):
        np.testing.assert_allclose(table[n], eval_laguerre(n, x), rtol=1e-10, atol=1e-12)


def test_scaled_functions_do_not_overflow():
    x = np.array([1e3, 5e3])
    ell = laguerre_functions(200, x)
    assert np.all(np.isfinite(ell))
    np.testing.assert_allclose(ell[0], np.exp(-x / 2))


def test_rule_order_one():
    rule = gauss_laguerre_rule(1)
    np.testing.assert_allclose(rule.nodes, [1.0])
    np.testing.assert_allclose(rule.weights, [1.0])


def test_rule_order_two():
    rule = gauss_laguerre_rule(2)
    r2 = math.sqrt(2)
    np.testing.assert_allclose(rule.nodes, [2 - r2, 2 + r2], rtol=1e-15)
    np.testing.assert_allclose(rule.weights, [(2 + r2) / 4, (2 - r2) / 4], rtol=1e-14)


@pytest.mark.parametrize("K", [1, 2, 3, 5, 10, 20, 40, 64, 100, 200])
def test_weights_sum_to_one(K):
    assert gauss_laguerre_rule(K).weights.sum() == pytest.approx(1.0, abs=1e-13)


@pytest.mark.parametrize("K", [4, 16, 32, 64])
def test_rule_integrates_monomials(K):
    rule = gauss_laguerre_rule(K)
    for j in range(2 * K):
        got = rule.integrate(lambda s: s ** j)
        assert abs(got / math.factorial(j) - 1) <= 1e-11, j


def test_nodes_match_numpy_reference():
    ref_x, ref_w = np.polynomial.laguerre.laggauss(30)
    rule = gauss_laguerre_rule(30)
    np.testing.assert_allclose(rule.nodes, ref_x, rtol=1e-12)
    np.testing.assert_allclose(rule.weights, ref_w, rtol=1e-8, atol=1e-300)
