import math

import numpy as np
import pytest
from scipy import integrate

from beamsplit import (
    binomial_moments,
    check_log_sum,
    continuous_moments,
    continuous_relative_entropy,
    geometric_pmf,
    mean,
    point_mass,
    radial_density,
)
from beamsplit.continuous import TAIL_MASS
from conftest import random_mixture, random_pmf

EULER_GAMMA = 0.5772156649015329


def test_density_vacuum():
    u = np.linspace(0, 20, 11)
    np.testing.assert_allclose(radial_density(point_mass(0))(u), np.exp(-u), rtol=1e-15)


def test_density_geometric():
    lam = 1.5
    u = np.linspace(0, 30, 13)
    f = radial_density(geometric_pmf(lam, 1e-15))
    np.testing.assert_allclose(f(u), np.exp(-u / (1 + lam)) / (1 + lam), rtol=1e-9)


def test_density_single_photon():
    u = np.linspace(0, 20, 11)
    np.testing.assert_allclose(radial_density(point_mass(1))(u), u * np.exp(-u), rtol=1e-14, atol=1e-300)


def test_density_scalar_call():
    assert radial_density(point_mass(0))(0.0) == 1.0


def test_normalisation(rng):
    for _ in range(10):
        f = radial_density(random_pmf(rng, 30))
        assert f.integrate(lambda u: 1.0) == pytest.approx(1.0, abs=1e-10)


def test_moments_match_continuous_moments(rng):
    for _ in range(5):
        p = random_pmf(rng, 20)
        f = radial_density(p)
        d = continuous_moments(binomial_moments(p, 5, precision_bits=256)).as_float()
        for m in range(6):
            assert f.moment(m) / math.factorial(m) == pytest.approx(d[m], abs=1e-8)
        assert f.moment(1) == pytest.approx(1 + mean(p), abs=1e-9)


def test_relative_entropy_self_is_zero():
    f = radial_density(geometric_pmf(0.7, 1e-14))
    assert continuous_relative_entropy(f, f) == 0


def test_relative_entropy_exponentials():
    d = continuous_relative_entropy(radial_density(point_mass(0)), radial_density(geometric_pmf(1.0, 1e-14)))
    assert d == pytest.approx(math.log(2) - 0.5, abs=1e-10)


def test_relative_entropy_vacuum_vs_single_photon():
    d = continuous_relative_entropy(radial_density(point_mass(0)), radial_density(point_mass(1)))
    assert d == pytest.approx(EULER_GAMMA, abs=1e-6)
    # independent check against scipy on the closed-form integrand
    ref, _ = integrate.quad(lambda u: -np.exp(-u) * np.log(u), 0, np.inf, epsabs=1e-13)
    assert d == pytest.approx(ref, abs=1e-9)


def test_divergence_depends_only_on_mean_ratio():
    # counterparts of Geom(a), Geom(b) are exponentials of means 1+a, 1+b
    def closed(a, b):
        r = (1 + a) / (1 + b)
        return r - 1 - math.log(r)

    pairs = [(0.0, 1.0), (1.0, 3.0), (3.0, 7.0)]
    values = [continuous_relative_entropy(radial_density(geometric_pmf(a, 1e-15)),
                                          radial_density(geometric_pmf(b, 1e-15))) for a, b in pairs]
    for (a, b), v in zip(pairs, values):
        assert v == pytest.approx(closed(a, b), abs=1e-9)
    assert max(values) - min(values) < 1e-9


def test_log_sum_examples():
    g = geometric_pmf(1.0, 1e-14)
    same = check_log_sum(g, g)
    assert same.continuous == 0 and same.discrete == 0 and same.holds

    rep = check_log_sum(point_mass(0), g)
    assert rep.continuous == pytest.approx(math.log(2) - 0.5, abs=1e-6)
    assert rep.discrete == pytest.approx(math.log(2), abs=1e-6)
    assert rep.holds

    rep = check_log_sum(point_mass(0), point_mass(1))
    assert rep.continuous == pytest.approx(EULER_GAMMA, abs=1e-6)
    assert rep.discrete == math.inf and rep.holds


def test_log_sum_randomized(rng):
    for _ in range(40):
        X = random_pmf(rng, 15) if rng.random() < 0.5 else random_mixture(rng)
        Y = random_pmf(rng, 15) if rng.random() < 0.5 else random_mixture(rng)
        rep = check_log_sum(X, Y)
        assert rep.holds, rep


def test_upper_limit_controls_tail():
    f = radial_density(geometric_pmf(2.0, 1e-14))
    U = f.upper_limit()
    assert f.tail_mass(U) < TAIL_MASS
    assert f.tail_mass(0.9 * U) > TAIL_MASS


def test_divergent_integrand_is_flagged():
    from beamsplit.continuous import _panel_quad
    from beamsplit.errors import NonIntegrable

    with pytest.raises(NonIntegrable):
        _panel_quad(lambda u: abs(u - 0.5) ** -1.2 if u != 0.5 else 0.0, 2.0)
