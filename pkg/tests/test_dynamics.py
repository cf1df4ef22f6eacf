import math

import numpy as np
import pytest

from beamsplit import (
    EvolveConfig,
    beamsplit_add,
    check_entropy_concavity,
    check_log_sobolev,
    debruijn_lhs_numeric,
    debruijn_rhs,
    evolve_heat,
    geometric_mixture_pmf,
    geometric_pmf,
    heat_rhs,
    make_pmf,
    mean,
    point_mass,
    score,
    tilted_pair,
    total_variation,
)
from beamsplit import dynamics
from beamsplit.errors import DomainError, EtaZero, StepFailure, ZeroMean
from conftest import random_mixture, random_pmf

UNIFORM5 = make_pmf(np.full(5, 0.2))


def central_difference(X, lambdaY, eta, h):
    Y = geometric_pmf(lambdaY, 1e-14)
    hi = beamsplit_add(X, Y, eta + h).probs
    lo = beamsplit_add(X, Y, eta - h).probs
    return (hi - lo) / (2 * h)


def heat_residual(X, lambdaY, eta, h):
    fd = central_difference(X, lambdaY, eta, h)
    Z = beamsplit_add(X, geometric_pmf(lambdaY, 1e-14), eta)
    return float(np.max(np.abs(fd - heat_rhs(Z, eta, lambdaY).values[: fd.size])))


def test_heat_rhs_vanishes_on_geometric():
    for lam in (0.5, 1.0, 2.0):
        g = geometric_pmf(lam, 1e-14)
        for eta in (0.3, 0.5, 0.8):
            # only the stored top state sees the truncated tail
            edge = (g.support_bound + 2) * (1 + lam) * 1e-14 / eta
            rhs = heat_rhs(g, eta, lam).values
            assert np.max(np.abs(rhs[:-2])) < 1e-14
            assert np.max(np.abs(rhs[-2:])) < edge


def test_heat_rhs_single_photon():
    rhs = heat_rhs(point_mass(1), 0.5, 1.0).values
    np.testing.assert_allclose(rhs, [-4, 8, -4])


def test_heat_rhs_sums_to_zero(rng):
    for _ in range(20):
        p = random_pmf(rng, 20)
        assert abs(heat_rhs(p, float(rng.uniform(0.1, 1)), float(rng.uniform(0, 3))).total) < 1e-12


def test_heat_rhs_rejects_eta_zero():
    with pytest.raises(EtaZero):
        heat_rhs(point_mass(1), 0.0, 1.0)


@pytest.mark.parametrize("lambdaY", [0.5, 1.0, 2.0])
@pytest.mark.parametrize("eta", [0.3, 0.5, 0.8])
def test_heat_equation_randomized(rng, eta, lambdaY):
    for _ in range(3):
        X = random_pmf(rng, 20)
        r1 = heat_residual(X, lambdaY, eta, 1e-4)
        assert r1 < 1e-6
        if r1 > 1e-11:
            r2 = heat_residual(X, lambdaY, eta, 5e-5)
            assert 2.5 < r1 / r2 < 6


def test_evolve_starts_at_input():
    X = make_pmf([0.1, 0.6, 0.3])
    traj = evolve_heat(X, 1.0, EvolveConfig((1.0, 0.9)))
    eta, p = traj[0]
    assert eta == 1.0
    np.testing.assert_array_equal(p.probs[:3], X.probs)
    assert np.all(p.probs[3:] == 0)


def test_evolve_geometric_is_stationary():
    g = geometric_pmf(1.0, 1e-14)
    for eta, p in evolve_heat(g, 1.0, EvolveConfig((1.0, 0.8, 0.5, 0.2))):
        assert total_variation(p, g) < 1e-12


def test_evolve_matches_channel():
    traj = evolve_heat(point_mass(1), 1.0, EvolveConfig(tuple(np.linspace(1, 0.5, 6))))
    assert traj[-1][0] == pytest.approx(0.5)
    Z = beamsplit_add(point_mass(1), geometric_pmf(1.0, 1e-14), 0.5)
    assert total_variation(traj[-1][1], Z) < 1e-6


def test_evolve_grid_validation():
    with pytest.raises(DomainError):
        EvolveConfig((1.0, 0.5, 0.0))
    with pytest.raises(DomainError):
        EvolveConfig((0.5, 0.7))
    with pytest.raises(DomainError):
        EvolveConfig(())


def test_evolve_reports_last_good_eta(monkeypatch):
    monkeypatch.setattr(dynamics, "_flux", lambda q, lam: np.full(q.size + 1, np.nan))
    with pytest.raises(StepFailure) as info:
        evolve_heat(point_mass(1), 1.0, EvolveConfig((1.0, 0.9)))
    assert info.value.last_good_eta == 1.0


def test_tilted_pair_geometric():
    tp = tilted_pair(geometric_pmf(1.0, 1e-14))
    n = np.arange(tp.plus.probs.size)
    expected = (n + 1) * 2.0 ** -(n + 2)
    np.testing.assert_allclose(tp.plus.probs, expected, rtol=1e-11)
    np.testing.assert_allclose(tp.minus.probs, expected, rtol=1e-11)


def test_tilted_pair_single_photon():
    tp = tilted_pair(point_mass(1))
    np.testing.assert_allclose(tp.plus.probs, [1.0])
    np.testing.assert_allclose(tp.minus.probs, [0.0, 1.0])


def test_tilts_are_normalised(rng):
    for _ in range(30):
        p = random_pmf(rng, 20, min_support=1)
        tp = tilted_pair(p)
        assert math.fsum(tp.plus.probs) == pytest.approx(1, abs=1e-12)
        assert math.fsum(tp.minus.probs) == pytest.approx(1, abs=1e-12)


def test_tilt_needs_positive_mean():
    with pytest.raises(ZeroMean):
        tilted_pair(point_mass(0))


def test_debruijn_rhs_geometric_is_zero():
    for lam in (0.3, 1.0, 4.0):
        assert abs(debruijn_rhs(geometric_pmf(lam, 1e-14), 0.5, 1.0)) < 1e-12


def test_debruijn_rhs_finite_support_is_infinite():
    assert debruijn_rhs(point_mass(1), 0.5, 1.0) == math.inf


def test_debruijn_identity_mixture():
    X = geometric_mixture_pmf([0.5, 0.5], [0.5, 4.0], 1e-14)
    for eta in (0.3, 0.5, 0.8):
        Z = beamsplit_add(X, geometric_pmf(1.0, 1e-14), eta)
        r = debruijn_rhs(Z, eta, 1.0)
        assert r > 0
        assert debruijn_lhs_numeric(X, 1.0, eta, 1e-4) == pytest.approx(r, rel=1e-5)


def test_debruijn_identity_random_mixtures(rng):
    for _ in range(5):
        X = random_mixture(rng)
        lambdaY = float(rng.uniform(0.3, 2))
        eta = float(rng.uniform(0.2, 0.8))
        Z = beamsplit_add(X, geometric_pmf(lambdaY, 1e-14), eta)
        r = debruijn_rhs(Z, eta, lambdaY)
        assert abs(debruijn_lhs_numeric(X, lambdaY, eta) - r) <= 1e-5 * abs(r) + 1e-8


def test_debruijn_lhs_geometric_is_zero():
    assert abs(debruijn_lhs_numeric(geometric_pmf(1.0, 1e-14), 1.0, 0.5)) < 1e-9


def test_debruijn_lhs_second_order():
    X = geometric_mixture_pmf([0.5, 0.5], [0.5, 4.0], 1e-14)
    Z = beamsplit_add(X, geometric_pmf(1.0, 1e-14), 0.5)
    r = debruijn_rhs(Z, 0.5, 1.0)
    e1 = abs(debruijn_lhs_numeric(X, 1.0, 0.5, 2e-2) - r)
    e2 = abs(debruijn_lhs_numeric(X, 1.0, 0.5, 1e-2) - r)
    assert 3 < e1 / e2 < 5


def test_debruijn_lhs_domain():
    with pytest.raises(DomainError):
        debruijn_lhs_numeric(point_mass(1), 1.0, 0.99995, 1e-4)


def test_score_geometric():
    sc = score(geometric_pmf(1.5, 1e-14))
    assert np.nanmax(np.abs(sc.rho)) < 1e-10
    assert sc.j_plus < 1e-20 and sc.j_minus < 1e-20


def test_score_single_photon():
    sc = score(point_mass(1))
    assert sc.rho[1] == -1
    assert sc.j_minus == math.inf


def test_score_undefined_where_mass_vanishes():
    sc = score(make_pmf([0.5, 0.5]))
    assert np.isnan(sc.rho[2])
    # p[2] rho[2]^2 / 2 grows without bound as p[2] -> 0
    assert sc.j_plus == math.inf
    assert np.isfinite(sc.j_minus)


def test_score_truncated_top_is_not_an_edge():
    sc = score(geometric_mixture_pmf([0.3, 0.7], [0.5, 2.0], 1e-14))
    assert np.isfinite(sc.j_plus) and np.isfinite(sc.j_minus)


def test_score_double_zero_adds_nothing():
    sc = score(make_pmf([0.5, 0.5, 0.0, 0.0]))
    assert np.isnan(sc.rho[3])


def test_score_is_centred(rng):
    for _ in range(50):
        p = random_pmf(rng, 30, min_support=1)
        assert abs(math.fsum(score(p).weighted)) < 1e-10


def test_score_vanishes_only_on_geometrics(rng):
    for _ in range(20):
        p = random_pmf(rng, 20, min_support=1)
        if total_variation(p, geometric_pmf(mean(p), 1e-14)) > 1e-6:
            assert np.nanmax(np.abs(score(p).rho)) > 1e-6


def test_log_sobolev_geometric_equality():
    rep = check_log_sobolev(geometric_pmf(2.0, 1e-14))
    assert abs(rep.lhs) < 1e-10
    assert abs(rep.rhs_entropic) < 1e-10 and abs(rep.rhs_quadratic) < 1e-10
    assert rep.holds_entropic and rep.holds_quadratic


def test_log_sobolev_single_photon():
    rep = check_log_sobolev(point_mass(1))
    assert rep.lhs == pytest.approx(math.log(4), abs=1e-12)
    assert rep.rhs_entropic == math.inf and rep.rhs_quadratic == math.inf
    assert rep.holds_entropic and rep.holds_quadratic


def test_log_sobolev_random_mixtures(rng):
    for _ in range(200):
        rep = check_log_sobolev(random_mixture(rng, mean_range=(0.05, 8.0)))
        assert rep.holds_entropic and rep.holds_quadratic


def test_log_sobolev_finite_support(rng):
    for _ in range(100):
        rep = check_log_sobolev(random_pmf(rng, 20, min_support=1))
        assert rep.holds_entropic and rep.holds_quadratic


def test_entropy_concavity_randomized(rng):
    for _ in range(30):
        X, Y = random_pmf(rng, 15), random_pmf(rng, 15)
        lhs, rhs, ok = check_entropy_concavity(X, Y, float(rng.uniform(0, 1)))
        assert ok, (lhs, rhs)
