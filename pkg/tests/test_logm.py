import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

from fplogm.dense import CostLedger, commutator_residual, frobenius_norm
from fplogm.logm import (
    FixedPointConfig,
    Init,
    LogmDivergenceError,
    NoPositiveSpectrumError,
    SpectralBounds,
    error_estimate,
    fixed_point_logm,
    gershgorin_bounds,
    init_linear,
    init_paper,
    refine,
)
from fplogm.oracle import logm_oracle
from fplogm.scalar import deviation_map

from conftest import random_spd

EPS_MACH = np.finfo(float).eps


# spectral bounds and initial guesses


def test_gershgorin_diagonal():
    b = gershgorin_bounds(np.diag([2.0, 5.0]))
    assert (b.lambda_min, b.lambda_max) == (2.0, 5.0)


def test_gershgorin_discs():
    b = gershgorin_bounds([[2.0, 0.5], [0.5, 3.0]])
    assert (b.lambda_min, b.lambda_max) == (1.5, 3.5)
    assert b.lambda_min <= 2.5 - math.sqrt(0.5) and 2.5 + math.sqrt(0.5) <= b.lambda_max


def test_gershgorin_clamp():
    b = gershgorin_bounds([[1.0, -2.0], [0.0, 1.0]])
    assert b.lambda_max == 3.0
    assert b.lambda_min == pytest.approx(3e-8, rel=1e-15)


def test_gershgorin_no_positive_spectrum():
    with pytest.raises(NoPositiveSpectrumError):
        gershgorin_bounds(-np.eye(2))


def test_spectral_bounds_validation():
    with pytest.raises(ValueError):
        SpectralBounds(0.0, 1.0)
    with pytest.raises(ValueError):
        SpectralBounds(2.0, 1.0)


def test_init_linear_recovers_default_guess(rng):
    a, _ = random_spd(rng, 5)
    x_lin = init_linear(a, SpectralBounds(1e-8, 1.0))
    np.testing.assert_allclose(x_lin, init_paper(a), atol=1e-7)
    np.testing.assert_allclose(init_paper(np.eye(2)), (1 - math.log(2)) * np.eye(2), rtol=1e-15)


def test_init_linear_exact_for_scalar_matrix():
    x0 = init_linear(math.e * np.eye(3), SpectralBounds(math.e, math.e))
    np.testing.assert_allclose(x0, np.eye(3), rtol=1e-15)


def test_init_linear_values():
    x0 = init_linear(np.diag([1.0, 3.0]), SpectralBounds(1.0, 3.0))
    np.testing.assert_allclose(np.diag(x0), [0.193147180559945, 1.19314718055995], rtol=1e-13)


# the iteration


def test_identity_converges_to_zero():
    cfg = FixedPointConfig(eps=1e-12)
    res = fixed_point_logm(np.eye(4), cfg)
    assert res.report.converged
    assert frobenius_norm(res.x) <= 10 * cfg.eps


def test_scalar_first_step_matches_high_precision():
    mpmath.mp.dps = 40
    x0 = 4 - (1 + mpmath.log(2))
    x1 = 2 * mpmath.exp(-x0) - 1 + x0
    res = fixed_point_logm([[2.0]], FixedPointConfig(max_iter=1, track_iterates=True))
    xs = [float(m[0, 0]) for m in res.iterates]
    assert xs[0] == pytest.approx(float(x0), rel=1e-15)
    assert xs[1] == pytest.approx(float(x1), rel=1e-12)
    assert xs[1] == pytest.approx(1.50600109291151, rel=1e-12)
    assert xs[0] - math.log(2) == pytest.approx(1.61370563888011, rel=1e-12)
    assert xs[1] - math.log(2) == pytest.approx(0.812853912351565, rel=1e-11)
    assert not res.report.converged and res.report.iterations == 1


def test_diagonal_deviations_follow_scalar_map():
    lam = np.array([1e-6, 0.01, 0.3, 0.5, 0.9, 1.0])
    res = fixed_point_logm(np.diag(lam), FixedPointConfig(eps=1e-12, eps_exp=1e-16, track_iterates=True))
    dev = [np.diag(x) - np.log(lam) for x in res.iterates]
    for before, after in zip(dev, dev[1:]):
        assert np.all(after >= -1e-13)
        assert np.all(after <= before + 1e-13)
        expected = [deviation_map(float(d)) for d in before]
        np.testing.assert_allclose(after, expected, atol=1e-11)


def test_matches_oracle_on_spd(rng):
    for n in (2, 5, 9):
        a, _ = random_spd(rng, n)
        res = fixed_point_logm(a, FixedPointConfig(eps=1e-10))
        ref = logm_oracle(a)
        assert res.report.converged
        assert frobenius_norm(res.x - ref) / frobenius_norm(ref) <= 1e-8


def test_cost_accounting(rng):
    a, _ = random_spd(rng, 6)
    rep = fixed_point_logm(a, FixedPointConfig(eps=1e-8)).report
    assert rep.ledger.fixed_point_muls == 2 * rep.iterations
    assert rep.ledger.total == rep.ledger.fixed_point_muls + rep.ledger.exp_muls
    assert rep.converged and rep.stop_value <= 1e-8


@given(st.integers(1, 16), st.integers(0, 2**32 - 1))
def test_commutation_preserved(n, seed):
    r = np.random.default_rng(seed)
    a, lam = random_spd(r, n, 1e-3, 1.0)
    cfg = FixedPointConfig(eps=1e-10, init=Init.USER, x0=0.3 * np.eye(n) + 1.5 * a - 0.4 * a @ a, track_iterates=True)
    res = fixed_point_logm(a, cfg)
    for x in res.iterates:
        bound = 100 * n * EPS_MACH * frobenius_norm(x) * frobenius_norm(a)
        assert commutator_residual(x, a) <= bound


@pytest.mark.parametrize("sigma", [0.5, 1.0, 2.0])
def test_sigma_invariance(rng, sigma):
    a, lam = random_spd(np.random.default_rng(5), 6, 0.01, 1.0)
    bounds = SpectralBounds(lam.min(), lam.max())
    eps = 1e-10
    base = fixed_point_logm(a, FixedPointConfig(eps=eps, init=Init.LINEAR, bounds=bounds))
    scaled = fixed_point_logm(a, FixedPointConfig(eps=eps, init=Init.LINEAR, bounds=bounds, sigma=sigma))
    assert scaled.report.converged
    assert frobenius_norm(base.x - scaled.x) <= 10 * eps


def test_sigma_with_paper_init_handles_large_spectrum():
    lam = np.array([2.0, 10.0, 40.0])
    res = fixed_point_logm(np.diag(lam), FixedPointConfig(eps=1e-12, sigma=40.0))
    np.testing.assert_allclose(np.diag(res.x), np.log(lam), rtol=1e-10)


def test_linear_init_from_gershgorin(rng):
    a = np.array([[3.0, 0.4, 0.1], [0.4, 2.0, 0.3], [0.1, 0.3, 1.5]])
    res = fixed_point_logm(a, FixedPointConfig(eps=1e-12, init=Init.LINEAR))
    np.testing.assert_allclose(res.x, logm_oracle(a), atol=1e-10)


def test_max_iter_reports_non_convergence():
    a = np.diag([1e-8, 1.0])
    res = fixed_point_logm(a, FixedPointConfig(max_iter=3))
    assert not res.report.converged
    assert res.report.iterations == 3
    assert np.all(np.isfinite(res.x))


ROTATION = np.array([[0.0, 1.0], [-1.0, 0.0]])


def test_divergence_by_growing_steps():
    # deviation eigenvalues 1.4 +- 8.4i lie outside the convergence region
    x0 = 1.4 * np.eye(2) + 8.4 * ROTATION
    with pytest.raises(LogmDivergenceError, match="consecutive") as info:
        fixed_point_logm(np.eye(2), FixedPointConfig(init=Init.USER, x0=x0))
    rep = info.value.result.report
    assert not rep.converged
    steps = rep.step_norms
    assert all(later > earlier for earlier, later in zip(steps[-6:-1], steps[-5:]))


def test_divergence_by_overflow():
    x0 = math.pi * ROTATION
    with pytest.raises(LogmDivergenceError, match="overflow") as info:
        fixed_point_logm(np.eye(2), FixedPointConfig(init=Init.USER, x0=x0))
    assert np.all(np.isfinite(info.value.result.x))


def test_inverse_by_product(rng):
    a, _ = random_spd(rng, 8)
    res = fixed_point_logm(a, FixedPointConfig(eps=1e-10))
    assert res.report.converged
    assert res.report.inverse_residual <= 1e-6
    assert frobenius_norm(res.y - np.linalg.inv(a)) <= 1e-6 * frobenius_norm(np.linalg.inv(a))


def test_config_validation():
    with pytest.raises(ValueError):
        FixedPointConfig(eps=0.0)
    with pytest.raises(ValueError):
        FixedPointConfig(max_iter=0)
    with pytest.raises(ValueError):
        FixedPointConfig(init="user")
    with pytest.raises(ValueError):
        FixedPointConfig(sigma=-1.0)
    assert FixedPointConfig(eps=1e-6).eps_exp == pytest.approx(1e-7)


# refinement and the round-trip error


def test_refine_fixed_point():
    lam = np.array([0.5, 2.0])
    x = np.diag(np.log(lam))
    np.testing.assert_allclose(refine(np.diag(lam), x), x, atol=1e-15)


def test_refine_scalar():
    out = refine([[1.0]], [[0.1]])
    assert out[0, 0] == pytest.approx(-1.66750019844026e-4, rel=1e-10)


def test_refine_charges_ledger():
    ledger = CostLedger()
    refine(np.eye(2) * 2, np.eye(2) * 0.7, ledger=ledger)
    assert ledger.fixed_point_muls == 2 and ledger.exp_muls > 0


def test_refine_improves_error(rng):
    a, _ = random_spd(rng, 8)
    res = fixed_point_logm(a, FixedPointConfig(eps=1e-2))
    polished = fixed_point_logm(a, FixedPointConfig(eps=1e-2, refine=True))
    assert polished.report.refinement_applied
    assert error_estimate(a, polished.x) <= 1e-2 * error_estimate(a, res.x)


def test_error_estimate_values():
    assert error_estimate(np.eye(3), np.zeros((3, 3))) == 0.0
    a = np.diag([math.e, math.e**2])
    assert error_estimate(a, np.diag([1.0, 2.0])) <= 1e-14


def test_error_estimate_tracks_perturbation():
    lam = np.array([0.2, 0.7, 1.3])
    for size in (1e-4, 1e-6, 1e-8):
        delta = size * np.array([1.0, -0.5, 0.25])
        est = error_estimate(np.diag(lam), np.diag(np.log(lam) + delta))
        exact = np.linalg.norm(lam * np.expm1(delta)) / np.linalg.norm(lam)
        assert est == pytest.approx(exact, rel=1e-3)
