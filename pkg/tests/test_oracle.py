import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fplogm.dense import frobenius_norm
from fplogm.expm import expm
from fplogm.logm import gershgorin_bounds
from fplogm.oracle import expm_oracle, jacobi_eigendecomposition, logm_oracle, taylor_log_series

from conftest import random_spd


def test_jacobi_identity():
    eig = jacobi_eigendecomposition(np.eye(4))
    np.testing.assert_array_equal(eig.eigenvalues, np.ones(4))


@pytest.mark.parametrize(
    "a, expected",
    [([[0.0, 1.0], [1.0, 0.0]], [-1.0, 1.0]), ([[2.0, 1.0], [1.0, 2.0]], [1.0, 3.0])],
)
def test_jacobi_two_by_two(a, expected):
    np.testing.assert_allclose(jacobi_eigendecomposition(a).eigenvalues, expected, rtol=1e-15)


def test_jacobi_rejects_asymmetric():
    with pytest.raises(ValueError):
        jacobi_eigendecomposition([[1.0, 2.0], [0.0, 1.0]])


@given(st.integers(1, 32), st.integers(0, 2**32 - 1))
def test_jacobi_invariants(n, seed):
    r = np.random.default_rng(seed)
    m = r.standard_normal((n, n))
    a = m + m.T
    eig = jacobi_eigendecomposition(a)
    v = eig.eigenvectors
    assert frobenius_norm(v.T @ v - np.eye(n)) <= 1e-10
    assert frobenius_norm((v * eig.eigenvalues) @ v.T - a) <= 1e-10 * frobenius_norm(a)
    assert np.all(np.diff(eig.eigenvalues) >= 0)


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_eigenvalues_inside_gershgorin_discs(n, seed):
    r = np.random.default_rng(seed)
    m = r.uniform(-1, 1, (n, n))
    a = m + m.T + 3 * n * np.eye(n)
    lam = jacobi_eigendecomposition(a).eigenvalues
    diag = np.diag(a)
    radii = np.abs(a).sum(axis=1) - np.abs(diag)
    for x in lam:
        assert np.any(np.abs(x - diag) <= radii + 1e-12 * abs(x))
    bounds = gershgorin_bounds(a)
    assert bounds.lambda_min <= lam[0] + 1e-12 and lam[-1] <= bounds.lambda_max + 1e-12


def test_logm_oracle_simple():
    np.testing.assert_array_equal(logm_oracle(np.eye(3)), np.zeros((3, 3)))
    np.testing.assert_allclose(logm_oracle(np.diag([math.e, math.e**2])), np.diag([1.0, 2.0]), rtol=1e-15)


def test_logm_oracle_rejects_indefinite():
    with pytest.raises(ValueError):
        logm_oracle(np.diag([1.0, -1.0]))


@given(st.integers(1, 16), st.integers(0, 2**32 - 1))
def test_logm_oracle_round_trip(n, seed):
    a, _ = random_spd(np.random.default_rng(seed), n, 0.05, 3.0)
    back = expm(logm_oracle(a), 1e-16)
    assert frobenius_norm(back - a) <= 1e-10 * frobenius_norm(a)
    assert frobenius_norm(expm_oracle(logm_oracle(a)) - a) <= 1e-10 * frobenius_norm(a)


def test_taylor_series_identity():
    res = taylor_log_series(np.eye(3), 5)
    assert res.in_domain
    np.testing.assert_array_equal(res.x, np.zeros((3, 3)))


def test_taylor_series_scalar():
    assert taylor_log_series([[1.1]], 30).x[0, 0] == pytest.approx(0.09531017980432494, abs=1e-12)


def test_taylor_series_flags_outside_domain():
    with pytest.warns(RuntimeWarning):
        res = taylor_log_series(np.diag([0.1, 2.5]), 5)
    assert not res.in_domain


@given(st.integers(1, 10), st.integers(0, 2**32 - 1))
def test_taylor_agrees_with_oracle_near_identity(n, seed):
    r = np.random.default_rng(seed)
    a, _ = random_spd(r, n, 0.9, 1.1)
    dist = frobenius_norm(np.eye(n) - a)
    a = np.eye(n) + (a - np.eye(n)) * min(1.0, 0.3 / max(dist, 1e-300))
    series = taylor_log_series(a, 60).x
    assert frobenius_norm(series - logm_oracle(a)) <= 1e-8
