import hypothesis
import numpy as np
import pytest

from fplogm.dense import householder_similarity

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=10, deadline=None)
hypothesis.settings.load_profile("default")


def random_spd(rng, n, lo=1e-3, hi=1.0):
    lam = rng.uniform(lo, hi, n)
    v = rng.standard_normal(n)
    v /= np.linalg.norm(v)
    return householder_similarity(lam, v), lam


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
