"""Matrix logarithm by fixed-point iteration on exponentials.

The map ``g(X) = A exp(-X) - I + X`` has the logarithms of ``A`` as fixed
points. Started from an ``X_0`` that commutes with ``A``, the iterates stay
in the commutative algebra generated by ``A``, so the exponential can be
carried along multiplicatively instead of being recomputed from scratch:

    D_n     = A Y_n - I
    X_{n+1} = X_n + D_n
    Y_{n+1} = Y_n exp(-D_n)

with ``Y_0 = exp(-X_0)``. ``Y_n`` tends to ``A^{-1}`` and ``D_n`` to zero,
so the inner exponentials get cheaper as the iteration converges.
"""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from .dense import (
    Cost,
    CostLedger,
    add_scaled_identity,
    as_matrix,
    frobenius_norm,
    inverse,
    multiply,
)
from .expm import DEFAULT_THETA, expm

__all__ = [
    "Init",
    "SpectralBounds",
    "FixedPointConfig",
    "IterationReport",
    "LogmResult",
    "LogmDivergenceError",
    "NoPositiveSpectrumError",
    "gershgorin_bounds",
    "init_paper",
    "init_linear",
    "initial_matrix",
    "fixed_point_logm",
    "refine",
    "error_estimate",
]

log = logging.getLogger(__name__)

GERSHGORIN_FLOOR = 1e-8
DIVERGENCE_PATIENCE = 5
ERROR_ESTIMATE_EPS = 1e-16


class Init(str, enum.Enum):
    PAPER = "paper"
    LINEAR = "linear"
    USER = "user"


class NoPositiveSpectrumError(ValueError):
    pass


@dataclass(frozen=True)
class SpectralBounds:
    lambda_min: float
    lambda_max: float

    def __post_init__(self):
        lo, hi = self.lambda_min, self.lambda_max
        if not (math.isfinite(lo) and math.isfinite(hi) and 0.0 < lo <= hi):
            raise ValueError(f"need 0 < lambda_min <= lambda_max, got [{lo}, {hi}]")

    def scaled(self, sigma: float) -> "SpectralBounds":
        return SpectralBounds(self.lambda_min / sigma, self.lambda_max / sigma)


@dataclass
class FixedPointConfig:
    """Solver settings.

    ``eps_exp`` defaults to ``eps / 10``. ``bounds`` is used by the linear
    initializer (Gershgorin discs when omitted); ``x0`` by the user one.
    """

    eps: float = 1e-10
    eps_exp: Optional[float] = None
    max_iter: int = 500
    init: Init = Init.PAPER
    bounds: Optional[SpectralBounds] = None
    x0: Optional[np.ndarray] = None
    sigma: float = 1.0
    refine: bool = False
    refine_eps: float = 1e-16
    theta: float = DEFAULT_THETA
    track_iterates: bool = False

    def __post_init__(self):
        self.init = Init(self.init)
        if self.eps_exp is None:
            self.eps_exp = self.eps / 10.0
        for name in ("eps", "eps_exp", "refine_eps"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {value!r}")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        if not (self.sigma > 0.0 and math.isfinite(self.sigma)):
            raise ValueError(f"sigma must be positive, got {self.sigma!r}")
        if self.init is Init.USER and self.x0 is None:
            raise ValueError("init='user' needs an x0 matrix")


@dataclass
class IterationReport:
    iterations: int = 0
    converged: bool = False
    stop_value: float = math.inf
    ledger: CostLedger = field(default_factory=CostLedger)
    refinement_applied: bool = False
    inverse_residual: float = math.inf
    step_norms: List[float] = field(default_factory=list)


@dataclass
class LogmResult:
    x: np.ndarray
    report: IterationReport
    y: Optional[np.ndarray] = None  # last Y_n, approximates inv(A/sigma)
    iterates: Optional[List[np.ndarray]] = None


class LogmDivergenceError(ArithmeticError):
    """Raised when the step size keeps growing; ``result`` holds the best iterate."""

    def __init__(self, message: str, result: LogmResult):
        super().__init__(message)
        self.result = result


def gershgorin_bounds(a, floor: float = GERSHGORIN_FLOOR) -> SpectralBounds:
    """Interval containing every real eigenvalue of ``a``.

    The lower edge is clamped to ``floor * lambda_max`` so the interval stays
    positive even when the discs reach zero.
    """
    a = as_matrix(a)
    diag = np.diag(a)
    radii = np.sum(np.abs(a), axis=1) - np.abs(diag)
    hi = float(np.max(diag + radii))
    if hi <= 0.0:
        raise NoPositiveSpectrumError(f"Gershgorin upper bound {hi} is not positive")
    lo = float(np.min(diag - radii))
    return SpectralBounds(max(lo, floor * hi), hi)


def init_linear(a, bounds: SpectralBounds) -> np.ndarray:
    """Linear guess ``[ln(m) - 1] I + A / m`` with ``m`` the spectral midpoint.

    This is the tangent of ``ln`` at the midpoint of ``bounds``, so it commutes
    with ``A`` and is exact for ``A = m I``.
    """
    a = as_matrix(a)
    mid = 0.5 * (bounds.lambda_min + bounds.lambda_max)
    return add_scaled_identity(a / mid, math.log(mid) - 1.0)


def init_paper(a) -> np.ndarray:
    """``2A - (1 + ln 2) I``: the linear guess for a spectrum in ``(0, 1]``."""
    a = as_matrix(a)
    return add_scaled_identity(2.0 * a, -(1.0 + math.log(2.0)))


def initial_matrix(a, config: FixedPointConfig) -> np.ndarray:
    if config.init is Init.PAPER:
        return init_paper(a)
    if config.init is Init.LINEAR:
        bounds = config.bounds.scaled(config.sigma) if config.bounds else gershgorin_bounds(a)
        return init_linear(a, bounds)
    x0 = as_matrix(config.x0)
    if x0.shape != a.shape:
        raise ValueError(f"x0 has shape {x0.shape}, expected {a.shape}")
    return x0 - math.log(config.sigma) * np.eye(a.shape[0])


# overflow is detected explicitly from the step norm
@np.errstate(over="ignore", invalid="ignore")
def fixed_point_logm(a, config: Optional[FixedPointConfig] = None) -> LogmResult:
    """Logarithm of ``a`` by the coupled X/Y fixed-point iteration.

    The iteration runs on ``a / sigma`` and ``ln(sigma) I`` is added back at
    the end. It stops once ``||X_n||_F * ||X_{n+1} - X_n||_F <= eps``; when
    ``max_iter`` is reached first the last iterate is returned with
    ``converged=False``. Every iteration charges two fixed-point products
    (``A Y_n`` and ``Y_n exp(-D_n)``) plus those of the inner exponential.

    Raises :class:`LogmDivergenceError` if the step norm exceeds its
    initial value and grows for five consecutive iterations, or if the
    iterates overflow.
    """
    config = config or FixedPointConfig()
    a = as_matrix(a)
    n = a.shape[0]
    sigma = config.sigma
    a_s = a / sigma
    shift = math.log(sigma)

    report = IterationReport()
    ledger = report.ledger

    x = initial_matrix(a_s, config)
    y = expm(-x, config.eps_exp, ledger, config.theta)
    iterates = [x] if config.track_iterates else None

    first_step = None
    growth = 0
    prev_step = math.inf

    def _result(x_out, y_out):
        return LogmResult(add_scaled_identity(x_out, shift), report, y_out, iterates)

    for it in range(1, config.max_iter + 1):
        d = add_scaled_identity(multiply(a_s, y, ledger, Cost.FIXED_POINT), -1.0)
        step = frobenius_norm(d)
        report.step_norms.append(step)
        if not math.isfinite(step):
            report.iterations = it
            raise LogmDivergenceError(f"iterates overflowed at iteration {it}", _result(x, y))
        x_next = x + d
        e = expm(-d, config.eps_exp, ledger, config.theta)
        y_next = multiply(y, e, ledger, Cost.FIXED_POINT)
        report.iterations = it

        report.stop_value = frobenius_norm(x) * step
        x, y = x_next, y_next
        if iterates is not None:
            iterates.append(x)

        if report.stop_value <= config.eps:
            report.converged = True
            break

        if first_step is None:
            first_step = step
        elif step > prev_step and step > first_step:
            growth += 1
            if growth >= DIVERGENCE_PATIENCE:
                raise LogmDivergenceError(
                    f"step norm grew for {growth} consecutive iterations (now {step:.3e})",
                    _result(x, y),
                )
        else:
            growth = 0
        prev_step = step

    if not report.converged:
        log.info("no convergence after %d iterations, stop value %.3e", report.iterations, report.stop_value)

    report.inverse_residual = frobenius_norm(add_scaled_identity(a_s @ y, -1.0))

    if config.refine:
        x = refine(a_s, x, config.refine_eps, ledger, config.theta)
        report.refinement_applied = True

    return _result(x, y)


def refine(a, x, refine_eps: float = 1e-16, ledger: Optional[CostLedger] = None, theta: float = DEFAULT_THETA) -> np.ndarray:
    """One correction step ``X - (A^{-1} e^X - A e^{-X}) / 2``.

    For a deviation ``D = X - ln A`` commuting with ``A`` this replaces ``D``
    by ``D - sinh(D)``, so the error falls cubically. It has no global
    convergence and is meant only as a final polish of a converged iterate.
    """
    a = as_matrix(a)
    x = as_matrix(x)
    if a.shape != x.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {x.shape}")
    a_inv = inverse(a)
    grow = multiply(a_inv, expm(x, refine_eps, ledger, theta), ledger, Cost.FIXED_POINT)
    shrink = multiply(a, expm(-x, refine_eps, ledger, theta), ledger, Cost.FIXED_POINT)
    return x - 0.5 * (grow - shrink)


def error_estimate(a, x) -> float:
    """Round-trip error ``||exp(x) - a||_F / ||a||_F``, outside any ledger."""
    a = as_matrix(a)
    x = as_matrix(x)
    if a.shape != x.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {x.shape}")
    return frobenius_norm(expm(x, ERROR_ESTIMATE_EPS) - a) / frobenius_norm(a)
