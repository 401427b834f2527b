"""Matrix exponential by scaling and squaring with a truncated Taylor series.

``e^B = [T_k(B / 2^j)]^(2^j)`` where ``T_k`` is the degree-``k`` Taylor
polynomial. Evaluating ``T_k`` term by term costs ``k - 1`` products and
the squarings another ``j``, so every call charges exactly ``k + j - 1``
multiplications to the ledger.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .dense import Cost, CostLedger, as_matrix, frobenius_norm, multiply

__all__ = ["DEFAULT_THETA", "MIN_TAYLOR_ORDER", "Truncation", "ExpPlan", "plan_exp", "expm", "taylor_exp"]

DEFAULT_THETA = 0.5
MIN_TAYLOR_ORDER = 2


class Truncation(str, enum.Enum):
    TERM = "term"  # last kept term s^k / k! <= eps
    POWER = "power"  # s^k <= eps, ignoring the factorial


@dataclass(frozen=True)
class ExpPlan:
    j: int
    k: int
    scaled_norm: float

    @property
    def multiplications(self) -> int:
        return self.k + self.j - 1


def plan_exp(
    norm_b: float,
    eps: float,
    theta: float = DEFAULT_THETA,
    truncation: Truncation = Truncation.TERM,
) -> ExpPlan:
    """Choose squaring depth ``j`` and Taylor order ``k`` for ``||B|| = norm_b``.

    ``j`` is the least non-negative integer with ``s = norm_b / 2^j <= theta``.
    ``k`` is the least order (at least 2) whose last term is small enough:
    ``s^k / k! <= eps`` for ``Truncation.TERM``, or the stricter
    ``s^k <= eps`` for ``Truncation.POWER``. For ``theta <= 1/2`` either rule
    bounds the truncation error of the scaled exponential by ``eps``.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps!r}")
    if not 0.0 < theta < 1.0:
        raise ValueError(f"theta must lie in (0, 1), got {theta!r}")
    if not np.isfinite(norm_b) or norm_b < 0:
        raise ValueError(f"norm must be finite and non-negative, got {norm_b!r}")

    j = 0
    s = float(norm_b)
    while s > theta:
        j += 1
        s = norm_b / 2.0**j

    truncation = Truncation(truncation)
    k = 1
    if s > 0.0:
        term = s
        while term > eps:
            k += 1
            term *= s / k if truncation is Truncation.TERM else s
    return ExpPlan(j=j, k=max(k, MIN_TAYLOR_ORDER), scaled_norm=s)


def taylor_exp(b: np.ndarray, k: int, ledger: Optional[CostLedger] = None) -> np.ndarray:
    """Degree-``k`` Taylor polynomial of ``e^b`` using ``k - 1`` products."""
    n = b.shape[0]
    result = np.eye(n) + b
    term = b
    for m in range(2, k + 1):
        term = multiply(term, b, ledger, Cost.EXP) / m
        result = result + term
    return result


def expm(
    b,
    eps: float,
    ledger: Optional[CostLedger] = None,
    theta: float = DEFAULT_THETA,
    plan: Optional[ExpPlan] = None,
    truncation: Truncation = Truncation.TERM,
) -> np.ndarray:
    """Exponential of ``b`` with truncation threshold ``eps``.

    Charges ``plan.k + plan.j - 1`` products to ``ledger.exp_muls``.
    A precomputed ``plan`` may be supplied to force ``j`` and ``k``.
    """
    b = as_matrix(b)
    if plan is None:
        plan = plan_exp(frobenius_norm(b), eps, theta, truncation)
    f = taylor_exp(b / 2.0**plan.j, plan.k, ledger)
    for _ in range(plan.j):
        f = multiply(f, f, ledger, Cost.EXP)
    return f
