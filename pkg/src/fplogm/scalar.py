"""Scalar picture of the fixed-point iteration.

When the iterate commutes with ``A`` and the deviation ``D = X - ln A`` is
normal, every eigenvalue ``lam`` of ``D`` evolves independently under

    lam -> exp(-lam) + lam - 1.

This module studies that map on the complex plane: the set ``V`` where it
does not increase ``|lam|``, and the log-ratio indicator
``f(lam) = ln|g(lam)|^2 - ln|lam|^2`` whose sign decides membership.
"""

from __future__ import annotations

import cmath
import csv
import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Sequence, Tuple, Union

import numpy as np
from scipy.optimize import brentq

__all__ = [
    "SENTINEL",
    "DivergenceError",
    "RegionGrid",
    "deviation_map",
    "deviation_map_array",
    "in_region_V",
    "f_indicator",
    "region_grid",
    "scalar_orbit",
    "negative_real_boundary",
    "write_grid_csv",
]

SENTINEL = -math.inf
"""Value of the indicator at ``lam = 0``, where it tends to minus infinity."""

# below this modulus the map is summed as a power series to avoid cancellation
_SERIES_RADIUS = 0.5
_SERIES_TERMS = 30


class DivergenceError(ArithmeticError):
    pass


def _series(z):
    # exp(-z) + z - 1 = sum_{m>=2} (-z)^m / m!
    term = z * z / 2.0
    total = term
    for m in range(3, _SERIES_TERMS):
        term = term * (-z) / m
        total = total + term
    return total


def deviation_map(lam: complex) -> complex:
    """``exp(-lam) + lam - 1``; returns a float for real input."""
    if isinstance(lam, (complex, np.complexfloating)):
        z = complex(lam)
        if abs(z) < _SERIES_RADIUS:
            return _series(z)
        return cmath.exp(-z) + z - 1.0
    x = float(lam)
    if abs(x) < _SERIES_RADIUS:
        return _series(x)
    return math.exp(-x) + x - 1.0


def deviation_map_array(lam) -> np.ndarray:
    """Vectorised :func:`deviation_map` over an array of (complex) values."""
    z = np.asarray(lam)
    out = np.exp(-z) + z - 1.0
    small = np.abs(z) < _SERIES_RADIUS
    if np.any(small):
        out = np.array(out, copy=True)
        out[small] = _series(z[small])
    return out


def in_region_V(lam: complex) -> bool:
    """True when ``|exp(-lam) + lam - 1| <= |lam|`` (boundary included)."""
    lam = complex(lam)
    if lam == 0:
        raise ValueError("membership is undefined at the fixed point lam = 0")
    return abs(deviation_map(lam)) <= abs(lam)


def f_indicator(lam: complex) -> float:
    """``ln|exp(-lam)+lam-1|^2 - ln|lam|^2``; :data:`SENTINEL` at zero.

    Negative strictly inside ``V``, zero on its boundary.
    """
    lam = complex(lam)
    if lam == 0:
        return SENTINEL
    g = abs(deviation_map(lam))
    if g == 0.0:
        # |lam|^2 / 2 underflowed
        return SENTINEL
    return 2.0 * (math.log(g) - math.log(abs(lam)))


@dataclass(frozen=True)
class RegionGrid:
    """Indicator values on a uniform grid.

    ``values[i, j]`` belongs to ``re[j] + 1j * im[i]``: rows run along the
    imaginary axis in ascending order, columns along the real axis.
    """

    re_range: Tuple[float, float]
    im_range: Tuple[float, float]
    resolution: int
    values: np.ndarray

    @property
    def re(self) -> np.ndarray:
        return np.linspace(*self.re_range, self.resolution)

    @property
    def im(self) -> np.ndarray:
        return np.linspace(*self.im_range, self.resolution)

    def points(self):
        """Yield ``(re, im, f)`` in row-major order."""
        re = self.re
        for i, y in enumerate(self.im):
            for j, x in enumerate(re):
                yield float(x), float(y), float(self.values[i, j])


def region_grid(
    re_range: Sequence[float] = (-math.pi, math.pi),
    im_range: Sequence[float] = (-math.pi, math.pi),
    resolution: int = 201,
) -> RegionGrid:
    re_lo, re_hi = map(float, re_range)
    im_lo, im_hi = map(float, im_range)
    if resolution < 2:
        raise ValueError("resolution must be at least 2")
    if not (re_lo < re_hi and im_lo < im_hi):
        raise ValueError(f"ranges must be non-empty and increasing: {re_range}, {im_range}")

    x = np.linspace(re_lo, re_hi, resolution)
    y = np.linspace(im_lo, im_hi, resolution)
    lam = x[None, :] + 1j * y[:, None]
    origin = lam == 0
    safe = np.where(origin, 1.0, lam)
    g = np.abs(deviation_map_array(safe))
    with np.errstate(divide="ignore"):
        values = 2.0 * (np.log(g) - np.log(np.abs(safe)))
    values[origin] = SENTINEL
    return RegionGrid((re_lo, re_hi), (im_lo, im_hi), resolution, values)


def write_grid_csv(grid: RegionGrid, dest: Union[str, Path]) -> None:
    with open(dest, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["re", "im", "f"])
        for x, y, f in grid.points():
            writer.writerow([f"{x:.17g}", f"{y:.17g}", "-inf" if f == SENTINEL else f"{f:.17g}"])


def scalar_orbit(lam0: complex, n_steps: int) -> List[complex]:
    """``[lam0, g(lam0), g(g(lam0)), ...]`` with ``n_steps`` applications.

    Raises :class:`DivergenceError` once ``exp(-lam)`` overflows.
    """
    orbit = [lam0]
    lam = lam0
    for step in range(n_steps):
        try:
            lam = deviation_map(lam)
        except OverflowError:
            raise DivergenceError(f"exp(-lam) overflowed at step {step}, lam = {lam!r}") from None
        if not cmath.isfinite(lam):
            raise DivergenceError(f"orbit left the finite range at step {step}")
        orbit.append(lam)
    return orbit


def negative_real_boundary(bracket: Tuple[float, float] = (-2.0, -0.5)) -> float:
    """Point where ``V`` ends on the negative real axis, i.e. where
    ``exp(-x) + x - 1 = -x``; close to ``-1.2564``."""
    return brentq(lambda x: math.exp(-x) + 2.0 * x - 1.0, *bracket, xtol=1e-15, rtol=1e-15)
