"""κ*, the threshold curves in (σ², y²) and the two building-block limit curves."""
import logging
import math
import sys
from functools import lru_cache

from scipy.optimize import bisect

from gauss_randpoly.errors import DomainError

logger = logging.getLogger(__name__)

RESIDUAL_FLOOR = 4.0 * sys.float_info.epsilon


def _kappa_residual(kappa):
    return kappa - math.exp(-kappa - 1.0)


@lru_cache(maxsize=8)
def kappa_star(tol=1e-11):
    """
    Unique root κ* of κ = exp(-κ-1), about 0.27846454276.

    Bisection on [0, 1] to 1e-14, then two Newton steps. A residual below
    a few ulp cannot be certified in double precision, so tolerances under
    4·float_info.epsilon are raised to that floor.

    Args:
        tol(float): required bound on |κ - exp(-κ-1)|, > 0

    Returns:
        float: κ*
    """
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    tol = max(tol, RESIDUAL_FLOOR)
    kappa = bisect(_kappa_residual, 0.0, 1.0, xtol=1e-14)
    for _ in range(2):
        kappa -= _kappa_residual(kappa) / (1.0 + math.exp(-kappa - 1.0))
    residual = abs(_kappa_residual(kappa))
    if residual >= tol:
        raise DomainError(f"kappa_star residual {residual:.3g} above tol={tol}")
    logger.debug("kappa_star=%.15f residual=%.3g", kappa, residual)
    return kappa


def z_star_squared(sigma2):
    """z_*²(σ²) = 2κ*(1-σ²) - 1; equals -1 at σ² = 1."""
    if sigma2 < 0:
        raise DomainError(f"sigma2 must be >= 0, got {sigma2}")
    return 2.0 * kappa_star() * (1.0 - sigma2) - 1.0


def y_star_squared(sigma2):
    """y_*² = -z_*² = 1 + 2κ*(σ²-1), where the curve L₂ meets -L₁."""
    return -z_star_squared(sigma2)


def tangency_y_squared(sigma2):
    """y² = 3 - 2σ², where L₂ touches L₁ (and the real-z phase boundary z² = 2σ²-3)."""
    return 3.0 - 2.0 * sigma2


def plateau_window():
    """
    The σ interval on which the N-th roots at y² = 2 tend to ±1.

    Its ends are where y² = 2 meets the two thresholds: 3 - 2σ² = 2 and
    1 + 2κ*(σ²-1) = 2.

    Returns:
        tuple: (sqrt(1/2), sqrt(1 + 1/(2κ*)))
    """
    return math.sqrt(0.5), math.sqrt(1.0 + 1.0 / (2.0 * kappa_star()))


def curve_l1(y2):
    """L₁(y) = 1 - y², the analytic continuation of 1 + z² to z = iy."""
    return 1.0 - y2


def curve_l2(y2, sigma2):
    """
    L₂(y;σ) = 2(σ²-1)·exp((1-y²)/(2(σ²-1)) - 1).

    Args:
        y2(float): y² with z = iy
        sigma2(float): σ², must differ from 1

    Returns:
        float: the curve value (negative for σ² < 1)
    """
    if sigma2 == 1:
        raise DomainError("L2 is undefined at sigma2 = 1")
    gap = 2.0 * (sigma2 - 1.0)
    return gap * math.exp((1.0 - y2) / gap - 1.0)
