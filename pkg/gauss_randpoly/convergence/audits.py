"""Exact sign, additivity and bound audits of E_N."""
import logging
from collections import defaultdict
from fractions import Fraction

import pandas as pd

from gauss_randpoly.asymptotics.limits import Parity
from gauss_randpoly.errors import DomainError
from gauss_randpoly.exact.algebra import to_rational
from gauss_randpoly.exact.expected_polynomial import eval_exact

logger = logging.getLogger(__name__)


def _sign(value):
    return (value > 0) - (value < 0)


def _exact_real(N, z2, sigma2):
    return eval_exact(N, z2, sigma2).re


def sign_audit(cfg, sigma2, y2_grid):
    """
    Exact signs of E_N(iy;σ) for every degree of ``cfg`` and every y².

    Even degrees must give values >= 0; a negative one is logged and
    flagged in the ``violation`` column. For odd degrees the sign-change
    locations are bracketed and stored in ``frame.attrs["sign_changes"]``.

    Args:
        cfg(StudyConfig): the degrees to audit
        sigma2(rational-like): σ² > 0
        y2_grid(list): rational-like y² values

    Returns:
        pandas.DataFrame: N, parity, y2, sigma2, sign, violation
    """
    sigma2 = to_rational(sigma2)
    grid = sorted(to_rational(y2) for y2 in y2_grid)
    index_to_row = defaultdict(dict)
    sign_changes = {}
    index = 0
    for N in cfg.degrees():
        parity = Parity.of(N)
        for y2 in grid:
            sign = _sign(_exact_real(N, -y2, sigma2))
            violation = parity is Parity.EVEN and sign < 0
            if violation:
                logger.error("negative E_%d at y2=%s sigma2=%s", N, y2, sigma2)
            index_to_row[index] = {
                "N": N, "parity": parity.value, "y2": float(y2), "sigma2": float(sigma2),
                "sign": sign, "violation": violation,
            }
            index += 1
        if parity is Parity.ODD:
            sign_changes[N] = sign_change_thresholds(N, sigma2, grid)
    frame = pd.DataFrame.from_dict(index_to_row, orient="index")
    frame.attrs["sign_changes"] = sign_changes
    return frame


def sign_change_thresholds(N, sigma2, y2_grid, tol=1e-9):
    """
    Locations in y² where E_N(iy;σ) changes sign, bracketed on ``y2_grid``
    and refined by exact bisection.

    Args:
        N(int): degree
        sigma2(rational-like): σ² > 0
        y2_grid(list): rational-like y² values
        tol(float): width below which a bracket is accepted

    Returns:
        list: float y² locations, increasing
    """
    if tol <= 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    sigma2 = to_rational(sigma2)
    grid = sorted(to_rational(y2) for y2 in y2_grid)
    signs = [_sign(_exact_real(N, -y2, sigma2)) for y2 in grid]
    tol = to_rational(tol)
    found = []
    for i, (y2, sign) in enumerate(zip(grid, signs)):
        if sign == 0:
            found.append(float(y2))
            continue
        if i + 1 == len(grid) or signs[i + 1] != -sign:
            continue
        low, high = y2, grid[i + 1]
        while high - low > tol:
            mid = (low + high) / 2
            mid_sign = _sign(_exact_real(N, -mid, sigma2))
            if mid_sign == 0:
                low = high = mid
            elif mid_sign == sign:
                low = mid
            else:
                high = mid
        found.append(float((low + high) / 2))
    logger.debug("E_%d sign changes at sigma2=%s: %s", N, sigma2, found)
    return found


def additivity_check(N1, N2, z2, sigma2):
    """
    Compares σE_{N₁+N₂} with (σE_{N₁})(σE_{N₂}) exactly, for z² >= 0.

    Both sides are positive, so the comparison is made between squares and
    σ never needs to be irrational.

    Args:
        N1(int): first degree
        N2(int): second degree
        z2(rational-like): z² >= 0
        sigma2(rational-like): σ² > 0

    Returns:
        int: +1 if σE_{N₁+N₂} is larger, -1 if smaller, 0 if equal
    """
    z2, sigma2 = to_rational(z2), to_rational(sigma2)
    if z2 < 0:
        raise DomainError(f"additivity_check needs z2 >= 0, got {z2}")
    joint = _exact_real(N1 + N2, z2, sigma2)
    product = _exact_real(N1, z2, sigma2) * _exact_real(N2, z2, sigma2)
    # σE_{N₁+N₂} vs σ²E_{N₁}E_{N₂}, divided by σ and squared
    return _sign(joint * joint - sigma2 * product * product)


def bounds_check(N, z2, sigma2):
    """
    Checks (1+z²)^{2N} < σ²E_N² < σ^{2N}(σ²+z²)^{2N} for σ² > 1 (both
    inequalities reversed for σ² < 1), exactly, at real z² >= 0 and N >= 2.

    Args:
        N(int): degree >= 2
        z2(rational-like): z² >= 0
        sigma2(rational-like): σ² > 0, != 1

    Returns:
        bool: whether both strict inequalities hold
    """
    z2, sigma2 = to_rational(z2), to_rational(sigma2)
    if N < 2 or z2 < 0 or sigma2 <= 0 or sigma2 == 1:
        raise DomainError(f"bounds_check needs N >= 2, z2 >= 0, sigma2 > 0 and != 1; "
                          f"got N={N}, z2={z2}, sigma2={sigma2}")
    value = _exact_real(N, z2, sigma2)
    middle = sigma2 * value * value
    lower = (1 + z2) ** (2 * N)
    upper = sigma2 ** N * (sigma2 + z2) ** (2 * N)
    if sigma2 > 1:
        return lower < middle < upper
    return upper < middle < lower


def scaled_ratio_identity(N, z2):
    """(1 + z²/N)^N, the exact scaled ratio at σ² = 1."""
    return (1 + to_rational(z2) / Fraction(N)) ** N
