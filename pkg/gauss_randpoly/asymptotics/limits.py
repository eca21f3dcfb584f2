"""Limit curves of E_N^{1/N} and of the scaled ratio E_N(z/√N)/E_N(0).

Real z: a single curve with a phase transition at z² = 2σ²-3.
Imaginary z = iy: separate even-N and odd-N curves assembled from
±L₁ and ±L₂ with thresholds y_*² and 3-2σ².
"""
import cmath
import enum
import logging
import math
from dataclasses import dataclass, field

from gauss_randpoly.asymptotics.thresholds import (curve_l1, curve_l2, tangency_y_squared,
                                                   y_star_squared)
from gauss_randpoly.errors import DomainError

logger = logging.getLogger(__name__)

PHASE_THRESHOLD = "z2=2sigma2-3"
Z_STAR_THRESHOLD = "z2=z_star2"


class BranchKind(enum.Enum):
    """Which critical point of the mean-field problem the limit comes from."""

    SYMMETRIC = "m0"
    BROKEN = "m_pm"


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def of(cls, N):
        return cls.EVEN if N % 2 == 0 else cls.ODD

    @classmethod
    def coerce(cls, value):
        """Accepts a Parity, its string value (any case) or an integer N."""
        if isinstance(value, cls):
            return value
        if isinstance(value, int):
            return cls.of(value)
        try:
            return cls(str(value).lower())
        except ValueError:
            raise DomainError(f"parity must be 'even' or 'odd', got {value!r}") from None


@dataclass(frozen=True)
class Branch:
    """
    A limit branch together with the sign factor applied to its curve.

    Args:
        kind(BranchKind): m = 0 (curve L₁) or m = m± (curve L₂)
        sign(int): +1, or -1 when the limit is the negated curve
    """

    kind: BranchKind
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise DomainError(f"branch sign must be +1 or -1, got {self.sign}")

    def __str__(self):
        return self.kind.value


@dataclass(frozen=True)
class LimitCurve:
    """Value of a limit curve at one point, the branch it sits on, and the thresholds passed."""

    value: float
    branch: Branch
    thresholds_crossed: tuple = field(default=())

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"limit value must be finite, got {self.value}")

    def __float__(self):
        return float(self.value)


def _crossed(y2, sigma2):
    """Thresholds lying between z² = +∞ and z² = -y²."""
    names = []
    if y2 > tangency_y_squared(sigma2):
        names.append(PHASE_THRESHOLD)
    if y2 > y_star_squared(sigma2):
        names.append(Z_STAR_THRESHOLD)
    return tuple(names)


def limit_real(z2, sigma2):
    """
    lim (σE_N(z;σ))^{1/N} for real z.

    Args:
        z2(float): z² >= 0
        sigma2(float): σ² > 0

    Returns:
        LimitCurve: 1+z² when z² >= 2σ²-3, otherwise
        2(σ²-1)·exp((1+z²)/(2(σ²-1)) - 1) on the broken branch
    """
    if z2 < 0:
        raise DomainError(f"limit_real needs z2 >= 0, got {z2}")
    if sigma2 <= 0:
        raise DomainError(f"sigma2 must be > 0, got {sigma2}")
    if z2 >= 2.0 * sigma2 - 3.0:
        return LimitCurve(1.0 + z2, Branch(BranchKind.SYMMETRIC))
    # here σ² > 3/2, so L₂ at y² = -z² is the broken-branch value
    return LimitCurve(curve_l2(-z2, sigma2), Branch(BranchKind.BROKEN), (PHASE_THRESHOLD,))


def scaled_limit(z2, sigma2):
    """
    lim E_N(z/√N;σ)/E_N(0;σ) for complex z.

    Args:
        z2(complex): z²
        sigma2(float): σ² > 0

    Returns:
        complex: exp(z²) if σ² <= 3/2, else exp(z²/(2(σ²-1)))
    """
    if sigma2 <= 0:
        raise DomainError(f"sigma2 must be > 0, got {sigma2}")
    z2 = complex(z2)
    if sigma2 <= 1.5:
        return cmath.exp(z2)
    return cmath.exp(z2 / (2.0 * (sigma2 - 1.0)))


def scaled_branch(sigma2):
    """Branch behind scaled_limit: m = 0 up to σ² = 3/2, m± beyond."""
    if sigma2 <= 0:
        raise DomainError(f"sigma2 must be > 0, got {sigma2}")
    return Branch(BranchKind.SYMMETRIC if sigma2 <= 1.5 else BranchKind.BROKEN)


def _piece(kind, sign, y2, sigma2):
    curve = curve_l1(y2) if kind is BranchKind.SYMMETRIC else curve_l2(y2, sigma2)
    return LimitCurve(sign * curve, Branch(kind, sign), _crossed(y2, sigma2))


def conjectured_limit(y2, sigma2, parity):
    """
    Conjectured limit of the even-N or odd-N subsequence of (σE_N(iy;σ))^{1/N}.

    The σ² = 1 row is used only at exact equality; boundary points follow the
    closed and open inequalities of the case table below.

        σ² >= 3/2      y² <= y_*²: L₂               else: even -L₁, odd L₁
        1 < σ² < 3/2   y² <= 3-2σ²: L₁   3-2σ² < y² < y_*²: L₂
                       y² >= y_*²: even -L₁, odd L₁
        σ² = 1         even |L₁|, odd L₁
        0 <= σ² < 1    y² <= y_*²: L₁    y_*² < y² < 3-2σ²: even -L₂, odd L₂
                       y² >= 3-2σ²: even -L₁, odd L₁

    Args:
        y2(float): y² >= 0 where z = iy
        sigma2(float): σ² >= 0
        parity(Parity): even or odd N (strings and integers are accepted)

    Returns:
        LimitCurve: value, branch with sign, thresholds crossed
    """
    if y2 < 0:
        raise DomainError(f"y2 must be >= 0, got {y2}")
    if sigma2 < 0:
        raise DomainError(f"sigma2 must be >= 0, got {sigma2}")
    even = Parity.coerce(parity) is Parity.EVEN
    flip = -1 if even else 1
    y_star2 = y_star_squared(sigma2)
    tangency = tangency_y_squared(sigma2)

    if sigma2 >= 1.5:
        if y2 <= y_star2:
            return _piece(BranchKind.BROKEN, 1, y2, sigma2)
        return _piece(BranchKind.SYMMETRIC, flip, y2, sigma2)
    if sigma2 > 1:
        if y2 <= tangency:
            return _piece(BranchKind.SYMMETRIC, 1, y2, sigma2)
        if y2 < y_star2:
            return _piece(BranchKind.BROKEN, 1, y2, sigma2)
        return _piece(BranchKind.SYMMETRIC, flip, y2, sigma2)
    if sigma2 == 1:
        sign = -1 if even and y2 > 1 else 1
        return _piece(BranchKind.SYMMETRIC, sign, y2, sigma2)
    if y2 <= y_star2:
        return _piece(BranchKind.SYMMETRIC, 1, y2, sigma2)
    if y2 < tangency:
        return _piece(BranchKind.BROKEN, flip, y2, sigma2)
    return _piece(BranchKind.SYMMETRIC, flip, y2, sigma2)


def limit_curve(z2, sigma2, parity):
    """
    Reference limit of (σE_N)^{1/N} at real z²: limit_real for z² >= 0, the
    conjectured parity-split limit at y² = -z² otherwise.
    """
    if z2 >= 0:
        return limit_real(z2, sigma2)
    return conjectured_limit(-z2, sigma2, parity)
