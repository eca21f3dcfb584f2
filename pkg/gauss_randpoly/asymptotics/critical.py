"""Critical points of the one-point entropy functional.

A critical density has the form

    ν(x) ∝ (x² + z²)·exp(-x²/2 + a·x),    a = (1 - 1/σ²)·m,

where its mean m solves a self-consistency equation. m = 0 always solves
it (symmetric branch); m± with a² = 2σ² - 3 - z² is the broken branch.
For z² < 0 the density is a signed measure and m± may be imaginary.
"""
import cmath
import logging
import math
from dataclasses import dataclass

import mpmath

from gauss_randpoly.asymptotics.limits import Branch, BranchKind
from gauss_randpoly.errors import DomainError, PoleError, ZeroNormalizationError

logger = logging.getLogger(__name__)

SQRT_2PI = math.sqrt(2.0 * math.pi)


def _kind(branch):
    if isinstance(branch, Branch):
        return branch.kind
    if isinstance(branch, BranchKind):
        return branch
    try:
        return BranchKind(branch)
    except ValueError:
        raise DomainError(f"unknown branch {branch!r}") from None


def _coupling(sigma2):
    if sigma2 <= 0:
        raise DomainError(f"sigma2 must be > 0, got {sigma2}")
    return 1.0 - 1.0 / sigma2


def _principal_log(value):
    """ln|v|, plus iπ when v < 0."""
    value = complex(value)
    if value == 0:
        raise ZeroNormalizationError("logarithm of zero")
    return cmath.log(value) if value.imag else complex(math.log(abs(value.real)),
                                                       math.pi if value.real < 0 else 0.0)


def m_pm_squared(z2, sigma2):
    """
    Square of the broken-branch mean, σ⁴(2σ²-3-z²)/(σ²-1)².

    Negative values mean m± is purely imaginary.

    Args:
        z2(float): real z² (use -y² for z = iy)
        sigma2(float): σ² != 1

    Returns:
        float: m±²
    """
    if sigma2 == 1:
        raise DomainError("m_pm_squared is undefined at sigma2 = 1")
    return sigma2 * sigma2 * (2.0 * sigma2 - 3.0 - z2) / (sigma2 - 1.0) ** 2


def mean_fixed_point_residual(m, z2, sigma2):
    """
    m minus the mean of the critical density with tilt (1-1/σ²)·m.

    Args:
        m(complex): candidate mean
        z2(float): real z²
        sigma2(float): σ² > 0

    Returns:
        complex: zero exactly at m ∈ {0, ±√m±²}
    """
    c = _coupling(sigma2)
    a2 = (c * m) ** 2
    denominator = z2 + 1.0 + a2
    if denominator == 0:
        raise PoleError(f"z2 + 1 + (1-1/sigma2)^2 m^2 vanishes at m={m}")
    return m - c * m * (z2 + 3.0 + a2) / denominator


def _normal_moments(mean, k_max):
    """Raw moments 0..k_max of 𝒩(mean, 1); mean may be complex."""
    moments = [1.0, mean]
    for k in range(2, k_max + 1):
        moments.append(mean * moments[k - 1] + (k - 1) * moments[k - 2])
    return moments[:k_max + 1]


@dataclass(frozen=True)
class CriticalDensity:
    """
    Parameters of one critical density.

    Args:
        z2(float): real z²
        sigma2(float): σ² > 0
        m(complex): its mean, real or purely imaginary
        branch(Branch): symmetric (m = 0) or broken (m = m±)
    """

    z2: float
    sigma2: float
    m: complex
    branch: Branch

    @property
    def tilt(self):
        return _coupling(self.sigma2) * self.m

    @property
    def normalizer(self):
        """∫(x²+z²)e^{-x²/2+ax}dx/√(2π) = e^{a²/2}(1 + a² + z²)."""
        a = self.tilt
        return cmath.exp(a * a / 2.0) * (1.0 + a * a + self.z2)

    def pdf(self, x):
        a = self.tilt
        weight = (x * x + self.z2) * cmath.exp(-x * x / 2.0 + a * x)
        value = weight / (SQRT_2PI * self.normalizer)
        return value.real if value.imag == 0 else value

    def moment(self, k):
        """∫x^k ν(dx) in closed form through the moments of 𝒩(a, 1)."""
        if k < 0:
            raise DomainError(f"moment order must be >= 0, got {k}")
        a = self.tilt
        raw = _normal_moments(a, k + 2)
        value = (raw[k + 2] + self.z2 * raw[k]) / (1.0 + a * a + self.z2)
        return value.real if isinstance(value, complex) and value.imag == 0 else value

    @property
    def mean(self):
        return self.moment(1)

    def reciprocal_weight_integral(self):
        """∫ν(dx)/(x²+z²) = 1/(1 + a² + z²)."""
        a = self.tilt
        value = 1.0 / (1.0 + a * a + self.z2)
        return value.real if isinstance(value, complex) and value.imag == 0 else value


def critical_density(z2, sigma2, branch):
    """
    The critical density on the given branch.

    Args:
        z2(float): real z²
        sigma2(float): σ² > 0
        branch(Branch): or a BranchKind, or its string value

    Returns:
        CriticalDensity: with m = 0, or m = +√m±² (principal complex root)
    """
    kind = _kind(branch)
    _coupling(sigma2)
    if kind is BranchKind.SYMMETRIC:
        if 1.0 + z2 == 0:
            raise ZeroNormalizationError("symmetric critical density is undefined at z2 = -1")
        return CriticalDensity(z2, sigma2, 0j, Branch(kind))
    m2 = m_pm_squared(z2, sigma2)
    if m2 == 0:
        raise DomainError(f"broken branch coincides with m = 0 at z2={z2}, sigma2={sigma2}")
    m = cmath.sqrt(m2)
    logger.debug("critical density z2=%g sigma2=%g m=%s", z2, sigma2, m)
    return CriticalDensity(z2, sigma2, m, Branch(kind))


def entropy_value(z2, sigma2, branch):
    """
    Critical value of the one-point (signed) entropy functional.

    Symmetric: ln(1 + z²). Broken: ln[2(σ²-1)] + (1+z²)/(2(σ²-1)) - 1.
    Logs are principal, so the imaginary part is π when the branch value is
    negative and exp of the result is the signed curve L₁ or L₂.

    Args:
        z2(float): real z² (negative for imaginary z)
        sigma2(float): σ² > 0
        branch(Branch): or BranchKind

    Returns:
        complex: the critical value
    """
    kind = _kind(branch)
    _coupling(sigma2)
    if kind is BranchKind.SYMMETRIC:
        return _principal_log(1.0 + z2)
    if sigma2 == 1:
        raise DomainError("broken branch is undefined at sigma2 = 1")
    gap = 2.0 * (sigma2 - 1.0)
    return _principal_log(gap) + (1.0 + z2) / gap - 1.0


def entropy_gap_series(z2, sigma2, n_terms):
    """
    Σ_{n=2}^{n_terms+1} rⁿ/n with r = (2σ²-3-z²)/(2(σ²-1)).

    This is the excess of the broken critical value over the symmetric one
    for real z below the phase transition.

    Args:
        z2(float): 0 <= z² <= 2σ²-3
        sigma2(float): σ² > 3/2
        n_terms(int): number of terms

    Returns:
        float: the partial sum
    """
    if sigma2 <= 1.5:
        raise DomainError(f"entropy gap needs sigma2 > 3/2, got {sigma2}")
    if n_terms < 0:
        raise DomainError(f"n_terms must be >= 0, got {n_terms}")
    ratio = (2.0 * sigma2 - 3.0 - z2) / (2.0 * (sigma2 - 1.0))
    if z2 < 0 or not 0 <= ratio < 1:
        raise DomainError(f"ratio {ratio} outside [0, 1) at z2={z2}, sigma2={sigma2}")
    return math.fsum(ratio ** n / n for n in range(2, n_terms + 2))


def free_energy_at_critical_point(z2, sigma2, m):
    """
    ln Z(a) - (1-1/σ²)m²/2 with a = (1-1/σ²)m, the functional's value at the
    critical density of mean m (m need not solve the fixed-point equation).

    Args:
        z2(float): real z²
        sigma2(float): σ² > 0
        m(complex): the mean

    Returns:
        complex: principal value
    """
    c = _coupling(sigma2)
    a = c * m
    return a * a / 2.0 + _principal_log(1.0 + a * a + z2) - c * m * m / 2.0


def one_point_functional(density):
    """
    -∫ν ln(ν/ν_σ) - ((σ²-1)/(4σ²))∬ν(x₁)ν(x₂)(x₁-x₂)², with reference
    ν_σ(x) = (x²+z²)e^{-x²/(2σ²)}/√(2π), evaluated by quadrature.

    Only positive densities qualify: z² >= 0 and a real mean.

    Args:
        density(CriticalDensity): the density to evaluate at

    Returns:
        float: the functional's value
    """
    if density.z2 < 0 or complex(density.m).imag != 0:
        raise DomainError("one_point_functional needs z2 >= 0 and a real mean")
    sigma2 = density.sigma2
    a = float(complex(density.tilt).real)
    log_normalizer = a * a / 2.0 + math.log(1.0 + a * a + density.z2)

    def integrand(x):
        x = float(x)
        log_ratio = -x * x / 2.0 + a * x + x * x / (2.0 * sigma2) - log_normalizer
        return density.pdf(x) * log_ratio

    entropy = -float(mpmath.quad(integrand, [-mpmath.inf, a, mpmath.inf]))
    variance = float(density.moment(2)) - float(density.mean) ** 2
    return entropy - (sigma2 - 1.0) / (4.0 * sigma2) * 2.0 * variance


def symmetric_restricted_limit(z2):
    """Limit of (σE_N)^{1/N} when the mean is held at 0: 1 + z² for every σ²."""
    return 1.0 + z2


@dataclass(frozen=True)
class MarginalCandidate:
    """
    Even mixture ½(ν⁺ + ν⁻) of the two broken-branch densities,
    ∝ (x²+z²)e^{-x²/2}cosh(a₊x).
    """

    plus: CriticalDensity
    minus: CriticalDensity

    def pdf(self, x):
        value = (complex(self.plus.pdf(x)) + complex(self.minus.pdf(x))) / 2.0
        return value.real

    def moment(self, k):
        value = (complex(self.plus.moment(k)) + complex(self.minus.moment(k))) / 2.0
        return value.real


def marginal_candidate_density(z2, sigma2):
    """
    Candidate one-variable marginal limit on the broken branch.

    Args:
        z2(float): real z²
        sigma2(float): σ² != 1

    Returns:
        MarginalCandidate: the symmetric mixture of ν⁺ and ν⁻
    """
    plus = critical_density(z2, sigma2, BranchKind.BROKEN)
    minus = CriticalDensity(z2, sigma2, -plus.m, plus.branch)
    return MarginalCandidate(plus, minus)
