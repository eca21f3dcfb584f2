"""Closed-form construction and evaluation of the expected polynomials E_N(z;σ).

E_N(z;σ) = Σ_j z^{2j} C(N,j) f_{N-j}(t),   f_n(t) = Σ_k C(n,k) (2k-1)!! t^k,
with t = (σ²-1)/N. Equivalently E_N(z;σ) = 𝔼[(1 + z² + t·G²)^N] for a
standard normal G, which is the form conditioned on the common factor of
the sampling representation.
"""
import logging
from fractions import Fraction
from math import comb, gcd

import mpmath
from mpmath import iv

from gauss_randpoly.config import resolve_precision_bits
from gauss_randpoly.errors import DomainError, PrecisionInsufficientError
from gauss_randpoly.exact.algebra import (BivariatePoly, ComplexRational,
                                          odd_double_factorial, to_rational)

logger = logging.getLogger(__name__)


def _check_degree(N):
    if not isinstance(N, int) or isinstance(N, bool) or N < 1:
        raise DomainError(f"N must be a positive integer, got {N!r}")


def _check_variance(sigma2):
    if sigma2 <= 0:
        raise DomainError(f"sigma2 must be > 0, got {sigma2}")


def _scaled_moments(n_max, t):
    """
    Integer form of the moment sequence: g_n = q^n f_n(p/q) for n = 0..n_max.

    f_n obeys f_{n+1} = (1 + t + 2tn) f_n - 2tn f_{n-1}, which after scaling
    by q^{n+1} only involves integers.

    Returns:
        tuple: (list of int g_0..g_{n_max}, int q)
    """
    t = to_rational(t)
    p, q = t.numerator, t.denominator
    g = [1]
    if n_max >= 1:
        g.append(q + p)
    for n in range(1, n_max):
        g.append((q + p * (1 + 2 * n)) * g[n] - 2 * p * n * q * g[n - 1])
    return g, q


def moment_sequence(n_max, t):
    """
    Returns f_0(t), ..., f_{n_max}(t) with f_n(t) = Σ_k C(n,k)(2k-1)!! t^k.

    With t = (σ²-1)/N, f_n is the mixed moment Exp_N[X_1²···X_n²] of the
    equicorrelated normal vector.

    Args:
        n_max(int): last index, >= 0
        t(rational-like): the coupling (σ²-1)/N

    Returns:
        list: Fractions f_0..f_{n_max}
    """
    if n_max < 0:
        raise DomainError(f"n_max must be >= 0, got {n_max}")
    g, q = _scaled_moments(n_max, t)
    return [Fraction(g_n, q ** n) for n, g_n in enumerate(g)]


def expected_polynomial(N):
    """
    Builds E_N as an exact polynomial in (z², σ²).

    The double sum over j (power of z²) and k is expanded with
    ((σ²-1)/N)^k = N^{-k} Σ_d C(k,d) σ^{2d} (-1)^{k-d}.

    Args:
        N(int): degree, N >= 1

    Returns:
        BivariatePoly: coefficients keyed by (power of z², power of σ²)
    """
    _check_degree(N)
    # the k-th term of f_n contributes (2k-1)!! N^{-k} (σ²-1)^k
    sigma_part = []
    for k in range(N + 1):
        scale = odd_double_factorial(k) / Fraction(N) ** k
        sigma_part.append({d: scale * comb(k, d) * (-1) ** (k - d) for d in range(k + 1)})

    coeffs = {}
    for j in range(N + 1):
        n = N - j
        outer = comb(N, j)
        for k in range(n + 1):
            weight = outer * comb(n, k)
            for d, c in sigma_part[k].items():
                key = (j, d)
                coeffs[key] = coeffs.get(key, Fraction(0)) + weight * c
    return BivariatePoly(coeffs)


def eval_exact(N, z2, sigma2):
    """
    Exact value of E_N at (z², σ²).

    Uses E_N = Σ_j C(N,j) f_{N-j} (z²)^j with the integer-scaled moment
    recurrence and a homogenised Horner scheme over Gaussian integers, so
    the only division happens once at the end.

    Args:
        N(int): degree, N >= 1
        z2(ComplexRational or rational-like or "a+bi" str): the point z²
        sigma2(rational-like): σ² > 0

    Returns:
        ComplexRational: exact value, im = 0 for real z²
    """
    _check_degree(N)
    z2 = ComplexRational.coerce(z2)
    sigma2 = to_rational(sigma2)
    _check_variance(sigma2)

    g, q = _scaled_moments(N, (sigma2 - 1) / N)
    # z² = (a + ib)/d
    d = z2.re.denominator * z2.im.denominator // gcd(z2.re.denominator, z2.im.denominator)
    a = z2.re.numerator * (d // z2.re.denominator)
    b = z2.im.numerator * (d // z2.im.denominator)

    # Horner on Σ_j c_j (a+ib)^j d^{N-j} with c_j = C(N,j) g_{N-j} q^j
    acc_re, acc_im = comb(N, N) * g[0] * q ** N, 0
    d_pow = 1
    q_pow = q ** N
    for j in range(N - 1, -1, -1):
        d_pow *= d
        q_pow //= q
        c_j = comb(N, j) * g[N - j] * q_pow
        acc_re, acc_im = acc_re * a - acc_im * b + c_j * d_pow, acc_re * b + acc_im * a
    denominator = d_pow * q ** N
    return ComplexRational(Fraction(acc_re, denominator), Fraction(acc_im, denominator))


def _interval(value):
    """Tight enclosure of an exact rational in the current iv precision."""
    value = to_rational(value)
    if value.denominator == 1:
        return iv.mpf(value.numerator)
    return iv.mpf(value.numerator) / iv.mpf(value.denominator)


def _endpoints(x):
    """Interval endpoints as mpf; call at the interval's precision so none is rounded."""
    return mpmath.mpf(x.a), mpmath.mpf(x.b)


def eval_float(N, z2, sigma2, precision_bits=None):
    """
    Evaluates E_N in working-precision interval arithmetic.

    The double sum is accumulated with k ascending inside j ascending on
    mpmath ``iv`` intervals, so cancellation at z² < 0 (and at σ² < 1) is
    measured rather than guessed. The midpoint is returned when the
    enclosure's relative radius is below 2^(-bits/2).

    Args:
        N(int): degree, N >= 1
        z2(complex): the point z²
        sigma2(float): σ² > 0
        precision_bits(int): working precision, >= 53; defaults to the
            config policy (64 + 4N, or SEL_PRECISION_BITS)

    Returns:
        mpmath.mpc: the value at ``precision_bits`` precision

    Raises:
        PrecisionInsufficientError: the enclosure is too wide to certify
            the relative error bound
    """
    _check_degree(N)
    z2 = ComplexRational.coerce(z2)
    sigma2 = to_rational(sigma2)
    _check_variance(sigma2)
    bits = resolve_precision_bits(N, precision_bits)

    saved = iv.prec
    iv.prec = bits
    try:
        t = _interval((sigma2 - 1) / N)
        # a_k = (2k-1)!! t^k, shared by every inner sum
        a = [iv.mpf(1)]
        for k in range(1, N + 1):
            a.append(a[-1] * t * (2 * k - 1))

        zr, zi = _interval(z2.re), _interval(z2.im)
        pr, pi = iv.mpf(1), iv.mpf(0)
        total_re, total_im = iv.mpf(0), iv.mpf(0)
        for j in range(N + 1):
            n = N - j
            inner = iv.mpf(0)
            binom = 1
            for k in range(n + 1):
                inner += binom * a[k]
                binom = binom * (n - k) // (k + 1)
            weight = comb(N, j) * inner
            total_re += weight * pr
            total_im += weight * pi
            pr, pi = pr * zr - pi * zi, pr * zi + pi * zr
    finally:
        iv.prec = saved

    with mpmath.workprec(bits):
        re_lo, re_hi = _endpoints(total_re)
        im_lo, im_hi = _endpoints(total_im)
        mid = mpmath.mpc((re_lo + re_hi) / 2, (im_lo + im_hi) / 2)
        radius = max((re_hi - re_lo) / 2, (im_hi - im_lo) / 2)
        if radius == 0:
            return mid
        magnitude = abs(mid)
        rel = radius / magnitude if magnitude else mpmath.inf
        if rel >= mpmath.ldexp(1, -(bits // 2)):
            raise PrecisionInsufficientError(N, complex(z2), float(sigma2), bits, float(rel))
        logger.debug("eval_float N=%d bits=%d rel_radius=%s", N, bits, mpmath.nstr(rel, 3))
        return mid


def signed_nth_root(value, N, bits=None):
    """sign(value)·|value|^(1/N) as a float, computed without overflow."""
    with mpmath.workprec(bits or 53 + 4 * N):
        value = mpmath.mpf(value)
        if value == 0:
            return 0.0
        root = mpmath.root(abs(value), N)
        return float(root if value > 0 else -root)


def exact_to_mpf(value, bits):
    """Converts an exact real rational (possibly astronomically large) to mpmath.mpf."""
    value = to_rational(value)
    with mpmath.workprec(bits):
        return mpmath.mpf(value.numerator) / value.denominator


def nth_root_value(N, z2, sigma2, precision_bits=None):
    """
    Signed N-th root sign(E_N)·|E_N|^(1/N) at a real point z².

    Args:
        N(int): degree, N >= 1
        z2(float): real z²
        sigma2(float): σ² > 0
        precision_bits(int): working precision for eval_float

    Returns:
        float: the signed root; nonnegative for even N

    Raises:
        PrecisionInsufficientError: propagated from eval_float
    """
    z2 = ComplexRational.coerce(z2)
    if not z2.is_real:
        raise DomainError("nth_root_value needs a real z2")
    bits = resolve_precision_bits(N, precision_bits)
    value = eval_float(N, z2, sigma2, bits)
    return signed_nth_root(value.real, N, bits)
