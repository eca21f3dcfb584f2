#!/usr/bin/env python

"""Tests for limit curves, thresholds and critical densities in `gauss_randpoly.asymptotics`."""

import cmath
import math

import mpmath
import pytest

from gauss_randpoly.asymptotics import (PHASE_THRESHOLD, Z_STAR_THRESHOLD, Branch,
                                        BranchKind, Parity, conjectured_limit,
                                        critical_density, curve_l1, curve_l2,
                                        entropy_gap_series, entropy_value,
                                        free_energy_at_critical_point, kappa_star, limit_curve,
                                        limit_real, m_pm_squared, marginal_candidate_density,
                                        mean_fixed_point_residual, one_point_functional,
                                        plateau_window, scaled_branch, scaled_limit,
                                        symmetric_restricted_limit, tangency_y_squared,
                                        y_star_squared, z_star_squared)
from gauss_randpoly.errors import DomainError, PoleError, ZeroNormalizationError


@pytest.fixture
def sigma2_grid():
    return [0.25, 0.5, 0.8, 1.0, 1.2, 1.3225, 1.5, 2.0, 4.0]


@pytest.fixture
def y2_grid():
    # 50 points on (0, 4) that avoid y² = 1
    return [0.05 + 0.08 * i for i in range(50)]


def _integral(pdf, weight=lambda x: 1.0):
    return float(mpmath.quad(lambda x: pdf(float(x)) * weight(float(x)),
                             [-mpmath.inf, 0, mpmath.inf]))


def test_kappa_star():
    kappa = kappa_star()
    assert kappa == pytest.approx(0.27846454276, abs=1e-11)
    assert abs(kappa - math.exp(-kappa - 1)) < 1e-11
    for tol in (1e-15, 1e-17, 5e-324):
        assert kappa_star(tol) == pytest.approx(0.27846454276, abs=1e-11)
        assert kappa_star(tol) == kappa
    with pytest.raises(DomainError):
        kappa_star(tol=0)


def test_z_star_squared():
    kappa = kappa_star()
    assert z_star_squared(1.0) == -1.0
    assert z_star_squared(0.0) == pytest.approx(2 * kappa - 1)
    assert z_star_squared(1.5) == pytest.approx(-1 - kappa)
    assert y_star_squared(2.0) == pytest.approx(1 + 2 * kappa)
    with pytest.raises(DomainError):
        z_star_squared(-0.1)


def test_plateau_window():
    low, high = plateau_window()
    assert low == pytest.approx(math.sqrt(0.5))
    assert high == pytest.approx(1.672, abs=1e-3)
    assert high ** 2 == pytest.approx(1 + 1 / (2 * kappa_star()))
    assert tangency_y_squared(low ** 2) == pytest.approx(2.0)
    assert y_star_squared(high ** 2) == pytest.approx(2.0)


def test_building_block_curves():
    assert curve_l1(3.0) == -2.0
    assert curve_l2(0.0, 4.0) == pytest.approx(6 * math.exp(-5 / 6))
    assert curve_l2(0.0, 0.5) < 0
    with pytest.raises(DomainError):
        curve_l2(1.0, 1.0)


def test_limit_real_examples():
    curve = limit_real(9.0, 4.0)
    assert curve.value == 10.0
    assert curve.branch == Branch(BranchKind.SYMMETRIC)
    assert curve.thresholds_crossed == ()

    curve = limit_real(0.0, 4.0)
    assert curve.value == pytest.approx(6 * math.exp(-5 / 6), rel=1e-12)
    assert curve.value == pytest.approx(2.6076, abs=1e-4)
    assert curve.branch.kind is BranchKind.BROKEN
    assert curve.thresholds_crossed == (PHASE_THRESHOLD,)

    assert float(limit_real(0.0, 2.0)) == pytest.approx(2 * math.exp(-0.5))
    assert float(limit_real(2.5, 1.0)) == 3.5
    with pytest.raises(DomainError):
        limit_real(-1.0, 2.0)
    with pytest.raises(DomainError):
        limit_real(1.0, 0.0)


def test_limit_real_is_continuous_at_phase_transition():
    for sigma2 in (1.75, 2.0, 3.0, 4.0, 16.0):
        boundary = 2 * sigma2 - 3
        above = limit_real(boundary, sigma2)
        below = limit_real(boundary - 1e-9, sigma2)
        assert above.branch.kind is BranchKind.SYMMETRIC
        assert below.branch.kind is BranchKind.BROKEN
        assert below.value == pytest.approx(above.value, rel=1e-8)
    assert float(limit_real(1.0, 2.0)) == 2.0


def test_scaled_limit():
    assert scaled_limit(1.0, 1.0) == pytest.approx(math.e)
    assert scaled_limit(-9.0, 16.0) == pytest.approx(math.exp(-0.3))
    assert scaled_limit(0.0, 5.0) == 1.0
    assert scaled_limit(2j, 1.5) == pytest.approx(cmath.exp(2j))
    with pytest.raises(DomainError):
        scaled_limit(1.0, -1.0)


def test_scaled_branch_follows_variance():
    assert scaled_branch(1.0) == Branch(BranchKind.SYMMETRIC)
    assert scaled_branch(1.5).kind is BranchKind.SYMMETRIC
    assert scaled_branch(2.0).kind is BranchKind.BROKEN
    assert scaled_branch(16.0).sign == 1
    with pytest.raises(DomainError):
        scaled_branch(0.0)


def test_conjectured_limit_examples():
    assert conjectured_limit(4.0, 1.0, Parity.EVEN).value == 3.0
    assert conjectured_limit(4.0, 1.0, Parity.ODD).value == -3.0
    assert conjectured_limit(2.0, 0.5, "even").value == pytest.approx(1.0)
    assert conjectured_limit(2.0, 0.5, 7).value == pytest.approx(-1.0)

    kappa = kappa_star()
    curve = conjectured_limit(1 + kappa, 1.5, Parity.EVEN)
    assert curve.branch.kind is BranchKind.BROKEN
    assert curve.value == pytest.approx(curve_l2(1 + kappa, 1.5))

    with pytest.raises(DomainError):
        conjectured_limit(-1.0, 2.0, Parity.EVEN)
    with pytest.raises(DomainError):
        conjectured_limit(1.0, 2.0, "neither")


def test_conjectured_limit_regions():
    # 1 < σ² < 3/2: L₁, then L₂, then ∓L₁
    sigma2 = 1.3225
    assert conjectured_limit(0.2, sigma2, Parity.ODD).branch == Branch(BranchKind.SYMMETRIC)
    assert conjectured_limit(0.8, sigma2, Parity.ODD).branch == Branch(BranchKind.BROKEN)
    assert conjectured_limit(2.0, sigma2, Parity.EVEN).branch == Branch(BranchKind.SYMMETRIC, -1)
    # σ² < 1: L₁, then ∓L₂, then ∓L₁
    sigma2 = 0.5
    assert conjectured_limit(0.3, sigma2, Parity.EVEN).branch == Branch(BranchKind.SYMMETRIC)
    assert conjectured_limit(1.0, sigma2, Parity.EVEN).branch == Branch(BranchKind.BROKEN, -1)
    assert conjectured_limit(1.0, sigma2, Parity.ODD).branch == Branch(BranchKind.BROKEN)
    assert conjectured_limit(3.0, sigma2, Parity.ODD).branch == Branch(BranchKind.SYMMETRIC)
    # σ² >= 3/2: L₂ up to y_*²
    curve = conjectured_limit(2.0, 4.0, Parity.ODD)
    assert curve.branch == Branch(BranchKind.BROKEN)
    assert curve.thresholds_crossed == (PHASE_THRESHOLD,)
    curve = conjectured_limit(9.0, 4.0, Parity.EVEN)
    assert curve.branch == Branch(BranchKind.SYMMETRIC, -1)
    assert curve.thresholds_crossed == (PHASE_THRESHOLD, Z_STAR_THRESHOLD)


def test_even_limits_are_nonnegative(sigma2_grid, y2_grid):
    for sigma2 in sigma2_grid:
        for y2 in y2_grid:
            assert conjectured_limit(y2, sigma2, Parity.EVEN).value >= 0


def test_parities_coincide_then_flip(sigma2_grid, y2_grid):
    for sigma2 in sigma2_grid:
        y_star2 = y_star_squared(sigma2)
        for y2 in y2_grid:
            if abs(y2 - y_star2) < 1e-9:
                continue
            even = conjectured_limit(y2, sigma2, Parity.EVEN).value
            odd = conjectured_limit(y2, sigma2, Parity.ODD).value
            if y2 < y_star2:
                assert even == odd
            else:
                assert even == -odd


def test_curves_touch_at_tangency():
    for sigma2 in (0.25, 0.5, 1.2, 1.4):
        y2 = tangency_y_squared(sigma2)
        assert abs(curve_l2(y2, sigma2) - curve_l1(y2)) < 1e-12


def test_curves_cross_at_y_star():
    for sigma2 in (0.25, 0.5, 1.2, 1.5, 2.0, 4.0):
        y2 = y_star_squared(sigma2)
        assert abs(curve_l2(y2, sigma2) + curve_l1(y2)) < 1e-10


def test_limit_curve_dispatch():
    assert limit_curve(9.0, 4.0, Parity.EVEN) == limit_real(9.0, 4.0)
    assert limit_curve(-4.0, 1.0, Parity.ODD) == conjectured_limit(4.0, 1.0, Parity.ODD)


def test_m_pm_squared():
    assert m_pm_squared(1.0, 2.0) == 0.0
    assert m_pm_squared(0.0, 2.0) == pytest.approx(4.0)
    assert m_pm_squared(-4.0, 4.0) == pytest.approx(16.0)
    assert m_pm_squared(0.0, 4.0) == pytest.approx(80 / 9)
    with pytest.raises(DomainError):
        m_pm_squared(0.0, 1.0)


def test_m_pm_real_above_tangency(sigma2_grid, y2_grid):
    for sigma2 in sigma2_grid:
        if sigma2 == 1.0:
            continue
        for y2 in y2_grid:
            if abs(y2 - tangency_y_squared(sigma2)) < 1e-9:
                continue
            assert (m_pm_squared(-y2, sigma2) > 0) == (y2 > tangency_y_squared(sigma2))


def test_fixed_point_residual():
    assert mean_fixed_point_residual(0.0, 0.5, 2.0) == 0.0
    assert mean_fixed_point_residual(2.0, 0.0, 2.0) == pytest.approx(0.0, abs=1e-15)
    assert mean_fixed_point_residual(math.sqrt(80 / 9), 0.0, 4.0) == pytest.approx(0.0,
                                                                                 abs=1e-12)
    assert mean_fixed_point_residual(1.0, 0.0, 1.0) == 1.0
    imaginary = cmath.sqrt(m_pm_squared(3.0, 2.0))
    assert imaginary.real == 0
    assert abs(mean_fixed_point_residual(imaginary, 3.0, 2.0)) < 1e-12
    with pytest.raises(PoleError):
        mean_fixed_point_residual(2.0, -2.0, 2.0)


def test_symmetric_density():
    density = critical_density(0.0, 1.0, BranchKind.SYMMETRIC)
    assert density.pdf(1.0) == pytest.approx(math.exp(-0.5) / math.sqrt(2 * math.pi))
    assert density.moment(0) == pytest.approx(1.0)
    assert density.mean == pytest.approx(0.0)
    assert density.moment(2) == pytest.approx(3.0)
    assert density.reciprocal_weight_integral() == pytest.approx(1.0)
    assert _integral(density.pdf) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(ZeroNormalizationError):
        critical_density(-1.0, 2.0, BranchKind.SYMMETRIC)


def test_reciprocal_weight_integral():
    for sigma2 in (0.5, 1.0, 1.5):
        density = critical_density(0.0, sigma2, "m0")
        assert density.reciprocal_weight_integral() == pytest.approx(1.0)
    broken = critical_density(0.0, 4.0, BranchKind.BROKEN)
    assert broken.reciprocal_weight_integral() == pytest.approx(1 / 6)


def test_broken_density_mean_is_fixed_point():
    density = critical_density(0.0, 4.0, Branch(BranchKind.BROKEN))
    assert density.m == pytest.approx(math.sqrt(80 / 9))
    assert density.mean == pytest.approx(density.m.real)
    assert density.tilt ** 2 == pytest.approx(5.0)
    assert _integral(density.pdf) == pytest.approx(1.0, abs=1e-10)
    assert _integral(density.pdf, lambda x: x) == pytest.approx(density.m.real, abs=1e-8)
    with pytest.raises(DomainError):
        critical_density(1.0, 2.0, BranchKind.BROKEN)
    with pytest.raises(DomainError):
        critical_density(0.0, 2.0, "nowhere")


def test_entropy_values():
    assert entropy_value(3.0, 1.0, BranchKind.SYMMETRIC) == pytest.approx(math.log(4))
    assert entropy_value(0.0, 2.0, BranchKind.BROKEN) == pytest.approx(math.log(2) - 0.5)
    assert entropy_value(-4.0, 1.0, BranchKind.SYMMETRIC) == pytest.approx(
        complex(math.log(3), math.pi))
    with pytest.raises(ZeroNormalizationError):
        entropy_value(-1.0, 2.0, BranchKind.SYMMETRIC)
    with pytest.raises(DomainError):
        entropy_value(0.0, 1.0, BranchKind.BROKEN)


def test_entropy_reproduces_conjectured_limits(sigma2_grid, y2_grid):
    for sigma2 in sigma2_grid:
        for y2 in y2_grid:
            for parity in Parity:
                curve = conjectured_limit(y2, sigma2, parity)
                value = cmath.exp(entropy_value(-y2, sigma2, curve.branch)) * curve.branch.sign
                assert abs(value.imag) < 1e-10 * max(1.0, abs(curve.value))
                assert value.real == pytest.approx(curve.value, rel=1e-10, abs=1e-12)


def test_entropy_reproduces_real_limit():
    for sigma2 in (0.5, 2.0, 4.0):
        for z2 in (0.0, 0.7, 3.0, 8.0):
            curve = limit_real(z2, sigma2)
            value = cmath.exp(entropy_value(z2, sigma2, curve.branch))
            assert value.real == pytest.approx(curve.value, rel=1e-12)


def test_entropy_gap_series():
    assert entropy_gap_series(0.0, 2.0, 200) == pytest.approx(math.log(2) - 0.5, abs=1e-12)
    assert entropy_gap_series(1.0, 2.0, 10) == 0.0
    partial = [entropy_gap_series(0.5, 3.0, n) for n in range(1, 12)]
    assert all(b >= a for a, b in zip(partial, partial[1:]))
    gap = (entropy_value(0.5, 3.0, BranchKind.BROKEN)
           - entropy_value(0.5, 3.0, BranchKind.SYMMETRIC)).real
    assert entropy_gap_series(0.5, 3.0, 300) == pytest.approx(gap, abs=1e-12)
    with pytest.raises(DomainError):
        entropy_gap_series(0.0, 1.2, 10)
    with pytest.raises(DomainError):
        entropy_gap_series(4.0, 2.0, 10)


def test_free_energy_at_critical_points():
    assert free_energy_at_critical_point(2.0, 3.0, 0.0) == pytest.approx(math.log(3))
    m = math.sqrt(m_pm_squared(0.0, 4.0))
    assert free_energy_at_critical_point(0.0, 4.0, m) == pytest.approx(
        entropy_value(0.0, 4.0, BranchKind.BROKEN))


def test_one_point_functional():
    symmetric = critical_density(2.0, 3.0, BranchKind.SYMMETRIC)
    assert one_point_functional(symmetric) == pytest.approx(math.log(3), abs=1e-6)

    broken = critical_density(0.0, 4.0, BranchKind.BROKEN)
    value = one_point_functional(broken)
    assert value == pytest.approx(math.log(6) + 1 / 6 - 1, abs=1e-6)
    at_zero = one_point_functional(critical_density(0.0, 4.0, BranchKind.SYMMETRIC))
    assert at_zero == pytest.approx(0.0, abs=1e-6)
    assert value > at_zero

    with pytest.raises(DomainError):
        one_point_functional(critical_density(-0.5, 1.2, BranchKind.SYMMETRIC))


def test_symmetric_restricted_limit():
    assert symmetric_restricted_limit(3.0) == 4.0
    assert symmetric_restricted_limit(0.0) == limit_real(0.0, 1.0).value


def test_marginal_candidate():
    candidate = marginal_candidate_density(0.0, 4.0)
    assert candidate.pdf(1.3) == pytest.approx(candidate.pdf(-1.3))
    assert candidate.moment(1) == pytest.approx(0.0, abs=1e-12)
    assert candidate.moment(0) == pytest.approx(1.0)
    assert _integral(candidate.pdf) == pytest.approx(1.0, abs=1e-10)


def test_marginal_candidate_with_imaginary_mean():
    # m±² = -8: the tilt is imaginary and the mixture has a cosine factor
    candidate = marginal_candidate_density(3.0, 2.0)
    assert m_pm_squared(3.0, 2.0) == pytest.approx(-8.0)
    assert isinstance(candidate.pdf(0.7), float)
    assert _integral(candidate.pdf) == pytest.approx(1.0, abs=1e-8)
