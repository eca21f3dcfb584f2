"""Limit curves, thresholds and critical densities for E_N as N grows."""
from gauss_randpoly.asymptotics.critical import (CriticalDensity, MarginalCandidate,
                                                 critical_density, entropy_gap_series,
                                                 entropy_value, free_energy_at_critical_point,
                                                 m_pm_squared, marginal_candidate_density,
                                                 mean_fixed_point_residual, one_point_functional,
                                                 symmetric_restricted_limit)
from gauss_randpoly.asymptotics.limits import (PHASE_THRESHOLD, Z_STAR_THRESHOLD, Branch,
                                               BranchKind, LimitCurve, Parity,
                                               conjectured_limit, limit_curve, limit_real,
                                               scaled_branch, scaled_limit)
from gauss_randpoly.asymptotics.thresholds import (curve_l1, curve_l2, kappa_star,
                                                   plateau_window, tangency_y_squared,
                                                   y_star_squared, z_star_squared)

__all__ = [
    "CriticalDensity", "MarginalCandidate", "critical_density", "entropy_gap_series",
    "entropy_value", "free_energy_at_critical_point", "m_pm_squared",
    "marginal_candidate_density", "mean_fixed_point_residual", "one_point_functional",
    "symmetric_restricted_limit", "PHASE_THRESHOLD", "Z_STAR_THRESHOLD", "Branch",
    "BranchKind", "LimitCurve", "Parity", "conjectured_limit", "limit_curve", "limit_real",
    "scaled_branch", "scaled_limit", "curve_l1", "curve_l2", "kappa_star", "plateau_window",
    "tangency_y_squared", "y_star_squared", "z_star_squared",
]
