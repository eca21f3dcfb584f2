"""Independent oracles for E_N and its moment coefficients."""
from gauss_randpoly.moments.isserlis import (CovarianceSpec, closed_form_moment,
                                             covariance_entry, covariance_matrix,
                                             inverse_entry, isserlis_moment,
                                             perfect_matchings, product_second_moment)
from gauss_randpoly.moments.sampling import (McEstimate, mc_expected_polynomial,
                                             merge_estimates, sample_matrix,
                                             sample_vector)

__all__ = [
    "CovarianceSpec", "closed_form_moment", "covariance_entry", "covariance_matrix",
    "inverse_entry", "isserlis_moment", "perfect_matchings", "product_second_moment",
    "McEstimate",
    "mc_expected_polynomial", "merge_estimates", "sample_matrix", "sample_vector",
]
