"""Finite-N sequences of E_N compared against their limit curves."""
import logging
import warnings
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor

import pandas as pd

from gauss_randpoly.asymptotics.limits import (Parity, conjectured_limit, limit_curve,
                                               scaled_branch, scaled_limit)
from gauss_randpoly.asymptotics.thresholds import (plateau_window, tangency_y_squared,
                                                   y_star_squared)
from gauss_randpoly.config import escalate_bits, resolve_precision_bits
from gauss_randpoly.convergence.records import (SequenceRecord, StudyMode, records_frame,
                                                sort_records)
from gauss_randpoly.errors import (ConvergenceTrendWarning, DomainError, PoleError,
                                   PrecisionInsufficientError)
from gauss_randpoly.exact.algebra import to_rational
from gauss_randpoly.exact.expected_polynomial import (eval_exact, eval_float, exact_to_mpf,
                                                      signed_nth_root)

logger = logging.getLogger(__name__)


def eval_with_escalation(N, z2, sigma2, precision_bits=None):
    """
    eval_float, doubling the precision after each PrecisionInsufficientError.

    Args:
        N(int): degree
        z2(complex): the point z²
        sigma2(float): σ² > 0
        precision_bits(int): starting precision; None follows the config policy

    Returns:
        tuple: (mpmath.mpc value, bits that succeeded)
    """
    bits = resolve_precision_bits(N, precision_bits)
    while True:
        try:
            return eval_float(N, z2, sigma2, bits), bits
        except PrecisionInsufficientError:
            next_bits = escalate_bits(bits)
            if next_bits is None:
                raise
            logger.warning("precision %d bits insufficient at N=%d z2=%s sigma2=%s, retrying "
                           "with %d", bits, N, z2, sigma2, next_bits)
            bits = next_bits


def _real_value(cfg, N, z2, sigma2):
    """E_N at a real point: exact first, or the escalating float path."""
    if cfg.exact:
        value = eval_exact(N, z2, sigma2).re
        return exact_to_mpf(value, resolve_precision_bits(N, cfg.precision_bits)), None
    value, bits = eval_with_escalation(N, z2, sigma2, cfg.precision_bits)
    return value.real, bits


def nth_root_sequence(cfg, z2, sigma2):
    """
    Signed N-th roots of E_N(z;σ) against the limit curve.

    The reference is limit_real for z² >= 0 and the parity-split
    conjectured limit at y² = -z² otherwise. For z² >= 0 the error is
    expected to shrink monotonically from N = 3 on; a
    ConvergenceTrendWarning reports when it does not.

    Args:
        cfg(StudyConfig): degrees, precision and the exact/float choice
        z2(float): real z²
        sigma2(float): σ² > 0

    Returns:
        list: SequenceRecords, one per degree
    """
    z2_exact = to_rational(z2)
    sigma2_exact = to_rational(sigma2)
    records = []
    for N in cfg.degrees():
        value, bits = _real_value(cfg, N, z2_exact, sigma2_exact)
        root = signed_nth_root(value, N, resolve_precision_bits(N, cfg.precision_bits))
        reference = limit_curve(float(z2), float(sigma2), Parity.of(N))
        records.append(SequenceRecord(
            N=N, parity=Parity.of(N), z2=z2, sigma2=sigma2, value=value, nth_root=root,
            ref_limit=reference.value, abs_err=abs(root - reference.value),
            branch=reference.branch, bits=bits,
        ))
    if z2 >= 0:
        errors = [record.abs_err for record in records if record.N >= 3]
        if any(later > earlier for earlier, later in zip(errors, errors[1:])):
            warnings.warn(f"N-th root error not monotone at z2={z2}, sigma2={sigma2}",
                          ConvergenceTrendWarning, stacklevel=2)
    logger.info("nth-root sequence z2=%s sigma2=%s: %d records", z2, sigma2, len(records))
    return records


def scaled_ratio_sequence(cfg, z2, sigma2):
    """
    E_N(z/√N;σ)/E_N(0;σ) against its limit exp(z²) or exp(z²/(2(σ²-1))).

    Args:
        cfg(StudyConfig): degrees, precision and the exact/float choice
        z2(float): real z²
        sigma2(float): σ² > 0

    Returns:
        list: SequenceRecords with ``value`` the ratio
    """
    z2_exact = to_rational(z2)
    sigma2_exact = to_rational(sigma2)
    reference = scaled_limit(float(z2), float(sigma2)).real
    branch = scaled_branch(float(sigma2))
    records = []
    for N in cfg.degrees():
        if cfg.exact:
            denominator = eval_exact(N, 0, sigma2_exact).re
            if denominator == 0:
                raise PoleError(f"E_N(0) vanishes at N={N}, sigma2={sigma2}")
            numerator = eval_exact(N, z2_exact / N, sigma2_exact).re
            ratio, bits = exact_to_mpf(numerator / denominator, 53), None
        else:
            numerator, bits = eval_with_escalation(N, z2_exact / N, sigma2_exact,
                                                   cfg.precision_bits)
            denominator, bits = eval_with_escalation(N, 0, sigma2_exact, bits)
            if denominator == 0:
                raise PoleError(f"E_N(0) vanishes at N={N}, sigma2={sigma2}")
            ratio = (numerator / denominator).real
        records.append(SequenceRecord(
            N=N, parity=Parity.of(N), z2=z2, sigma2=sigma2, value=ratio,
            ref_limit=reference, abs_err=abs(float(ratio) - reference), branch=branch, bits=bits,
        ))
    return records


_SEQUENCE_STUDIES = {
    StudyMode.NTH_ROOT: nth_root_sequence,
    StudyMode.SCALED_RATIO: scaled_ratio_sequence,
}


def _study_point(cfg, z2, sigma2):
    return _SEQUENCE_STUDIES[cfg.mode](cfg, z2, sigma2)


def run_study(cfg):
    """
    Runs a sequence study over every grid point of ``cfg``.

    Grid points are independent and go to a process pool when
    ``cfg.workers > 1``; the records come back sorted by (N, z², σ²)
    whatever the completion order.

    Args:
        cfg(StudyConfig): mode NTH_ROOT or SCALED_RATIO

    Returns:
        pandas.DataFrame: schema-v1 rows
    """
    if cfg.mode not in _SEQUENCE_STUDIES:
        raise DomainError(f"run_study handles sequence studies only, got {cfg.mode.value}")
    if not cfg.grid:
        raise DomainError("study grid is empty")
    points = list(cfg.grid)
    if cfg.workers > 1 and len(points) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(_study_point, [cfg] * len(points),
                                   *zip(*points)))
    else:
        chunks = [_study_point(cfg, z2, sigma2) for z2, sigma2 in points]
    records = sort_records([record for chunk in chunks for record in chunk])
    return records_frame(records)


def fixed_point_scan(sigma_grid, y2, N_max):
    """
    E_N(iy;σ) and its signed N-th root over a grid of σ, for N = 1..N_max.

    Args:
        sigma_grid(list): σ > 0 values
        y2(float): y² > 0
        N_max(int): largest degree

    Returns:
        pandas.DataFrame: sigma, sigma2, N, parity, value, nth_root,
        conjectured and in_window (σ inside the plateau window)
    """
    if y2 <= 0:
        raise DomainError(f"y2 must be > 0, got {y2}")
    if N_max < 1:
        raise DomainError(f"N_max must be >= 1, got {N_max}")
    low, high = plateau_window()
    z2 = -to_rational(y2)
    index_to_row = defaultdict(dict)
    index = 0
    for sigma in sigma_grid:
        if sigma <= 0:
            raise DomainError(f"sigma must be > 0, got {sigma}")
        sigma2 = to_rational(sigma) ** 2
        for N in range(1, N_max + 1):
            value = eval_exact(N, z2, sigma2).re
            parity = Parity.of(N)
            index_to_row[index] = {
                "sigma": float(sigma),
                "sigma2": float(sigma2),
                "N": N,
                "parity": parity.value,
                "value": float(value),
                "nth_root": signed_nth_root(exact_to_mpf(value, 64 + 4 * N), N),
                "conjectured": conjectured_limit(float(y2), float(sigma2), parity).value,
                "in_window": bool(low < sigma < high),
            }
            index += 1
    return pd.DataFrame.from_dict(index_to_row, orient="index")


def conjecture_proximity(sigma2, y2_grid, n_values, window=0.1):
    """
    Parity-split N-th roots at z = iy next to the conjectured limits.

    Points within ``window`` (in y²) of y_*² or 3-2σ² are marked as not
    interior, since convergence there is slow.

    Args:
        sigma2(float): σ² > 0
        y2_grid(list): y² >= 0 values
        n_values(list): degrees to evaluate
        window(float): half-width of the excluded band around each threshold

    Returns:
        pandas.DataFrame: y2, N, parity, nth_root, conjectured, abs_err, interior
    """
    sigma2_exact = to_rational(sigma2)
    thresholds = (y_star_squared(float(sigma2)), tangency_y_squared(float(sigma2)))
    index_to_row = defaultdict(dict)
    index = 0
    for y2 in y2_grid:
        interior = all(abs(y2 - threshold) > window for threshold in thresholds)
        for N in n_values:
            value = eval_exact(N, -to_rational(y2), sigma2_exact).re
            root = signed_nth_root(exact_to_mpf(value, 64 + 4 * N), N)
            conjectured = conjectured_limit(y2, float(sigma2), Parity.of(N)).value
            index_to_row[index] = {
                "y2": float(y2), "N": N, "parity": Parity.of(N).value, "nth_root": root,
                "conjectured": conjectured, "abs_err": abs(root - conjectured),
                "interior": interior,
            }
            index += 1
    return pd.DataFrame.from_dict(index_to_row, orient="index")


def even_curve_spread(sigma, y2_grid, n_values):
    """
    Spread (max - min) of the even-N roots E_N^{1/N}(iy;σ) at each y².

    A y² where the spread nearly vanishes is a point where all even-N
    curves pass close to one another.

    Args:
        sigma(float): σ > 0
        y2_grid(list): y² values
        n_values(list): even degrees

    Returns:
        pandas.DataFrame: y2 and spread, sorted by spread
    """
    if any(N % 2 for N in n_values):
        raise DomainError("even_curve_spread takes even degrees only")
    sigma2 = to_rational(sigma) ** 2
    index_to_row = defaultdict(dict)
    for index, y2 in enumerate(y2_grid):
        roots = [signed_nth_root(exact_to_mpf(eval_exact(N, -to_rational(y2), sigma2).re,
                                              64 + 4 * N), N)
                 for N in n_values]
        index_to_row[index] = {"y2": float(y2), "spread": max(roots) - min(roots)}
    frame = pd.DataFrame.from_dict(index_to_row, orient="index")
    return frame.sort_values(by=["spread", "y2"]).reset_index(drop=True)

