#!/usr/bin/env python

"""Tests for the finite-N studies in `gauss_randpoly.convergence`."""

import io
import json
import math
from fractions import Fraction

import pandas as pd
import pytest

from gauss_randpoly.asymptotics import (BranchKind, Parity, conjectured_limit,
                                        tangency_y_squared)
from gauss_randpoly.config import CSV_COLUMNS
from gauss_randpoly.convergence import (SequenceRecord, StudyConfig, StudyMode,
                                        additivity_check, bounds_check, conjecture_proximity,
                                        eval_with_escalation, even_curve_spread,
                                        fixed_point_scan, format_value, frame_to_text,
                                        nth_root_sequence, positivity_series,
                                        read_records_csv, records_frame, run_study,
                                        scaled_ratio_identity, scaled_ratio_sequence,
                                        sign_audit, sign_change_thresholds, sort_records,
                                        tilted_moments, write_frame)
from gauss_randpoly.errors import DomainError
from gauss_randpoly.exact import eval_exact, exact_to_mpf


@pytest.fixture
def quarter_grid():
    return [Fraction(i, 4) for i in range(17)]


@pytest.fixture
def small_study():
    grid = [(Fraction(1), Fraction(2)), (Fraction(-1, 2), Fraction(1))]
    return StudyConfig(N_max=6, grid=grid, mode=StudyMode.NTH_ROOT)


def test_study_config_validation():
    assert StudyConfig(N_max=4).degrees() == [1, 2, 3, 4]
    assert StudyConfig(n_values=[100, 10, 10, 1000]).degrees() == [10, 100, 1000]
    assert StudyConfig(mode="scaled").mode is StudyMode.SCALED_RATIO
    with pytest.raises(DomainError):
        StudyConfig(N_max=0)
    with pytest.raises(DomainError):
        StudyConfig(precision_bits=40)
    with pytest.raises(DomainError):
        StudyConfig(workers=0)
    with pytest.raises(DomainError):
        StudyConfig(n_values=[0, 3])


def test_nth_roots_at_unit_variance():
    cfg = StudyConfig(N_max=8)
    for record in nth_root_sequence(cfg, Fraction(1), Fraction(1)):
        assert record.nth_root == 2.0
        assert record.abs_err == 0.0
        assert record.branch.kind is BranchKind.SYMMETRIC
    for record in nth_root_sequence(cfg, Fraction(-2), Fraction(1)):
        assert record.nth_root == (1.0 if record.N % 2 == 0 else -1.0)
        assert record.abs_err == 0.0
        assert record.parity is Parity.of(record.N)


def test_exact_and_float_paths_agree():
    exact = nth_root_sequence(StudyConfig(N_max=12), Fraction(-3, 2), Fraction(3, 2))
    floating = nth_root_sequence(StudyConfig(N_max=12, exact=False), Fraction(-3, 2),
                                 Fraction(3, 2))
    for a, b in zip(exact, floating):
        assert b.bits is not None
        assert a.nth_root == pytest.approx(b.nth_root, rel=1e-14)


def test_escalation_recovers_from_cancellation():
    value, bits = eval_with_escalation(60, -2, 1, precision_bits=53)
    assert bits > 53
    assert float(value.real) == 1.0


@pytest.mark.slow
def test_nth_roots_approach_real_limits():
    cfg = StudyConfig(n_values=[10, 100, 1000])
    records = nth_root_sequence(cfg, Fraction(9), Fraction(4))
    errors = [record.abs_err for record in records]
    assert errors[0] > errors[1] > errors[2]
    assert errors[2] < 0.02

    records = nth_root_sequence(cfg, Fraction(0), Fraction(4))
    last = records[-1]
    assert last.ref_limit == pytest.approx(6 * math.exp(-5 / 6))
    assert last.abs_err / last.ref_limit < 0.005
    assert last.branch.kind is BranchKind.BROKEN


def test_scaled_ratio_at_zero_is_one():
    for record in scaled_ratio_sequence(StudyConfig(N_max=6), Fraction(0), Fraction(3)):
        assert float(record.value) == 1.0
        assert record.nth_root is None
        assert record.branch.kind is BranchKind.BROKEN


def test_scaled_ratio_identity_at_unit_variance():
    records = scaled_ratio_sequence(StudyConfig(N_max=10), Fraction(1), Fraction(1))
    values = [float(record.value) for record in records]
    for record, value in zip(records, values):
        assert value == pytest.approx(float(scaled_ratio_identity(record.N, 1)), rel=1e-15)
    assert all(b > a for a, b in zip(values, values[1:]))
    assert records[-1].ref_limit == pytest.approx(math.e)
    assert scaled_ratio_identity(2, 1) == Fraction(9, 4)


def test_scaled_ratio_at_twelve():
    record = scaled_ratio_sequence(StudyConfig(n_values=[12]), Fraction(-9), Fraction(16))[0]
    assert abs(float(record.value) - math.exp(-0.3)) < 0.05


@pytest.mark.slow
def test_scaled_ratio_large_variance():
    cfg = StudyConfig(n_values=[1000])
    for z2 in (Fraction(-9), Fraction(-4), Fraction(4)):
        record = scaled_ratio_sequence(cfg, z2, Fraction(16))[0]
        assert abs(float(record.value) - math.exp(float(z2) / 30)) < 0.01


def test_even_degrees_are_nonnegative(quarter_grid):
    cfg = StudyConfig(n_values=[2, 4, 6, 8, 10, 12])
    for sigma2 in (Fraction(1, 2), Fraction(1), Fraction(3, 2), Fraction(2), Fraction(4)):
        frame = sign_audit(cfg, sigma2, quarter_grid)
        assert not frame["violation"].any()
        assert (frame["sign"] >= 0).all()
        zeros = frame[frame["sign"] == 0]
        if sigma2 == 1:
            assert list(zeros["y2"].unique()) == [1.0]
        else:
            assert zeros.empty


def test_sign_examples():
    assert eval_exact(7, -2, 1).re < 0
    cfg = StudyConfig(n_values=[4, 7])
    frame = sign_audit(cfg, 1, [Fraction(1), Fraction(2)])
    signs = {(row.N, row.y2): row.sign for row in frame.itertuples()}
    assert signs[(4, 1.0)] == 0
    assert signs[(7, 2.0)] == -1
    assert frame.attrs["sign_changes"][7] == [1.0]


def test_sign_change_thresholds():
    # E_3(iy;1) = (1-y²)³ changes sign at y² = 1 only
    grid = [Fraction(i, 10) + Fraction(1, 30) for i in range(20)]
    found = sign_change_thresholds(3, 1, grid)
    assert len(found) == 1
    assert found[0] == pytest.approx(1.0, abs=1e-9)
    assert sign_change_thresholds(3, 1, [Fraction(0), Fraction(1), Fraction(2)]) == [1.0]
    with pytest.raises(DomainError):
        sign_change_thresholds(3, 1, grid, tol=0)


def test_additivity():
    for N1 in range(2, 7):
        for N2 in range(2, 7):
            for z2 in (Fraction(0), Fraction(1), Fraction(5, 2)):
                assert additivity_check(N1, N2, z2, Fraction(1, 2)) == 1
                assert additivity_check(N1, N2, z2, Fraction(2)) == -1
    with pytest.raises(DomainError):
        additivity_check(2, 2, -1, 2)


def test_bounds():
    for N in range(2, 13):
        for z2 in (Fraction(0), Fraction(1), Fraction(3)):
            for sigma2 in (Fraction(1, 2), Fraction(2), Fraction(4)):
                assert bounds_check(N, z2, sigma2)
    with pytest.raises(DomainError):
        bounds_check(3, 1, 1)
    with pytest.raises(DomainError):
        bounds_check(1, 1, 2)


def test_tilted_moments_at_zero_coupling():
    # β = 0 leaves independent standard normals: J_j = E[Π(z²+X_k²)(ΣX_k)^j]
    moments = tilted_moments(1, Fraction(0), Fraction(0), 4)
    assert moments == [Fraction(1), Fraction(0), Fraction(3), Fraction(0), Fraction(15)]


def test_positivity_series():
    for K in (1, 2, 3):
        for sigma2 in (Fraction(1), Fraction(2)):
            for z2 in (Fraction(-1), Fraction(0), Fraction(1)):
                series = positivity_series(K, z2, sigma2, 60)
                sums = series.partial_sums
                assert all(b >= a for a, b in zip(sums, sums[1:]))
                assert all(term >= 0 for term in series.terms)
                assert abs(series.gap) <= 1e-10 * max(1.0, abs(series.exact_value))


def test_positivity_series_examples():
    series = positivity_series(1, -1, 1, 10)
    assert series.j0_lower_bound == 0.0
    assert series.exact_value == 0.0

    series = positivity_series(1, 0, 2, 60)
    assert series.j0_lower_bound == pytest.approx(series.j0_product_form)
    assert series.exact_value == 2.75
    assert series.partial_sums[0] < series.partial_sums[2] < series.exact_value

    series = positivity_series(2, 3, 1, 10)
    assert all(term == 0 for term in series.terms[1:])
    assert series.partial_sums[-1] == series.exact_value == 256.0


def test_product_form_is_not_a_bound_for_higher_degree():
    series = positivity_series(2, 100, 2, 60)
    assert series.j0_lower_bound <= series.exact_value
    assert series.j0_product_form > series.exact_value


def test_positivity_series_needs_unit_variance_or_more():
    with pytest.raises(DomainError):
        positivity_series(1, 0, Fraction(1, 2), 10)
    with pytest.raises(DomainError):
        positivity_series(0, 0, 2, 10)


def test_fixed_point_scan():
    frame = fixed_point_scan([1.0, 1.8], Fraction(2), 12)
    assert list(frame.columns) == ["sigma", "sigma2", "N", "parity", "value", "nth_root",
                                   "conjectured", "in_window"]
    at_one = frame[frame["sigma"] == 1.0]
    assert (at_one["nth_root"] == [(-1.0) ** N for N in at_one["N"]]).all()
    assert at_one["in_window"].all()

    wide = frame[(frame["sigma"] == 1.8) & (frame["parity"] == "even")]
    assert not wide["in_window"].any()
    magnitudes = wide["value"].abs().tolist()
    assert all(b > a for a, b in zip(magnitudes, magnitudes[1:]))
    with pytest.raises(DomainError):
        fixed_point_scan([1.0], 0, 4)


def test_conjectured_limits_are_approached():
    y2_grid = [4 * (i + 0.5) / 40 for i in range(40)]
    for sigma2 in (1.5, 1.3225, 0.5):
        frame = conjecture_proximity(sigma2, y2_grid, [5, 6, 11, 12])
        interior = frame[frame["interior"]]
        assert not interior.empty
        for late, early in ((12, 6), (11, 5)):
            late_err = interior[interior["N"] == late].set_index("y2")["abs_err"]
            early_err = interior[interior["N"] == early].set_index("y2")["abs_err"]
            assert late_err.max() < 0.08 * 12 / late
            assert late_err.mean() < early_err.mean()
            assert (late_err <= early_err).all()


def test_conjecture_proximity_marks_thresholds():
    sigma2 = 0.5
    near = tangency_y_squared(sigma2) + 0.05
    frame = conjecture_proximity(sigma2, [near, 3.5], [4])
    assert frame["interior"].tolist() == [False, True]
    assert frame.iloc[1]["conjectured"] == conjectured_limit(3.5, sigma2, Parity.EVEN).value


def test_even_curve_spread():
    frame = even_curve_spread(1.0, [Fraction(1, 2), Fraction(3, 2), Fraction(3)], [2, 4, 6])
    assert list(frame.columns) == ["y2", "spread"]
    assert frame["spread"].is_monotonic_increasing
    # at σ = 1 the even roots are |1-y²| for every N
    assert frame["spread"].max() == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(DomainError):
        even_curve_spread(1.0, [Fraction(1)], [2, 3])


def test_records_round_trip(small_study):
    frame = run_study(small_study)
    text = frame_to_text(frame)
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert len(frame) == 12
    records = read_records_csv(text)
    assert records == sort_records(records)
    assert frame_to_text(records_frame(records)) == text

    scaled = run_study(StudyConfig(N_max=3, grid=[(Fraction(1), Fraction(2))],
                                   mode=StudyMode.SCALED_RATIO))
    again = read_records_csv(frame_to_text(scaled))
    assert all(record.nth_root is None for record in again)
    assert [record.branch.kind for record in again] == [BranchKind.BROKEN] * 3


def test_record_values_beyond_double_range():
    value = exact_to_mpf(eval_exact(1000, 9, 4).re, 4064)
    record = SequenceRecord(N=1000, parity="even", z2=9, sigma2=4, value=value)
    text = format_value(record.value)
    assert "e+1000" in text
    parsed = read_records_csv(frame_to_text(records_frame([record])))
    assert parsed == [record]
    with pytest.raises(DomainError):
        SequenceRecord(N=3, parity="even", z2=0, sigma2=1, value=1)


def test_study_is_deterministic_and_parallel_safe(small_study):
    first = run_study(small_study)
    second = run_study(small_study)
    pd.testing.assert_frame_equal(first, second)
    parallel = run_study(StudyConfig(N_max=6, grid=small_study.grid, mode=StudyMode.NTH_ROOT,
                                     workers=2))
    pd.testing.assert_frame_equal(first, parallel)


def test_run_study_rejects_other_modes():
    with pytest.raises(DomainError):
        run_study(StudyConfig(N_max=3, grid=[(1, 1)], mode=StudyMode.SIGN_AUDIT))
    with pytest.raises(DomainError):
        run_study(StudyConfig(N_max=3, mode=StudyMode.NTH_ROOT))


def test_write_frame(tmp_path, small_study):
    frame = run_study(small_study)
    target = tmp_path / "out" / "study.csv"
    text = write_frame(frame, str(target))
    assert target.read_text() == text
    as_json = write_frame(frame, fmt="json")
    assert len(pd.read_json(io.StringIO(as_json), orient="records")) == len(frame)
    with pytest.raises(DomainError):
        write_frame(frame, fmt="xml")


def test_json_floats_read_back_exactly():
    frame = pd.DataFrame({"N": [1, 2], "abs_err": [0.1 + 0.2, float("nan")],
                          "violation": [False, True], "branch": ["m0", None]})
    rows = json.loads(frame_to_text(frame, fmt="json"))
    assert rows[0] == {"N": 1, "abs_err": 0.30000000000000004, "violation": False,
                       "branch": "m0"}
    assert rows[1]["abs_err"] is None and rows[1]["branch"] is None
    assert rows[1]["violation"] is True
