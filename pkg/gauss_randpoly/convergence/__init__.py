"""Finite-N studies: sequences against limit curves, exact audits, positivity series."""
from gauss_randpoly.convergence.audits import (additivity_check, bounds_check,
                                               scaled_ratio_identity, sign_audit,
                                               sign_change_thresholds)
from gauss_randpoly.convergence.positivity import (PositivitySeries, positivity_series,
                                                   tilted_moments)
from gauss_randpoly.convergence.records import (SequenceRecord, StudyConfig, StudyMode,
                                                format_value, frame_to_text,
                                                read_records_csv, records_frame,
                                                records_from_frame, sort_records, write_frame)
from gauss_randpoly.convergence.sequences import (conjecture_proximity, eval_with_escalation,
                                                  even_curve_spread, fixed_point_scan,
                                                  nth_root_sequence, run_study,
                                                  scaled_ratio_sequence)

__all__ = [
    "additivity_check", "bounds_check", "scaled_ratio_identity", "sign_audit",
    "sign_change_thresholds", "PositivitySeries", "positivity_series", "tilted_moments",
    "SequenceRecord", "StudyConfig", "StudyMode", "format_value", "frame_to_text",
    "read_records_csv", "records_frame", "records_from_frame", "sort_records", "write_frame",
    "conjecture_proximity", "eval_with_escalation", "even_curve_spread", "fixed_point_scan",
    "nth_root_sequence", "run_study", "scaled_ratio_sequence",
]
