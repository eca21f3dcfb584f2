"""Study records, study configuration and their tabular (CSV/JSON) form.

Rows are collected into an index-keyed dict and turned into a pandas
DataFrame with ``from_dict(orient="index")``. Values of E_N can be far
outside the double range, so the ``value`` column is written as a decimal
string of a 53-bit mantissa with unbounded exponent; every other float
column is written with 17 significant digits.
"""
import enum
import io
import json
import logging
import math
import os
from collections import defaultdict
from dataclasses import dataclass, field

import mpmath
import numpy as np
import pandas as pd

from gauss_randpoly.asymptotics.limits import Branch, BranchKind, Parity
from gauss_randpoly.config import (CSV_COLUMNS, DEFAULT_N_MAX, MIN_PRECISION_BITS,
                                   SIGNIFICANT_DIGITS)
from gauss_randpoly.errors import DomainError

logger = logging.getLogger(__name__)


class StudyMode(enum.Enum):
    NTH_ROOT = "nthroot"
    SCALED_RATIO = "scaled"
    SIGN_AUDIT = "sign"
    FIXED_POINT = "fixedpoint"
    POSITIVITY_SERIES = "appb"


def _double_mantissa(value):
    """Rounds to a 53-bit mantissa, keeping the exponent unbounded."""
    with mpmath.workprec(53):
        return mpmath.mpf(value)


def format_value(value):
    """Decimal string with 17 significant digits that parses back to the same value."""
    return mpmath.nstr(_double_mantissa(value), SIGNIFICANT_DIGITS, strip_zeros=False)


def _optional_float(value):
    if value is None:
        return None
    value = float(value)
    return None if math.isnan(value) else value


@dataclass(frozen=True)
class SequenceRecord:
    """
    One term of a finite-N sequence together with its reference limit.

    Args:
        N(int): degree
        parity(Parity): parity of N
        z2(float): real z²
        sigma2(float): σ²
        value(mpmath.mpf): E_N, or the scaled ratio
        nth_root(float): signed N-th root of E_N, None for ratios
        ref_limit(float): the limit the sequence is compared to
        abs_err(float): |nth_root - ref_limit|, or |value - ref_limit| for ratios
        branch(Branch): branch of the reference limit
        bits(int): working precision, None for exact evaluation
        seed(int): seed of a sampled study, None otherwise
    """

    N: int
    parity: Parity
    z2: float
    sigma2: float
    value: mpmath.mpf
    nth_root: float = None
    ref_limit: float = None
    abs_err: float = None
    branch: Branch = None
    bits: int = None
    seed: int = None
    z2_im: float = 0.0

    def __post_init__(self):
        if self.N < 1:
            raise DomainError(f"N must be >= 1, got {self.N}")
        parity = Parity.coerce(self.parity)
        if parity is not Parity.of(self.N):
            raise DomainError(f"parity {parity.value} inconsistent with N={self.N}")
        object.__setattr__(self, "parity", parity)
        object.__setattr__(self, "value", _double_mantissa(self.value))
        for name in ("z2", "sigma2", "z2_im"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("nth_root", "ref_limit", "abs_err"):
            object.__setattr__(self, name, _optional_float(getattr(self, name)))

    def as_row(self):
        """The record as a dict keyed by the CSV schema columns."""
        return {
            "N": self.N,
            "parity": self.parity.value,
            "z2_re": self.z2,
            "z2_im": self.z2_im,
            "sigma2": self.sigma2,
            "value": format_value(self.value),
            "nth_root": self.nth_root,
            "ref_limit": self.ref_limit,
            "abs_err": self.abs_err,
            "branch": str(self.branch) if self.branch is not None else None,
            "sign": self.branch.sign if self.branch is not None else None,
            "bits": self.bits,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class StudyConfig:
    """
    What to compute and how.

    Args:
        N_max(int): largest degree, >= 1
        grid(list): (z2, sigma2) points
        mode(StudyMode): kind of study
        precision_bits(int): working precision for the float path, >= 53;
            None follows the config policy
        exact(bool): evaluate with exact rationals first
        n_values(list): explicit degrees to use instead of 1..N_max
        workers(int): processes used for independent grid points
    """

    N_max: int = DEFAULT_N_MAX
    grid: tuple = field(default=())
    mode: StudyMode = StudyMode.NTH_ROOT
    precision_bits: int = None
    exact: bool = True
    n_values: tuple = None
    workers: int = 1

    def __post_init__(self):
        if self.N_max < 1:
            raise DomainError(f"N_max must be >= 1, got {self.N_max}")
        if self.precision_bits is not None and self.precision_bits < MIN_PRECISION_BITS:
            raise DomainError(f"precision_bits must be >= {MIN_PRECISION_BITS}, "
                              f"got {self.precision_bits}")
        if self.workers < 1:
            raise DomainError(f"workers must be >= 1, got {self.workers}")
        object.__setattr__(self, "mode", StudyMode(self.mode))
        object.__setattr__(self, "grid", tuple(tuple(point) for point in self.grid))
        if self.n_values is not None:
            n_values = tuple(sorted(set(int(n) for n in self.n_values)))
            if not n_values or n_values[0] < 1:
                raise DomainError("n_values must be positive integers")
            object.__setattr__(self, "n_values", n_values)

    def degrees(self):
        """The degrees a study walks through, in increasing order."""
        if self.n_values is not None:
            return list(self.n_values)
        return list(range(1, self.N_max + 1))


def sort_records(records):
    """Deterministic order by (N, z², σ²)."""
    return sorted(records, key=lambda record: (record.N, record.z2, record.sigma2))


def records_frame(records):
    """
    Builds the schema-v1 DataFrame of a list of records.

    Args:
        records(list): SequenceRecords

    Returns:
        pandas.DataFrame: one row per record, columns in schema order
    """
    index_to_row = defaultdict(dict)
    for index, record in enumerate(records):
        index_to_row[index] = record.as_row()
    frame = pd.DataFrame.from_dict(index_to_row, orient="index")
    frame = frame.reindex(columns=CSV_COLUMNS)
    for column in ("N", "sign", "bits", "seed"):
        frame[column] = frame[column].astype("Int64")
    return frame


def _branch_from_row(row):
    if pd.isna(row["branch"]):
        return None
    sign = 1 if pd.isna(row["sign"]) else int(row["sign"])
    return Branch(BranchKind(row["branch"]), sign)


def _optional_int(value):
    return None if pd.isna(value) else int(value)


def records_from_frame(frame):
    """
    Rebuilds SequenceRecords from a frame written by ``records_frame``.

    Args:
        frame(pandas.DataFrame): schema-v1 rows, ``value`` as strings

    Returns:
        list: SequenceRecords
    """
    missing = [column for column in CSV_COLUMNS if column not in frame.columns]
    if missing:
        raise DomainError(f"frame lacks schema columns {missing}")
    records = []
    for _, row in frame.iterrows():
        with mpmath.workprec(53):
            value = mpmath.mpf(str(row["value"]))
        records.append(SequenceRecord(
            N=int(row["N"]),
            parity=row["parity"],
            z2=float(row["z2_re"]),
            z2_im=float(row["z2_im"]),
            sigma2=float(row["sigma2"]),
            value=value,
            nth_root=row["nth_root"],
            ref_limit=row["ref_limit"],
            abs_err=row["abs_err"],
            branch=_branch_from_row(row),
            bits=_optional_int(row["bits"]),
            seed=_optional_int(row["seed"]),
        ))
    return records


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    return str(value)


def frame_to_text(frame, fmt="csv"):
    """
    Serializes a frame as CSV (17 significant digits) or JSON records.

    JSON floats are written with the shortest repr that reads back to the
    same double; missing values become null.

    Args:
        frame(pandas.DataFrame): any study frame
        fmt(str): "csv" or "json"

    Returns:
        str: the serialized frame
    """
    if fmt == "csv":
        return frame.to_csv(index=False, float_format=f"%.{SIGNIFICANT_DIGITS}g",
                            lineterminator="\n")
    if fmt == "json":
        rows = frame.astype(object).where(frame.notna(), None).to_dict(orient="records")
        return json.dumps(rows, default=_json_default) + "\n"
    raise DomainError(f"unknown output format {fmt!r}")


def read_records_csv(path_or_buffer):
    """Reads a schema-v1 CSV back into SequenceRecords, floats parsed round-trip exact."""
    if isinstance(path_or_buffer, str) and not os.path.exists(path_or_buffer):
        path_or_buffer = io.StringIO(path_or_buffer)
    frame = pd.read_csv(path_or_buffer, dtype={"value": str, "parity": str, "branch": str},
                        float_precision="round_trip")
    return records_from_frame(frame)


def write_frame(frame, output=None, fmt="csv"):
    """
    Writes a frame to ``output`` (a file path) or returns the text when no path is given.

    Args:
        frame(pandas.DataFrame): rows to write
        output(str): file path; parent directories are created
        fmt(str): "csv" or "json"

    Returns:
        str: the serialized text
    """
    text = frame_to_text(frame, fmt)
    if output:
        output_dir = os.path.dirname(output)
        if output_dir and not os.path.exists(output_dir):
            os.makedirs(output_dir)
        with open(output, "w") as handle:
            handle.write(text)
        logger.info("wrote %d rows to %s", len(frame), output)
    return text
