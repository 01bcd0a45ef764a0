"""Readers for the harness CSV formats.

The plotting side shares no code with the simulation package; these readers
are written against the documented file formats alone.  Any deviation from
the expected schema raises SchemaError naming the offending columns, which
the CLI turns into a nonzero exit.
"""

import csv

import numpy as np

RATE_COLUMNS = (
    "scheme",
    "sweep_value",
    "mean_rate",
    "std_rate",
    "ci95_low",
    "ci95_high",
    "n_trials",
    "fallback_count",
)
PATTERN_COLUMNS = ("antenna_index", "path_index", "aod_rad", "sample_value")
FACTOR_COLUMNS = ("angle_rad", "magnitude")


class SchemaError(ValueError):
    """Input file does not match the documented CSV contract."""


def _check_header(got, expected, path):
    if tuple(got) == tuple(expected):
        return
    missing = [c for c in expected if c not in got]
    unexpected = [c for c in got if c not in expected]
    parts = [f"{path}: bad header"]
    if missing:
        parts.append(f"missing columns {missing}")
    if unexpected:
        parts.append(f"unexpected columns {unexpected}")
    if not missing and not unexpected:
        parts.append(f"column order {list(got)} != {list(expected)}")
    raise SchemaError("; ".join(parts))


def _read_rows(path, expected):
    try:
        with open(path, "r", encoding="utf-8", newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise SchemaError(f"{path}: empty file") from None
            _check_header(header, expected, path)
            rows = [row for row in reader if row]
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise SchemaError(f"{path}: no data rows")
    for i, row in enumerate(rows, start=2):
        if len(row) != len(expected):
            raise SchemaError(
                f"{path}: line {i} has {len(row)} fields, expected {len(expected)}"
            )
    return rows


def _column(rows, index, cast, name, path):
    out = []
    for i, row in enumerate(rows, start=2):
        try:
            out.append(cast(row[index]))
        except ValueError as exc:
            raise SchemaError(
                f"{path}: line {i}, column '{name}': {row[index]!r} is not numeric"
            ) from exc
    return out


class RateCurve:
    """One scheme's sweep: values, means, and confidence band edges."""

    def __init__(self, scheme, values, means, lows, highs):
        self.scheme = scheme
        self.values = np.asarray(values)
        self.means = np.asarray(means)
        self.lows = np.asarray(lows)
        self.highs = np.asarray(highs)


def read_rate_table(path):
    """Rate CSV -> list of RateCurve, one per scheme, in file order."""
    rows = _read_rows(path, RATE_COLUMNS)
    values = _column(rows, 1, float, "sweep_value", path)
    means = _column(rows, 2, float, "mean_rate", path)
    lows = _column(rows, 4, float, "ci95_low", path)
    highs = _column(rows, 5, float, "ci95_high", path)
    _column(rows, 6, int, "n_trials", path)
    curves = []
    order = []
    grouped = {}
    for i, row in enumerate(rows):
        scheme = row[0]
        if scheme not in grouped:
            grouped[scheme] = []
            order.append(scheme)
        grouped[scheme].append(i)
    for scheme in order:
        idx = grouped[scheme]
        curves.append(
            RateCurve(
                scheme,
                [values[i] for i in idx],
                [means[i] for i in idx],
                [lows[i] for i in idx],
                [highs[i] for i in idx],
            )
        )
    return curves


def read_pattern_table(path):
    """Pattern CSV -> (aod vector, n_tx x n_paths sample matrix)."""
    rows = _read_rows(path, PATTERN_COLUMNS)
    antennas = _column(rows, 0, int, "antenna_index", path)
    paths = _column(rows, 1, int, "path_index", path)
    aods = _column(rows, 2, float, "aod_rad", path)
    samples = _column(rows, 3, float, "sample_value", path)
    n_tx = max(antennas) + 1
    n_paths = max(paths) + 1
    aod = np.zeros(n_paths)
    matrix = np.zeros((n_tx, n_paths))
    for k, l, angle, value in zip(antennas, paths, aods, samples):
        aod[l] = angle
        matrix[k, l] = value
    return aod, matrix


def read_factor_table(path):
    """Array factor CSV -> (angles, magnitudes)."""
    rows = _read_rows(path, FACTOR_COLUMNS)
    angles = np.asarray(_column(rows, 0, float, "angle_rad", path))
    mags = np.asarray(_column(rows, 1, float, "magnitude", path))
    return angles, mags
