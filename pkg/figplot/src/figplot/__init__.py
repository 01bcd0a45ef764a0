"""Figure rendering for rate-sweep and antenna-pattern CSV results."""

from .csv_contract import (
    FACTOR_COLUMNS,
    PATTERN_COLUMNS,
    RATE_COLUMNS,
    RateCurve,
    SchemaError,
    read_factor_table,
    read_pattern_table,
    read_rate_table,
)
from .render import (
    ALL_KINDS,
    KIND_ARRAY_FACTOR,
    KIND_POLAR_PATTERN,
    KIND_RATE_VS_RAYS,
    KIND_RATE_VS_SNR,
    PlotSpec,
    render,
)

__version__ = "0.1.0"
