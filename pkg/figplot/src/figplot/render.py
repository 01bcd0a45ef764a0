"""Figure rendering for the four supported plot kinds.

Styling is pinned (no timestamps, fixed sizes, seeded SVG ids) so the same
input CSV always produces the same figure.
"""

from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .csv_contract import (
    SchemaError,
    read_factor_table,
    read_pattern_table,
    read_rate_table,
)

KIND_RATE_VS_SNR = "RateVsSnr"
KIND_RATE_VS_RAYS = "RateVsRays"
KIND_POLAR_PATTERN = "PolarPattern"
KIND_ARRAY_FACTOR = "ArrayFactor"
ALL_KINDS = (
    KIND_RATE_VS_SNR,
    KIND_RATE_VS_RAYS,
    KIND_POLAR_PATTERN,
    KIND_ARRAY_FACTOR,
)

plt.rcParams["svg.hashsalt"] = "figplot"

_MARKERS = ("o", "s", "^", "v", "d", "x", "+", "*")


@dataclass(frozen=True)
class PlotSpec:
    input_csv: str
    kind: str
    output: str

    def __post_init__(self):
        if self.kind not in ALL_KINDS:
            raise SchemaError(f"unknown plot kind {self.kind!r}")


def _save(fig, output):
    kwargs = {"dpi": 150, "bbox_inches": "tight"}
    if str(output).lower().endswith(".svg"):
        kwargs["metadata"] = {"Date": None}
    fig.savefig(output, **kwargs)
    plt.close(fig)


def _render_rate(spec, x_label):
    curves = read_rate_table(spec.input_csv)
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for i, curve in enumerate(curves):
        marker = _MARKERS[i % len(_MARKERS)]
        ax.plot(curve.values, curve.means, marker=marker, label=curve.scheme)
        ax.fill_between(curve.values, curve.lows, curve.highs, alpha=0.2)
    ax.set_xlabel(x_label)
    ax.set_ylabel("achievable rate (bits/s/Hz)")
    ax.grid(True, alpha=0.4)
    ax.legend()
    _save(fig, spec.output)


def _render_polar_pattern(spec):
    aod, matrix = read_pattern_table(spec.input_csv)
    order = np.argsort(aod)
    fig, ax = plt.subplots(figsize=(5.0, 5.0), subplot_kw={"projection": "polar"})
    for row in matrix:
        ax.plot(aod[order], row[order], color="tab:blue", alpha=0.25, linewidth=0.8)
    mean_pattern = matrix.mean(axis=0)
    ax.plot(aod[order], mean_pattern[order], color="tab:blue", linewidth=1.8)
    # mark the departure angles the pattern was sampled at
    ax.plot(aod, mean_pattern, linestyle="none", marker="o", color="tab:red",
            markersize=3.5)
    ax.set_thetamin(-90.0)
    ax.set_thetamax(90.0)
    ax.set_theta_zero_location("N")
    _save(fig, spec.output)


def _render_array_factor(spec):
    angles, mags = read_factor_table(spec.input_csv)
    fig, ax = plt.subplots(figsize=(5.0, 5.0), subplot_kw={"projection": "polar"})
    ax.plot(angles, mags, color="tab:blue", linewidth=1.2)
    ax.set_thetamin(float(np.rad2deg(angles.min())))
    ax.set_thetamax(float(np.rad2deg(angles.max())))
    ax.set_theta_zero_location("N")
    _save(fig, spec.output)


def render(spec):
    """Render one figure; raises SchemaError on contract violations."""
    if spec.kind == KIND_RATE_VS_SNR:
        _render_rate(spec, "SNR (dB)")
    elif spec.kind == KIND_RATE_VS_RAYS:
        _render_rate(spec, "rays per cluster")
    elif spec.kind == KIND_POLAR_PATTERN:
        _render_polar_pattern(spec)
    else:
        _render_array_factor(spec)
