import os
import subprocess
import sys

import pytest

import figplot
from figplot import PlotSpec, SchemaError

DATA = os.path.join(os.path.dirname(__file__), "data")

KIND_TO_FIXTURE = {
    "RateVsSnr": "rate_sweep.csv",
    "RateVsRays": "ray_sweep.csv",
    "PolarPattern": "pattern_samples.csv",
    "ArrayFactor": "array_factor.csv",
}


def _fixture(name):
    return os.path.join(DATA, name)


@pytest.mark.parametrize("kind", sorted(KIND_TO_FIXTURE))
def test_render_all_kinds(tmp_path, kind):
    out = tmp_path / f"{kind}.png"
    spec = PlotSpec(
        input_csv=_fixture(KIND_TO_FIXTURE[kind]), kind=kind, output=str(out)
    )
    figplot.render(spec)
    assert out.exists() and out.stat().st_size > 0


def test_render_bound_only(tmp_path):
    out = tmp_path / "bound.png"
    figplot.render(
        PlotSpec(input_csv=_fixture("bound_only.csv"), kind="RateVsSnr", output=str(out))
    )
    assert out.stat().st_size > 0


def test_render_svg_deterministic(tmp_path):
    paths = []
    for name in ("a.svg", "b.svg"):
        out = tmp_path / name
        figplot.render(
            PlotSpec(
                input_csv=_fixture("rate_sweep.csv"), kind="RateVsSnr", output=str(out)
            )
        )
        paths.append(out.read_bytes())
    assert paths[0] == paths[1]


def test_unknown_kind_rejected():
    with pytest.raises(SchemaError):
        PlotSpec(input_csv="x.csv", kind="Histogram", output="x.png")


def _cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "figplot.cli", *args], capture_output=True, text=True
    )


@pytest.mark.parametrize("kind", sorted(KIND_TO_FIXTURE))
def test_cli_renders_each_kind(tmp_path, kind):
    out = tmp_path / f"{kind}.png"
    result = _cli(
        "render", "--kind", kind, "--in", _fixture(KIND_TO_FIXTURE[kind]),
        "--out", str(out),
    )
    assert result.returncode == 0, result.stderr
    assert out.exists() and out.stat().st_size > 0


def test_cli_schema_mismatch_exits_nonzero(tmp_path):
    result = _cli(
        "render", "--kind", "RateVsSnr", "--in", _fixture("schema_mismatch.csv"),
        "--out", str(tmp_path / "x.png"),
    )
    assert result.returncode != 0
    assert "missing columns" in result.stderr


def test_cli_empty_rows_exits_nonzero(tmp_path):
    result = _cli(
        "render", "--kind", "RateVsSnr", "--in", _fixture("empty_rows.csv"),
        "--out", str(tmp_path / "x.png"),
    )
    assert result.returncode != 0


def test_cli_rejects_unknown_kind(tmp_path):
    result = _cli(
        "render", "--kind", "Scatter", "--in", _fixture("rate_sweep.csv"),
        "--out", str(tmp_path / "x.png"),
    )
    assert result.returncode == 2
