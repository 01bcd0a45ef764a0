"""Monte Carlo comparison harness and file interfaces.

All schemes in a trial share the same channel realization (paired design);
trial t uses seed base_seed XOR t, so runs are reproducible and individual
trials can be replayed in isolation.  Aggregated results serialize to CSV
with a fixed schema and 17-significant-digit floats, which makes repeated
runs byte-identical.
"""

from __future__ import annotations

import dataclasses
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .channel import (
    GOOD_CONDITIONED,
    ILL_CONDITIONED,
    ChannelConfig,
    array_response,
    generate_realization,
    pattern_channel,
    physical_channel,
    subchannel_stack,
)
from .exceptions import (
    ConfigError,
    DegenerateAllocationError,
    DegenerateClipError,
    ZeroGainPathError,
)
from .gain_allocation import (
    EXACT_NORMALIZATION,
    NORMALIZATION_MODES,
    single_pattern_design,
)
from .metrics import RateContext, achievable_rate, rate_via_singular_values
from .sequential import SOLVER_EVD, SOLVER_MANIFOLD, sequential_design

SCHEME_PHYSICAL = "Physical"
SCHEME_EOGA = "EOGA"
SCHEME_SOF_MO = "SofMo"
SCHEME_SOF_EVD = "SofEvd"
SCHEME_UPPER_BOUND = "UpperBound"
ALL_SCHEMES = (
    SCHEME_PHYSICAL,
    SCHEME_EOGA,
    SCHEME_SOF_MO,
    SCHEME_SOF_EVD,
    SCHEME_UPPER_BOUND,
)
_SCHEME_BY_LOWER = {s.lower(): s for s in ALL_SCHEMES}

SWEEP_SNR = "snr"
SWEEP_RAY = "ray"

RATE_CSV_HEADER = "scheme,sweep_value,mean_rate,std_rate,ci95_low,ci95_high,n_trials,fallback_count"
PATTERN_CSV_HEADER = "antenna_index,path_index,aod_rad,sample_value"
ARRAY_FACTOR_CSV_HEADER = "angle_rad,magnitude"


@dataclass(frozen=True)
class SweepSpec:
    """What the harness sweeps: the SNR grid, or a list of per-cluster ray counts."""

    kind: str = SWEEP_SNR
    ray_grid: tuple = ()

    def __post_init__(self):
        if self.kind not in (SWEEP_SNR, SWEEP_RAY):
            raise ConfigError(f"unknown sweep kind {self.kind!r}")
        if self.kind == SWEEP_RAY:
            if len(self.ray_grid) == 0:
                raise ConfigError("ray sweep needs a nonempty ray_grid")
            for r in self.ray_grid:
                if not isinstance(r, (int, np.integer)) or r < 1:
                    raise ConfigError("ray_grid entries must be positive integers")
        elif len(self.ray_grid) != 0:
            raise ConfigError("ray_grid only applies to ray sweeps")


@dataclass(frozen=True)
class ExperimentConfig:
    channel: ChannelConfig
    snr_grid_db: tuple
    n_trials: int
    base_seed: int
    schemes: tuple = ALL_SCHEMES
    sweep: SweepSpec = SweepSpec()
    normalization_mode: str = EXACT_NORMALIZATION

    def __post_init__(self):
        if len(self.snr_grid_db) == 0:
            raise ConfigError("snr_grid_db must be nonempty")
        for v in self.snr_grid_db:
            if not np.isfinite(v):
                raise ConfigError("snr_grid_db entries must be finite")
        if not isinstance(self.n_trials, (int, np.integer)) or self.n_trials < 1:
            raise ConfigError("n_trials must be a positive integer")
        if not isinstance(self.base_seed, (int, np.integer)) or self.base_seed < 0:
            raise ConfigError("base_seed must be a nonnegative integer")
        if self.base_seed >= 2**64:
            raise ConfigError("base_seed must fit in 64 bits")
        if len(self.schemes) == 0:
            raise ConfigError("schemes must be nonempty")
        for s in self.schemes:
            if s not in ALL_SCHEMES:
                raise ConfigError(f"unknown scheme {s!r}")
        if self.normalization_mode not in NORMALIZATION_MODES:
            raise ConfigError(f"unknown normalization mode {self.normalization_mode!r}")


_CHANNEL_KEYS = {
    "n_tx",
    "n_rx",
    "n_clusters",
    "n_rays",
    "angle_spread_std",
    "tx_spacing_ratio",
    "rx_spacing_ratio",
    "power_profile",
}
_CHANNEL_REQUIRED = {"n_tx", "n_rx", "n_clusters", "n_rays", "angle_spread_std"}
_TOP_KEYS = {
    "channel",
    "snr_grid_db",
    "n_trials",
    "base_seed",
    "schemes",
    "sweep",
    "normalization_mode",
}
_TOP_REQUIRED = {"channel", "snr_grid_db", "n_trials", "base_seed"}
_PROFILE_BY_LOWER = {
    "good": GOOD_CONDITIONED,
    "goodconditioned": GOOD_CONDITIONED,
    "good_conditioned": GOOD_CONDITIONED,
    "ill": ILL_CONDITIONED,
    "illconditioned": ILL_CONDITIONED,
    "ill_conditioned": ILL_CONDITIONED,
}


def _require_int(value, name):
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise ConfigError(f"{name} must be an integer, got {value!r}")
    return int(value)


def parse_experiment_config(raw):
    """Build an ExperimentConfig from a plain dict (e.g. parsed JSON).

    Unknown keys are an error, as are missing required ones; everything else
    is validated by the dataclass constructors.
    """
    if not isinstance(raw, dict):
        raise ConfigError("config root must be an object")
    unknown = set(raw) - _TOP_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    missing = _TOP_REQUIRED - set(raw)
    if missing:
        raise ConfigError(f"missing config keys: {sorted(missing)}")

    ch = raw["channel"]
    if not isinstance(ch, dict):
        raise ConfigError("channel must be an object")
    unknown = set(ch) - _CHANNEL_KEYS
    if unknown:
        raise ConfigError(f"unknown channel keys: {sorted(unknown)}")
    missing = _CHANNEL_REQUIRED - set(ch)
    if missing:
        raise ConfigError(f"missing channel keys: {sorted(missing)}")
    kwargs = {}
    for name in ("n_tx", "n_rx", "n_clusters", "n_rays"):
        kwargs[name] = _require_int(ch[name], f"channel.{name}")
    kwargs["angle_spread_std"] = float(ch["angle_spread_std"])
    if "tx_spacing_ratio" in ch:
        kwargs["tx_spacing_ratio"] = float(ch["tx_spacing_ratio"])
    if "rx_spacing_ratio" in ch:
        kwargs["rx_spacing_ratio"] = float(ch["rx_spacing_ratio"])
    if "power_profile" in ch:
        key = str(ch["power_profile"]).lower()
        if key not in _PROFILE_BY_LOWER:
            raise ConfigError(f"unknown power_profile {ch['power_profile']!r}")
        kwargs["power_profile"] = _PROFILE_BY_LOWER[key]
    channel = ChannelConfig(**kwargs)

    snr_grid = raw["snr_grid_db"]
    if not isinstance(snr_grid, (list, tuple)):
        raise ConfigError("snr_grid_db must be a list")
    snr_grid = tuple(float(v) for v in snr_grid)

    schemes = raw.get("schemes", list(ALL_SCHEMES))
    if not isinstance(schemes, (list, tuple)):
        raise ConfigError("schemes must be a list")
    canonical = []
    for s in schemes:
        name = _SCHEME_BY_LOWER.get(str(s).lower())
        if name is None:
            raise ConfigError(f"unknown scheme {s!r}")
        canonical.append(name)

    sweep_raw = raw.get("sweep", SWEEP_SNR)
    if isinstance(sweep_raw, str):
        if sweep_raw.lower() != SWEEP_SNR:
            raise ConfigError(f"unknown sweep {sweep_raw!r}")
        sweep = SweepSpec()
    elif isinstance(sweep_raw, dict):
        unknown = set(sweep_raw) - {"ray"}
        if unknown:
            raise ConfigError(f"unknown sweep keys: {sorted(unknown)}")
        if "ray" not in sweep_raw:
            raise ConfigError("sweep object must contain a 'ray' list")
        rays = sweep_raw["ray"]
        if not isinstance(rays, (list, tuple)):
            raise ConfigError("sweep.ray must be a list")
        sweep = SweepSpec(
            kind=SWEEP_RAY,
            ray_grid=tuple(_require_int(r, "sweep.ray entry") for r in rays),
        )
    else:
        raise ConfigError("sweep must be 'snr' or an object {'ray': [...]}")

    mode = str(raw.get("normalization_mode", EXACT_NORMALIZATION)).lower()

    return ExperimentConfig(
        channel=channel,
        snr_grid_db=snr_grid,
        n_trials=_require_int(raw["n_trials"], "n_trials"),
        base_seed=_require_int(raw["base_seed"], "base_seed"),
        schemes=tuple(canonical),
        sweep=sweep,
        normalization_mode=mode,
    )


def load_experiment_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc}") from exc
    return parse_experiment_config(raw)


def snr_db_to_linear(snr_db):
    return 10.0 ** (snr_db / 10.0)


def upper_bound_rate(n_tx, n_rx, snr_linear):
    """Rate of the ideal channel sqrt(n_tx) [I 0]: n_rx equal singular values."""
    return n_rx * np.log2(1.0 + snr_linear * n_tx / n_rx)


@dataclass
class TrialOutcome:
    """Per-scheme result of one trial: rate per SNR point, or excluded."""

    rates: np.ndarray | None
    fallbacks: int = 0

    @property
    def excluded(self) -> bool:
        return self.rates is None


def evaluate_trial(channel_cfg, seed, schemes, snr_grid_db, normalization):
    """Evaluate all requested schemes on one shared channel realization.

    Pattern designs do not depend on SNR, so each design is run once and
    rated at every grid point.  Degenerate solver errors exclude that
    scheme's trial instead of aborting the run.
    """
    realization = generate_realization(channel_cfg, seed)
    contexts = [
        RateContext(snr_linear=snr_db_to_linear(db), n_rx=channel_cfg.n_rx)
        for db in snr_grid_db
    ]

    def rates_of(channel):
        return np.array([achievable_rate(channel, ctx) for ctx in contexts])

    outcome = {}
    for scheme in schemes:
        try:
            if scheme == SCHEME_PHYSICAL:
                outcome[scheme] = TrialOutcome(rates_of(physical_channel(realization)))
            elif scheme == SCHEME_EOGA:
                pattern, _ = single_pattern_design(
                    realization, normalization=normalization
                )
                outcome[scheme] = TrialOutcome(
                    rates_of(pattern_channel(realization, pattern))
                )
            elif scheme in (SCHEME_SOF_MO, SCHEME_SOF_EVD):
                solver = SOLVER_MANIFOLD if scheme == SCHEME_SOF_MO else SOLVER_EVD
                result = sequential_design(
                    realization, solver=solver, normalization=normalization
                )
                outcome[scheme] = TrialOutcome(
                    rates_of(pattern_channel(realization, result.pattern)),
                    fallbacks=result.fallback_count,
                )
            elif scheme == SCHEME_UPPER_BOUND:
                outcome[scheme] = TrialOutcome(
                    np.array(
                        [
                            upper_bound_rate(
                                channel_cfg.n_tx, channel_cfg.n_rx, ctx.snr_linear
                            )
                            for ctx in contexts
                        ]
                    )
                )
            else:
                raise ConfigError(f"unknown scheme {scheme!r}")
        except (DegenerateAllocationError, DegenerateClipError, ZeroGainPathError):
            outcome[scheme] = TrialOutcome(rates=None, fallbacks=1)
    return outcome


def _trial_task(args):
    return evaluate_trial(*args)


@dataclass
class SampleSet:
    """Per-trial rate samples for one (scheme, sweep value) cell."""

    rates: list
    fallback_count: int = 0


def run_trials(cfg, threads=1):
    """Run all trials and return raw per-trial samples keyed (scheme, sweep_value).

    Results are merged in trial-index order whatever the execution order, so
    parallel runs reproduce serial ones exactly.
    """
    if cfg.sweep.kind == SWEEP_SNR:
        tasks = [
            (
                cfg.channel,
                cfg.base_seed ^ t,
                cfg.schemes,
                cfg.snr_grid_db,
                cfg.normalization_mode,
            )
            for t in range(cfg.n_trials)
        ]
        cells = [(scheme, db) for scheme in cfg.schemes for db in cfg.snr_grid_db]
    else:
        snr = (cfg.snr_grid_db[0],)
        tasks = []
        for n_ray in cfg.sweep.ray_grid:
            channel = dataclasses.replace(cfg.channel, n_rays=n_ray)
            tasks.extend(
                (channel, cfg.base_seed ^ t, cfg.schemes, snr, cfg.normalization_mode)
                for t in range(cfg.n_trials)
            )
        cells = [
            (scheme, float(n_ray))
            for scheme in cfg.schemes
            for n_ray in cfg.sweep.ray_grid
        ]

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            outcomes = list(pool.map(_trial_task, tasks, chunksize=4))
    else:
        outcomes = [evaluate_trial(*args) for args in tasks]

    samples = {cell: SampleSet(rates=[]) for cell in cells}
    if cfg.sweep.kind == SWEEP_SNR:
        for outcome in outcomes:
            for scheme in cfg.schemes:
                got = outcome[scheme]
                for j, db in enumerate(cfg.snr_grid_db):
                    cell = samples[(scheme, db)]
                    if got.excluded:
                        cell.fallback_count += 1
                    else:
                        cell.rates.append(float(got.rates[j]))
                        if got.fallbacks > 0:
                            cell.fallback_count += 1
    else:
        for i, n_ray in enumerate(cfg.sweep.ray_grid):
            block = outcomes[i * cfg.n_trials : (i + 1) * cfg.n_trials]
            for outcome in block:
                for scheme in cfg.schemes:
                    got = outcome[scheme]
                    cell = samples[(scheme, float(n_ray))]
                    if got.excluded:
                        cell.fallback_count += 1
                    else:
                        cell.rates.append(float(got.rates[0]))
                        if got.fallbacks > 0:
                            cell.fallback_count += 1
    return samples


@dataclass
class ResultRow:
    scheme: str
    sweep_value: float
    mean_rate: float
    std_rate: float
    ci95_low: float
    ci95_high: float
    n_trials: int
    fallback_count: int


def aggregate_samples(cfg, samples):
    """Collapse per-trial samples into ResultRows, ordered (scheme, sweep value)."""
    if cfg.sweep.kind == SWEEP_SNR:
        values = list(cfg.snr_grid_db)
    else:
        values = [float(r) for r in cfg.sweep.ray_grid]
    rows = []
    for scheme in cfg.schemes:
        for value in values:
            cell = samples[(scheme, value)]
            n = len(cell.rates)
            if n == 0:
                rows.append(
                    ResultRow(scheme, value, float("nan"), float("nan"),
                              float("nan"), float("nan"), 0, cell.fallback_count)
                )
                continue
            arr = np.asarray(cell.rates)
            mean = float(arr.mean())
            std = float(arr.std(ddof=1)) if n > 1 else 0.0
            half = 1.96 * std / np.sqrt(n)
            rows.append(
                ResultRow(scheme, value, mean, std, mean - half, mean + half,
                          n, cell.fallback_count)
            )
    return rows


def run_experiment(cfg, threads=1):
    return aggregate_samples(cfg, run_trials(cfg, threads=threads))


def _fmt(x):
    return format(float(x), ".17g")


def rate_csv_text(rows):
    lines = [RATE_CSV_HEADER]
    for r in rows:
        lines.append(
            f"{r.scheme},{_fmt(r.sweep_value)},{_fmt(r.mean_rate)},{_fmt(r.std_rate)},"
            f"{_fmt(r.ci95_low)},{_fmt(r.ci95_high)},{r.n_trials},{r.fallback_count}"
        )
    return "\n".join(lines) + "\n"


def write_rate_csv(rows, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(rate_csv_text(rows))


def all_cells_degenerate(rows):
    return all(r.n_trials == 0 for r in rows)


def export_pattern_samples(realization, pattern, path):
    """Pattern matrix as CSV rows (antenna_index, path_index, aod_rad, sample_value).

    17-significant-digit floats, so reading the file back reproduces the
    matrix exactly.
    """
    pattern = np.asarray(pattern, dtype=float)
    n_tx = realization.config.n_tx
    if pattern.shape != (n_tx, realization.n_paths):
        raise ConfigError(
            f"pattern shape {pattern.shape} != ({n_tx}, {realization.n_paths})"
        )
    aod = realization.aod_vector()
    lines = [PATTERN_CSV_HEADER]
    for k in range(n_tx):
        for l in range(realization.n_paths):
            lines.append(f"{k},{l},{_fmt(aod[l])},{_fmt(pattern[k, l])}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def load_pattern_samples(path):
    """Inverse of export_pattern_samples: returns (aod vector, pattern matrix)."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if header != PATTERN_CSV_HEADER:
            raise ConfigError(f"unexpected pattern CSV header {header!r}")
        rows = [line.strip().split(",") for line in fh if line.strip()]
    n_tx = max(int(r[0]) for r in rows) + 1
    n_paths = max(int(r[1]) for r in rows) + 1
    aod = np.zeros(n_paths)
    pattern = np.zeros((n_tx, n_paths))
    for k_s, l_s, aod_s, val_s in rows:
        k, l = int(k_s), int(l_s)
        aod[l] = float(aod_s)
        pattern[k, l] = float(val_s)
    return aod, pattern


def array_factor_scan(realization, pattern, scan_grid):
    """Transmit array factor of a designed pattern over scan angles.

    Each antenna's element pattern is the periodic-linear interpolation of
    its per-path samples (pattern row vs path AoD); the factor at angle psi
    is |sum_k f_k(psi) e^{j 2 pi d (k-1) sin psi}|.  With fewer than two
    distinct AoDs the interpolation degenerates to a constant.
    """
    cfg = realization.config
    pattern = np.asarray(pattern, dtype=float)
    if pattern.shape != (cfg.n_tx, realization.n_paths):
        raise ConfigError(
            f"pattern shape {pattern.shape} != ({cfg.n_tx}, {realization.n_paths})"
        )
    grid = np.asarray(scan_grid, dtype=float)
    aod = realization.aod_vector()
    distinct = np.unique(aod).size
    element = np.empty((cfg.n_tx, grid.size))
    for k in range(cfg.n_tx):
        if distinct < 2:
            element[k] = pattern[k].mean()
        else:
            element[k] = np.interp(grid, aod, pattern[k], period=2.0 * np.pi)
    k_idx = np.arange(cfg.n_tx)[:, None]
    steering = np.exp(
        2j * np.pi * cfg.tx_spacing_ratio * k_idx * np.sin(grid)[None, :]
    )
    magnitude = np.abs((element * steering).sum(axis=0))
    return list(zip(grid.tolist(), magnitude.tolist()))


def write_array_factor_csv(scan, path):
    lines = [ARRAY_FACTOR_CSV_HEADER]
    for angle, magnitude in scan:
        lines.append(f"{_fmt(angle)},{_fmt(magnitude)}")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _selftest_configs(seed):
    channel = ChannelConfig(
        n_tx=8,
        n_rx=2,
        n_clusters=4,
        n_rays=2,
        angle_spread_std=np.deg2rad(15.0),
        power_profile=ILL_CONDITIONED,
    )
    rate_cfg = ExperimentConfig(
        channel=channel,
        snr_grid_db=(0.0, 10.0, 20.0),
        n_trials=8,
        base_seed=seed,
    )
    ray_cfg = ExperimentConfig(
        channel=channel,
        snr_grid_db=(10.0,),
        n_trials=6,
        base_seed=seed,
        sweep=SweepSpec(kind=SWEEP_RAY, ray_grid=(1, 2)),
    )
    return rate_cfg, ray_cfg


def run_selftest(out_dir, seed=7):
    """Fast invariant checks plus golden CSV outputs for downstream tooling.

    Returns (ok, messages).  Writes rate_sweep.csv, ray_sweep.csv,
    pattern_samples.csv, and array_factor.csv into out_dir.
    """
    messages = []
    ok = True

    def check(name, passed):
        nonlocal ok
        ok = ok and passed
        messages.append(f"{'ok' if passed else 'FAIL'}: {name}")

    rng = np.random.default_rng(seed)
    ctx = RateContext(snr_linear=10.0, n_rx=4)
    worst = 0.0
    for _ in range(50):
        h = rng.standard_normal((4, 8)) + 1j * rng.standard_normal((4, 8))
        worst = max(worst, abs(achievable_rate(h, ctx) - rate_via_singular_values(h, ctx)))
    check(f"rate determinant/SVD agreement (max dev {worst:.2e})", worst <= 1e-9)

    worst = 0.0
    for _ in range(50):
        m_hat = rng.uniform(0.0, 1.0, 8)
        m_hat *= np.sqrt(8.0 / (m_hat @ m_hat))
        a_r = array_response(rng.uniform(-np.pi / 2, np.pi / 2), 2)
        a_t = array_response(rng.uniform(-np.pi / 2, np.pi / 2), 8)
        sub = np.outer(a_r, np.conj(a_t * m_hat))
        worst = max(worst, abs(np.linalg.norm(sub) ** 2 - 1.0))
    check(f"modified subchannels unit Frobenius (max dev {worst:.2e})", worst <= 1e-10)

    rate_cfg, ray_cfg = _selftest_configs(seed)
    realization = generate_realization(rate_cfg.channel, seed)
    ones = np.ones((rate_cfg.channel.n_tx, realization.n_paths))
    same = np.array_equal(
        pattern_channel(realization, ones), physical_channel(realization)
    )
    check("all-ones pattern reproduces the physical channel exactly", same)

    target = rate_cfg.channel.n_tx * rate_cfg.channel.n_rx
    worst = 0.0
    eoga_pattern, _ = single_pattern_design(realization)
    patterns = [eoga_pattern]
    for solver in (SOLVER_MANIFOLD, SOLVER_EVD):
        patterns.append(sequential_design(realization, solver=solver).pattern)
    for pat in patterns:
        norm_sq = np.linalg.norm(pattern_channel(realization, pat)) ** 2
        worst = max(worst, abs(norm_sq - target) / target)
    check(f"designed channels restore total power (max rel dev {worst:.2e})", worst <= 1e-9)

    rows_a = run_experiment(rate_cfg)
    rows_b = run_experiment(rate_cfg)
    check(
        "repeated runs are byte-identical",
        rate_csv_text(rows_a) == rate_csv_text(rows_b),
    )

    os.makedirs(out_dir, exist_ok=True)
    write_rate_csv(rows_a, os.path.join(out_dir, "rate_sweep.csv"))
    write_rate_csv(run_experiment(ray_cfg), os.path.join(out_dir, "ray_sweep.csv"))
    export_pattern_samples(
        realization, eoga_pattern, os.path.join(out_dir, "pattern_samples.csv")
    )
    scan = array_factor_scan(
        realization, eoga_pattern, np.linspace(-np.pi / 2, np.pi / 2, 181)
    )
    write_array_factor_csv(scan, os.path.join(out_dir, "array_factor.csv"))
    messages.append(f"golden CSVs written to {out_dir}")
    return ok, messages
