"""Clustered multipath MIMO channel model with reconfigurable transmit patterns.

The physical channel between a uniform linear transmit array and a uniform
linear receive array is a finite sum of planar-wavefront paths,

    H = sum_l alpha_l * a_R(theta_l) a_T(phi_l)^H,

grouped into clusters of rays around common mean angles.  A pattern matrix M
(one nonnegative column per path) rescales the transmit response of each path
element-wise, which models per-antenna radiation patterns sampled at the path
departure angles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError

GOOD_CONDITIONED = "good"
ILL_CONDITIONED = "ill"
_PROFILES = (GOOD_CONDITIONED, ILL_CONDITIONED)

# Dominant-to-weak cluster power ratios of the ill-conditioned profile; padded
# with trailing 1s (or truncated from the right) to the cluster count.
_ILL_RATIO_HEAD = (100.0, 50.0, 50.0)


@dataclass(frozen=True)
class ChannelConfig:
    """Generation parameters for a clustered multipath channel.

    Parameters
    ----------
    n_tx, n_rx : int
        Transmit / receive array sizes.  n_rx must not exceed n_tx.
    n_clusters, n_rays : int
        Number of scattering clusters and rays per cluster.  The total path
        count is L = n_clusters * n_rays.
    angle_spread_std : float
        Per-cluster angle spread standard deviation, radians.  Ray angles are
        uniform on mean +/- sqrt(3) * angle_spread_std.
    tx_spacing_ratio, rx_spacing_ratio : float
        Antenna spacing over carrier wavelength (0.5 = half wavelength).
    power_profile : str
        "good" for near-even random cluster powers, "ill" for a few dominant
        clusters (100:50:50:1:...:1).
    """

    n_tx: int
    n_rx: int
    n_clusters: int
    n_rays: int
    angle_spread_std: float
    tx_spacing_ratio: float = 0.5
    rx_spacing_ratio: float = 0.5
    power_profile: str = GOOD_CONDITIONED

    def __post_init__(self):
        for name in ("n_tx", "n_rx", "n_clusters", "n_rays"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if self.n_rx > self.n_tx:
            raise ConfigError(
                f"n_rx ({self.n_rx}) must not exceed n_tx ({self.n_tx})"
            )
        if not self.angle_spread_std >= 0.0:
            raise ConfigError("angle_spread_std must be nonnegative")
        if not self.tx_spacing_ratio > 0.0 or not self.rx_spacing_ratio > 0.0:
            raise ConfigError("antenna spacing ratios must be positive")
        if self.power_profile not in _PROFILES:
            raise ConfigError(
                f"power_profile must be one of {_PROFILES}, got {self.power_profile!r}"
            )

    @property
    def n_paths(self) -> int:
        return self.n_clusters * self.n_rays

    @property
    def power_normalization(self) -> float:
        """Total cluster power gamma chosen so that E||H||_F^2 = n_tx * n_rx."""
        return self.n_tx * self.n_rx / self.n_rays


@dataclass(frozen=True)
class ScatteringPath:
    """One planar-wavefront propagation path."""

    gain: complex
    aoa: float
    aod: float
    cluster_index: int


@dataclass(frozen=True)
class ChannelRealization:
    """One random draw of the multipath channel.

    Paths are stored cluster-major: paths[c * n_rays + r] is ray r of
    cluster c.
    """

    config: ChannelConfig
    paths: tuple
    cluster_powers: np.ndarray

    @property
    def n_paths(self) -> int:
        return len(self.paths)

    def gain_vector(self) -> np.ndarray:
        return np.array([p.gain for p in self.paths], dtype=complex)

    def aoa_vector(self) -> np.ndarray:
        return np.array([p.aoa for p in self.paths])

    def aod_vector(self) -> np.ndarray:
        return np.array([p.aod for p in self.paths])


def array_response(angle, n, spacing_ratio=0.5):
    """Unit-norm uniform-linear-array response vector.

    Entry k (0-based) is exp(-j*2*pi*spacing_ratio*k*sin(angle)) / sqrt(n).
    """
    if n < 1:
        raise ConfigError("array size must be positive")
    k = np.arange(n)
    return np.exp(-2j * np.pi * spacing_ratio * k * np.sin(angle)) / np.sqrt(n)


def draw_cluster_powers(n_clusters, profile, normalization, rng=None):
    """Per-cluster power variances summing to `normalization`.

    The ill-conditioned profile is deterministic (100:50:50:1:...:1); the
    good-conditioned profile draws |Normal(1, 0.1^2)| weights and normalizes.
    """
    if n_clusters < 1:
        raise ConfigError("n_clusters must be positive")
    if not normalization > 0.0:
        raise ConfigError("normalization must be positive")
    if profile == ILL_CONDITIONED:
        base = np.ones(n_clusters)
        head = _ILL_RATIO_HEAD[:n_clusters]
        base[: len(head)] = head
    elif profile == GOOD_CONDITIONED:
        if rng is None:
            rng = np.random.default_rng()
        base = np.abs(rng.normal(1.0, 0.1, n_clusters))
    else:
        raise ConfigError(f"unknown power profile {profile!r}")
    return normalization * base / base.sum()


def generate_realization(config, seed):
    """Draw one channel realization, fully determined by (config, seed).

    Draw order from a single PCG64 stream: cluster powers, mean AoAs, mean
    AoDs, per-ray AoA offsets, per-ray AoD offsets, complex ray gains.
    """
    rng = np.random.default_rng(seed)
    n_cl, n_ray = config.n_clusters, config.n_rays
    powers = draw_cluster_powers(
        n_cl, config.power_profile, config.power_normalization, rng
    )
    mean_aoa = rng.uniform(-np.pi / 2, np.pi / 2, n_cl)
    mean_aod = rng.uniform(-np.pi / 2, np.pi / 2, n_cl)
    half_width = np.sqrt(3.0) * config.angle_spread_std
    aoa = mean_aoa[:, None] + rng.uniform(-half_width, half_width, (n_cl, n_ray))
    aod = mean_aod[:, None] + rng.uniform(-half_width, half_width, (n_cl, n_ray))
    scale = np.sqrt(powers / 2.0)[:, None]
    gains = scale * (
        rng.standard_normal((n_cl, n_ray)) + 1j * rng.standard_normal((n_cl, n_ray))
    )
    paths = tuple(
        ScatteringPath(
            gain=complex(gains[c, r]),
            aoa=float(aoa[c, r]),
            aod=float(aod[c, r]),
            cluster_index=c,
        )
        for c in range(n_cl)
        for r in range(n_ray)
    )
    return ChannelRealization(config=config, paths=paths, cluster_powers=powers)


def response_matrices(realization):
    """Stacked receive/transmit array responses (A_R: n_rx x L, A_T: n_tx x L)."""
    cfg = realization.config
    aoa = realization.aoa_vector()
    aod = realization.aod_vector()
    k_r = np.arange(cfg.n_rx)[:, None]
    k_t = np.arange(cfg.n_tx)[:, None]
    a_r = np.exp(-2j * np.pi * cfg.rx_spacing_ratio * k_r * np.sin(aoa)[None, :])
    a_t = np.exp(-2j * np.pi * cfg.tx_spacing_ratio * k_t * np.sin(aod)[None, :])
    return a_r / np.sqrt(cfg.n_rx), a_t / np.sqrt(cfg.n_tx)


def physical_channel(realization):
    """H = A_R diag(alpha) A_T^H, shape (n_rx, n_tx)."""
    a_r, a_t = response_matrices(realization)
    return (a_r * realization.gain_vector()[None, :]) @ a_t.conj().T


def subchannel(realization, i):
    """Rank-one unit-Frobenius component a_R(theta_i) a_T(phi_i)^H of path i."""
    if not 0 <= i < realization.n_paths:
        raise IndexError(
            f"path index {i} out of range for {realization.n_paths} paths"
        )
    path = realization.paths[i]
    cfg = realization.config
    a_r = array_response(path.aoa, cfg.n_rx, cfg.rx_spacing_ratio)
    a_t = array_response(path.aod, cfg.n_tx, cfg.tx_spacing_ratio)
    return np.outer(a_r, a_t.conj())


def subchannel_stack(realization):
    """All L rank-one subchannels as an (L, n_rx, n_tx) array."""
    a_r, a_t = response_matrices(realization)
    return a_r.T[:, :, None] * a_t.conj().T[:, None, :]


def pattern_channel(realization, pattern):
    """Channel seen through a transmit pattern matrix.

    `pattern` has shape (n_tx, L) with nonnegative entries; column l rescales
    the transmit response of path l element-wise.  An all-ones pattern
    reproduces the physical channel exactly.
    """
    cfg = realization.config
    pattern = np.asarray(pattern, dtype=float)
    if pattern.shape != (cfg.n_tx, realization.n_paths):
        raise ConfigError(
            f"pattern shape {pattern.shape} != ({cfg.n_tx}, {realization.n_paths})"
        )
    if not np.all(np.isfinite(pattern)):
        raise ConfigError("pattern entries must be finite")
    if np.any(pattern < 0.0):
        raise ConfigError("pattern entries must be nonnegative")
    a_r, a_t = response_matrices(realization)
    shaped = a_t * pattern
    return (a_r * realization.gain_vector()[None, :]) @ shaped.conj().T
