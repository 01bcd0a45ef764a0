"""Achievable-rate and subchannel-correlation metrics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError

_LN2 = np.log(2.0)


@dataclass(frozen=True)
class RateContext:
    """Evaluation point for the rate formula: linear SNR and receive count."""

    snr_linear: float
    n_rx: int

    def __post_init__(self):
        if not self.snr_linear > 0.0:
            raise ConfigError("snr_linear must be positive")
        if self.n_rx < 1:
            raise ConfigError("n_rx must be positive")

    @property
    def zeta(self) -> float:
        return self.snr_linear / self.n_rx


def achievable_rate(channel, ctx):
    """log2 det(I + zeta * H H^H) in bits/s/Hz via a Cholesky factorization."""
    h = np.asarray(channel, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("channel matrix has non-finite entries")
    if h.shape[0] != ctx.n_rx:
        raise ValueError(f"channel has {h.shape[0]} rows, context expects {ctx.n_rx}")
    gram = np.eye(ctx.n_rx) + ctx.zeta * (h @ h.conj().T)
    factor = np.linalg.cholesky(gram)
    rate = 2.0 * np.sum(np.log(np.real(np.diag(factor)))) / _LN2
    return max(float(rate), 0.0)


def rate_via_singular_values(channel, ctx):
    """Same rate as a sum of log2(1 + zeta * sigma_i^2) over singular values.

    Kept independent of achievable_rate (SVD rather than determinant) so the
    two can cross-check each other.
    """
    h = np.asarray(channel, dtype=complex)
    if not np.all(np.isfinite(h)):
        raise ValueError("channel matrix has non-finite entries")
    if h.shape[0] != ctx.n_rx:
        raise ValueError(f"channel has {h.shape[0]} rows, context expects {ctx.n_rx}")
    sigma = np.linalg.svd(h, compute_uv=False)
    if sigma.size and sigma[0] > 0.0:
        sigma = sigma[sigma > 1e-12 * sigma[0]]
    return float(np.sum(np.log2(1.0 + ctx.zeta * sigma**2)))


def subchannel_gram(subchannels):
    """Gram matrix G[i, j] = tr(H_i^H H_j) of a stack of subchannels."""
    stack = np.asarray(subchannels, dtype=complex)
    if stack.ndim != 3:
        raise ConfigError("expected an (L, n_rx, n_tx) stack of subchannels")
    return np.einsum("ipq,jpq->ij", stack.conj(), stack)


def correlation_levels(gram):
    """Per-subchannel correlation g_i = sum_{j != i} |G[i, j]|^2."""
    g = np.asarray(gram, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ConfigError("gram must be square")
    mag2 = np.abs(g) ** 2
    return np.maximum(mag2.sum(axis=1) - np.diag(mag2), 0.0)
