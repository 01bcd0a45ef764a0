"""Sequential multi-pattern design.

Each path gets its own modification vector m^ (nonnegative, ||m^||^2 = n_tx),
turning the rank-one subchannel into H^_l = a_R (a_T (.) m^_l)^H with unit
Frobenius norm.  Paths are visited from most to least correlated; for each
visited path the modification vector minimizes the quadratic coupling
m^T B m with B accumulated over the already-designed paths, either by
conjugate gradient on the norm sphere or by a one-shot eigendecomposition.
A final min-max gain allocation over the modified subchannels sets per-path
amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import response_matrices
from .exceptions import ConfigError, DegenerateClipError
from .gain_allocation import (
    EXACT_NORMALIZATION,
    NORMALIZATION_MODES,
    gains_to_pattern_column,
    power_scaling,
    solve_minmax_allocation,
    unit_phases_of,
)
from .metrics import correlation_levels, subchannel_gram

RETRACTION_SPHERE = "sphere"
RETRACTION_ENTRYWISE = "entrywise"

SOLVER_MANIFOLD = "manifold"
SOLVER_EVD = "evd"

_TINY = 1e-15


@dataclass(frozen=True)
class CgOptions:
    """Manifold conjugate-gradient controls.

    retraction "sphere" projects gradients onto the tangent space of the
    radius-sqrt(n_tx) sphere and retracts by rescaling; "entrywise" uses the
    per-entry m_i / |m_i| map, which pins every entry to unit magnitude and
    freezes the all-ones start (kept for comparison runs).
    """

    tol: float = 1e-8
    max_iters: int = 500
    armijo_shrink: float = 0.5
    armijo_slope: float = 1e-4
    initial_step: float = 1.0
    max_backtracks: int = 50
    retraction: str = RETRACTION_SPHERE

    def __post_init__(self):
        if not 0.0 < self.armijo_shrink < 1.0:
            raise ConfigError("armijo_shrink must lie in (0, 1)")
        if not 0.0 < self.armijo_slope < 1.0:
            raise ConfigError("armijo_slope must lie in (0, 1)")
        if self.max_iters < 1 or self.max_backtracks < 1:
            raise ConfigError("iteration limits must be positive")
        if not self.initial_step > 0.0:
            raise ConfigError("initial_step must be positive")
        if self.retraction not in (RETRACTION_SPHERE, RETRACTION_ENTRYWISE):
            raise ConfigError(f"unknown retraction {self.retraction!r}")


def receive_correlation(aoa_i, aoa_k, n_rx, rx_spacing_ratio=0.5):
    """Receive-side correlation (1/n_rx) sum_n e^{j 2 pi d (n-1)(sin aoa_k - sin aoa_i)}."""
    n = np.arange(n_rx)
    phase = 2.0 * np.pi * rx_spacing_ratio * n * (np.sin(aoa_k) - np.sin(aoa_i))
    return complex(np.exp(1j * phase).sum() / n_rx)


def coupling_vector(m_hat_k, aod_i, aod_k, tx_spacing_ratio=0.5):
    """Transmit-side coupling b(n) = m^_k(n) e^{j 2 pi d (n-1)(sin aod_i - sin aod_k)} / n_tx."""
    m_hat_k = np.asarray(m_hat_k, dtype=float)
    n_tx = m_hat_k.size
    n = np.arange(n_tx)
    phase = 2.0 * np.pi * tx_spacing_ratio * n * (np.sin(aod_i) - np.sin(aod_k))
    return m_hat_k * np.exp(1j * phase) / n_tx


def coupling_matrix(rho_r, b):
    """B = Re{|rho_r|^2 b* b^T}, real symmetric PSD."""
    b = np.asarray(b, dtype=complex)
    return (abs(rho_r) ** 2 * np.conj(b)[:, None] * b[None, :]).real


def _check_square_symmetric(b_sum):
    b = np.asarray(b_sum, dtype=float)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ConfigError("B must be square")
    if not np.all(np.isfinite(b)):
        raise ConfigError("B must be finite")
    return 0.5 * (b + b.T)


def _clip_rescale(x):
    """Terminal map: clip negatives, rescale to ||m||^2 = n."""
    clipped = np.maximum(x, 0.0)
    norm_sq = float(clipped @ clipped)
    if norm_sq <= _TINY:
        raise DegenerateClipError("clipped iterate is the zero vector")
    return np.sqrt(x.size / norm_sq) * clipped


def manifold_cg(b_sum, opts=None, return_info=False):
    """Minimize m^T B m over {m : ||m||^2 = n} by Riemannian conjugate gradient.

    Starts at the all-ones vector; Armijo backtracking guarantees the
    objective is non-increasing over accepted iterates.  The final iterate is
    clipped to the nonnegative orthant and rescaled; if that candidate is
    worse than the all-ones start, the start is returned instead so the
    output never degrades the subproblem.
    """
    if opts is None:
        opts = CgOptions()
    b = _check_square_symmetric(b_sum)
    n = b.shape[0]
    sphere = opts.retraction == RETRACTION_SPHERE

    def objective(x):
        return float(x @ b @ x)

    def rgrad(x):
        egrad = 2.0 * (b @ x)
        if sphere:
            return egrad - (float(x @ egrad) / float(x @ x)) * x
        return egrad - egrad * x**2

    def retract(x):
        if sphere:
            return np.sqrt(n) * x / np.linalg.norm(x)
        mags = np.abs(x)
        safe = np.where(mags > _TINY, mags, 1.0)
        return np.where(mags > _TINY, x / safe, 1.0)

    def transport(d, x_new):
        if sphere:
            return d - (float(x_new @ d) / float(x_new @ x_new)) * x_new
        return d

    x = np.ones(n)
    f_start = objective(x)
    f = f_start
    history = [f]
    g = rgrad(x)
    d = -g
    n_iters = 0
    converged = False
    for k in range(1, opts.max_iters + 1):
        n_iters = k
        gnorm_sq = float(g @ g)
        if gnorm_sq <= _TINY:
            converged = True
            break
        slope = float(g @ d)
        if slope >= 0.0:
            d = -g
            slope = -gnorm_sq
        step = opts.initial_step
        accepted = None
        for _ in range(opts.max_backtracks):
            candidate = retract(x + step * d)
            f_cand = objective(candidate)
            if f_cand <= f + opts.armijo_slope * step * slope:
                accepted = (candidate, f_cand)
                break
            step *= opts.armijo_shrink
        if accepted is None:
            converged = True
            break
        x_new, f_new = accepted
        g_new = rgrad(x_new)
        if abs(f_new - f) < opts.tol:
            x, f, g = x_new, f_new, g_new
            history.append(f)
            converged = True
            break
        beta = max(float(g_new @ (g_new - g)) / max(gnorm_sq, _TINY), 0.0)
        d = -g_new + beta * transport(d, x_new)
        if k % n == 0:
            d = -g_new
        x, f, g = x_new, f_new, g_new
        history.append(f)

    result = _clip_rescale(x)
    clip_worsened = objective(result) > f_start
    if clip_worsened:
        result = np.ones(n)
    if return_info:
        info = {
            "objectives": history,
            "n_iters": n_iters,
            "converged": converged,
            "clip_worsened": clip_worsened,
        }
        return result, info
    return result


def evd_solve(b_sum):
    """One-shot minimizer: scaled minimal eigenvector of B, clipped and rescaled.

    The sign of the eigenvector is chosen to maximize the surviving norm after
    the nonnegativity clip.
    """
    b = _check_square_symmetric(b_sum)
    n = b.shape[0]
    eigvals, eigvecs = np.linalg.eigh(b)
    base = np.sqrt(n) * eigvecs[:, 0]
    plus = np.maximum(base, 0.0)
    minus = np.maximum(-base, 0.0)
    picked = plus if float(plus @ plus) >= float(minus @ minus) else minus
    norm_sq = float(picked @ picked)
    if norm_sq <= _TINY:
        raise DegenerateClipError("clipped eigenvector is the zero vector")
    return np.sqrt(n / norm_sq) * picked


@dataclass
class SequentialDesignResult:
    """Full output of one sequential design run."""

    pattern: np.ndarray
    modification: np.ndarray
    order: list
    allocation: object
    fallback_count: int = 0
    peak_correlation: list = field(default_factory=list)


def sequential_design(
    realization,
    solver=SOLVER_MANIFOLD,
    cg_opts=None,
    minmax_opts=None,
    normalization=EXACT_NORMALIZATION,
):
    """Design an independent pattern per path, most-correlated paths first.

    The first selected path keeps the all-ones modification (nothing to
    decouple against yet).  Each later selection re-ranks the remaining paths
    by current correlation level, minimizes the accumulated coupling
    quadratic, and updates its modified subchannel.  Degenerate clips fall
    back to the all-ones vector and are counted, not raised.
    """
    if solver not in (SOLVER_MANIFOLD, SOLVER_EVD):
        raise ConfigError(f"unknown solver {solver!r}")
    if normalization not in NORMALIZATION_MODES:
        raise ConfigError(f"unknown normalization mode {normalization!r}")
    cfg = realization.config
    n_tx, n_paths = cfg.n_tx, realization.n_paths
    aoa = realization.aoa_vector()
    aod = realization.aod_vector()
    a_r, a_t = response_matrices(realization)

    modification = np.ones((n_tx, n_paths))
    stack = a_r.T[:, :, None] * a_t.conj().T[:, None, :]
    levels = correlation_levels(subchannel_gram(stack))

    order = [int(np.argmax(levels))]
    peak = [float(levels.max())]
    fallback_count = 0
    visited = np.zeros(n_paths, dtype=bool)
    visited[order[0]] = True
    for _ in range(1, n_paths):
        masked = np.where(visited, -np.inf, levels)
        current = int(np.argmax(masked))
        b_sum = np.zeros((n_tx, n_tx))
        for prev in order:
            rho = receive_correlation(aoa[current], aoa[prev], cfg.n_rx, cfg.rx_spacing_ratio)
            b = coupling_vector(modification[:, prev], aod[current], aod[prev], cfg.tx_spacing_ratio)
            b_sum += coupling_matrix(rho, b)
        try:
            if solver == SOLVER_MANIFOLD:
                m_hat = manifold_cg(b_sum, cg_opts)
            else:
                m_hat = evd_solve(b_sum)
        except DegenerateClipError:
            m_hat = np.ones(n_tx)
            fallback_count += 1
        modification[:, current] = m_hat
        stack[current] = np.outer(a_r[:, current], np.conj(a_t[:, current] * m_hat))
        levels = correlation_levels(subchannel_gram(stack))
        order.append(current)
        visited[current] = True
        peak.append(float(levels.max()))

    gains = realization.gain_vector()
    if normalization == EXACT_NORMALIZATION:
        stack = unit_phases_of(gains)[:, None, None] * stack
    alloc = solve_minmax_allocation(stack, minmax_opts)
    delta = power_scaling(stack, alloc.p)
    column = gains_to_pattern_column(alloc.p, delta, gains)
    alloc.power_scale = delta
    pattern = modification * column[None, :]
    return SequentialDesignResult(
        pattern=pattern,
        modification=modification,
        order=order,
        allocation=alloc,
        fallback_count=fallback_count,
        peak_correlation=peak,
    )
