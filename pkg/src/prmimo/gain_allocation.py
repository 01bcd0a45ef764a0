"""Single-pattern gain allocation.

One common transmit pattern rescales every path gain, so the pattern channel
is delta * sum_l (alpha_l / |alpha_l|) p_l H_l with simplex weights p.  The
rate-optimal weights at the total-power boundary minimize the largest singular
value of the weighted subchannel combination, a convex min-max problem solved
here by projected subgradient on the simplex.  In the default mode each
subchannel absorbs its gain phase alpha_l / |alpha_l| before the solve, so the
objective is exactly the sigma_max of the channel that gets realized; the
phase-free mode optimizes the bare sum_l p_l H_l instead.  The subgradient
comes from the Hermitian lift W = [[0, H], [H^H, 0]], whose top eigenvalue
equals sigma_max(H).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .exceptions import ConfigError, DegenerateAllocationError, ZeroGainPathError

EXACT_NORMALIZATION = "exact"
PHASE_FREE_NORMALIZATION = "phase_free"
NORMALIZATION_MODES = (EXACT_NORMALIZATION, PHASE_FREE_NORMALIZATION)

STEP_DIMINISHING = "diminishing"
STEP_POLYAK = "polyak"

# Stop once the best objective has not improved by tol for this many iterations.
_PLATEAU_WINDOW = 50


@dataclass(frozen=True)
class MinMaxOptions:
    """Projected-subgradient controls for the min-max allocation."""

    max_iters: int = 5000
    tol: float = 1e-8
    step_rule: str = STEP_DIMINISHING
    step_scale: float = 0.2

    def __post_init__(self):
        if self.max_iters < 1:
            raise ConfigError("max_iters must be positive")
        if not self.tol >= 0.0:
            raise ConfigError("tol must be nonnegative")
        if self.step_rule not in (STEP_DIMINISHING, STEP_POLYAK):
            raise ConfigError(f"unknown step rule {self.step_rule!r}")
        if not self.step_scale > 0.0:
            raise ConfigError("step_scale must be positive")


@dataclass
class GainAllocation:
    """Simplex weights p, achieved objective sigma_max, and power scale."""

    p: np.ndarray
    objective: float
    power_scale: float | None = None
    converged: bool = True
    n_iters: int = 0


def hermitian_lift(matrix):
    """W = [[0, H], [H^H, 0]]; lambda_max(W) = sigma_max(H)."""
    h = np.asarray(matrix, dtype=complex)
    n_r, n_t = h.shape
    lift = np.zeros((n_r + n_t, n_r + n_t), dtype=complex)
    lift[:n_r, n_r:] = h
    lift[n_r:, :n_r] = h.conj().T
    return lift


def simplex_project(vector):
    """Euclidean projection onto {p : p >= 0, sum p = 1}."""
    v = np.asarray(vector, dtype=float)
    if v.ndim != 1 or v.size == 0:
        raise ConfigError("expected a nonempty 1-D vector")
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    idx = np.arange(1, v.size + 1)
    rho = idx[u + (1.0 - css) / idx > 0.0][-1]
    shift = (1.0 - css[rho - 1]) / rho
    p = np.maximum(v + shift, 0.0)
    return p / p.sum()


def _as_stack(subchannels):
    stack = np.asarray(subchannels, dtype=complex)
    if stack.ndim != 3 or stack.shape[0] == 0:
        raise ConfigError("expected a nonempty (L, n_rx, n_tx) subchannel stack")
    if not np.all(np.isfinite(stack)):
        raise ConfigError("subchannels must be finite")
    return stack


def combined_spectral_norm(subchannels, p):
    """sigma_max(sum_l p_l H_l), evaluated directly by SVD."""
    stack = _as_stack(subchannels)
    combined = np.tensordot(np.asarray(p, dtype=float), stack, axes=1)
    return float(np.linalg.svd(combined, compute_uv=False)[0])


def solve_minmax_allocation(subchannels, opts=None):
    """Minimize sigma_max(sum_l p_l H_l) over the probability simplex.

    Projected subgradient with best-iterate tracking; the subgradient at p is
    [v^H W_l v]_l for a unit top eigenvector v of the lifted sum_l p_l W_l,
    computed here as [Re(u^H H_l w)]_l from the top singular pair (u, w) of
    sum_l p_l H_l (v = [u; w]/sqrt(2) gives the same value).  Starts from the
    uniform allocation, so the returned objective never exceeds the uniform
    one.  Deterministic given inputs and options.
    """
    if opts is None:
        opts = MinMaxOptions()
    stack = _as_stack(subchannels)
    n_paths = stack.shape[0]
    if n_paths == 1:
        p = np.ones(1)
        return GainAllocation(p=p, objective=combined_spectral_norm(stack, p))

    p = np.full(n_paths, 1.0 / n_paths)
    best_p = p.copy()
    best_f = np.inf
    stall = 0
    k = 0
    converged = False
    for k in range(1, opts.max_iters + 1):
        combined = np.tensordot(p, stack, axes=1)
        u_mat, sigma, vh = np.linalg.svd(combined, full_matrices=False)
        f = float(sigma[0])
        u = u_mat[:, 0]
        w = vh[0].conj()
        if f < best_f - opts.tol:
            best_f = f
            best_p = p.copy()
            stall = 0
        else:
            if f < best_f:
                best_f = f
                best_p = p.copy()
            stall += 1
            if stall >= _PLATEAU_WINDOW:
                converged = True
                break
        grad = np.real(np.einsum("i,lij,j->l", u.conj(), stack, w))
        gnorm = float(np.linalg.norm(grad))
        if gnorm <= 1e-15:
            converged = True
            break
        if opts.step_rule == STEP_DIMINISHING:
            step = opts.step_scale / (np.sqrt(k) * gnorm)
        else:
            gap = f - best_f + opts.step_scale / np.sqrt(k)
            step = min(gap / gnorm**2, 1.0)
        p = simplex_project(p - step * grad)
    return GainAllocation(
        p=best_p, objective=best_f, converged=converged, n_iters=k
    )


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


def grid_oracle_allocation(subchannels, step):
    """Exhaustive simplex-grid minimizer of sigma_max(sum_l p_l H_l).

    Brute-force reference for small L (<= 4); grid spacing `step` must divide
    1.  Independent of the subgradient solver: objectives are evaluated by
    direct SVD of the combined matrix.
    """
    stack = _as_stack(subchannels)
    n_paths = stack.shape[0]
    if n_paths > 4:
        raise ConfigError("grid oracle supports at most 4 subchannels")
    n_steps = int(round(1.0 / step))
    if abs(n_steps * step - 1.0) > 1e-9:
        raise ConfigError("step must divide 1")
    grid = np.array(list(_compositions(n_steps, n_paths)), dtype=float) * step
    flat = stack.reshape(n_paths, -1)
    best_f = np.inf
    best_p = grid[0]
    chunk = 4096
    for start in range(0, grid.shape[0], chunk):
        block = grid[start : start + chunk]
        combined = (block @ flat).reshape(-1, stack.shape[1], stack.shape[2])
        sigma = np.linalg.svd(combined, compute_uv=False)[:, 0]
        i = int(np.argmin(sigma))
        if sigma[i] < best_f:
            best_f = float(sigma[i])
            best_p = block[i]
    return GainAllocation(p=best_p.copy(), objective=best_f)


def power_scaling(subchannels, p):
    """Scale delta restoring ||H~||_F^2 = n_tx * n_rx after reallocation.

    delta = sqrt(n_tx * n_rx) / ||sum_l p_l H_l||_F for the stack as given.
    The restored norm is exact when the stack matches the realized channel up
    to the common scale, i.e. when each subchannel carries its gain phase;
    on a phase-free stack the scale ignores phase interactions between paths.
    """
    stack = _as_stack(subchannels)
    weights = np.asarray(p, dtype=float)
    combined = np.tensordot(weights, stack, axes=1)
    norm_sq = float(np.linalg.norm(combined) ** 2)
    target = stack.shape[1] * stack.shape[2]
    if norm_sq <= 1e-300:
        raise DegenerateAllocationError("allocated channel combination is zero")
    return float(np.sqrt(target / norm_sq))


def gains_to_pattern_column(p, power_scale, gains):
    """Per-path pattern values m_l = p_l * delta / |alpha_l| (0 where p_l = 0)."""
    weights = np.asarray(p, dtype=float)
    mags = np.abs(np.asarray(gains, dtype=complex))
    active = weights > 0.0
    if np.any(active & (mags == 0.0)):
        raise ZeroGainPathError("nonzero allocation on a zero-gain path")
    column = np.zeros_like(weights)
    column[active] = weights[active] * power_scale / mags[active]
    return column


def unit_phases_of(gains):
    """alpha / |alpha| with zero-gain entries mapped to 1."""
    g = np.asarray(gains, dtype=complex)
    mags = np.abs(g)
    out = np.ones_like(g)
    nz = mags > 0.0
    out[nz] = g[nz] / mags[nz]
    return out


def single_pattern_design(realization, opts=None, normalization=EXACT_NORMALIZATION):
    """Design one common transmit pattern for all antennas.

    Returns (pattern matrix, GainAllocation).  Every row of the n_tx x L
    pattern equals the per-path column m, so the pattern channel becomes
    delta * sum_l (alpha_l / |alpha_l|) p_l H_l.  The default mode folds the
    gain phases into the subchannels before the solve and the power scaling,
    so both operate on the combination that is actually realized.
    """
    from .channel import subchannel_stack

    if normalization not in NORMALIZATION_MODES:
        raise ConfigError(f"unknown normalization mode {normalization!r}")
    stack = subchannel_stack(realization)
    gains = realization.gain_vector()
    if normalization == EXACT_NORMALIZATION:
        stack = unit_phases_of(gains)[:, None, None] * stack
    alloc = solve_minmax_allocation(stack, opts)
    delta = power_scaling(stack, alloc.p)
    column = gains_to_pattern_column(alloc.p, delta, gains)
    pattern = np.repeat(column[None, :], realization.config.n_tx, axis=0)
    alloc.power_scale = delta
    return pattern, alloc
