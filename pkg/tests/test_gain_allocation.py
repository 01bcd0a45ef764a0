import numpy as np
import pytest

import prmimo as pm
from prmimo import ConfigError, DegenerateAllocationError, ZeroGainPathError


def _random_stack(rng, n_paths, n_rx, n_tx):
    stack = rng.standard_normal((n_paths, n_rx, n_tx)) + 1j * rng.standard_normal(
        (n_paths, n_rx, n_tx)
    )
    return stack / np.linalg.norm(stack, axis=(1, 2), keepdims=True)


def test_simplex_project_hand_values():
    np.testing.assert_allclose(pm.simplex_project([0.5, 0.8]), [0.35, 0.65], atol=1e-12)
    np.testing.assert_allclose(pm.simplex_project([2.0, -1.0]), [1.0, 0.0], atol=1e-12)
    p = np.array([0.2, 0.3, 0.5])
    np.testing.assert_allclose(pm.simplex_project(p), p, atol=1e-12)


def test_simplex_project_feasible_on_random_inputs():
    rng = np.random.default_rng(0)
    for _ in range(100):
        p = pm.simplex_project(rng.normal(0.0, 3.0, rng.integers(1, 9)))
        assert np.all(p >= 0.0)
        assert abs(p.sum() - 1.0) < 1e-12


def test_simplex_project_validation():
    with pytest.raises(ConfigError):
        pm.simplex_project([])
    with pytest.raises(ConfigError):
        pm.simplex_project(np.zeros((2, 2)))


def test_hermitian_lift_identity():
    rng = np.random.default_rng(1)
    h = rng.standard_normal((4, 6)) + 1j * rng.standard_normal((4, 6))
    lift = pm.hermitian_lift(h)
    np.testing.assert_allclose(lift, lift.conj().T, atol=1e-15)
    lam = np.linalg.eigvalsh(lift)[-1]
    sigma = np.linalg.svd(h, compute_uv=False)[0]
    assert abs(lam - sigma) < 1e-12


def test_combined_spectral_norm_single_matrix():
    h = np.diag([3.0, 1.0]).astype(complex)[None, :, :]
    assert abs(pm.combined_spectral_norm(h, [1.0]) - 3.0) < 1e-12


def test_minmax_orthogonal_pair():
    """max(p1, p2) over the simplex is minimized at the uniform point."""
    h1 = np.zeros((2, 2), dtype=complex)
    h1[0, 0] = 1.0
    h2 = np.zeros((2, 2), dtype=complex)
    h2[1, 1] = 1.0
    alloc = pm.solve_minmax_allocation(np.stack([h1, h2]))
    assert alloc.objective <= 0.5 + 1e-6
    assert alloc.objective >= 0.5 - 1e-12
    np.testing.assert_allclose(alloc.p, [0.5, 0.5], atol=1e-3)


def test_minmax_dominated_direction():
    # parallel subchannels: sigma = p1 + 2 p2, minimized by putting all mass on h1
    h1 = np.zeros((2, 2), dtype=complex)
    h1[0, 0] = 1.0
    alloc = pm.solve_minmax_allocation(np.stack([h1, 2.0 * h1]))
    assert alloc.objective <= 1.0 + 1e-6
    assert alloc.objective >= 1.0 - 1e-12


def test_minmax_single_path_short_circuit():
    h = np.ones((1, 2, 3), dtype=complex)
    alloc = pm.solve_minmax_allocation(h)
    np.testing.assert_array_equal(alloc.p, [1.0])
    assert abs(alloc.objective - np.linalg.svd(h[0], compute_uv=False)[0]) < 1e-12


def test_minmax_never_worse_than_uniform():
    rng = np.random.default_rng(2)
    for _ in range(10):
        stack = _random_stack(rng, 5, 3, 6)
        uniform = pm.combined_spectral_norm(stack, np.full(5, 0.2))
        alloc = pm.solve_minmax_allocation(stack)
        assert alloc.objective <= uniform + 1e-12
        assert np.all(alloc.p >= 0.0)
        assert abs(alloc.p.sum() - 1.0) < 1e-9


def test_minmax_close_to_grid_oracle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        stack = _random_stack(rng, 3, 4, 8)
        alloc = pm.solve_minmax_allocation(stack)
        oracle = pm.grid_oracle_allocation(stack, 0.01)
        assert alloc.objective <= oracle.objective + 1e-3


def test_grid_oracle_exact_on_orthogonal_pair():
    h1 = np.zeros((2, 2), dtype=complex)
    h1[0, 0] = 1.0
    h2 = np.zeros((2, 2), dtype=complex)
    h2[1, 1] = 1.0
    oracle = pm.grid_oracle_allocation(np.stack([h1, h2]), 0.1)
    assert abs(oracle.objective - 0.5) < 1e-12
    np.testing.assert_allclose(oracle.p, [0.5, 0.5], atol=1e-12)


def test_grid_oracle_validation():
    stack = np.ones((5, 2, 2), dtype=complex)
    with pytest.raises(ConfigError):
        pm.grid_oracle_allocation(stack, 0.1)
    with pytest.raises(ConfigError):
        pm.grid_oracle_allocation(stack[:2], 0.3)


def test_minmax_options_validation():
    with pytest.raises(ConfigError):
        pm.MinMaxOptions(max_iters=0)
    with pytest.raises(ConfigError):
        pm.MinMaxOptions(tol=-1.0)
    with pytest.raises(ConfigError):
        pm.MinMaxOptions(step_rule="fixed")
    with pytest.raises(ConfigError):
        pm.MinMaxOptions(step_scale=0.0)


def test_power_scaling_hand_value():
    # ||H||_F^2 = 2 and target 2 * 4 = 8, so delta = 2.
    h = np.zeros((1, 2, 4), dtype=complex)
    h[0, 0, 0] = 1.0
    h[0, 1, 1] = 1.0
    assert abs(pm.power_scaling(h, [1.0]) - 2.0) < 1e-12


def test_power_scaling_restores_norm():
    rng = np.random.default_rng(4)
    stack = _random_stack(rng, 6, 3, 5)
    p = pm.simplex_project(rng.uniform(0.0, 1.0, 6))
    delta = pm.power_scaling(stack, p)
    combined = delta * np.tensordot(p, stack, axes=1)
    assert abs(np.linalg.norm(combined) ** 2 - 15.0) < 1e-9


def test_power_scaling_zero_combination():
    h = np.ones((1, 2, 2), dtype=complex)
    stack = np.concatenate([h, -h])
    with pytest.raises(DegenerateAllocationError):
        pm.power_scaling(stack, [0.5, 0.5])


def test_gains_to_pattern_column_hand_values():
    column = pm.gains_to_pattern_column([0.5, 0.5, 0.0], 2.0, [1.0, 0.5j, 0.0])
    np.testing.assert_allclose(column, [1.0, 2.0, 0.0], atol=1e-12)


def test_gains_to_pattern_column_zero_gain_error():
    with pytest.raises(ZeroGainPathError):
        pm.gains_to_pattern_column([0.5, 0.5], 1.0, [1.0, 0.0])


def test_unit_phases_of():
    phases = pm.unit_phases_of([2.0, -3.0j, 0.0])
    np.testing.assert_allclose(phases, [1.0, -1.0j, 1.0], atol=1e-12)


def test_single_pattern_design_shapes_and_norm(small_config):
    r = pm.generate_realization(small_config, 31)
    pattern, alloc = pm.single_pattern_design(r)
    assert pattern.shape == (8, r.n_paths)
    assert np.all(pattern >= 0.0)
    # one common pattern: every antenna row is the same per-path column
    np.testing.assert_array_equal(pattern, np.repeat(pattern[:1], 8, axis=0))
    assert alloc.power_scale is not None and alloc.power_scale > 0.0
    target = small_config.n_tx * small_config.n_rx
    norm_sq = np.linalg.norm(pm.pattern_channel(r, pattern)) ** 2
    assert abs(norm_sq - target) <= 1e-9 * target


def test_single_pattern_design_phase_free_mode(small_config):
    r = pm.generate_realization(small_config, 31)
    pattern, alloc = pm.single_pattern_design(
        r, normalization=pm.PHASE_FREE_NORMALIZATION
    )
    assert np.all(pattern >= 0.0)
    assert alloc.power_scale > 0.0
    with pytest.raises(ConfigError):
        pm.single_pattern_design(r, normalization="loose")


def test_single_pattern_design_single_path():
    cfg = pm.ChannelConfig(
        n_tx=4, n_rx=2, n_clusters=1, n_rays=1, angle_spread_std=0.0
    )
    r = pm.generate_realization(cfg, 6)
    pattern, alloc = pm.single_pattern_design(r)
    np.testing.assert_array_equal(alloc.p, [1.0])
    target = 8.0
    norm_sq = np.linalg.norm(pm.pattern_channel(r, pattern)) ** 2
    assert abs(norm_sq - target) <= 1e-9 * target


def test_design_deterministic(small_config):
    r = pm.generate_realization(small_config, 31)
    p1, _ = pm.single_pattern_design(r)
    p2, _ = pm.single_pattern_design(r)
    np.testing.assert_array_equal(p1, p2)
