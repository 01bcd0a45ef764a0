import numpy as np
import pytest

import prmimo as pm
from prmimo import ConfigError
from prmimo.sequential import RETRACTION_ENTRYWISE, SOLVER_EVD, SOLVER_MANIFOLD


def _random_psd(rng, n):
    a = rng.standard_normal((n, n))
    return a @ a.T / n


def test_receive_correlation_equal_angles_is_one():
    assert abs(pm.receive_correlation(0.3, 0.3, 4) - 1.0) < 1e-12


def test_receive_correlation_hand_zero():
    # two antennas, sin difference 1: (1 + e^{j pi}) / 2 = 0
    rho = pm.receive_correlation(0.0, np.pi / 2, 2)
    assert abs(rho) < 1e-12


def test_coupling_vector_hand_values():
    b = pm.coupling_vector(np.ones(4), 0.5, 0.5)
    np.testing.assert_allclose(b, np.full(4, 0.25), atol=1e-12)


def test_coupling_matrix_quadratic_identity():
    rng = np.random.default_rng(7)
    rho = 0.4 - 0.2j
    b = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    big_b = pm.coupling_matrix(rho, b)
    np.testing.assert_allclose(big_b, big_b.T, atol=1e-12)
    assert np.linalg.eigvalsh(big_b).min() > -1e-12
    for _ in range(5):
        m = rng.standard_normal(6)
        quad = m @ big_b @ m
        direct = abs(rho) ** 2 * abs(b @ m) ** 2
        assert abs(quad - direct) < 1e-10


def test_manifold_cg_diagonal_oracle():
    """Minimum of m^T diag(3,2,1,0) m on the sphere sits at 2 e_4."""
    m, info = pm.manifold_cg(np.diag([3.0, 2.0, 1.0, 0.0]), return_info=True)
    np.testing.assert_allclose(m, [0.0, 0.0, 0.0, 2.0], atol=1e-4)
    assert m @ np.diag([3.0, 2.0, 1.0, 0.0]) @ m < 1e-6
    assert info["converged"]


def test_manifold_cg_descent_properties():
    rng = np.random.default_rng(8)
    for _ in range(20):
        n = int(rng.integers(4, 12))
        b = _random_psd(rng, n)
        m, info = pm.manifold_cg(b, return_info=True)
        hist = np.array(info["objectives"])
        assert np.all(np.diff(hist) <= 1e-12)
        assert m @ b @ m <= np.ones(n) @ b @ np.ones(n) + 1e-12
        assert abs(m @ m - n) < 1e-9
        assert np.all(m >= 0.0)


def test_manifold_cg_flat_objective():
    # B = I: every sphere point has the same objective, start is optimal
    m = pm.manifold_cg(np.eye(5))
    assert abs(m @ m - 5.0) < 1e-12
    assert abs(m @ np.eye(5) @ m - 5.0) < 1e-12


def test_entrywise_retraction_freezes_all_ones_start():
    opts = pm.CgOptions(retraction=RETRACTION_ENTRYWISE)
    m = pm.manifold_cg(np.diag([3.0, 2.0, 1.0, 0.0]), opts)
    np.testing.assert_allclose(m, np.ones(4), atol=1e-12)


def test_manifold_cg_validation():
    with pytest.raises(ConfigError):
        pm.manifold_cg(np.zeros((2, 3)))
    with pytest.raises(ConfigError):
        pm.manifold_cg(np.full((2, 2), np.nan))
    with pytest.raises(ConfigError):
        pm.CgOptions(armijo_shrink=1.5)
    with pytest.raises(ConfigError):
        pm.CgOptions(max_iters=0)
    with pytest.raises(ConfigError):
        pm.CgOptions(retraction="euclidean")


def test_evd_solve_diagonal_oracle():
    m = pm.evd_solve(np.diag([3.0, 2.0, 1.0, 0.0]))
    np.testing.assert_allclose(m, [0.0, 0.0, 0.0, 2.0], atol=1e-12)


def test_evd_solve_feasible_on_random_psd():
    rng = np.random.default_rng(9)
    for _ in range(20):
        n = int(rng.integers(4, 12))
        m = pm.evd_solve(_random_psd(rng, n))
        assert abs(m @ m - n) < 1e-9
        assert np.all(m >= 0.0)


def test_sequential_design_visits_every_path_once(small_config):
    r = pm.generate_realization(small_config, 41)
    result = pm.sequential_design(r)
    assert sorted(result.order) == list(range(r.n_paths))
    levels = pm.correlation_levels(pm.subchannel_gram(pm.subchannel_stack(r)))
    assert result.order[0] == int(np.argmax(levels))
    # the anchor path keeps the all-ones modification
    np.testing.assert_array_equal(result.modification[:, result.order[0]], np.ones(8))


def test_sequential_design_norm_constraints(small_config):
    r = pm.generate_realization(small_config, 41)
    for solver in (SOLVER_MANIFOLD, SOLVER_EVD):
        result = pm.sequential_design(r, solver=solver)
        norms = (result.modification**2).sum(axis=0)
        np.testing.assert_allclose(norms, np.full(r.n_paths, 8.0), atol=1e-9)
        assert np.all(result.pattern >= 0.0)
        assert result.pattern.shape == (8, r.n_paths)


def test_sequential_design_reduces_correlation(desk_config):
    r = pm.generate_realization(desk_config, 42)
    before = pm.correlation_levels(pm.subchannel_gram(pm.subchannel_stack(r))).sum()
    result = pm.sequential_design(r)
    a_r, a_t = pm.response_matrices(r)
    modified = np.stack(
        [
            np.outer(a_r[:, l], np.conj(a_t[:, l] * result.modification[:, l]))
            for l in range(r.n_paths)
        ]
    )
    after = pm.correlation_levels(pm.subchannel_gram(modified)).sum()
    assert after < before
    assert len(result.peak_correlation) == r.n_paths


def test_sequential_design_restores_power(small_config):
    r = pm.generate_realization(small_config, 43)
    target = small_config.n_tx * small_config.n_rx
    for solver in (SOLVER_MANIFOLD, SOLVER_EVD):
        result = pm.sequential_design(r, solver=solver)
        norm_sq = np.linalg.norm(pm.pattern_channel(r, result.pattern)) ** 2
        assert abs(norm_sq - target) <= 1e-9 * target
        assert result.fallback_count == 0


def test_sequential_design_deterministic(small_config):
    r = pm.generate_realization(small_config, 44)
    a = pm.sequential_design(r)
    b = pm.sequential_design(r)
    np.testing.assert_array_equal(a.pattern, b.pattern)
    assert a.order == b.order


def test_sequential_design_validation(small_config):
    r = pm.generate_realization(small_config, 44)
    with pytest.raises(ConfigError):
        pm.sequential_design(r, solver="newton")
    with pytest.raises(ConfigError):
        pm.sequential_design(r, normalization="loose")
