import math

import numpy as np
import pytest

import prmimo as pm
from prmimo import ConfigError


def test_rate_identity_channel_hand_value():
    # H = I_2, zeta = 6/2 = 3: rate = 2 * log2(1 + 3) = 4 exactly.
    ctx = pm.RateContext(snr_linear=6.0, n_rx=2)
    assert abs(pm.achievable_rate(np.eye(2), ctx) - 4.0) < 1e-12


def test_rate_scalar_channel_hand_value():
    ctx = pm.RateContext(snr_linear=5.0, n_rx=1)
    h = np.array([[2.0j]])
    assert abs(pm.achievable_rate(h, ctx) - math.log2(21.0)) < 1e-12


def test_rate_zero_channel():
    ctx = pm.RateContext(snr_linear=5.0, n_rx=2)
    assert pm.achievable_rate(np.zeros((2, 4)), ctx) == 0.0
    assert pm.rate_via_singular_values(np.zeros((2, 4)), ctx) == 0.0


def test_rate_forms_agree_on_random_channels():
    rng = np.random.default_rng(17)
    ctx = pm.RateContext(snr_linear=10.0, n_rx=4)
    worst = 0.0
    for _ in range(200):
        h = rng.standard_normal((4, 16)) + 1j * rng.standard_normal((4, 16))
        worst = max(
            worst,
            abs(pm.achievable_rate(h, ctx) - pm.rate_via_singular_values(h, ctx)),
        )
    assert worst <= 1e-9


def test_rate_input_validation():
    ctx = pm.RateContext(snr_linear=1.0, n_rx=2)
    with pytest.raises(ValueError):
        pm.achievable_rate(np.full((2, 2), np.nan), ctx)
    with pytest.raises(ValueError):
        pm.achievable_rate(np.zeros((3, 2)), ctx)
    with pytest.raises(ValueError):
        pm.rate_via_singular_values(np.full((2, 2), np.inf), ctx)
    with pytest.raises(ConfigError):
        pm.RateContext(snr_linear=0.0, n_rx=2)
    with pytest.raises(ConfigError):
        pm.RateContext(snr_linear=1.0, n_rx=0)


def test_zeta_property():
    assert pm.RateContext(snr_linear=10.0, n_rx=4).zeta == 2.5


def test_gram_hand_example():
    a = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    c = np.eye(2, dtype=complex) / np.sqrt(2.0)
    gram = pm.subchannel_gram(np.stack([a, c]))
    expected = np.array([[1.0, 1.0 / np.sqrt(2.0)], [1.0 / np.sqrt(2.0), 1.0]])
    np.testing.assert_allclose(gram, expected, atol=1e-12)
    np.testing.assert_allclose(pm.correlation_levels(gram), [0.5, 0.5], atol=1e-12)


def test_orthogonal_stack_has_zero_levels():
    a = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    b = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    levels = pm.correlation_levels(pm.subchannel_gram(np.stack([a, b])))
    np.testing.assert_allclose(levels, [0.0, 0.0], atol=1e-15)


def test_gram_is_hermitian_on_random_stack():
    rng = np.random.default_rng(4)
    stack = rng.standard_normal((5, 3, 4)) + 1j * rng.standard_normal((5, 3, 4))
    gram = pm.subchannel_gram(stack)
    np.testing.assert_allclose(gram, gram.conj().T, atol=1e-12)
    assert np.all(np.diag(gram).real > 0)


def test_metric_shape_validation():
    with pytest.raises(ConfigError):
        pm.subchannel_gram(np.zeros((2, 2)))
    with pytest.raises(ConfigError):
        pm.correlation_levels(np.zeros((2, 3)))
