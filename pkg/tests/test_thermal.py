import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from qotto import thermal


def random_density(rng):
    A = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rho = A @ A.conj().T
    return rho / np.trace(rho).real


def test_gibbs_cold_stroke():
    p = thermal.gibbs_populations(2.0, 1.60)
    # 1/(1+e^-1.25)
    assert p.p_ground == pytest.approx(0.7773, abs=5e-5)
    assert p.p_excited == pytest.approx(0.2227, abs=5e-5)
    # carbon populations of the initial state, 0.78 +- 0.01 / 0.22 +- 0.01
    assert abs(p.p_ground - 0.78) <= 0.01
    assert abs(p.p_excited - 0.22) <= 0.01


def test_gibbs_hot_stroke():
    p = thermal.gibbs_populations(3.6, 12.21)
    assert p.p_ground == pytest.approx(0.5732, abs=5e-5)
    assert p.p_excited == pytest.approx(0.4268, abs=5e-5)


def test_infinite_temperature():
    p = thermal.gibbs_populations(3.6, 1e12)
    assert p.p_ground == pytest.approx(0.5, abs=1e-11)


@pytest.mark.parametrize("gap,kT", [(0.0, 1.0), (-1.0, 1.0), (1.0, 0.0), (1.0, -2.0)])
def test_gibbs_domain(gap, kT):
    with pytest.raises(ValueError):
        thermal.gibbs_populations(gap, kT)


@given(st.floats(1e-3, 50), st.floats(0.1, 100))
def test_gibbs_normalised(gap, kT):
    p = thermal.gibbs_populations(gap, kT)
    assert abs(p.p_ground + p.p_excited - 1.0) <= 1e-14
    assert p.p_ground >= p.p_excited
    assert math.log(p.p_ground / p.p_excited) == pytest.approx(gap / kT, rel=1e-9, abs=1e-12)


def test_thermal_config():
    cfg = thermal.ThermalConfig(1.6, 12.21)
    assert cfg.delta_beta == pytest.approx(0.625 - 1 / 12.21)
    with pytest.warns(RuntimeWarning):
        thermal.ThermalConfig(5.0, 1.0)
    with pytest.raises(ValueError):
        thermal.ThermalConfig(-1.0, 2.0)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        thermal.ThermalConfig(1.0, 2.0)


def test_kraus_exact_form():
    p = 0.3
    K1, K2, K3, K4 = thermal.kraus_thermalization(p)
    np.testing.assert_array_equal(K1, math.sqrt(0.7) * np.array([[1, 0], [0, 0]]))
    np.testing.assert_array_equal(K2, math.sqrt(0.3) * np.array([[0, 0], [0, 1]]))
    np.testing.assert_array_equal(K3, math.sqrt(0.7) * np.array([[0, 1], [0, 0]]))
    np.testing.assert_array_equal(K4, math.sqrt(0.3) * np.array([[0, 0], [-1, 0]]))


@given(st.floats(0.0, 1.0))
def test_kraus_trace_preserving_and_cp(p):
    ks = thermal.kraus_thermalization(p)
    assert len(ks) == 4
    np.testing.assert_allclose(ks.completeness(), np.eye(2), atol=1e-14)
    assert np.linalg.eigvalsh(ks.choi()).min() > -1e-12


@pytest.mark.parametrize("p", [-0.1, 1.5])
def test_kraus_domain(p):
    with pytest.raises(ValueError):
        thermal.kraus_thermalization(p)


def test_zero_temperature_damping():
    ks = thermal.kraus_thermalization(0.0)
    for rho in (np.diag([0, 1]), np.full((2, 2), 0.5), np.eye(2) / 2):
        np.testing.assert_allclose(thermal.apply_channel(rho, ks), np.diag([1, 0]), atol=1e-15)


def test_hot_fixed_point_from_many_inputs():
    hot = thermal.gibbs_populations(3.6, 12.21)
    ks = thermal.kraus_thermalization(hot.p_excited)
    rng = np.random.default_rng(7)
    psi = np.array([np.cos(0.4), np.exp(0.9j) * np.sin(0.4)])
    inputs = [np.outer(psi, psi.conj()), np.diag([1.0, 0.0]), np.diag([0.0, 1.0])] + [random_density(rng) for _ in range(5)]
    for rho in inputs:
        out = thermal.apply_channel(rho, ks)
        np.testing.assert_allclose(np.diag(out).real, [0.5732, 0.4268], atol=5e-5)
        np.testing.assert_allclose(out, hot.density(), atol=1e-14)
        assert abs(out[0, 1]) < 1e-14
        assert np.trace(out).real == pytest.approx(1.0, abs=1e-12)


def test_maximally_mixed_fixed_point():
    out = thermal.apply_channel(np.eye(2) / 2, thermal.kraus_thermalization(0.5))
    np.testing.assert_allclose(out, np.eye(2) / 2, atol=1e-15)


@settings(max_examples=100)
@given(st.floats(0, 1), st.integers(0, 2**31))
def test_channel_idempotent(p, seed):
    ks = thermal.kraus_thermalization(p)
    once = thermal.apply_channel(random_density(np.random.default_rng(seed)), ks)
    twice = thermal.apply_channel(once, ks)
    assert np.linalg.norm(once - twice) < 1e-12


@pytest.mark.parametrize(
    "rho",
    [np.diag([0.5, 0.6]), np.array([[0.5, 1.0], [0.0, 0.5]]), np.diag([1.2, -0.2])],
)
def test_invalid_density_rejected(rho):
    with pytest.raises(ValueError):
        thermal.apply_channel(rho, thermal.kraus_thermalization(0.2))
