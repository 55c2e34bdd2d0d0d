import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from zpe_oscillator import spectrum
from zpe_oscillator.errors import DomainError
from zpe_oscillator.statistical_ensemble import (
    decompose_fluctuations,
    density_entropy,
    density_moment,
    statistical_entropy,
    ws_cdf,
    ws_density,
    ws_entropy_by_quadrature,
)


def test_density_normalized_and_moments():
    u = 1.7
    pdf = lambda e: ws_density(e, u)
    assert density_moment(pdf, 60 * u, 0) == pytest.approx(1.0, abs=1e-12)
    assert density_moment(pdf, 60 * u, 1) == pytest.approx(u, rel=1e-11)
    assert density_moment(pdf, 60 * u, 2) == pytest.approx(2 * u * u, rel=1e-11)


def test_density_support():
    assert ws_density(-1.0, 1.0) == 0.0
    assert ws_cdf(-1.0, 1.0) == 0.0
    assert ws_cdf(1.0, 1.0) == pytest.approx(1 - math.exp(-1), rel=1e-15)
    with pytest.raises(DomainError):
        ws_density(1.0, 0.0)


@given(st.floats(0.0, 3.0), st.floats(0.01, 100.0))
def test_decomposition_has_no_covariance(e0, beta):
    d = decompose_fluctuations(e0, beta)
    assert abs(d.covariance) < 1e-12 * max(1.0, d.var_total)
    assert d.var_thermal + d.var_zero_point == pytest.approx(d.var_total, rel=1e-14)


def test_classical_branch_exact():
    d = decompose_fluctuations(0.0, 4.0)
    assert d.u_total == 0.25
    assert d.var_total == d.u_total ** 2
    assert d.var_zero_point == 0.0 and d.covariance == 0.0


def test_thermal_variance_is_canonical_variance():
    for beta in (0.1, 1.0, 5.0):
        d = decompose_fluctuations(1.0, beta)
        assert d.var_thermal == pytest.approx(spectrum.energy_variance(1.0, beta), rel=1e-12)
        assert d.u_total == pytest.approx(spectrum.planck_mean_energy(1.0, beta), rel=1e-15)


def test_negative_e0_rejected():
    with pytest.raises(DomainError):
        decompose_fluctuations(-1.0, 1.0)


@pytest.mark.parametrize("u", [0.01, 0.5, 1.0, 7.0, 300.0])
def test_entropy_closed_form_vs_quadrature(u):
    assert ws_entropy_by_quadrature(u) == pytest.approx(statistical_entropy(u), abs=1e-9)


def test_entropy_k_scaling():
    assert statistical_entropy(math.e, k=2.0) == pytest.approx(4.0, rel=1e-15)
    assert statistical_entropy(1.0) == 1.0


def test_density_entropy_uniform():
    assert density_entropy(lambda e: 0.5, 2.0) == pytest.approx(math.log(2.0), rel=1e-12)


def test_vectorized_density():
    e = np.array([0.0, 1.0, 2.0])
    assert np.allclose(ws_density(e, 1.0), np.exp(-e))
