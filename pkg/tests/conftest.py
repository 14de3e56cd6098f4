"""Shared scenario fixtures.

The named scenarios are the desk-scale parameter sets used throughout the
validation suite; powers enter in dBm and thresholds in dB, mirroring the
configuration-file interface.
"""

from __future__ import annotations

import pytest

from secshare import NetworkConfig, db_to_linear, dbm_to_watts


def make_config(**overrides) -> NetworkConfig:
    base = dict(
        lambda_p=1e-4, lambda_s=1e-3, lambda_e=1e-4,
        alpha=4.0, r_p=15.0, r_s=10.0,
        p_p=dbm_to_watts(36.0), n_s=4, mu=0.4,
        gamma_th_p=db_to_linear(0.0), gamma_th_s=db_to_linear(0.0),
        rho_out_p=0.15, r_s_rate=1.0,
    )
    base.update(overrides)
    return NetworkConfig(**base)


@pytest.fixture
def baseline_alpha4() -> NetworkConfig:
    """Dense secondary field, alpha = 4, 36 dBm primaries, power adaptation."""
    return make_config()


@pytest.fixture
def validation_alpha4() -> NetworkConfig:
    """CDF-validation scenario: six antennas, mostly-information split."""
    return make_config(n_s=6, mu=0.8)


@pytest.fixture
def mu_sweep_alpha3() -> NetworkConfig:
    """Low-power alpha = 3 scenario used for power-allocation sweeps."""
    return make_config(alpha=3.0, n_s=6, mu=0.5, p_p=dbm_to_watts(15.0), rho_out_p=0.1)


@pytest.fixture
def density_ratio_alpha3() -> NetworkConfig:
    """Four antennas, alpha = 3, for eavesdropper-density-ratio studies."""
    return make_config(alpha=3.0, n_s=4, mu=0.5, p_p=dbm_to_watts(15.0), rho_out_p=0.1)


@pytest.fixture
def short_range_alpha3() -> NetworkConfig:
    """Short links (6 m / 3 m), alpha = 3, unit target secrecy rate."""
    return make_config(alpha=3.0, n_s=6, mu=0.5, r_p=6.0, r_s=3.0,
                       p_p=dbm_to_watts(15.0), rho_out_p=0.1, r_s_rate=1.0)


@pytest.fixture
def large_array_asr_alpha3() -> NetworkConfig:
    """Large-array secrecy-rate scenario: 6 dB primary threshold, mu = 0.7."""
    return make_config(alpha=3.0, n_s=16, mu=0.7, r_p=6.0, r_s=3.0,
                       p_p=dbm_to_watts(15.0), rho_out_p=0.1,
                       gamma_th_p=db_to_linear(6.0))


@pytest.fixture
def large_array_sop_alpha3() -> NetworkConfig:
    """Large-array outage scenario: unit secrecy-rate target."""
    return make_config(alpha=3.0, n_s=16, mu=0.7, r_p=6.0, r_s=3.0,
                       p_p=dbm_to_watts(15.0), rho_out_p=0.1,
                       gamma_th_p=db_to_linear(6.0), r_s_rate=1.0)
