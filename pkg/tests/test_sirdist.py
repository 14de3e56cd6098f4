import math

import numpy as np
import pytest

from secshare import (
    CancellationError,
    DomainError,
    cdf_sir_eve,
    cdf_sir_eve_asym,
    cdf_sir_su,
    cdf_sir_su_asym,
    cdf_sir_su_asym_alpha4,
    gamma_fn,
    lambda_l,
    make_sir_cdf,
    resolve_power,
    xi,
)
from secshare.sirdist import SirCdfKind, su_survival_terms

from conftest import make_config

GRID = np.logspace(-2, 2, 50)


def bf_only_su_cdf(gamma, cfg, p_s):
    """Independent beamforming-only secondary CDF (no AN terms anywhere).

    With mu = 1 the interferer weight is sigma_s^2 * Exp(1) = P_s * Exp(1),
    so the spatial constant is pi*(lambda_p*Gamma(1+rho)*eta^-rho +
    lambda_s*Gamma(1+rho))*Gamma(1-rho), and the survival series is the
    Gamma(n_s, 1) tail against that single exponential exponent.
    """
    rho = 2.0 / cfg.alpha
    eta = p_s / cfg.p_p
    lam = math.pi * gamma_fn(1 + rho) * (cfg.lambda_p * eta ** -rho + cfg.lambda_s) * gamma_fn(1 - rho)
    z = lam * gamma ** rho * cfg.r_s ** 2
    # survival = sum_m ((-x)^m/m!) d^m/dx^m exp(-lam*gamma^rho*x^rho) at x=r^alpha
    x = cfg.r_s ** cfg.alpha
    c = -lam * gamma ** rho
    derivs = [math.exp(c * x ** rho)]
    g = []
    falling = 1.0
    for j in range(1, cfg.n_s):
        falling *= rho - (j - 1)
        g.append(c * falling * x ** (rho - j))
    # plain Bell-polynomial recursion written out independently
    bell = [1.0]
    for m in range(1, cfg.n_s):
        total = 0.0
        for k in range(m):
            total += math.comb(m - 1, k) * g[m - 1 - k] * bell[k]
        bell.append(total)
        derivs.append(derivs[0] * bell[m])
    surv = sum(((-x) ** m / math.factorial(m)) * derivs[m] for m in range(cfg.n_s))
    return 1.0 - surv


def bf_only_eve_cdf(gamma, cfg, p_s):
    rho = 2.0 / cfg.alpha
    eta = p_s / cfg.p_p
    lam = math.pi * gamma_fn(1 + rho) * (cfg.lambda_p * eta ** -rho + cfg.lambda_s) * gamma_fn(1 - rho)
    return math.exp(-math.pi * cfg.lambda_e / lam * gamma ** -rho)


class TestSuCdf:
    def test_single_antenna_closed_form_bitwise(self):
        cfg = make_config(n_s=1, mu=1.0, p_s=0.01)
        lam = lambda_l(cfg)
        for gamma in (0.1, 1.0, 7.3):
            expected = 1.0 - math.exp(-lam * gamma ** (2 / cfg.alpha) * cfg.r_s ** 2)
            assert cdf_sir_su(gamma, cfg) == expected

    def test_vanishes_at_zero(self, validation_alpha4):
        assert cdf_sir_su(1e-12, validation_alpha4) < 1e-4

    def test_nondecreasing_and_bounded(self, validation_alpha4):
        values = [cdf_sir_su(float(g), validation_alpha4) for g in GRID]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))

    def test_beamforming_reduction(self):
        cfg = make_config(n_s=6, mu=1.0)
        p_s, _, _ = resolve_power(cfg)
        for gamma in (0.1, 1.0, 10.0):
            assert cdf_sir_su(gamma, cfg) == pytest.approx(
                bf_only_su_cdf(gamma, cfg, p_s), rel=1e-10)

    def test_partition_and_recurrence_routes_agree(self):
        # the route switches on n_s; compare n_s = 20 vs a forced recurrence
        cfg = make_config(n_s=20, mu=0.6, p_s=0.01)
        p_s = 0.01
        from secshare import sirdist
        values_partition = [cdf_sir_su(g, cfg, p_s=p_s) for g in (0.1, 1.0, 10.0)]
        original = sirdist._PARTITION_ROUTE_MAX_NS
        try:
            sirdist._PARTITION_ROUTE_MAX_NS = 1
            values_recurrence = [cdf_sir_su(g, cfg, p_s=p_s) for g in (0.1, 1.0, 10.0)]
        finally:
            sirdist._PARTITION_ROUTE_MAX_NS = original
        for a, b in zip(values_partition, values_recurrence):
            assert a == pytest.approx(b, rel=1e-11)

    def test_survival_terms_are_probability_weights(self, validation_alpha4):
        p_s, _, _ = resolve_power(validation_alpha4)
        for gamma in (0.01, 0.5, 3.0, 40.0):
            terms = su_survival_terms(gamma, validation_alpha4, p_s)
            assert all(0.0 <= t <= 1.0 for t in terms)

    def test_large_array_exact_still_stable(self, large_array_asr_alpha3):
        cfg = large_array_asr_alpha3.with_(n_s=32)
        values = [cdf_sir_su(float(g), cfg) for g in GRID]
        assert all(0.0 <= v <= 1.0 for v in values)
        assert all(a <= b + 1e-9 for a, b in zip(values, values[1:]))

    def test_cancellation_guard_fires_on_overflow(self):
        cfg = make_config(n_s=64, mu=0.5, r_s=0.01, p_s=1e-6)
        with pytest.raises(CancellationError) as err:
            cdf_sir_su(1e6, cfg)
        assert err.value.order >= 0

    def test_domain(self, validation_alpha4):
        with pytest.raises(DomainError):
            cdf_sir_su(0.0, validation_alpha4)


class TestEveCdf:
    def test_limits(self, validation_alpha4):
        assert cdf_sir_eve(1e9, validation_alpha4) > 1.0 - 1e-6
        quiet = validation_alpha4.with_(lambda_e=1e-300)
        for gamma in (0.01, 1.0, 100.0):
            assert cdf_sir_eve(gamma, quiet) == pytest.approx(1.0, abs=1e-12)

    def test_monotonicities_in_densities(self, validation_alpha4):
        base = cdf_sir_eve(1.0, validation_alpha4)
        denser_su = validation_alpha4.with_(lambda_s=2e-3)
        denser_pu = validation_alpha4.with_(lambda_p=1.2e-4)
        denser_eve = validation_alpha4.with_(lambda_e=2e-4)
        assert cdf_sir_eve(1.0, denser_su) > base
        assert cdf_sir_eve(1.0, denser_pu) > base
        assert cdf_sir_eve(1.0, denser_eve) < base

    def test_beamforming_reduction(self):
        cfg = make_config(n_s=6, mu=1.0)
        p_s, _, _ = resolve_power(cfg)
        for gamma in (0.1, 1.0, 10.0):
            assert cdf_sir_eve(gamma, cfg) == pytest.approx(
                bf_only_eve_cdf(gamma, cfg, p_s), rel=1e-12)

    def test_nondecreasing(self, validation_alpha4):
        values = [cdf_sir_eve(float(g), validation_alpha4) for g in GRID]
        assert all(a <= b + 1e-12 for a, b in zip(values, values[1:]))


class TestAsymptoticCdfs:
    def test_eve_asym_limits(self, large_array_sop_alpha3):
        assert cdf_sir_eve_asym(1e4, large_array_sop_alpha3) == pytest.approx(1.0, abs=1e-9)

    def test_eve_asym_beamforming_factor(self):
        # with mu = 1 the drift term disappears; compare against the direct form
        cfg = make_config(mu=1.0, alpha=3.0, n_s=8, r_p=6.0, r_s=3.0,
                          p_p=0.0316, rho_out_p=0.1)
        p_s, _, _ = resolve_power(cfg)
        rho = 2 / cfg.alpha
        xi_val = xi(cfg, p_s=p_s)
        for gamma in (0.3, 2.0):
            expected = math.exp(
                -cfg.lambda_e * (cfg.mu * p_s / cfg.p_p) ** rho
                / (xi_val * gamma_fn(1 - rho)) * gamma ** -rho)
            assert cdf_sir_eve_asym(gamma, cfg) == pytest.approx(expected, rel=1e-12)

    def test_eve_asym_is_the_exact_large_array_limit(self):
        # the exact CDF's amplitude pi*lambda_e/Lambda_l must converge to the
        # large-array amplitude; this pins the (pi-free) normalization
        cfg = make_config(mu=0.7, alpha=3.0, n_s=256, r_p=6.0, r_s=3.0,
                          p_p=0.0316, rho_out_p=0.1, p_s=1e-3)
        from secshare import lambda_l
        rho = 2 / cfg.alpha
        exact_amp = math.pi * cfg.lambda_e / lambda_l(cfg)
        asym_amp = (cfg.lambda_e * (cfg.mu * 1e-3 / cfg.p_p) ** rho
                    / (xi(cfg) * gamma_fn(1 - rho)))
        assert exact_amp == pytest.approx(asym_amp, rel=2e-3)

    def test_eve_asym_near_exact_for_large_arrays(self, large_array_sop_alpha3):
        cfg = large_array_sop_alpha3.with_(n_s=32)
        assert cdf_sir_eve_asym(1.0, cfg) == pytest.approx(cdf_sir_eve(1.0, cfg), abs=0.03)

    def test_su_asym_vanishes_at_zero(self, large_array_asr_alpha3):
        assert cdf_sir_su_asym(1e-9, large_array_asr_alpha3) < 1e-6

    def test_alpha4_route_requires_alpha4(self, large_array_asr_alpha3):
        with pytest.raises(DomainError):
            cdf_sir_su_asym_alpha4(1.0, large_array_asr_alpha3)

    def test_alpha4_closed_form_matches_gil_pelaez(self, validation_alpha4):
        cfg = validation_alpha4.with_(n_s=24, mu=0.7)
        for gamma in np.logspace(-1, 1, 7):
            a = cdf_sir_su_asym(float(gamma), cfg)
            b = cdf_sir_su_asym_alpha4(float(gamma), cfg)
            assert a == pytest.approx(b, abs=1e-4)

    def test_alpha4_antenna_scaling(self, validation_alpha4):
        few = cdf_sir_su_asym_alpha4(1.0, validation_alpha4.with_(n_s=8))
        many = cdf_sir_su_asym_alpha4(1.0, validation_alpha4.with_(n_s=64))
        assert many < few

    def test_su_asym_tracks_exact_for_large_arrays(self, large_array_asr_alpha3):
        cfg = large_array_asr_alpha3.with_(n_s=32)
        for gamma in (0.1, 1.0, 10.0):
            assert cdf_sir_su_asym(gamma, cfg) == pytest.approx(
                cdf_sir_su(gamma, cfg), abs=0.03)

    def test_su_asym_nondecreasing(self, large_array_asr_alpha3):
        values = [cdf_sir_su_asym(float(g), large_array_asr_alpha3) for g in np.logspace(-2, 2, 20)]
        assert all(a <= b + 1e-7 for a, b in zip(values, values[1:]))


class TestSirCdfFactory:
    def test_kinds_dispatch(self, validation_alpha4):
        for kind in (SirCdfKind.SU_EXACT, SirCdfKind.EVE_EXACT, SirCdfKind.EVE_ASYM):
            f = make_sir_cdf(validation_alpha4, kind)
            assert 0.0 <= f(1.0) <= 1.0
            assert f.kind is kind

    def test_alpha4_kind_guard(self, large_array_asr_alpha3):
        f = make_sir_cdf(large_array_asr_alpha3, SirCdfKind.SU_ASYM_ALPHA4)
        with pytest.raises(DomainError):
            f(1.0)
