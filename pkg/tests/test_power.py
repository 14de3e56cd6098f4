import math

import pytest

from secshare import (
    InfeasibleError,
    dbm_to_watts,
    max_permissive_power,
    max_permissive_power_asymptotic,
    pu_outage,
    resolve_power,
)
from secshare.power import BindingBranch

from conftest import make_config


class TestMaxPermissivePower:
    def test_inverse_relation_analytic(self, baseline_alpha4):
        region = max_permissive_power(baseline_alpha4)
        assert region.feasible
        assert pu_outage(baseline_alpha4, region.p_s_max) == pytest.approx(
            baseline_alpha4.rho_out_p, abs=1e-9)

    def test_inverse_relation_equal_branch(self):
        cfg = make_config(n_s=4, mu=0.25)
        region = max_permissive_power(cfg)
        assert region.binding_branch is BindingBranch.EQUAL_POWER
        assert pu_outage(cfg, region.p_s_max) == pytest.approx(cfg.rho_out_p, abs=1e-9)

    def test_boundary_power_vanishes(self):
        # approach the feasibility wall from inside: p_s_max -> 0
        cfg = make_config()
        th0 = max_permissive_power(cfg).theta
        values = []
        for shrink in (1.0, 1e-2, 1e-4):
            rho_target = 1.0 - math.exp(math.log1p(-cfg.rho_out_p) * shrink)
            # rescale the outage target so theta shrinks toward its positive part
            c = make_config(rho_out_p=max(rho_target, 1e-9))
            region = max_permissive_power(c)
            if region.feasible:
                values.append(region.p_s_max)
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_infeasible_is_first_class(self):
        region = max_permissive_power(make_config(rho_out_p=1e-9))
        assert not region.feasible
        assert region.p_s_max is None
        with pytest.raises(InfeasibleError):
            region.p_s_max_or_raise()

    def test_monotone_in_densities(self):
        base = max_permissive_power(make_config(mu=1.0)).p_s_max
        assert max_permissive_power(make_config(mu=1.0, lambda_s=5e-4)).p_s_max > base
        assert max_permissive_power(make_config(mu=1.0, lambda_s=2e-3)).p_s_max < base
        assert max_permissive_power(make_config(mu=1.0, lambda_p=1.2e-4)).p_s_max < base

    def test_monotone_in_outage_target(self):
        lo = max_permissive_power(make_config(rho_out_p=0.13)).p_s_max
        hi = max_permissive_power(make_config(rho_out_p=0.18)).p_s_max
        assert hi > lo

    def test_linear_in_primary_power(self):
        base = max_permissive_power(make_config()).p_s_max
        doubled = max_permissive_power(make_config(p_p=2 * dbm_to_watts(36.0))).p_s_max
        assert doubled == pytest.approx(2 * base, rel=1e-12)


class TestAsymptoticPower:
    def test_reduces_to_exact_at_full_information(self):
        cfg = make_config(mu=1.0)
        exact = max_permissive_power(cfg).p_s_max
        asym = max_permissive_power_asymptotic(cfg).p_s_max
        assert asym == pytest.approx(exact, rel=1e-10)

    def test_infeasible_branch(self):
        region = max_permissive_power_asymptotic(make_config(rho_out_p=1e-9))
        assert not region.feasible
        assert region.binding_branch is BindingBranch.ASYMPTOTIC

    def test_ratio_approaches_one_with_antennas(self, large_array_asr_alpha3):
        gaps = []
        for n_s in (8, 16, 32):
            cfg = large_array_asr_alpha3.with_(n_s=n_s)
            exact = max_permissive_power(cfg).p_s_max
            asym = max_permissive_power_asymptotic(cfg).p_s_max
            gaps.append(abs(asym / exact - 1.0))
        assert gaps[0] > gaps[1] > gaps[2]


class TestPuOutage:
    def test_vanishes_without_interferers(self):
        cfg = make_config(lambda_p=1e-300, lambda_s=1e-300)
        assert pu_outage(cfg, 1e-300) == pytest.approx(0.0, abs=1e-12)

    def test_strictly_increasing_in_power(self, baseline_alpha4):
        powers = [1e-4, 1e-3, 1e-2, 1e-1, 1.0]
        values = [pu_outage(baseline_alpha4, p) for p in powers]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert all(0.0 <= v <= 1.0 for v in values)

    def test_equal_branch_continuity(self):
        for n_s in (2, 4, 8):
            eq = make_config(n_s=n_s, mu=1.0 / n_s)
            base = pu_outage(eq, 0.01)
            for d in (+1e-4, -1e-4):
                near = make_config(n_s=n_s, mu=1.0 / n_s + d)
                assert pu_outage(near, 0.01) == pytest.approx(base, rel=1e-3)


class TestResolvePower:
    def test_defaults_to_max(self, baseline_alpha4):
        p_s, region, violated = resolve_power(baseline_alpha4)
        assert p_s == region.p_s_max
        assert not violated

    def test_explicit_power_beyond_wall_flagged(self, baseline_alpha4):
        p_max = max_permissive_power(baseline_alpha4).p_s_max
        cfg = baseline_alpha4.with_(p_s=2 * p_max)
        p_s, _, violated = resolve_power(cfg)
        assert p_s == 2 * p_max
        assert violated

    def test_infeasible_without_explicit_power(self):
        with pytest.raises(InfeasibleError):
            resolve_power(make_config(rho_out_p=1e-9))
