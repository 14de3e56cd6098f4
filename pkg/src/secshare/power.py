"""Primary-user QoS feasibility: permissive power region and PU outage probability."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .errors import DomainError
from .model import (
    NetworkConfig,
    an_weight_moment,
    gamma_fn,
    large_array_weight_moment,
    lambda_l,  # noqa: F401  (re-exported convenience for callers resolving powers)
    theta,
)

__all__ = ["BindingBranch", "PowerRegion", "max_permissive_power",
           "max_permissive_power_asymptotic", "pu_outage", "resolve_power"]


class BindingBranch(str, Enum):
    EQUAL_POWER = "equal_power"
    GENERAL = "general"
    ASYMPTOTIC = "asymptotic"


@dataclass(frozen=True)
class PowerRegion:
    """Outcome of the permissive-power computation.

    ``feasible`` is False when the primary self-interference alone already
    violates the QoS target (theta >= 0); ``p_s_max`` is present only when
    feasible.  Infeasibility is a first-class result, not an exception, so
    parameter sweeps can chart the feasibility wall.
    """

    feasible: bool
    binding_branch: BindingBranch
    theta: float
    p_s_max: float | None = None

    def p_s_max_or_raise(self) -> float:
        if not self.feasible or self.p_s_max is None:
            from .errors import InfeasibleError

            raise InfeasibleError("primary QoS violated for every secondary power")
        return self.p_s_max


def max_permissive_power(cfg: NetworkConfig) -> PowerRegion:
    """Largest secondary transmit power keeping PU outage at rho_out_p."""
    th = theta(cfg)
    if cfg.equal_power_branch():
        branch = BindingBranch.EQUAL_POWER
    else:
        branch = BindingBranch.GENERAL
    if th >= 0.0:
        return PowerRegion(feasible=False, binding_branch=branch, theta=th)
    rho = 2.0 / cfg.alpha
    if branch is BindingBranch.EQUAL_POWER:
        ratio = -th * gamma_fn(float(cfg.n_s)) / (cfg.lambda_s * gamma_fn(cfg.n_s + rho))
        p_max = ratio ** (cfg.alpha / 2.0) * cfg.p_p / cfg.mu
    else:
        ups = an_weight_moment(cfg.mu, cfg.n_s, cfg.alpha)
        p_max = (-th / (ups * cfg.lambda_s)) ** (cfg.alpha / 2.0) * cfg.p_p
    return PowerRegion(feasible=True, binding_branch=branch, theta=th, p_s_max=p_max)


def max_permissive_power_asymptotic(cfg: NetworkConfig) -> PowerRegion:
    """Permissive power in the large-antenna-array limit."""
    th = theta(cfg)
    if th >= 0.0:
        return PowerRegion(feasible=False, binding_branch=BindingBranch.ASYMPTOTIC, theta=th)
    moment = large_array_weight_moment(cfg.mu, cfg.alpha)
    p_max = (-th / (moment * cfg.lambda_s)) ** (cfg.alpha / 2.0) * cfg.p_p
    return PowerRegion(feasible=True, binding_branch=BindingBranch.ASYMPTOTIC,
                       theta=th, p_s_max=p_max)


def pu_outage(cfg: NetworkConfig, p_s: float) -> float:
    """Outage probability at the typical primary receiver for secondary power p_s."""
    if not p_s > 0.0:
        raise DomainError(f"p_s must be positive, got {p_s!r}")
    rho = 2.0 / cfg.alpha
    delta = gamma_fn(1.0 - rho) * cfg.gamma_th_p ** rho * cfg.r_p ** 2
    eta = p_s / cfg.p_p
    if cfg.equal_power_branch():
        kappa = cfg.lambda_p * gamma_fn(1.0 + rho) + cfg.lambda_s * (cfg.mu * eta) ** rho * math.exp(
            math.lgamma(cfg.n_s + rho) - math.lgamma(cfg.n_s)
        )
    else:
        kappa = cfg.lambda_p * gamma_fn(1.0 + rho) + cfg.lambda_s * eta ** rho * an_weight_moment(
            cfg.mu, cfg.n_s, cfg.alpha
        )
    return -math.expm1(-math.pi * kappa * delta)


def resolve_power(cfg: NetworkConfig) -> tuple[float, PowerRegion, bool]:
    """Resolve the operating secondary power.

    Returns (p_s, region, qos_violated).  With cfg.p_s unset the power is
    P_s^max (raising InfeasibleError when none exists); an explicit cfg.p_s
    is honoured even beyond the permissive region, with qos_violated=True,
    so sweeps can chart both sides of the wall.
    """
    region = max_permissive_power(cfg)
    if cfg.p_s is None:
        return region.p_s_max_or_raise(), region, False
    violated = (not region.feasible) or cfg.p_s > region.p_s_max * (1.0 + 1e-12)
    return cfg.p_s, region, violated
