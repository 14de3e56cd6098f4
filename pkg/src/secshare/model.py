"""Network configuration, unit handling, and the spatial interference constants.

All internal math runs on linear quantities: powers in watts, SIR
thresholds as ratios, densities per square metre.  dBm and dB enter only
at the configuration-file boundary.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path

from .errors import BranchError, ConfigError, DomainError
from .numerics import QuadratureSpec, gamma_fn, quad_semi_infinite

__all__ = [
    "NetworkConfig",
    "DerivedConstants",
    "EQUAL_BRANCH_TOL",
    "dbm_to_watts",
    "watts_to_dbm",
    "db_to_linear",
    "derive_constants",
    "upsilon1",
    "an_weight_moment",
    "large_array_weight_moment",
    "laplace_su_interference",
    "lambda_l",
    "theta",
    "xi",
]

# |mu - 1/n_s| below this snaps to the equal-power formula branch: the
# general-branch prefactor is singular exactly there and its analytic
# limit equals the Gamma branch.
EQUAL_BRANCH_TOL = 1e-12


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


def watts_to_dbm(watts: float) -> float:
    if not watts > 0.0:
        raise DomainError(f"cannot express {watts!r} W in dBm")
    return 10.0 * math.log10(watts) + 30.0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class NetworkConfig:
    """User-facing parameters of the spectrum-sharing network.

    Distances in metres, powers in watts, thresholds linear, densities per
    square metre.  ``p_s`` is the secondary transmit power; when None the
    maximum permissive power is used wherever a resolved power is needed.
    """

    lambda_p: float
    lambda_s: float
    lambda_e: float
    alpha: float
    r_p: float
    r_s: float
    p_p: float
    n_s: int
    mu: float
    gamma_th_p: float
    gamma_th_s: float
    rho_out_p: float
    r_s_rate: float = 1.0
    p_s: float | None = None

    def __post_init__(self):
        coerce = {
            name: float(getattr(self, name))
            for name in ("lambda_p", "lambda_s", "lambda_e", "alpha", "r_p", "r_s",
                         "p_p", "mu", "gamma_th_p", "gamma_th_s", "rho_out_p", "r_s_rate")
        }
        coerce["n_s"] = int(self.n_s)
        coerce["p_s"] = None if self.p_s is None else float(self.p_s)
        for name, value in coerce.items():
            object.__setattr__(self, name, value)
        for name in ("lambda_p", "lambda_s", "lambda_e", "r_p", "r_s", "p_p",
                     "gamma_th_p", "gamma_th_s"):
            if not getattr(self, name) > 0.0:
                raise ConfigError(f"{name} must be strictly positive")
        if not self.alpha > 2.0:
            raise ConfigError(
                "alpha must exceed 2: aggregate interference is not integrable otherwise"
            )
        if not 0.0 < self.mu <= 1.0:
            raise ConfigError("mu must lie in (0, 1]")
        if self.n_s < 1:
            raise ConfigError("n_s must be >= 1")
        if self.n_s == 1 and self.mu < 1.0:
            raise ConfigError("n_s = 1 leaves no null space to carry artificial noise; mu must be 1")
        if not 0.0 < self.rho_out_p < 1.0:
            raise ConfigError("rho_out_p must lie in (0, 1)")
        if self.r_s_rate < 0.0:
            raise ConfigError("r_s_rate must be >= 0")
        if self.p_s is not None and not self.p_s > 0.0:
            raise ConfigError("p_s must be strictly positive when given")

    # -- configuration-file interface (flat JSON, dBm/dB at the boundary) --

    _JSON_KEYS = ("lambda_p", "lambda_s", "lambda_e", "alpha", "r_p_m", "r_s_m",
                  "p_p_dbm", "n_s", "mu", "gamma_th_p_db", "gamma_th_s_db",
                  "rho_out_p", "r_s_rate_bits", "p_s_dbm")

    @classmethod
    def from_dict(cls, raw: dict) -> "NetworkConfig":
        unknown = set(raw) - set(cls._JSON_KEYS)
        if unknown:
            raise ConfigError(f"unknown configuration keys: {sorted(unknown)}")
        missing = set(cls._JSON_KEYS) - {"p_s_dbm", "r_s_rate_bits"} - set(raw)
        if missing:
            raise ConfigError(f"missing configuration keys: {sorted(missing)}")
        return cls(
            lambda_p=raw["lambda_p"],
            lambda_s=raw["lambda_s"],
            lambda_e=raw["lambda_e"],
            alpha=raw["alpha"],
            r_p=raw["r_p_m"],
            r_s=raw["r_s_m"],
            p_p=dbm_to_watts(raw["p_p_dbm"]),
            n_s=raw["n_s"],
            mu=raw["mu"],
            gamma_th_p=db_to_linear(raw["gamma_th_p_db"]),
            gamma_th_s=db_to_linear(raw["gamma_th_s_db"]),
            rho_out_p=raw["rho_out_p"],
            r_s_rate=raw.get("r_s_rate_bits", 1.0),
            p_s=dbm_to_watts(raw["p_s_dbm"]) if "p_s_dbm" in raw else None,
        )

    @classmethod
    def from_json(cls, path: str | Path) -> "NetworkConfig":
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read configuration {path}: {exc}") from exc
        if not isinstance(raw, dict):
            raise ConfigError("configuration file must hold a flat JSON object")
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        out = {
            "lambda_p": self.lambda_p,
            "lambda_s": self.lambda_s,
            "lambda_e": self.lambda_e,
            "alpha": self.alpha,
            "r_p_m": self.r_p,
            "r_s_m": self.r_s,
            "p_p_dbm": watts_to_dbm(self.p_p),
            "n_s": self.n_s,
            "mu": self.mu,
            "gamma_th_p_db": 10.0 * math.log10(self.gamma_th_p),
            "gamma_th_s_db": 10.0 * math.log10(self.gamma_th_s),
            "rho_out_p": self.rho_out_p,
            "r_s_rate_bits": self.r_s_rate,
        }
        if self.p_s is not None:
            out["p_s_dbm"] = watts_to_dbm(self.p_s)
        return out

    def with_(self, **kwargs) -> "NetworkConfig":
        return replace(self, **kwargs)

    def equal_power_branch(self) -> bool:
        return abs(self.mu - 1.0 / self.n_s) < EQUAL_BRANCH_TOL


@dataclass(frozen=True)
class DerivedConstants:
    """Quantities derived from a NetworkConfig with the transmit power resolved.

    ``upsilon1`` stores the branch-continuous beam-plus-noise weight moment
    E[W**(2/alpha)] / P_s**(2/alpha); on the equal-power line it equals the
    Gamma-branch value mu**(2/alpha) * Gamma(n_s + 2/alpha) / Gamma(n_s).
    """

    sigma_s_sq: float
    sigma_n_sq: float
    p_a: float
    eta: float
    upsilon1: float
    theta: float
    lambda_l: float
    xi: float
    p_s: float


def derive_constants(cfg: NetworkConfig) -> DerivedConstants:
    """Populate all derived constants, resolving P_s to the maximum permissive power if absent."""
    p_s = _resolved_p_s(cfg)
    # larger share by product, smaller by subtraction: the subtrahend then
    # lies in [p_s/2, p_s], so the difference is exact (Sterbenz) and the
    # total-power identity sigma_s_sq + p_a == p_s holds bit-for-bit
    if cfg.mu >= 0.5:
        sigma_s_sq = cfg.mu * p_s
        p_a = p_s - sigma_s_sq
    else:
        p_a = (1.0 - cfg.mu) * p_s
        sigma_s_sq = p_s - p_a
    sigma_n_sq = p_a / (cfg.n_s - 1) if cfg.n_s > 1 else 0.0
    return DerivedConstants(
        sigma_s_sq=sigma_s_sq,
        sigma_n_sq=sigma_n_sq,
        p_a=p_a,
        eta=p_s / cfg.p_p,
        upsilon1=an_weight_moment(cfg.mu, cfg.n_s, cfg.alpha),
        theta=theta(cfg),
        lambda_l=lambda_l(cfg, p_s=p_s),
        xi=xi(cfg, p_s=p_s),
        p_s=p_s,
    )


def _resolved_p_s(cfg: NetworkConfig) -> float:
    if cfg.p_s is not None:
        return cfg.p_s
    from .power import max_permissive_power  # local import: power builds on this module

    region = max_permissive_power(cfg)
    if not region.feasible:
        from .errors import InfeasibleError

        raise InfeasibleError(
            "primary QoS cannot be met for any secondary power; no P_s to resolve"
        )
    return region.p_s_max


def upsilon1(mu: float, n_s: int, alpha: float) -> float:
    """Interference weight moment prefactor of the secondary field's Laplace transform.

    Equals E[W**(2/alpha)] / P_s**(2/alpha) for the per-interferer weight
    W = sigma_s^2 * E + sigma_n^2 * G  (E unit exponential, G ~ Gamma(n_s-1, 1)).

    Only defined off the equal-power line; mu == 1/n_s (within
    EQUAL_BRANCH_TOL) raises BranchError directing the caller to the
    Gamma-moment branch.
    """
    if not n_s >= 2:
        raise DomainError("upsilon1 requires n_s >= 2")
    if not 0.0 < mu <= 1.0:
        raise DomainError("mu must lie in (0, 1]")
    if abs(mu - 1.0 / n_s) < EQUAL_BRANCH_TOL:
        raise BranchError(
            "upsilon1 is singular at mu = 1/n_s; use the Gamma-moment branch "
            "Gamma(n_s + 2/alpha)/Gamma(n_s) * mu**(2/alpha)"
        )
    return an_weight_moment(mu, n_s, alpha)


@lru_cache(maxsize=4096)
def an_weight_moment(mu: float, n_s: int, alpha: float) -> float:
    """Branch-continuous evaluation of the weight moment E[W**(2/alpha)]/P_s**(2/alpha).

    The closed form loses all precision once (1-beta)**(n_s-1) drops near
    machine epsilon (beta the noise-to-signal variance ratio); inside that
    window the moment is evaluated through the fractional-moment identity
    E[X**q] = q/Gamma(1-q) * int (1 - L_X(t)) t**(-q-1) dt instead.
    """
    rho = 2.0 / alpha
    if mu == 1.0 or n_s == 1:
        return gamma_fn(1.0 + rho)
    beta = (1.0 - mu) / ((n_s - 1) * mu)
    # the closed form cancels to (1-beta)**(n_s-1); keep its relative error
    # under ~1e-8 and hand the window around beta = 1 to the integral route
    stable_cut = 10.0 ** (-8.0 / (n_s - 1))
    if abs(1.0 - beta) <= stable_cut:
        return _moment_by_laplace_identity(mu, n_s, alpha)
    total = math.fsum(
        (1.0 - beta) ** k * math.exp(math.lgamma(k + 1.0 + rho) - math.lgamma(k + 1.0))
        for k in range(n_s - 1)
    )
    bracket = mu ** rho * gamma_fn(1.0 + rho) - (
        ((1.0 - mu) / (n_s - 1)) ** (1.0 + rho) / mu
    ) * total
    return (1.0 - beta) ** (1 - n_s) * bracket


def _moment_by_laplace_identity(mu: float, n_s: int, alpha: float) -> float:
    rho = 2.0 / alpha
    scale_an = (1.0 - mu) / (n_s - 1)

    def integrand(t: float) -> float:
        lap = (1.0 + mu * t) ** -1.0 * (1.0 + scale_an * t) ** -(n_s - 1.0)
        return (1.0 - lap) * t ** (-rho - 1.0)

    spec = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11, max_subdivisions=400)
    val = quad_semi_infinite(integrand, spec, interior_points=[1.0])
    return rho / gamma_fn(1.0 - rho) * val


@lru_cache(maxsize=1024)
def large_array_weight_moment(mu: float, alpha: float) -> float:
    """Moment E[(mu*t + (1-mu))**(2/alpha)] of the large-array interferer weight."""
    rho = 2.0 / alpha
    if mu == 1.0:
        return gamma_fn(1.0 + rho)
    spec = QuadratureSpec(abs_tol=1e-13, rel_tol=1e-11, max_subdivisions=400)
    return quad_semi_infinite(
        lambda t: (mu * t + (1.0 - mu)) ** rho * math.exp(-t), spec, interior_points=[1.0]
    )


def laplace_su_interference(s: float, cfg: NetworkConfig, p_s: float | None = None) -> float:
    """Laplace transform at s > 0 of the aggregate secondary-field interference."""
    if not s > 0.0:
        raise DomainError(f"Laplace argument must be positive, got {s!r}")
    p_s = _resolved_p_s(cfg) if p_s is None else p_s
    rho = 2.0 / cfg.alpha
    if cfg.equal_power_branch():
        moment = (cfg.mu * p_s) ** rho * _gamma_ratio(cfg.n_s, rho)
    else:
        moment = p_s ** rho * an_weight_moment(cfg.mu, cfg.n_s, cfg.alpha)
    return math.exp(-cfg.lambda_s * math.pi * moment * gamma_fn(1.0 - rho) * s ** rho)


def _gamma_ratio(n_s: int, rho: float) -> float:
    # Gamma(n_s + rho) / Gamma(n_s), stable for any capped n_s
    return math.exp(math.lgamma(n_s + rho) - math.lgamma(n_s))


def lambda_l(cfg: NetworkConfig, p_s: float | None = None) -> float:
    """Spatial constant of the secondary receiver's interference exponent.

    Selects the equal-power branch exactly when |mu - 1/n_s| < EQUAL_BRANCH_TOL.
    """
    p_s = _resolved_p_s(cfg) if p_s is None else p_s
    rho = 2.0 / cfg.alpha
    g1m = gamma_fn(1.0 - rho)
    g1p = gamma_fn(1.0 + rho)
    eta = p_s / cfg.p_p
    if cfg.equal_power_branch():
        return math.pi * (
            cfg.lambda_s * _gamma_ratio(cfg.n_s, rho)
            + cfg.lambda_p * g1p * (cfg.mu * eta) ** -rho
        ) * g1m
    ups = an_weight_moment(cfg.mu, cfg.n_s, cfg.alpha)
    return math.pi * (cfg.lambda_p * g1p * eta ** -rho + cfg.lambda_s * ups) * g1m * cfg.mu ** -rho


def theta(cfg: NetworkConfig) -> float:
    """Feasibility constant of the primary QoS constraint (feasible iff negative)."""
    rho = 2.0 / cfg.alpha
    denom = math.pi * gamma_fn(1.0 - rho) * cfg.gamma_th_p ** rho * cfg.r_p ** 2
    return math.log1p(-cfg.rho_out_p) / denom + cfg.lambda_p * gamma_fn(1.0 + rho)


def xi(cfg: NetworkConfig, p_s: float | None = None) -> float:
    """Spatial constant of the large-array interference law."""
    p_s = _resolved_p_s(cfg) if p_s is None else p_s
    rho = 2.0 / cfg.alpha
    eta = p_s / cfg.p_p
    return cfg.lambda_p * gamma_fn(1.0 + rho) + cfg.lambda_s * eta ** rho * large_array_weight_moment(cfg.mu, cfg.alpha)
