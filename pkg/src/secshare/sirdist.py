"""SIR distribution functions at the secondary receiver and the strongest eavesdropper.

Exact closed forms plus their large-antenna-array limits.  The exact
secondary CDF is a survival series whose m-th term is
((-r_s^alpha)^m / m!) * d^m/dx^m L(gamma * x / sigma_s^2) at x = r_s^alpha;
every term is a nonnegative probability weight, so the series is summed
with compensated summation and guarded by an out-of-range detector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable

import numpy as np

from .errors import CancellationError, DomainError
from .model import NetworkConfig, gamma_fn, lambda_l, xi
from .numerics import CharacteristicFunction, QuadratureSpec, exp_composite_derivatives, gil_pelaez_cdf, phi_fn
from .partitions import faa_di_bruno_exp
from .power import resolve_power

__all__ = [
    "SirCdfKind",
    "SirCdf",
    "cdf_sir_su",
    "cdf_sir_eve",
    "cdf_sir_eve_asym",
    "cdf_sir_su_asym",
    "cdf_sir_su_asym_alpha4",
    "large_array_interference_cf",
    "make_sir_cdf",
]

_CLAMP_TOL = 1e-9
# Above this antenna count the exact survival series uses the derivative
# recurrence; partition sums stay exact but their count grows too fast.
_PARTITION_ROUTE_MAX_NS = 20


class SirCdfKind(str, Enum):
    SU_EXACT = "su_exact"
    EVE_EXACT = "eve_exact"
    SU_ASYM_GILPELAEZ = "su_asym_gilpelaez"
    SU_ASYM_ALPHA4 = "su_asym_alpha4"
    EVE_ASYM = "eve_asym"


@dataclass(frozen=True)
class SirCdf:
    """A SIR distribution function gamma -> probability."""

    evaluator: Callable[[float], float]
    kind: SirCdfKind

    def __call__(self, gamma: float) -> float:
        return self.evaluator(gamma)


def _clamp_probability(value: float, context: str) -> float:
    if value < -_CLAMP_TOL or value > 1.0 + _CLAMP_TOL:
        raise CancellationError(f"{context} left [0, 1] by more than the tolerance", order=-1)
    return min(1.0, max(0.0, value))


def su_survival_terms(gamma: float, cfg: NetworkConfig, p_s: float) -> list[float]:
    """Terms of P(SIR_su > gamma); each lies in [0, 1] when no precision was lost."""
    lam = lambda_l(cfg, p_s=p_s)
    rho = 2.0 / cfg.alpha
    x = cfg.r_s ** cfg.alpha
    c = -lam * gamma ** rho
    m_top = cfg.n_s - 1
    if cfg.n_s <= _PARTITION_ROUTE_MAX_NS:
        prefactor = math.exp(c * x ** rho)
        g_derivs = []
        falling = 1.0
        for j in range(1, m_top + 1):
            falling *= rho - (j - 1)
            g_derivs.append(c * falling * x ** (rho - j))
        derivs = [prefactor]
        derivs += [prefactor * faa_di_bruno_exp(g_derivs, m) for m in range(1, m_top + 1)]
    else:
        derivs = exp_composite_derivatives(c, rho, x, m_top)
    terms = []
    factorial = 1.0
    for m in range(cfg.n_s):
        if m > 0:
            factorial *= m
        term = ((-x) ** m / factorial) * derivs[m]
        if not math.isfinite(term) or term < -_CLAMP_TOL or term > 1.0 + _CLAMP_TOL:
            raise CancellationError(
                "secondary SIR survival term fell outside [0, 1]", order=m
            )
        terms.append(term)
    return terms


def cdf_sir_su(gamma: float, cfg: NetworkConfig, p_s: float | None = None) -> float:
    """Exact CDF of the SIR at the typical secondary receiver."""
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    survival = math.fsum(su_survival_terms(gamma, cfg, p_s))
    return _clamp_probability(1.0 - survival, "secondary SIR CDF")


def cdf_sir_eve(gamma: float, cfg: NetworkConfig, p_s: float | None = None) -> float:
    """Exact CDF of the SIR at the most detrimental (max-SIR) eavesdropper."""
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    lam = lambda_l(cfg, p_s=p_s)
    rho = 2.0 / cfg.alpha
    an_slope = 0.0 if cfg.mu == 1.0 else (1.0 - cfg.mu) / ((cfg.n_s - 1) * cfg.mu)
    an_factor = (an_slope * gamma + 1.0) ** (1 - cfg.n_s)
    return math.exp(-(math.pi * cfg.lambda_e / lam) * gamma ** -rho * an_factor)


def cdf_sir_eve_asym(gamma: float, cfg: NetworkConfig, p_s: float | None = None) -> float:
    """Large-array CDF of the eavesdropper SIR.

    The amplitude carries no pi: the 2*pi of the field functional cancels
    against the pi inside the Gaussian radial integral, and the exact CDF's
    large-array limit (pi*lambda_e/Lambda_l -> lambda_e*(mu*eta)**rho /
    (Xi*Gamma(1-2/alpha))) fixes the normalization.
    """
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    rho = 2.0 / cfg.alpha
    eta = p_s / cfg.p_p
    xi_val = xi(cfg, p_s=p_s)
    amp = cfg.lambda_e * (cfg.mu * eta) ** rho / (xi_val * gamma_fn(1.0 - rho))
    drift = 1.0 - 1.0 / cfg.mu
    return math.exp(-amp * math.exp(drift * gamma) * gamma ** -rho)


def large_array_interference_cf(cfg: NetworkConfig, p_s: float | None = None) -> CharacteristicFunction:
    """Characteristic function (conjugate convention) of the large-array interference.

    phi(w) = exp(-pi * Xi * Gamma(1-2/alpha) * eta**(-2/alpha) * (jw)**(2/alpha))
    on the principal branch, so Re[(jw)**(2/alpha)] > 0 and |phi| <= 1.
    """
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    rho = 2.0 / cfg.alpha
    eta = p_s / cfg.p_p
    scale = math.pi * xi(cfg, p_s=p_s) * gamma_fn(1.0 - rho) * eta ** -rho
    branch = complex(math.cos(math.pi * rho / 2.0), math.sin(math.pi * rho / 2.0))

    def evaluator(w: np.ndarray) -> np.ndarray:
        return np.exp(-scale * branch * np.asarray(w, dtype=float) ** rho)

    return CharacteristicFunction(evaluator=evaluator, decay_exponent=rho)


def cdf_sir_su_asym(
    gamma: float,
    cfg: NetworkConfig,
    p_s: float | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """Large-array CDF of the secondary SIR via Gil-Pelaez inversion."""
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    cf = large_array_interference_cf(cfg, p_s=p_s)
    point = cfg.mu * cfg.n_s / (gamma * cfg.r_s ** cfg.alpha)
    return _clamp_probability(1.0 - gil_pelaez_cdf(cf, point, spec), "large-array secondary CDF")


def cdf_sir_su_asym_alpha4(gamma: float, cfg: NetworkConfig, p_s: float | None = None) -> float:
    """Closed form of the large-array secondary CDF, valid only for alpha = 4."""
    if cfg.alpha != 4.0:
        raise DomainError("the closed-form large-array CDF requires alpha = 4 exactly")
    if not gamma > 0.0:
        raise DomainError("gamma must be positive")
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    eta = p_s / cfg.p_p
    arg = (math.pi * xi(cfg, p_s=p_s) / 2.0) * math.sqrt(
        math.pi * gamma * cfg.r_s ** cfg.alpha / (cfg.mu * cfg.n_s * eta)
    )
    return phi_fn(arg)


def make_sir_cdf(cfg: NetworkConfig, kind: SirCdfKind) -> SirCdf:
    """Bind a configuration into a reusable SIR CDF evaluator."""
    p_s, _, _ = resolve_power(cfg)
    table = {
        SirCdfKind.SU_EXACT: lambda g: cdf_sir_su(g, cfg, p_s=p_s),
        SirCdfKind.EVE_EXACT: lambda g: cdf_sir_eve(g, cfg, p_s=p_s),
        SirCdfKind.SU_ASYM_GILPELAEZ: lambda g: cdf_sir_su_asym(g, cfg, p_s=p_s),
        SirCdfKind.SU_ASYM_ALPHA4: lambda g: cdf_sir_su_asym_alpha4(g, cfg, p_s=p_s),
        SirCdfKind.EVE_ASYM: lambda g: cdf_sir_eve_asym(g, cfg, p_s=p_s),
    }
    return SirCdf(evaluator=table[kind], kind=kind)
