"""Average secrecy rate and secrecy outage probability, exact and large-array.

The exact routes integrate the closed-form SIR distribution functions;
the large-array routes replace them with their limits (Gil-Pelaez
inversion in general, the error-function closed form when alpha = 4).
The eavesdropper density entering the outage integrals is the analytic
gamma-derivative of the eavesdropper CDF, never a numerical difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Protocol

from .errors import ComputationCancelled
from .model import NetworkConfig, gamma_fn, lambda_l, xi
from .numerics import QuadratureSpec, gil_pelaez_cdf, phi_fn
from .numerics import _quad_with_points  # in-package helper: value + error bound
from .power import resolve_power
from .sirdist import cdf_sir_eve, cdf_sir_eve_asym, cdf_sir_su, large_array_interference_cf

__all__ = ["MetricRoute", "SecrecyResult", "average_secrecy_rate", "secrecy_outage",
           "asr_asymptotic", "sop_asymptotic"]

_LN2 = math.log(2.0)


class CancelToken(Protocol):
    def is_set(self) -> bool: ...


class MetricRoute(str, Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"
    ASYMPTOTIC_ALPHA4 = "asymptotic_alpha4"


@dataclass(frozen=True)
class SecrecyResult:
    value: float
    quadrature_error: float
    qos_violated: bool
    route: MetricRoute


def _wrap_cancellable(f: Callable[[float], float], cancel: CancelToken | None):
    if cancel is None:
        return f

    def wrapped(x: float) -> float:
        if cancel.is_set():
            raise ComputationCancelled("metric integral cancelled by caller")
        return f(x)

    return wrapped


def _su_scale(lam: float, r_s: float, alpha: float) -> float:
    return (lam * r_s ** 2) ** (-alpha / 2.0)


# anchors of the eavesdropper transition, T = exponent of its CDF; the tail
# T -> 0 decays only like gamma**(-2/alpha), so the ladder must span many
# decades or adaptive panels skip the slow power tail entirely
_EVE_LADDER_T = [10.0 ** (0.5 * k) for k in range(4, -19, -1)]


def _eve_ladder(amp_coeff: float, alpha: float, drift: float = 0.0) -> list[float]:
    """gamma anchors where the eavesdropper CDF exponent passes each rung.

    A negative exponential drift (artificial-noise ceiling) ends the
    transition near 60/|drift|; anchors beyond that are dropped.
    """
    if amp_coeff <= 0.0:
        return []
    cap = 60.0 / -drift if drift < 0.0 else math.inf
    return [g for t in _EVE_LADDER_T if (g := (amp_coeff / t) ** (alpha / 2.0)) <= cap]


def _feature_points(ladder: list[float], *scales: float) -> list[float]:
    pts = set(p for p in ladder if p > 0.0 and math.isfinite(p))
    for s in scales:
        if s > 0.0 and math.isfinite(s):
            pts.update((s * 1e-2, s * 0.1, s, s * 10.0))
    pts.add(1.0)
    return sorted(pts)


def _eve_pdf_exact(gamma: float, cfg: NetworkConfig, lam: float) -> float:
    """Analytic derivative of the exact eavesdropper CDF."""
    rho = 2.0 / cfg.alpha
    a = 0.0 if cfg.mu == 1.0 else (1.0 - cfg.mu) / ((cfg.n_s - 1) * cfg.mu)
    q = a * gamma + 1.0
    amp = math.pi * cfg.lambda_e / lam
    exponent = amp * gamma ** -rho * q ** (1 - cfg.n_s)
    slope = amp * gamma ** -rho * q ** float(-cfg.n_s) * (rho / gamma * q + (cfg.n_s - 1) * a)
    return slope * math.exp(-exponent)


def average_secrecy_rate(
    cfg: NetworkConfig,
    spec: QuadratureSpec = QuadratureSpec(),
    cancel: CancelToken | None = None,
) -> SecrecyResult:
    """Expected value of [log2(1+SIR_su) - log2(1+SIR_eve)]^+ under independent marginals."""
    p_s, _, violated = resolve_power(cfg)
    lam = lambda_l(cfg, p_s=p_s)

    def integrand(x: float) -> float:
        return cdf_sir_eve(x, cfg, p_s=p_s) * (1.0 - cdf_sir_su(x, cfg, p_s=p_s)) / (1.0 + x)

    pts = _feature_points(_eve_ladder(math.pi * cfg.lambda_e / lam, cfg.alpha),
                          _su_scale(lam, cfg.r_s, cfg.alpha))
    value, err = _quad_with_points(_wrap_cancellable(integrand, cancel), spec, pts)
    return SecrecyResult(value=max(0.0, value / _LN2), quadrature_error=err / _LN2,
                         qos_violated=violated, route=MetricRoute.EXACT)


def secrecy_outage(
    cfg: NetworkConfig,
    r_s: float | None = None,
    spec: QuadratureSpec = QuadratureSpec(),
    cancel: CancelToken | None = None,
) -> SecrecyResult:
    """Probability that the instantaneous secrecy rate falls below the target r_s."""
    r_s = cfg.r_s_rate if r_s is None else float(r_s)
    if r_s < 0.0:
        from .errors import DomainError

        raise DomainError("target secrecy rate must be >= 0")
    p_s, _, violated = resolve_power(cfg)
    lam = lambda_l(cfg, p_s=p_s)
    scale = 2.0 ** r_s

    def integrand(x: float) -> float:
        threshold = scale * (1.0 + x) - 1.0
        if threshold <= 0.0:
            return 0.0  # r_s = 0 at x = 0: the secondary CDF vanishes there
        return _eve_pdf_exact(x, cfg, lam) * cdf_sir_su(threshold, cfg, p_s=p_s)

    pts = _feature_points(_eve_ladder(math.pi * cfg.lambda_e / lam, cfg.alpha),
                          _su_scale(lam, cfg.r_s, cfg.alpha),
                          _su_scale(lam, cfg.r_s, cfg.alpha) / scale)
    value, err = _quad_with_points(_wrap_cancellable(integrand, cancel), spec, pts)
    return SecrecyResult(value=min(1.0, max(0.0, value)), quadrature_error=err,
                         qos_violated=violated, route=MetricRoute.EXACT)


def _asym_pieces(cfg: NetworkConfig, p_s: float):
    rho = 2.0 / cfg.alpha
    eta = p_s / cfg.p_p
    xi_val = xi(cfg, p_s=p_s)
    # no pi in the amplitude: it cancels between the field functional and the
    # Gaussian radial integral (matches the exact CDF's large-array limit)
    amp = cfg.lambda_e * (cfg.mu * eta) ** rho / (xi_val * gamma_fn(1.0 - rho))
    drift = 1.0 - 1.0 / cfg.mu
    # interference magnitude scale: exponent coefficient of the stable law, to power 1/rho
    i_scale = (math.pi * xi_val * gamma_fn(1.0 - rho) * eta ** -rho) ** (cfg.alpha / 2.0)
    return rho, eta, xi_val, amp, drift, i_scale


def _eve_pdf_asym(gamma: float, cfg: NetworkConfig, amp: float, drift: float, rho: float) -> float:
    """Analytic derivative of the large-array eavesdropper CDF."""
    expo = amp * math.exp(drift * gamma) * gamma ** -rho
    slope = expo * (-drift + rho / gamma)
    return slope * math.exp(-expo)


def asr_asymptotic(
    cfg: NetworkConfig,
    spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-8, rel_tol=1e-6),
    cancel: CancelToken | None = None,
    force_general: bool = False,
) -> SecrecyResult:
    """Large-antenna-array average secrecy rate.

    Uses the error-function closed form of the secondary CDF when
    alpha = 4 (unless ``force_general``), otherwise the Gil-Pelaez route.
    """
    p_s, _, violated = resolve_power(cfg)
    rho, eta, xi_val, amp, drift, i_scale = _asym_pieces(cfg, p_s)
    point_scale = cfg.mu * cfg.n_s / cfg.r_s ** cfg.alpha

    use_alpha4 = cfg.alpha == 4.0 and not force_general
    if use_alpha4:
        erf_scale = (math.pi * xi_val / 2.0) * math.sqrt(
            math.pi * cfg.r_s ** cfg.alpha / (cfg.mu * cfg.n_s * eta)
        )

        def su_tail(x: float) -> float:
            return 1.0 - phi_fn(erf_scale * math.sqrt(x))
    else:
        cf = large_array_interference_cf(cfg, p_s=p_s)
        gp_spec = QuadratureSpec(abs_tol=min(spec.abs_tol, 1e-9), rel_tol=1e-8,
                                 max_subdivisions=spec.max_subdivisions)

        def su_tail(x: float) -> float:
            return gil_pelaez_cdf(cf, point_scale / x, gp_spec)

    def integrand(x: float) -> float:
        eve_cdf = math.exp(-amp * math.exp(drift * x) * x ** -rho)
        return eve_cdf * su_tail(x) / (1.0 + x)

    pts = _feature_points(_eve_ladder(amp, cfg.alpha, drift), point_scale / i_scale)
    value, err = _quad_with_points(_wrap_cancellable(integrand, cancel), spec, pts)
    return SecrecyResult(
        value=max(0.0, value / _LN2), quadrature_error=err / _LN2, qos_violated=violated,
        route=MetricRoute.ASYMPTOTIC_ALPHA4 if use_alpha4 else MetricRoute.ASYMPTOTIC,
    )


def sop_asymptotic(
    cfg: NetworkConfig,
    r_s: float | None = None,
    spec: QuadratureSpec = QuadratureSpec(abs_tol=1e-8, rel_tol=1e-6),
    cancel: CancelToken | None = None,
    force_general: bool = False,
) -> SecrecyResult:
    """Large-antenna-array secrecy outage probability."""
    r_s = cfg.r_s_rate if r_s is None else float(r_s)
    p_s, _, violated = resolve_power(cfg)
    rho, eta, xi_val, amp, drift, i_scale = _asym_pieces(cfg, p_s)
    point_scale = cfg.mu * cfg.n_s / cfg.r_s ** cfg.alpha
    rate_scale = 2.0 ** r_s

    use_alpha4 = cfg.alpha == 4.0 and not force_general
    if use_alpha4:
        erf_scale = (math.pi * xi_val / 2.0) * math.sqrt(
            math.pi * cfg.r_s ** cfg.alpha / (cfg.mu * cfg.n_s * eta)
        )

        def su_cdf(g: float) -> float:
            return phi_fn(erf_scale * math.sqrt(g))
    else:
        cf = large_array_interference_cf(cfg, p_s=p_s)
        gp_spec = QuadratureSpec(abs_tol=min(spec.abs_tol, 1e-9), rel_tol=1e-8,
                                 max_subdivisions=spec.max_subdivisions)

        def su_cdf(g: float) -> float:
            return 1.0 - gil_pelaez_cdf(cf, point_scale / g, gp_spec)

    def integrand(x: float) -> float:
        threshold = rate_scale * (1.0 + x) - 1.0
        if threshold <= 0.0:
            return 0.0
        return _eve_pdf_asym(x, cfg, amp, drift, rho) * su_cdf(threshold)

    pts = _feature_points(_eve_ladder(amp, cfg.alpha, drift), point_scale / i_scale)
    value, err = _quad_with_points(_wrap_cancellable(integrand, cancel), spec, pts)
    return SecrecyResult(
        value=min(1.0, max(0.0, value)), quadrature_error=err, qos_violated=violated,
        route=MetricRoute.ASYMPTOTIC_ALPHA4 if use_alpha4 else MetricRoute.ASYMPTOTIC,
    )
