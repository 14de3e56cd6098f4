"""Optimal power-allocation search and generic parameter sweeps."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, fields
from enum import Enum
from typing import Sequence

from .errors import DomainError, InfeasibleError, SecshareError
from .metrics import asr_asymptotic, average_secrecy_rate, secrecy_outage, sop_asymptotic
from .model import NetworkConfig
from .montecarlo import estimate
from .power import max_permissive_power, max_permissive_power_asymptotic, pu_outage, resolve_power

__all__ = ["SweepMetric", "SweepRoute", "SweepSpec", "SweepRow", "AntennaGap",
           "optimal_mu", "sweep", "antenna_gap"]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class SweepMetric(str, Enum):
    ASR = "asr"
    SOP = "sop"
    P_S_MAX = "p_s_max"
    PU_OUTAGE = "pu_outage"


class SweepRoute(str, Enum):
    EXACT = "exact"
    ASYMPTOTIC = "asymptotic"
    MONTECARLO = "montecarlo"


_CFG_FIELDS = {f.name for f in fields(NetworkConfig)}


@dataclass(frozen=True)
class SweepSpec:
    axis: str
    values: tuple
    metric: SweepMetric
    route: SweepRoute = SweepRoute.EXACT
    snapshots: int = 100_000
    seed: int = 1

    def __post_init__(self):
        if self.axis not in _CFG_FIELDS:
            raise DomainError(f"unknown sweep axis {self.axis!r}")
        vals = tuple(self.values)
        if not vals:
            raise DomainError("sweep needs at least one axis value")
        diffs = [b - a for a, b in zip(vals, vals[1:])]
        if diffs and not (all(d > 0 for d in diffs) or all(d < 0 for d in diffs)):
            raise DomainError("sweep values must be strictly monotone")
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "metric", SweepMetric(self.metric))
        object.__setattr__(self, "route", SweepRoute(self.route))


@dataclass(frozen=True)
class SweepRow:
    axis_value: float
    metric_value: float
    std_error: float | None
    qos_violated: bool
    error: str | None = None


@dataclass(frozen=True)
class AntennaGap:
    n_a: int | None
    n_b: int | None

    @property
    def gap(self) -> int | None:
        if self.n_a is None or self.n_b is None:
            return None
        return self.n_b - self.n_a


def optimal_mu(cfg: NetworkConfig, grid_step: float = 0.02,
               refine_tol: float = 1e-3) -> tuple[float, float]:
    """Power-allocation factor maximizing the exact average secrecy rate.

    Coarse grid over (0, 1] followed by golden-section refinement inside
    the best bracket.  Ties resolve toward larger mu; a profile with more
    than one interior local maximum falls back to the grid argmax (with a
    warning), since golden-section needs unimodality.
    """
    if not 0.0 < grid_step <= 0.25:
        raise DomainError("grid_step must lie in (0, 0.25]")
    n_steps = int(round(1.0 / grid_step))
    grid = [min(1.0, k * grid_step) for k in range(1, n_steps + 1)]
    if grid[-1] < 1.0:
        grid.append(1.0)

    def objective(mu: float) -> float:
        return average_secrecy_rate(cfg.with_(mu=mu)).value

    values = [objective(m) for m in grid]
    best_idx = max(range(len(grid)), key=lambda i: (values[i], grid[i]))

    interior_maxima = sum(
        1 for i in range(1, len(grid) - 1)
        if values[i] > values[i - 1] and values[i] > values[i + 1]
    )
    if interior_maxima > 1:
        warnings.warn("secrecy-rate profile over mu is not unimodal; "
                      "returning the coarse-grid argmax", stacklevel=2)
        return grid[best_idx], values[best_idx]

    lo = grid[best_idx - 1] if best_idx > 0 else max(grid_step * 0.1, grid[0] * 0.5)
    hi = grid[best_idx + 1] if best_idx + 1 < len(grid) else 1.0
    mu_star, asr_star = _golden_section(objective, lo, hi, refine_tol)
    if values[best_idx] > asr_star:
        mu_star, asr_star = grid[best_idx], values[best_idx]
    # ties toward larger mu: a flat or increasing profile resolves to mu = 1
    if mu_star < 1.0 and values[-1] >= asr_star - 1e-12 * max(1.0, abs(asr_star)):
        return 1.0, values[-1]
    return mu_star, asr_star


def _golden_section(f, lo, hi, tol):
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
        else:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
    mu = d if fd >= fc else c
    return mu, max(fc, fd)


def _sweep_point(cfg: NetworkConfig, spec: SweepSpec) -> SweepRow:
    axis_value = getattr(cfg, spec.axis)
    try:
        if spec.metric is SweepMetric.P_S_MAX:
            region = (max_permissive_power_asymptotic(cfg)
                      if spec.route is SweepRoute.ASYMPTOTIC else max_permissive_power(cfg))
            if not region.feasible:
                return SweepRow(axis_value, math.nan, None, True, "infeasible")
            return SweepRow(axis_value, region.p_s_max, None, False)

        if spec.metric is SweepMetric.PU_OUTAGE:
            p_s, _, violated = resolve_power(cfg)
            if spec.route is SweepRoute.MONTECARLO:
                est = estimate("pu_outage", cfg, spec.snapshots, spec.seed, p_s=p_s)
                return SweepRow(axis_value, est.mean, est.std_error, violated)
            return SweepRow(axis_value, pu_outage(cfg, p_s), None, violated)

        if spec.route is SweepRoute.MONTECARLO:
            est = estimate(spec.metric.value, cfg, spec.snapshots, spec.seed)
            _, _, violated = resolve_power(cfg)
            return SweepRow(axis_value, est.mean, est.std_error, violated)
        if spec.metric is SweepMetric.ASR:
            res = (asr_asymptotic(cfg) if spec.route is SweepRoute.ASYMPTOTIC
                   else average_secrecy_rate(cfg))
        else:
            res = (sop_asymptotic(cfg) if spec.route is SweepRoute.ASYMPTOTIC
                   else secrecy_outage(cfg))
        return SweepRow(axis_value, res.value, None, res.qos_violated)
    except InfeasibleError:
        return SweepRow(axis_value, math.nan, None, True, "infeasible")
    except SecshareError as exc:
        return SweepRow(axis_value, math.nan, None, False, str(exc))


def sweep(cfg: NetworkConfig, spec: SweepSpec) -> list[SweepRow]:
    """Evaluate one metric along one configuration axis.

    Infeasible or QoS-violating points are flagged in their row rather
    than dropped; per-point failures are recorded and the sweep continues.
    Row order follows spec.values.
    """
    rows = []
    for value in spec.values:
        if spec.axis == "n_s":
            value = int(value)
        rows.append(_sweep_point(cfg.with_(**{spec.axis: value}), spec))
    return rows


def antenna_gap(cfg_a: NetworkConfig, cfg_b: NetworkConfig, target_asr: float,
                n_cap: int = 256) -> AntennaGap:
    """Smallest antenna counts reaching the target large-array secrecy rate.

    Returns the per-configuration minima (None when the target stays out of
    reach below n_cap) and their difference.
    """
    if not target_asr > 0.0:
        raise DomainError("target secrecy rate must be positive")
    return AntennaGap(n_a=_min_antennas(cfg_a, target_asr, n_cap),
                      n_b=_min_antennas(cfg_b, target_asr, n_cap))


def _min_antennas(cfg: NetworkConfig, target: float, n_cap: int) -> int | None:
    cache: dict[int, bool] = {}

    def reaches(n: int) -> bool:
        if n not in cache:
            cache[n] = asr_asymptotic(cfg.with_(n_s=n)).value >= target
        return cache[n]

    if reaches(2):
        return 2
    lo, hi = 2, 4
    while not reaches(hi):
        if hi >= n_cap:
            return None
        lo, hi = hi, min(2 * hi, n_cap)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if reaches(mid):
            hi = mid
        else:
            lo = mid
    return hi
