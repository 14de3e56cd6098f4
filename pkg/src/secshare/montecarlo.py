"""Ground-truth stochastic-geometry simulator.

Fields are homogeneous Poisson point processes on a disk of radius R
around the origin; the typical transmitter-receiver pair is added on top
of the process (Slivnyak), so the drawn points are exactly the
interferers.  Per-interferer fading enters through the scalar weights
validated against full vector channels in the test suite:
|h.w|^2 ~ Exp(1) and ||h G||^2 ~ Gamma(n_s - 1, 1).

Determinism: every block of ``BLOCK`` consecutive snapshots owns a PCG64
stream derived from SeedSequence(seed, spawn_key=(stream, block)), and
estimates reduce the per-snapshot values in snapshot order with exact
(compensated) summation, so a (cfg, metric, n, seed) tuple yields
bit-identical results for any worker count.  Bulk draws use float32
(statistically irrelevant at Monte Carlo precision; all interference
sums accumulate in float64 in a fixed order).
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg

from .errors import DegenerateFieldError, DomainError, ResourceLimitError
from .model import NetworkConfig, lambda_l
from .power import resolve_power

__all__ = [
    "BLOCK",
    "POINT_COUNT_CAP",
    "FieldSnapshot",
    "McEstimate",
    "default_radius",
    "sample_hppp",
    "null_space_basis",
    "field_snapshot",
    "su_sir_snapshot",
    "eve_sir_snapshot",
    "pu_sir_snapshot",
    "sir_samples",
    "estimate",
]

# Snapshots per RNG stream; fixed so that results never depend on how the
# blocks are distributed over workers.
BLOCK = 64
POINT_COUNT_CAP = 10_000_000

# Eavesdroppers whose winning probability at the SIR floor is below this
# are outside the kept disk (see _eve_keep_radius).
_EVE_TAIL_EPS = 1e-8
_EVE_SIR_FLOOR = 1e-3

# squared-distance floor: one micrometre, guards exact point collisions
_D_SQ_FLOOR = 1e-12

_F32 = np.float32

_STREAM_SU = 1
_STREAM_EVE = 2
_STREAM_PU = 3


@dataclass(frozen=True)
class FieldSnapshot:
    """One full-fidelity realization of the three point fields."""

    su_points: np.ndarray      # (k_s, 2) metres
    pu_points: np.ndarray      # (k_p, 2)
    eve_points: np.ndarray     # (k_e, 2)
    su_weights: np.ndarray     # per-SU interference weight, watts
    pu_gains: np.ndarray       # per-PU |h|^2 ~ Exp(1)
    intended_gain: float       # ||h_0||^2 ~ Gamma(n_s, 1)
    radius_m: float


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    n: int
    seed: int
    radius_m: float
    redraws: int = 0
    label: str = field(default="", compare=False)


def default_radius(cfg: NetworkConfig, include_eves: bool = True) -> float:
    """Disk truncation radius; the far-field remainder scales as R**(2-alpha).

    R = max(30/sqrt(lambda_min), 10*max(r_p, r_s)) over the densities in play.
    """
    densities = [cfg.lambda_s, cfg.lambda_p] + ([cfg.lambda_e] if include_eves else [])
    lam_min = min(d for d in densities if d > 0.0)
    return max(30.0 / math.sqrt(lam_min), 10.0 * max(cfg.r_p, cfg.r_s))


def _check_cap(density: float, radius: float) -> float:
    mean_count = density * math.pi * radius * radius
    if mean_count > POINT_COUNT_CAP:
        raise ResourceLimitError(
            f"expected point count {mean_count:.3g} exceeds cap {POINT_COUNT_CAP:g}"
        )
    return mean_count


def sample_hppp(density: float, radius: float, rng: np.random.Generator) -> np.ndarray:
    """Poisson(density * pi * R^2) points uniform on the disk, as an (n, 2) array."""
    if not density > 0.0:
        raise DomainError("density must be positive")
    if not radius > 0.0:
        raise DomainError("radius must be positive")
    mean_count = _check_cap(density, radius)
    n = int(rng.poisson(mean_count))
    r = radius * np.sqrt(rng.random(n))
    t = 2.0 * math.pi * rng.random(n)
    return np.column_stack((r * np.cos(t), r * np.sin(t)))


def null_space_basis(h: np.ndarray) -> np.ndarray:
    """Orthonormal n_s x (n_s - 1) basis of the null space of the row vector h."""
    h = np.asarray(h, dtype=complex).reshape(-1)
    n = h.size
    if n < 2:
        raise DomainError("null_space_basis requires n_s >= 2")
    norm = np.linalg.norm(h)
    if norm == 0.0:
        raise DomainError("cannot build a null-space basis for the zero vector")
    basis = linalg.null_space(h[None, :])
    if basis.shape != (n, n - 1):
        raise DomainError("unexpected null-space dimension")
    return basis


def _pathloss_from_sq(d_sq: np.ndarray, alpha: float, out: np.ndarray | None = None) -> np.ndarray:
    # d**-alpha from squared distances, avoiding np.power for common alphas
    if out is None:
        out = np.empty_like(d_sq)
    if alpha == 4.0:
        np.multiply(d_sq, d_sq, out=out)
        np.divide(1.0, out, out=out)
        return out
    if alpha == 3.0:
        np.sqrt(d_sq, out=out)
        np.multiply(out, d_sq, out=out)
        np.divide(1.0, out, out=out)
        return out
    np.power(d_sq, -0.5 * alpha, out=out)
    return out


def _sigma_pair(cfg: NetworkConfig, p_s: float) -> tuple[float, float]:
    sigma_s_sq = cfg.mu * p_s
    sigma_n_sq = (p_s - sigma_s_sq) / (cfg.n_s - 1) if cfg.n_s > 1 else 0.0
    return sigma_s_sq, sigma_n_sq


def _su_weights32(rng, count, sigma_s_sq, sigma_n_sq, n_s):
    w = rng.standard_exponential(count, dtype=_F32)
    w *= _F32(sigma_s_sq)
    if sigma_n_sq > 0.0:
        if n_s == 2:
            an = rng.standard_exponential(count, dtype=_F32)
        else:
            an = rng.standard_gamma(n_s - 1.0, count, dtype=_F32)
        an *= _F32(sigma_n_sq)
        w += an
    return w


def field_snapshot(cfg: NetworkConfig, rng: np.random.Generator,
                   radius: float | None = None, p_s: float | None = None) -> FieldSnapshot:
    """Draw one complete field realization (positions, weights, gains)."""
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    radius = default_radius(cfg) if radius is None else float(radius)
    su = sample_hppp(cfg.lambda_s, radius, rng)
    pu = sample_hppp(cfg.lambda_p, radius, rng)
    eve = sample_hppp(cfg.lambda_e, radius, rng)
    sigma_s_sq, sigma_n_sq = _sigma_pair(cfg, p_s)
    weights = sigma_s_sq * rng.standard_exponential(su.shape[0])
    if sigma_n_sq > 0.0:
        weights = weights + sigma_n_sq * rng.standard_gamma(cfg.n_s - 1.0, su.shape[0])
    return FieldSnapshot(
        su_points=su,
        pu_points=pu,
        eve_points=eve,
        su_weights=weights,
        pu_gains=rng.standard_exponential(pu.shape[0]),
        intended_gain=float(rng.standard_gamma(float(cfg.n_s))),
        radius_m=radius,
    )


# ---------------------------------------------------------------------------
# block kernels: each draws `nb` independent snapshots from one stream
# ---------------------------------------------------------------------------

def _counts_offsets(rng, density, radius, nb):
    counts = rng.poisson(density * math.pi * radius * radius, nb)
    offsets = np.concatenate(([0], np.cumsum(counts)))
    return counts, offsets


def _segment_sums(terms: np.ndarray, counts: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    total = int(offsets[-1])
    if total == 0:
        return np.zeros(counts.size)
    # clipped duplicate offsets mark empty segments; they are masked below
    cut = np.minimum(offsets[:-1], total - 1)
    sums = np.add.reduceat(terms, cut)
    return np.where(counts > 0, sums, 0.0)


def _origin_interference(rng, density, radius, nb, alpha, weight_draw):
    """Per-snapshot sums of weight * r**-alpha for a field seen from the origin.

    Squared radii stay float64: quantizing r**2 at absolute resolution
    R**2 * 2**-24 would distort the dominant near-field terms.
    """
    counts, offsets = _counts_offsets(rng, density, radius, nb)
    total = int(offsets[-1])
    r_sq = rng.random(total)
    r_sq *= radius * radius
    np.maximum(r_sq, _D_SQ_FLOOR, out=r_sq)
    terms = _pathloss_from_sq(r_sq, alpha)
    terms *= weight_draw(total)
    return _segment_sums(terms, counts, offsets)


def _su_block(cfg, p_s, rng, nb, radius):
    """nb secondary-receiver SIR samples (receiver at the origin)."""
    _check_cap(cfg.lambda_s, radius)
    _check_cap(cfg.lambda_p, radius)
    sigma_s_sq, sigma_n_sq = _sigma_pair(cfg, p_s)
    alpha = cfg.alpha
    i_su = _origin_interference(
        rng, cfg.lambda_s, radius, nb, alpha,
        lambda total: _su_weights32(rng, total, sigma_s_sq, sigma_n_sq, cfg.n_s))
    i_pu = _origin_interference(
        rng, cfg.lambda_p, radius, nb, alpha,
        lambda total: rng.standard_exponential(total, dtype=_F32))
    numer = sigma_s_sq * rng.standard_gamma(float(cfg.n_s), nb) * cfg.r_s ** -alpha
    with np.errstate(divide="ignore"):  # empty fields flow to the redraw path
        return numer / (i_su + cfg.p_p * i_pu)


def _pu_block(cfg, p_s, rng, nb, radius):
    """nb primary-receiver SIR samples."""
    _check_cap(cfg.lambda_s, radius)
    _check_cap(cfg.lambda_p, radius)
    sigma_s_sq, sigma_n_sq = _sigma_pair(cfg, p_s)
    alpha = cfg.alpha
    i_pu = _origin_interference(
        rng, cfg.lambda_p, radius, nb, alpha,
        lambda total: rng.standard_exponential(total, dtype=_F32))
    i_su = _origin_interference(
        rng, cfg.lambda_s, radius, nb, alpha,
        lambda total: _su_weights32(rng, total, sigma_s_sq, sigma_n_sq, cfg.n_s))
    numer = rng.standard_exponential(nb) * cfg.r_p ** -alpha
    with np.errstate(divide="ignore"):  # empty fields flow to the redraw path
        return numer / (i_pu + i_su / cfg.p_p)


def _eve_keep_radius(cfg: NetworkConfig, p_s: float, radius: float) -> float:
    """Disk inside which every eavesdropper is evaluated exactly.

    Beyond it the chance that any eavesdropper ever beats the SIR floor is
    below _EVE_TAIL_EPS in expectation: the per-eavesdropper win
    probability at distance d is bounded by exp(-Lambda_l * floor**(2/alpha) * d**2).
    A doubled-radius insensitivity check lives in the test suite.
    """
    lam = lambda_l(cfg, p_s=p_s)
    decay = lam * _EVE_SIR_FLOOR ** (2.0 / cfg.alpha)
    tail = math.pi * cfg.lambda_e / (decay * _EVE_TAIL_EPS)
    if tail <= 1.0:
        return min(radius, 10.0 * cfg.r_s)
    return min(radius, math.sqrt(1.5 * math.log(tail) / decay))


def _disk_positions32(rng, counts, offsets, radius):
    """Uniform disk positions (flat, per-snapshot segments) by rejection in f32."""
    total = int(offsets[-1])
    xs = np.empty(total, dtype=_F32)
    ys = np.empty(total, dtype=_F32)
    r32 = _F32(radius)
    r_sq32 = _F32(radius) * _F32(radius)
    have = 0
    while have < total:
        want = total - have
        m = int(want * 1.35) + 16
        cx = rng.random(m, dtype=_F32)
        cx *= 2.0 * r32
        cx -= r32
        cy = rng.random(m, dtype=_F32)
        cy *= 2.0 * r32
        cy -= r32
        keep = cx * cx + cy * cy <= r_sq32
        kx, ky = cx[keep], cy[keep]
        take = min(want, kx.size)
        xs[have:have + take] = kx[:take]
        ys[have:have + take] = ky[:take]
        have += take
    return xs, ys


def _eve_block(cfg, p_s, rng, nb, radius, keep_radius=None):
    """nb samples of the max-SIR eavesdropper (0.0 when no eavesdropper present).

    Interference is evaluated exactly for every eavesdropper inside the
    kept disk; outside it an eavesdropper's SIR cannot reach the floor
    (see _eve_keep_radius), so the max is unaffected at estimator scale.
    """
    _check_cap(cfg.lambda_s, radius)
    _check_cap(cfg.lambda_p, radius)
    _check_cap(cfg.lambda_e, radius)
    sigma_s_sq, sigma_n_sq = _sigma_pair(cfg, p_s)
    alpha = cfg.alpha
    r_keep = _eve_keep_radius(cfg, p_s, radius) if keep_radius is None else keep_radius

    ce, oe = _counts_offsets(rng, cfg.lambda_e, r_keep, nb)
    xe, ye = _disk_positions32(rng, ce, oe, r_keep)
    cs, os_ = _counts_offsets(rng, cfg.lambda_s, radius, nb)
    xs, ys = _disk_positions32(rng, cs, os_, radius)
    cp, op = _counts_offsets(rng, cfg.lambda_p, radius, nb)
    xp, yp = _disk_positions32(rng, cp, op, radius)

    w_su = _su_weights32(rng, xs.size, sigma_s_sq, sigma_n_sq, cfg.n_s)
    g_pu = rng.standard_exponential(xp.size, dtype=_F32)
    g_pu *= _F32(cfg.p_p)
    own = sigma_s_sq * rng.standard_exponential(xe.size)
    if sigma_n_sq > 0.0 and xe.size:
        an = sigma_n_sq * rng.standard_gamma(cfg.n_s - 1.0, xe.size)
    else:
        an = np.zeros(xe.size)

    k_max = int(ce.max()) if nb else 0
    n_max = int(max(cs.max() if nb else 0, cp.max() if nb else 0))
    scratch = np.empty((max(k_max, 1), max(n_max, 1)), dtype=_F32)
    scratch2 = np.empty_like(scratch)

    out = np.zeros(nb)
    for i in range(nb):
        k = int(ce[i])
        if k == 0:
            continue
        se = slice(oe[i], oe[i + 1])
        ex, ey = xe[se], ye[se]
        interference = _field_at(ex, ey, xs, ys, w_su, os_[i], os_[i + 1],
                                 alpha, scratch, scratch2)
        interference += _field_at(ex, ey, xp, yp, g_pu, op[i], op[i + 1],
                                  alpha, scratch, scratch2)
        d_own = np.maximum(ex.astype(np.float64) ** 2 + ey.astype(np.float64) ** 2,
                           _D_SQ_FLOOR)
        own_pl = _pathloss_from_sq(d_own, alpha)
        with np.errstate(divide="ignore"):  # empty fields flow to the redraw path
            sir = own[se] * own_pl / (interference + an[se] * own_pl)
        out[i] = float(np.max(sir))
    return out


def _field_at(ex, ey, xs, ys, weights, lo, hi, alpha, scratch, scratch2):
    """Sum of weights * distance**-alpha from one field segment to each (ex, ey)."""
    n = int(hi - lo)
    k = ex.size
    if n == 0:
        return np.zeros(k)
    d2 = scratch[:k, :n]
    t = scratch2[:k, :n]
    np.subtract(xs[None, lo:hi], ex[:, None], out=d2)
    np.multiply(d2, d2, out=d2)
    np.subtract(ys[None, lo:hi], ey[:, None], out=t)
    np.multiply(t, t, out=t)
    d2 += t
    np.maximum(d2, _F32(_D_SQ_FLOOR), out=d2)
    _pathloss_from_sq(d2, alpha, out=d2)
    d2 *= weights[None, lo:hi]
    return d2.sum(axis=1, dtype=np.float64)


def _redraw_invalid(values, kernel, max_redraws):
    """Re-run single snapshots whose interference field came up empty."""
    redraws = 0
    bad = np.flatnonzero(~np.isfinite(values))
    for idx in bad:
        ok = False
        for _ in range(max_redraws):
            redraws += 1
            v = kernel(1)[0]
            if math.isfinite(v):
                values[idx] = v
                ok = True
                break
        if not ok:
            raise DegenerateFieldError(
                "interference field repeatedly empty; densities or radius too small"
            )
    return values, redraws


# ---------------------------------------------------------------------------
# public scalar snapshots
# ---------------------------------------------------------------------------

def _scalar_snapshot(block_kernel, cfg, p_s, rng, radius, max_redraws):
    values = block_kernel(cfg, p_s, rng, 1, radius)
    if math.isfinite(values[0]):
        return float(values[0])
    if max_redraws <= 0:
        raise DegenerateFieldError("empty interference field and re-drawing disabled")
    values, _ = _redraw_invalid(values, lambda nb: block_kernel(cfg, p_s, rng, nb, radius), max_redraws)
    return float(values[0])


def su_sir_snapshot(cfg: NetworkConfig, rng: np.random.Generator,
                    radius: float | None = None, p_s: float | None = None,
                    max_redraws: int = 100) -> float:
    """One SIR sample at the typical secondary receiver."""
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    radius = default_radius(cfg, include_eves=False) if radius is None else float(radius)
    return _scalar_snapshot(_su_block, cfg, p_s, rng, radius, max_redraws)


def pu_sir_snapshot(cfg: NetworkConfig, p_s: float, rng: np.random.Generator,
                    radius: float | None = None, max_redraws: int = 100) -> float:
    """One SIR sample at the typical primary receiver for secondary power p_s."""
    if not p_s > 0.0:
        raise DomainError("p_s must be positive")
    radius = default_radius(cfg, include_eves=False) if radius is None else float(radius)
    return _scalar_snapshot(_pu_block, cfg, p_s, rng, radius, max_redraws)


def eve_sir_snapshot(cfg: NetworkConfig, rng: np.random.Generator,
                     radius: float | None = None, p_s: float | None = None,
                     max_redraws: int = 100) -> float:
    """One sample of the strongest eavesdropper's SIR (0.0 with no eavesdropper)."""
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    radius = default_radius(cfg) if radius is None else float(radius)
    return _scalar_snapshot(_eve_block, cfg, p_s, rng, radius, max_redraws)


# ---------------------------------------------------------------------------
# estimator
# ---------------------------------------------------------------------------

_KERNELS = {"su": (_su_block, _STREAM_SU), "eve": (_eve_block, _STREAM_EVE),
            "pu": (_pu_block, _STREAM_PU)}


def _block_rng(seed: int, stream: int, block: int) -> np.random.Generator:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(stream, block))
    return np.random.Generator(np.random.PCG64(ss))


def _run_blocks(kind, cfg, p_s, seed, n, radius, lo, hi):
    kernel, stream = _KERNELS[kind]
    chunks = []
    redraws = 0
    for b in range(lo, hi):
        nb = min(BLOCK, n - b * BLOCK)
        rng = _block_rng(seed, stream, b)
        values = kernel(cfg, p_s, rng, nb, radius)
        values, extra = _redraw_invalid(
            values, lambda m: kernel(cfg, p_s, rng, m, radius), 100)
        redraws += extra
        chunks.append(values)
    return np.concatenate(chunks) if chunks else np.empty(0), redraws


def _worker_count(n_blocks: int) -> int:
    env = os.environ.get("SECRECY_THREADS", "")
    try:
        cap = int(env) if env else (os.cpu_count() or 1)
    except ValueError:
        cap = os.cpu_count() or 1
    return max(1, min(cap, n_blocks))


def _collect_multi(kinds: list[str], cfg: NetworkConfig, p_s: float, seed: int,
                   n: int, radii: dict[str, float]) -> dict[str, tuple[np.ndarray, int]]:
    """Run all requested sample kinds, sharing one worker pool across them."""
    n_blocks = (n + BLOCK - 1) // BLOCK
    workers = _worker_count(n_blocks * len(kinds))
    if workers == 1 or n < 8 * BLOCK:
        return {k: _run_blocks(k, cfg, p_s, seed, n, radii[k], 0, n_blocks) for k in kinds}
    jobs = []
    pieces = max(workers, min(8, n_blocks))
    bounds = np.linspace(0, n_blocks, pieces + 1, dtype=int)
    for kind in kinds:
        jobs += [(kind, cfg, p_s, seed, n, radii[kind], int(bounds[i]), int(bounds[i + 1]))
                 for i in range(pieces) if bounds[i] < bounds[i + 1]]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_run_blocks_star, jobs))
    out = {}
    for kind in kinds:
        mine = [p for job, p in zip(jobs, parts) if job[0] == kind]
        out[kind] = (np.concatenate([p[0] for p in mine]), sum(p[1] for p in mine))
    return out


def _collect(kind: str, cfg: NetworkConfig, p_s: float, seed: int, n: int,
             radius: float) -> tuple[np.ndarray, int]:
    return _collect_multi([kind], cfg, p_s, seed, n, {kind: radius})[kind]


def _run_blocks_star(args):
    return _run_blocks(*args)


def sir_samples(kind: str, cfg: NetworkConfig, n: int, seed: int,
                radius: float | None = None, p_s: float | None = None) -> np.ndarray:
    """n deterministic SIR samples of kind 'su', 'eve', or 'pu'."""
    if kind not in _KERNELS:
        raise DomainError(f"unknown sample kind {kind!r}")
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)
    if radius is None:
        radius = default_radius(cfg, include_eves=(kind == "eve"))
    values, _ = _collect(kind, cfg, p_s, seed, n, radius)
    return values


def _moments(values: np.ndarray) -> tuple[float, float]:
    n = values.size
    mean = math.fsum(values) / n
    if n < 2:
        return mean, math.inf
    var = math.fsum((values - mean) ** 2) / (n - 1)
    return mean, math.sqrt(var / n)


def estimate(metric: str, cfg: NetworkConfig, n: int, seed: int, *,
             gamma_grid=None, r_s: float | None = None, p_s: float | None = None,
             radius: float | None = None):
    """Monte Carlo estimator for one closed-form quantity.

    metric: 'cdf_su' | 'cdf_eve' (gamma_grid required; returns a list of
    McEstimate, one per grid point) | 'asr' | 'sop' | 'pu_outage'.
    'asr' and 'sop' pair independent secondary and eavesdropper snapshots,
    matching the independent-marginals definition of the secrecy rate.
    Deterministic for fixed (cfg, metric, n, seed) at any worker count.
    """
    if n < 1000:
        raise DomainError("estimates need n >= 1000 snapshots")
    if p_s is None:
        p_s, _, _ = resolve_power(cfg)

    if metric in ("cdf_su", "cdf_eve"):
        if gamma_grid is None or len(gamma_grid) == 0:
            raise DomainError(f"{metric} requires a gamma_grid")
        kind = "su" if metric == "cdf_su" else "eve"
        rad = default_radius(cfg, include_eves=(kind == "eve")) if radius is None else radius
        values, redraws = _collect(kind, cfg, p_s, seed, n, rad)
        out = []
        for g in gamma_grid:
            mean, se = _moments((values <= g).astype(float))
            out.append(McEstimate(mean=mean, std_error=se, n=n, seed=seed,
                                  radius_m=rad, redraws=redraws, label=f"gamma={g:g}"))
        return out

    if metric in ("asr", "sop"):
        rad = default_radius(cfg) if radius is None else radius
        both = _collect_multi(["su", "eve"], cfg, p_s, seed, n, {"su": rad, "eve": rad})
        su, r1 = both["su"]
        eve, r2 = both["eve"]
        if metric == "asr":
            rate = np.maximum(0.0, np.log2((1.0 + su) / (1.0 + eve)))
            mean, se = _moments(rate)
            label = "asr"
        else:
            target = cfg.r_s_rate if r_s is None else float(r_s)
            outage = (np.log2((1.0 + su) / (1.0 + eve)) < target).astype(float)
            mean, se = _moments(outage)
            label = f"sop@{target:g}"
        return McEstimate(mean=mean, std_error=se, n=n, seed=seed, radius_m=rad,
                          redraws=r1 + r2, label=label)

    if metric == "pu_outage":
        rad = default_radius(cfg, include_eves=False) if radius is None else radius
        values, redraws = _collect("pu", cfg, p_s, seed, n, rad)
        mean, se = _moments((values < cfg.gamma_th_p).astype(float))
        return McEstimate(mean=mean, std_error=se, n=n, seed=seed, radius_m=rad,
                          redraws=redraws, label="pu_outage")

    raise DomainError(f"unknown metric {metric!r}")
