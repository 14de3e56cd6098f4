"""Special functions and quadrature primitives used by the analytical formulas.

Everything here is pure and reentrant.  The two workhorses are
``quad_semi_infinite`` (improper integrals on (0, inf), delegated to
QUADPACK behind a strict tolerance contract) and ``gil_pelaez_cdf``
(numerical CDF inversion of a characteristic function, tuned for the
heavy-tailed interference laws that arise in this package).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import integrate

from .errors import ConvergenceError, DomainError

__all__ = [
    "QuadratureSpec",
    "CharacteristicFunction",
    "gamma_fn",
    "phi_fn",
    "quad_semi_infinite",
    "gil_pelaez_cdf",
    "exp_composite_derivatives",
]


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerance/effort budget for the adaptive quadratures."""

    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_subdivisions: int = 200

    def __post_init__(self):
        if not (self.abs_tol > 0.0 and self.rel_tol > 0.0):
            raise DomainError("quadrature tolerances must be strictly positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be >= 1")


@dataclass(frozen=True)
class CharacteristicFunction:
    """A distribution given through phi(w) = E[exp(-j*w*X)] for w > 0.

    The evaluator returns the complex conjugate of the classical
    characteristic function, i.e. the Laplace transform continued to the
    positive imaginary axis, phi(w) = L_X(jw).  For the interference laws
    used here that is ``exp(-c * (jw)**decay_exponent)`` on the principal
    branch, whose envelope decays like ``exp(-c * cos(pi*rho/2) * w**rho)``
    with ``rho = decay_exponent``.

    ``decay_exponent`` also controls the endpoint regularization: the
    Gil-Pelaez integrand behaves like ``w**(rho-1)`` near w = 0, and the
    substitution w = u**(1/rho) removes that singularity.  Use 1.0 for a
    distribution with a finite mean (no singularity).

    The evaluator must accept numpy arrays of w > 0.
    """

    evaluator: Callable[[np.ndarray], np.ndarray]
    decay_exponent: float = 1.0

    def __post_init__(self):
        if not (0.0 < self.decay_exponent <= 1.0):
            raise DomainError("decay_exponent must lie in (0, 1]")


def gamma_fn(x: float) -> float:
    """Euler Gamma function for x > 0 (relative error well under 1e-12)."""
    if not x > 0.0:
        raise DomainError(f"gamma_fn requires x > 0, got {x!r}")
    return math.gamma(x)


def phi_fn(x: float) -> float:
    """(1/sqrt(pi)) * integral of exp(-t)/sqrt(t) on [0, x**2].

    By the substitution t = u**2 this is the Gauss error function erf(x).
    """
    if x < 0.0:
        raise DomainError(f"phi_fn requires x >= 0, got {x!r}")
    return math.erf(x)


def quad_semi_infinite(
    f: Callable[[float], float],
    spec: QuadratureSpec = QuadratureSpec(),
    *,
    interior_points: Sequence[float] | None = None,
) -> float:
    """Integrate f over (0, inf) to the tolerances in ``spec``.

    QUADPACK's semi-infinite rule maps (0, inf) onto a finite interval and
    subdivides adaptively; an integrable singularity at 0 is allowed.
    ``interior_points`` marks locations of sharp features (spikes, kinks)
    the subdivision should be anchored to.

    Raises ConvergenceError (carrying the best estimate and its error
    bound) if the requested tolerance is not met within
    ``spec.max_subdivisions`` subdivisions per panel.
    """
    value, err = _quad_with_points(f, spec, interior_points)
    if not math.isfinite(value) or err > max(spec.abs_tol, spec.rel_tol * abs(value)) * 10.0:
        raise ConvergenceError("semi-infinite quadrature did not converge", value, err)
    return value


def _quad_with_points(f, spec, interior_points):
    kw = dict(epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions)
    pts = sorted(p for p in (interior_points or ()) if p > 0.0 and math.isfinite(p))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if not pts:
            return integrate.quad(f, 0.0, np.inf, **kw)
        cut = pts[-1] * 10.0
        head, e1 = integrate.quad(f, 0.0, cut, points=[p for p in pts if p < cut], **kw)
        tail, e2 = integrate.quad(f, cut, np.inf, **kw)
    return head + tail, e1 + e2


# 16-point Gauss-Legendre rule used for the half-cycle panels below.
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(16)

# Envelope threshold below which the characteristic function's tail is
# treated as exhausted, and the matching upper bound of the scan.
_ENVELOPE_EPS = 1e-13
_ENVELOPE_SCAN_CAP = 1e14
# At most this many driving half-cycles are handed to a single adaptive
# pass; beyond that the oscillation is summed panel by panel.
_DIRECT_HALF_CYCLES = 12.0
_MAX_PANELS = 4000


def gil_pelaez_cdf(
    cf: CharacteristicFunction,
    point: float,
    spec: QuadratureSpec = QuadratureSpec(),
) -> float:
    """CDF of the distribution behind ``cf`` at ``point``, by Gil-Pelaez inversion.

    Evaluates F(x) = 1/2 - (1/pi) * integral over w > 0 of
    Im[exp(-j*w*x) * phi*(w)] / w, with phi* the complex conjugate of the
    stored evaluator, and clamps the result to [0, 1] after integration.

    The integrand carries a w**(rho-1) endpoint singularity (rho =
    ``cf.decay_exponent``) which is removed by the substitution
    w = u**(1/rho); the region covering the first few driving half-cycles
    is integrated adaptively, and the remaining oscillatory tail is summed
    in half-cycle panels accelerated with Wynn's epsilon algorithm until
    either the envelope is exhausted or the extrapolation settles.

    Raises ConvergenceError when the oscillatory tail fails to settle.
    """
    if not math.isfinite(point):
        raise DomainError("inversion point must be finite")
    x = float(point)
    phi = cf.evaluator
    rho = cf.decay_exponent

    def integrand(w: np.ndarray) -> np.ndarray:
        return np.imag(np.exp(-1j * w * x) * np.conj(phi(w))) / w

    w_env = _envelope_cutoff(phi)
    half_cycle = math.pi / abs(x) if x != 0.0 else math.inf
    w_direct = min(w_env if w_env is not None else math.inf,
                   _DIRECT_HALF_CYCLES * half_cycle)
    if not math.isfinite(w_direct):
        # zero point and non-decaying envelope: nothing to integrate against
        raise ConvergenceError("characteristic function envelope never decays", 0.5, math.inf)

    head, head_err = _quad_desingularized(integrand, rho, w_direct, spec)
    if w_env is not None and w_direct >= w_env:
        value = head
        err = head_err + _ENVELOPE_EPS
    else:
        tail, tail_err = _oscillatory_tail(integrand, phi, w_direct, half_cycle, w_env, spec)
        value = head + tail
        err = head_err + tail_err

    result = 0.5 - value / math.pi
    return min(1.0, max(0.0, result))


def _envelope_cutoff(phi) -> float | None:
    """Smallest w (geometric scan) where |phi| has decayed to the noise floor."""
    w = 1e-3
    while w < _ENVELOPE_SCAN_CAP:
        if abs(complex(phi(np.array([w]))[0])) < _ENVELOPE_EPS:
            return w
        w *= 2.0
    return None


def _quad_desingularized(integrand, rho, w_hi, spec):
    """Adaptive integral of the Gil-Pelaez integrand on (0, w_hi], u = w**rho."""
    inv_rho = 1.0 / rho

    def g(u: float) -> float:
        w = u ** inv_rho
        return float(integrand(np.array([w]))[0]) * inv_rho * u ** (inv_rho - 1.0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        val, err = integrate.quad(
            g, 0.0, w_hi ** rho,
            epsabs=spec.abs_tol * 0.5, epsrel=spec.rel_tol * 0.5,
            limit=max(spec.max_subdivisions, 400),
        )
    return val, err


def _oscillatory_tail(integrand, phi, w_start, half_cycle, w_env, spec):
    """Half-cycle panel sums from w_start, extrapolated by Wynn's epsilon."""
    tol = max(spec.abs_tol, 1e-12)
    partial_sums: list[float] = []
    total = 0.0
    k = 0
    best, err = math.nan, math.inf
    while k < _MAX_PANELS:
        a = w_start + k * half_cycle
        b = a + half_cycle
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        nodes = mid + half * _GL_NODES
        total += half * float(np.dot(_GL_WEIGHTS, integrand(nodes)))
        partial_sums.append(total)
        k += 1
        if w_env is not None and b >= w_env:
            return total, _ENVELOPE_EPS
        if k >= 10 and k % 4 == 0:
            best, err = _wynn_epsilon(partial_sums[-24:])
            if err < tol * 0.1:
                return best, err
    raise ConvergenceError(
        "oscillatory Gil-Pelaez tail failed to converge",
        0.5 - (best if math.isfinite(best) else total) / math.pi,
        err,
    )


def _wynn_epsilon(sums: Sequence[float]) -> tuple[float, float]:
    """Wynn epsilon extrapolation of a sequence of partial sums."""
    prev = np.zeros(len(sums) + 1)
    cur = np.asarray(sums, dtype=float)
    even_estimates = [cur[-1]]
    k = 1
    while cur.size > 1:
        nxt = np.empty(cur.size - 1)
        for i in range(cur.size - 1):
            d = cur[i + 1] - cur[i]
            nxt[i] = prev[i + 1] + (1.0 / d if d != 0.0 else 0.0)
        prev, cur = cur, nxt
        if k % 2 == 0 and cur.size:
            even_estimates.append(cur[-1])
        k += 1
    if len(even_estimates) < 2:
        return even_estimates[-1], math.inf
    return even_estimates[-1], abs(even_estimates[-1] - even_estimates[-2])


def exp_composite_derivatives(c: float, p: float, x: float, m_max: int) -> list[float]:
    """Derivatives d^m/dx^m exp(c * x**p) for m = 0..m_max.

    Uses the Leibniz recurrence f^(m) = sum_k C(m-1,k) g^(m-k) f^(k) with
    g(x) = c*x**p.  For c < 0 and 0 < p < 1 every product in the recurrence
    shares the sign (-1)**m, so the recurrence accumulates same-sign terms
    and stays forward stable.
    """
    if not x > 0.0:
        raise DomainError(f"exp_composite_derivatives requires x > 0, got {x!r}")
    if m_max < 0:
        raise DomainError("m_max must be >= 0")
    # g^(j)(x) = c * p*(p-1)*...*(p-j+1) * x**(p-j); overflow saturates to
    # +-inf so callers' range guards can report the failing order
    g = [0.0] * (m_max + 1)
    falling = 1.0
    for j in range(1, m_max + 1):
        falling *= p - (j - 1)
        try:
            power = x ** (p - j)
        except OverflowError:
            power = math.inf
        g[j] = c * falling * power
    f = [0.0] * (m_max + 1)
    f[0] = math.exp(c * x ** p)
    for m in range(1, m_max + 1):
        f[m] = math.fsum(math.comb(m - 1, k) * g[m - k] * f[k] for k in range(m))
    return f
