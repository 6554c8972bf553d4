"""Analytic blockage model: single- and multi-obstacle blockage probabilities,
busy-period statistics of the merged shadow process on the cone base, the
combined per-link blockage probability with its two bounds, and the resulting
active-interferer count distribution.

The shadow process treats the projections of the obstacle circles onto the
cone base as Poisson arrivals served concurrently (infinite servers); merged
overlapping shadows are the busy periods of that queue.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .geometry import Disk, ReceiverAnchor, distance_pdf
from .numerics import QuadratureSpec, erf, integrate, lgamma

__all__ = [
    "BlockageParams",
    "BlockageResult",
    "mean_distance",
    "pb1",
    "mean_shadow",
    "busy_period_from_moments",
    "busy_period_stats",
    "pb2",
    "pb",
    "blockage_result",
    "active_count_pgf",
    "active_count_pmf",
]

_QUAD = QuadratureSpec(abs_tol=1e-11, rel_tol=1e-10, max_subdivisions=4000)


@dataclass(frozen=True)
class BlockageParams:
    """Geometry and obstacle-field parameters of the blockage model.

    rho is the obstacle density; theta the beam half-angle (radians); ds/de
    the obstacle radius range; R the deployment radius; v0_norm the receiver
    offset from the center.
    """

    rho: float
    theta: float
    ds: float
    de: float
    R: float
    v0_norm: float

    def __post_init__(self):
        if self.rho < 0:
            raise DomainError("rho must be >= 0")
        if not (0 < self.theta < math.pi / 2):
            raise DomainError("theta must lie in (0, pi/2)")
        if not (0 < self.ds <= self.de):
            raise DomainError("obstacle radii must satisfy 0 < ds <= de")
        if not (0 <= self.v0_norm < self.R):
            raise DomainError("receiver offset must satisfy 0 <= v0 < R")

    @property
    def mean_radius(self) -> float:
        return 0.5 * (self.ds + self.de)

    def _geometry(self):
        return Disk(self.R), ReceiverAnchor(self.v0_norm, 1.0)


@dataclass(frozen=True)
class BlockageResult:
    """Full record of one blockage-model evaluation."""

    pb1: float
    pb2_lower: float
    pb2_upper: float
    pb_lower: float
    pb_upper: float
    mean_shadow: float
    mean_busy: float
    n_res_lower: float
    n_res_upper: float
    mean_dist: float
    mean_radius: float
    clamped: bool


def mean_distance(params: BlockageParams) -> float:
    """Mean AP-receiver distance E[l] under the disk distance density."""
    disk, anchor = params._geometry()
    return integrate(
        lambda l: l * distance_pdf(l, disk, anchor), 0.0, params.R + params.v0_norm, _QUAD
    )


def pb1(params: BlockageParams) -> float:
    """Blockage probability in the single-obstacle regime, averaged over the
    uniform obstacle radius; 0 in the rho -> 0 limit."""
    rho, t = params.rho, math.tan(params.theta)
    if rho == 0:
        return 0.0
    ds, de = params.ds, params.de
    if de == ds:
        # degenerate uniform radius: single-obstacle conditional form
        return 1.0 - math.exp(-rho * ds * ds / t)
    pref = math.sqrt(math.pi * t / rho) / (2.0 * (de - ds))
    return 1.0 - pref * (erf(de * math.sqrt(rho / t)) - erf(ds * math.sqrt(rho / t)))


def mean_shadow(params: BlockageParams) -> float:
    """Mean projected shadow length E[2 d l / r] over obstacle radius, axial
    position (uniform on [0, l]) and link distance, restricted to the
    multi-obstacle regime r > d/tan(theta).

    The inner axial integral is analytic (2 d log(l tan/_d)), leaving a 2-D
    quadrature over d and l. Returns 0 when the region is empty.
    """
    t = math.tan(params.theta)
    disk, anchor = params._geometry()
    lmax = params.R + params.v0_norm

    def inner(d_nodes):
        out = np.zeros_like(d_nodes)
        for i, d in enumerate(d_nodes):
            lmin = d / t
            if lmin >= lmax:
                continue
            out[i] = integrate(
                lambda l, _d=d: distance_pdf(l, disk, anchor) * np.log(l * t / _d),
                lmin,
                lmax,
                _QUAD,
            )
        return 2.0 * d_nodes * out / (params.de - params.ds) if params.de > params.ds else 2.0 * d_nodes * out

    if params.de == params.ds:
        d = params.ds
        lmin = d / t
        if lmin >= lmax:
            return 0.0
        return 2.0 * d * integrate(
            lambda l: distance_pdf(l, disk, anchor) * np.log(l * t / d), lmin, lmax, _QUAD
        )
    return integrate(inner, params.ds, params.de, _QUAD)


def busy_period_from_moments(rho: float, mean_shadow_m: float, mean_dist_m: float, theta: float):
    """Busy-period mean and the two bounds on the merged-shadow count, from
    already-computed moments. rho -> 0 limits: (E[S], 1, 1)."""
    t = math.tan(theta)
    if rho == 0:
        return mean_shadow_m, 1.0, 1.0
    mean_busy = math.expm1(rho * mean_shadow_m) / rho
    base = 2.0 * rho * mean_dist_m * t
    n_upper = 1.0 + base
    n_lower = math.exp(-rho * mean_shadow_m) * (1.0 + base)
    return mean_busy, n_lower, n_upper


def busy_period_stats(params: BlockageParams):
    """(mean busy length, n_res lower bound, n_res upper bound)."""
    return busy_period_from_moments(
        params.rho, mean_shadow(params), mean_distance(params), params.theta
    )


def _ceil_snap(x: float) -> int:
    # ceiling that treats float fuzz around an exact integer as that integer
    r = round(x)
    if abs(x - r) < 1e-9:
        return max(int(r), 1)
    return max(int(math.ceil(x)), 1)


def pb2(params: BlockageParams, n_res: float) -> float:
    """Probability that the merged shadows fully cover the base: Poisson pmf
    of the shadow count evaluated at ceil(base length / mean busy length)."""
    if not n_res > 0:
        raise DomainError("n_res must be positive")
    mean_busy, _, _ = busy_period_stats(params)
    if mean_busy == 0:
        raise DomainError("mean busy period is zero; shadow process degenerate")
    kappa = 2.0 * mean_distance(params) * math.tan(params.theta) / mean_busy
    k = _ceil_snap(kappa)
    return math.exp(k * math.log(n_res) - n_res - lgamma(k + 1.0))


def _pb2_from_moments(n_res: float, kappa: float) -> float:
    k = _ceil_snap(kappa)
    return math.exp(k * math.log(n_res) - n_res - lgamma(k + 1.0))


def _mix(params: BlockageParams, p1: float, p2: float, mean_dist_m: float, weighting: str):
    """Combine the two regime probabilities. 'probability' derives the regime
    weights from the uniform axial position (r <= E[d]/tan given l ~ E[l]);
    'literal' applies the printed reciprocal-length weights and clamps."""
    single_span = params.mean_radius / math.tan(params.theta)
    if mean_dist_m <= single_span:
        raise DomainError(
            "mean link length does not exceed the single-obstacle span; "
            "configuration rejected"
        )
    if weighting == "probability":
        w1 = min(1.0, single_span / mean_dist_m)
        w2 = 1.0 - w1
    elif weighting == "literal":
        w1 = 1.0 / single_span
        w2 = 1.0 / (mean_dist_m - single_span)
    else:
        raise DomainError(f"unknown weighting {weighting!r}")
    raw = w1 * p1 + w2 * p2
    clamped = not 0.0 <= raw <= 1.0
    return min(max(raw, 0.0), 1.0), w1, w2, clamped


def blockage_result(params: BlockageParams, weighting: str = "probability") -> BlockageResult:
    """Evaluate the full blockage model once (all moments, bounds, mixture)."""
    e_len = mean_distance(params)
    e_shadow = mean_shadow(params)
    mean_busy, n_lo, n_hi = busy_period_from_moments(
        params.rho, e_shadow, e_len, params.theta
    )
    if params.rho == 0:
        # no obstacles: blockage impossible; the Poisson-shadow pmf premise
        # is vacuous, so short-circuit instead of evaluating it
        _mix(params, 0.0, 0.0, e_len, weighting)  # still validate geometry
        return BlockageResult(
            pb1=0.0, pb2_lower=0.0, pb2_upper=0.0, pb_lower=0.0, pb_upper=0.0,
            mean_shadow=e_shadow, mean_busy=mean_busy, n_res_lower=n_lo,
            n_res_upper=n_hi, mean_dist=e_len, mean_radius=params.mean_radius,
            clamped=False,
        )
    kappa = 2.0 * e_len * math.tan(params.theta) / mean_busy
    p1 = pb1(params)
    p2_at_lo = _pb2_from_moments(n_lo, kappa)
    p2_at_hi = _pb2_from_moments(n_hi, kappa)
    pb_a, _, _, cl_a = _mix(params, p1, p2_at_lo, e_len, weighting)
    pb_b, _, _, cl_b = _mix(params, p1, p2_at_hi, e_len, weighting)
    return BlockageResult(
        pb1=p1,
        pb2_lower=min(p2_at_lo, p2_at_hi),
        pb2_upper=max(p2_at_lo, p2_at_hi),
        pb_lower=min(pb_a, pb_b),
        pb_upper=max(pb_a, pb_b),
        mean_shadow=e_shadow,
        mean_busy=mean_busy,
        n_res_lower=n_lo,
        n_res_upper=n_hi,
        mean_dist=e_len,
        mean_radius=params.mean_radius,
        clamped=cl_a or cl_b,
    )


def pb(params: BlockageParams, weighting: str = "probability"):
    """(pb_lower, pb_upper, components dict) of the combined blockage
    probability, evaluated at both merged-shadow count bounds."""
    res = blockage_result(params, weighting)
    components = {
        "pb1": res.pb1,
        "pb2_lower": res.pb2_lower,
        "pb2_upper": res.pb2_upper,
        "clamped": res.clamped,
    }
    return res.pb_lower, res.pb_upper, components


# ------------------------------------------------- active interferer count

def _log_binom(n: int, k):
    k = np.asarray(k, dtype=float)
    return lgamma(n + 1.0) - np.vectorize(lgamma)(k + 1.0) - np.vectorize(lgamma)(n - k + 1.0)


def active_count_pgf(z: float, n_aps: int, p: float, pb_value: float) -> float:
    """PGF of the number of active (placed and unblocked) interferers:
    [1 - p(1-pb) + p(1-pb) z]^N."""
    q = p * (1.0 - pb_value)
    return (1.0 - q + q * z) ** n_aps


def active_count_pmf(k, n_aps: int, p: float, pb_value: float):
    """Binomial(N, p(1-pb)) pmf, vectorized over k."""
    q = p * (1.0 - pb_value)
    k_arr = np.atleast_1d(np.asarray(k, dtype=int))
    scalar = np.asarray(k).ndim == 0
    out = np.zeros(k_arr.shape, dtype=float)
    ok = (k_arr >= 0) & (k_arr <= n_aps)
    kk = k_arr[ok].astype(float)
    if q == 0.0:
        out[ok] = (kk == 0).astype(float)
    elif q == 1.0:
        out[ok] = (kk == n_aps).astype(float)
    else:
        log_pmf = (
            _log_binom(n_aps, kk)
            + kk * math.log(q)
            + (n_aps - kk) * math.log1p(-q)
        )
        out[ok] = np.exp(log_pmf)
    return float(out[0]) if scalar else out
