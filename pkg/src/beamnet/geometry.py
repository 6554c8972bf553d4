"""Spatial and spectral distance distributions, disk/cone geometry, and the
point-process samplers (fixed-count uniform interferers, Poisson obstacles).

All samplers take an explicit numpy Generator; everything else is pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

__all__ = [
    "Disk",
    "ReceiverAnchor",
    "Band",
    "ObstacleCircle",
    "distance_pdf",
    "distance_cdf",
    "spectral_distance_pdf",
    "spectral_distance_cdf",
    "sample_interferers",
    "sample_obstacles",
    "cone_shadow_intervals",
    "is_link_blocked",
]

_CLAMP_TOL = 1e-12


@dataclass(frozen=True)
class Disk:
    """Circular deployment region of radius R (meters)."""

    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("disk radius must be positive")


@dataclass(frozen=True)
class ReceiverAnchor:
    """Reference receiver: distance from the disk center and center frequency."""

    v0_norm: float
    f0_hz: float

    def __post_init__(self):
        if self.v0_norm < 0:
            raise DomainError("receiver offset must be >= 0")
        if not self.f0_hz > 0:
            raise DomainError("receiver frequency must be positive")


@dataclass(frozen=True)
class Band:
    """Operational band [fs, fe] and desired-signal bandwidth W (Hz)."""

    fs_hz: float
    fe_hz: float
    w_hz: float

    def __post_init__(self):
        if not self.fs_hz < self.fe_hz:
            raise DomainError("band requires fs < fe")
        if not (0 < self.w_hz <= self.fe_hz - self.fs_hz):
            raise DomainError("signal bandwidth must lie in (0, fe - fs]")

    @property
    def span_hz(self) -> float:
        return self.fe_hz - self.fs_hz


@dataclass(frozen=True)
class ObstacleCircle:
    """Circular blocker: center (x, y) in meters and radius."""

    center: tuple[float, float]
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise DomainError("obstacle radius must be positive")


def _check_anchor(disk: Disk, anchor: ReceiverAnchor):
    if anchor.v0_norm >= disk.radius:
        raise DomainError(
            f"receiver offset {anchor.v0_norm} must be < disk radius {disk.radius}"
        )


def _clamped_arccos_arg(ell, v, r2):
    arg = (v * v - r2 + ell * ell) / (2.0 * ell * v)
    bad = np.abs(arg) > 1.0 + _CLAMP_TOL
    if np.any(bad):
        raise DomainError("arccos argument outside [-1, 1] beyond rounding slack")
    return np.clip(arg, -1.0, 1.0)


def distance_pdf(ell, disk: Disk, anchor: ReceiverAnchor):
    """Density of the AP-receiver distance for a uniform point on the disk.

    Two branches: 2*l/R^2 up to R - ||v0||, then the wedge-angle correction up
    to R + ||v0||; zero elsewhere. Vectorized over ell.
    """
    _check_anchor(disk, anchor)
    R, v = disk.radius, anchor.v0_norm
    ell_arr = np.asarray(ell, dtype=float)
    scalar = ell_arr.ndim == 0
    ell_arr = np.atleast_1d(ell_arr)
    out = np.zeros_like(ell_arr)

    if v < _CLAMP_TOL * R:
        inner = (ell_arr > 0) & (ell_arr <= R)
        out[inner] = 2.0 * ell_arr[inner] / R**2
    else:
        inner = (ell_arr > 0) & (ell_arr <= R - v)
        out[inner] = 2.0 * ell_arr[inner] / R**2
        outer = (ell_arr > R - v) & (ell_arr <= R + v)
        if np.any(outer):
            lo = ell_arr[outer]
            ang = np.arccos(_clamped_arccos_arg(lo, v, R * R))
            out[outer] = 2.0 * lo * ang / (math.pi * R**2)
    return float(out[0]) if scalar else out


def distance_cdf(ell, disk: Disk, anchor: ReceiverAnchor):
    """CDF of the AP-receiver distance (intersection area of the two disks
    over the deployment area); used for guard-zone mass and KS checks."""
    _check_anchor(disk, anchor)
    R, v = disk.radius, anchor.v0_norm
    ell_arr = np.atleast_1d(np.asarray(ell, dtype=float))
    scalar = np.asarray(ell).ndim == 0
    out = np.zeros_like(ell_arr)
    if v < _CLAMP_TOL * R:
        out = np.clip(ell_arr, 0.0, R) ** 2 / R**2
    else:
        inner = (ell_arr > 0) & (ell_arr <= R - v)
        out[inner] = ell_arr[inner] ** 2 / R**2
        mid = (ell_arr > R - v) & (ell_arr < R + v)
        if np.any(mid):
            el = ell_arr[mid]
            # lens area of circle(v0, l) and circle(O, R) at center distance v
            a1 = np.arccos(np.clip((v * v + el * el - R * R) / (2 * v * el), -1, 1))
            a2 = np.arccos(np.clip((v * v + R * R - el * el) / (2 * v * R), -1, 1))
            tri = 0.5 * np.sqrt(
                np.maximum(
                    (-v + el + R) * (v + el - R) * (v - el + R) * (v + el + R), 0.0
                )
            )
            out[mid] = (el * el * a1 + R * R * a2 - tri) / (math.pi * R**2)
        out[ell_arr >= R + v] = 1.0
    return float(out[0]) if scalar else out


def _omega_breaks(band: Band, anchor: ReceiverAnchor):
    we = band.fe_hz - anchor.f0_hz
    ws = band.fs_hz - anchor.f0_hz
    return min(abs(we), abs(ws)), max(abs(we), abs(ws))


def spectral_distance_pdf(omega, band: Band, anchor: ReceiverAnchor):
    """Density of the spectral distance |f_i - f0| for f_i uniform on the band:
    2/span on (0, w_min], 1/span on (w_min, w_max], zero beyond."""
    w_min, w_max = _omega_breaks(band, anchor)
    span = band.span_hz
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    scalar = np.asarray(omega).ndim == 0
    out = np.zeros_like(om)
    out[(om >= 0) & (om <= w_min)] = 2.0 / span
    out[(om > w_min) & (om <= w_max)] = 1.0 / span
    return float(out[0]) if scalar else out


def spectral_distance_cdf(omega, band: Band, anchor: ReceiverAnchor):
    """Piecewise-linear CDF matching spectral_distance_pdf."""
    w_min, w_max = _omega_breaks(band, anchor)
    span = band.span_hz
    om = np.atleast_1d(np.asarray(omega, dtype=float))
    scalar = np.asarray(omega).ndim == 0
    out = np.where(
        om <= w_min, 2.0 * np.clip(om, 0.0, None) / span, (w_min + np.minimum(om, w_max)) / span
    )
    out = np.clip(out, 0.0, 1.0)
    return float(out[0]) if scalar else out


def sample_interferers(rng: np.random.Generator, disk: Disk, band: Band, size=None):
    """Uniform space-frequency draws: positions uniform on the disk (sqrt-radius
    scaling), frequencies uniform on [fs, fe], independent.

    Returns (xy, f): xy has shape (size, 2), f shape (size,); with size=None a
    single (xy(2,), f) pair.
    """
    n = 1 if size is None else int(size)
    r = disk.radius * np.sqrt(rng.random(n))
    phi = 2.0 * math.pi * rng.random(n)
    xy = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    f = rng.uniform(band.fs_hz, band.fe_hz, n)
    if size is None:
        return xy[0], float(f[0])
    return xy, f


def sample_obstacles(rng: np.random.Generator, disk: Disk, rho: float, ds: float, de: float):
    """Poisson(rho * pi * R^2) obstacle circles: centers uniform on the disk,
    radii uniform on [ds, de]. Returns (centers (k, 2), radii (k,))."""
    if rho < 0:
        raise DomainError("obstacle density must be >= 0")
    if not (0 < ds <= de):
        raise DomainError("obstacle radii must satisfy 0 < ds <= de")
    n = int(rng.poisson(rho * math.pi * disk.radius**2))
    r = disk.radius * np.sqrt(rng.random(n))
    phi = 2.0 * math.pi * rng.random(n)
    centers = np.column_stack([r * np.cos(phi), r * np.sin(phi)])
    radii = rng.uniform(ds, de, n)
    return centers, radii


def cone_shadow_intervals(ap_xy, rx_xy, theta: float, obs_centers, obs_radii):
    """Central-projection shadows of obstacle circles on the radiation-cone base.

    The cone has its apex at the AP, axis toward the receiver, half-angle
    theta, and base through the receiver (half-length L = l * tan(theta)).
    Each circle at axial distance r and lateral offset c projects to the
    interval (c +- d) * l / r, clipped to [-L, L]; circles with r <= d/tan
    swallow the apex cross-section and shadow the full base. Obstacles behind
    the apex or beyond the base plane are ignored.

    Returns (intervals (k, 2) ndarray, base_half_length L).
    """
    if not (0 < theta < math.pi / 2):
        raise DomainError("cone half-angle must lie in (0, pi/2)")
    ap = np.asarray(ap_xy, dtype=float)
    rx = np.asarray(rx_xy, dtype=float)
    axis = rx - ap
    ell = float(np.hypot(axis[0], axis[1]))
    if ell <= 0:
        raise DomainError("AP and receiver must be distinct")
    u = axis / ell
    nvec = np.array([-u[1], u[0]])
    tan_t = math.tan(theta)
    L = ell * tan_t

    centers = np.asarray(obs_centers, dtype=float).reshape(-1, 2)
    radii = np.asarray(obs_radii, dtype=float).reshape(-1)
    if centers.shape[0] == 0:
        return np.empty((0, 2)), L

    rel = centers - ap
    r_ax = rel @ u
    c_lat = rel @ nvec
    keep = (r_ax > 0) & (r_ax <= ell)
    r_ax, c_lat, d = r_ax[keep], c_lat[keep], radii[keep]
    scale = np.divide(ell, r_ax, out=np.zeros_like(r_ax), where=r_ax > 0)
    lo = (c_lat - d) * scale
    hi = (c_lat + d) * scale
    overlap = (hi > -L) & (lo < L)
    r_ax, d, lo, hi = r_ax[overlap], d[overlap], lo[overlap], hi[overlap]
    engulf = r_ax * tan_t <= d
    lo = np.where(engulf, -L, np.maximum(lo, -L))
    hi = np.where(engulf, L, np.minimum(hi, L))
    return np.column_stack([lo, hi]), L


def is_link_blocked(intervals, base_half_length: float) -> bool:
    """True iff the union of the intervals covers [-L, +L] (sort and sweep;
    touching endpoints merge)."""
    iv = np.asarray(intervals, dtype=float).reshape(-1, 2)
    if iv.shape[0] == 0:
        return False
    L = float(base_half_length)
    order = np.argsort(iv[:, 0], kind="stable")
    reach = -L
    for lo, hi in iv[order]:
        if lo > reach:
            return False
        if hi > reach:
            reach = float(hi)
        if reach >= L:
            return True
    return bool(reach >= L)
