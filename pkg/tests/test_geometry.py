import math

import numpy as np
import pytest
from scipy import stats

from beamnet.errors import DomainError
from beamnet.geometry import (
    Band,
    Disk,
    ReceiverAnchor,
    cone_shadow_intervals,
    distance_cdf,
    distance_pdf,
    is_link_blocked,
    sample_interferers,
    sample_obstacles,
    spectral_distance_cdf,
    spectral_distance_pdf,
)
from beamnet.numerics import QuadratureSpec, integrate

GHZ = 1e9


# ------------------------------------------------------------ distance pdf

def test_distance_pdf_central_receiver():
    disk = Disk(20.0)
    anchor = ReceiverAnchor(0.0, 62 * GHZ)
    assert distance_pdf(20.0, disk, anchor) == pytest.approx(0.1, rel=1e-12)
    assert distance_pdf(20.0 + 1e-9, disk, anchor) == 0.0


def test_distance_pdf_rejects_outside_anchor():
    with pytest.raises(DomainError):
        distance_pdf(1.0, Disk(10.0), ReceiverAnchor(10.0, 62 * GHZ))


@pytest.mark.parametrize("frac", [0.0, 0.25, 0.5, 0.9])
def test_distance_pdf_normalization(frac):
    R = 20.0
    disk = Disk(R)
    anchor = ReceiverAnchor(frac * R, 62 * GHZ)
    total = integrate(
        lambda l: distance_pdf(l, disk, anchor),
        0.0,
        R + anchor.v0_norm,
        QuadratureSpec(abs_tol=1e-11, rel_tol=1e-11, max_subdivisions=4000),
    )
    assert total == pytest.approx(1.0, abs=1e-9)


def test_distance_pdf_branch_continuity():
    disk = Disk(20.0)
    anchor = ReceiverAnchor(10.0, 62 * GHZ)
    edge = disk.radius - anchor.v0_norm
    left = distance_pdf(edge, disk, anchor)
    # arccos approaches -1 with sqrt sensitivity, so a 1e-9 step costs ~1e-5
    right = distance_pdf(edge + 1e-9, disk, anchor)
    assert left == pytest.approx(right, rel=1e-4)


def test_distance_cdf_matches_pdf_quadrature():
    disk = Disk(20.0)
    anchor = ReceiverAnchor(10.0, 62 * GHZ)
    for l in (5.0, 12.0, 22.0, 29.5):
        num = integrate(
            lambda x: distance_pdf(x, disk, anchor), 0.0, l,
            QuadratureSpec(abs_tol=1e-11, rel_tol=1e-11, max_subdivisions=4000),
        )
        assert distance_cdf(l, disk, anchor) == pytest.approx(num, abs=1e-9)


# ------------------------------------------------------------ spectral pdf

def test_spectral_pdf_centered_band():
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    anchor = ReceiverAnchor(10.0, 61 * GHZ)
    span = band.span_hz
    assert spectral_distance_pdf(1 * GHZ, band, anchor) == pytest.approx(2 / span)
    assert spectral_distance_pdf(3.1 * GHZ, band, anchor) == 0.0


def test_spectral_pdf_paper_band_values():
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    anchor = ReceiverAnchor(10.0, 62 * GHZ)
    assert spectral_distance_pdf(1.5 * GHZ, band, anchor) == pytest.approx(2 / (6 * GHZ))
    assert spectral_distance_pdf(3.0 * GHZ, band, anchor) == pytest.approx(1 / (6 * GHZ))
    assert spectral_distance_pdf(4.5 * GHZ, band, anchor) == 0.0


def test_spectral_pdf_integrates_to_one():
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    anchor = ReceiverAnchor(10.0, 62 * GHZ)
    w_min, w_max = 2 * GHZ, 4 * GHZ
    total = 2 / band.span_hz * w_min + 1 / band.span_hz * (w_max - w_min)
    assert total == pytest.approx(1.0, abs=1e-15)


def test_spectral_cdf():
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    anchor = ReceiverAnchor(10.0, 62 * GHZ)
    assert spectral_distance_cdf(0.0, band, anchor) == 0.0
    assert spectral_distance_cdf(4 * GHZ, band, anchor) == pytest.approx(1.0)
    assert spectral_distance_cdf(2 * GHZ, band, anchor) == pytest.approx(2 * 2 / 6)
    # derivative equals the pdf inside each branch
    for w in (0.7 * GHZ, 3.3 * GHZ):
        h = 1e3
        deriv = (
            spectral_distance_cdf(w + h, band, anchor)
            - spectral_distance_cdf(w - h, band, anchor)
        ) / (2 * h)
        assert deriv == pytest.approx(spectral_distance_pdf(w, band, anchor), rel=1e-6)


# ---------------------------------------------------------------- samplers

def test_interferer_radius_moment():
    disk = Disk(20.0)
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    rng = np.random.default_rng(42)
    xy, _ = sample_interferers(rng, disk, band, size=1_000_000)
    mean_norm = np.hypot(xy[:, 0], xy[:, 1]).mean()
    assert mean_norm == pytest.approx(2 * disk.radius / 3, rel=5e-3)


def test_interferer_frequency_uniform_chi2():
    disk = Disk(20.0)
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    rng = np.random.default_rng(3)
    _, f = sample_interferers(rng, disk, band, size=200_000)
    counts, _ = np.histogram(f, bins=40, range=(band.fs_hz, band.fe_hz))
    _, pvalue = stats.chisquare(counts)
    assert pvalue > 1e-3


def test_sampled_distance_matches_pdf_ks():
    disk = Disk(20.0)
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    anchor = ReceiverAnchor(10.0, 62 * GHZ)
    rng = np.random.default_rng(11)
    xy, _ = sample_interferers(rng, disk, band, size=1_000_000)
    ell = np.hypot(xy[:, 0] - anchor.v0_norm, xy[:, 1])
    ell.sort()
    cdf = distance_cdf(ell, disk, anchor)
    n = ell.size
    ks = max(
        np.max(np.arange(1, n + 1) / n - cdf),
        np.max(cdf - np.arange(0, n) / n),
    )
    assert ks < 0.01


def test_sampled_spectral_distance_matches_pdf_ks():
    disk = Disk(20.0)
    band = Band(58 * GHZ, 64 * GHZ, 1 * GHZ)
    anchor = ReceiverAnchor(10.0, 62 * GHZ)
    rng = np.random.default_rng(12)
    _, f = sample_interferers(rng, disk, band, size=1_000_000)
    om = np.abs(f - anchor.f0_hz)
    om.sort()
    cdf = spectral_distance_cdf(om, band, anchor)
    n = om.size
    ks = max(
        np.max(np.arange(1, n + 1) / n - cdf),
        np.max(cdf - np.arange(0, n) / n),
    )
    assert ks < 0.01


def test_obstacle_count_poisson_mean():
    disk = Disk(20.0)
    rng = np.random.default_rng(5)
    counts = [sample_obstacles(rng, disk, 1e-2, 0.2, 0.8)[0].shape[0] for _ in range(100_000)]
    assert np.mean(counts) == pytest.approx(4 * math.pi, rel=1e-2)


def test_obstacle_zero_density_and_radii_range():
    disk = Disk(20.0)
    rng = np.random.default_rng(6)
    centers, radii = sample_obstacles(rng, disk, 0.0, 0.2, 0.8)
    assert centers.shape == (0, 2) and radii.size == 0
    for _ in range(50):
        _, radii = sample_obstacles(rng, disk, 5e-2, 0.2, 0.8)
        assert np.all((radii >= 0.2) & (radii <= 0.8))


# ------------------------------------------------------------- cone shadows

def test_cone_shadow_no_obstacles():
    iv, L = cone_shadow_intervals((0, 0), (10, 0), math.radians(10), np.empty((0, 2)), np.empty(0))
    assert iv.shape == (0, 2)
    assert L == pytest.approx(10 * math.tan(math.radians(10)))


def test_cone_shadow_axis_obstacle_half_base():
    # obstacle on the axis at r = l/2 with d = l*tan/4 projects to half the base
    theta = math.radians(10)
    ell = 10.0
    d = ell * math.tan(theta) / 4
    iv, L = cone_shadow_intervals(
        (0, 0), (ell, 0), theta, np.array([[ell / 2, 0.0]]), np.array([d])
    )
    assert iv.shape == (1, 2)
    half_len = (iv[0, 1] - iv[0, 0]) / 2
    assert half_len == pytest.approx(d * ell / (ell / 2), rel=1e-12)
    assert half_len == pytest.approx(L / 2, rel=1e-12)


def test_cone_shadow_engulfing_full_base():
    theta = math.radians(10)
    ell = 10.0
    d = 0.5
    r = d / (2 * math.tan(theta))
    iv, L = cone_shadow_intervals(
        (0, 0), (ell, 0), theta, np.array([[r, 0.0]]), np.array([d])
    )
    assert iv.shape == (1, 2)
    assert iv[0, 0] == -L and iv[0, 1] == L


def test_cone_shadow_ignores_behind_and_beyond():
    theta = math.radians(10)
    iv, _ = cone_shadow_intervals(
        (0, 0), (10, 0), theta,
        np.array([[-1.0, 0.0], [11.0, 0.0]]), np.array([0.5, 0.5]),
    )
    assert iv.shape == (0, 2)


def test_is_link_blocked_basics():
    L = 2.0
    assert is_link_blocked(np.empty((0, 2)), L) is False
    assert is_link_blocked(np.array([[-L, 0.0], [0.0, L]]), L) is True
    assert is_link_blocked(np.array([[-L, L - 1e-9]]), L) is False


def test_interval_union_vs_brute_force_grid():
    rng = np.random.default_rng(99)
    L = 1.0
    grid = np.linspace(-L, L, 10_001)
    for _ in range(200):
        k = rng.integers(0, 8)
        lo = rng.uniform(-1.5, 1.2, k)
        hi = lo + rng.uniform(0.0, 1.3, k)
        iv = np.column_stack([np.maximum(lo, -L), np.minimum(hi, L)])
        iv = iv[iv[:, 1] > iv[:, 0]]
        covered = np.zeros_like(grid, dtype=bool)
        for a, b in iv:
            covered |= (grid >= a) & (grid <= b)
        assert is_link_blocked(iv, L) == bool(covered.all())
