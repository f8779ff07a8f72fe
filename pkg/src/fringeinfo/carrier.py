"""Single-lobe Fourier demodulation of carrier fringes: isolate one spectral
lobe, inverse-transform, and read the wrapped phase off the analytic signal.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .errors import ConfigurationError, DomainError
from .grid import ComplexImage, RealImage
from .spectral import (
    SpectralRegions,
    Spectrum,
    dft2,
    frequency_grids,
    idft2,
    power_spectrum,
)

__all__ = [
    "LobeFilter",
    "fit_lobe",
    "demodulate_carrier",
    "wrapped_phase",
    "wrap_angle",
    "HARD",
    "RAISED_COSINE",
]

HARD = "hard"
RAISED_COSINE = "raised-cosine"


@dataclass(frozen=True)
class LobeFilter:
    """One off-center spectral lobe: center and radius in cycles/pixel.

    The raised-cosine profile passes fully out to radius*(1 - taper) and
    rolls off to zero at the full radius, suppressing ringing; "hard" is a
    sharp disk.  The lobe must clear DC: |center| > radius + dc_guard.
    """

    center: tuple[float, float]
    radius: float
    profile: str = RAISED_COSINE
    taper: float = 0.2
    dc_guard: float = 0.0

    def __post_init__(self):
        if self.profile not in (HARD, RAISED_COSINE):
            raise ConfigurationError(f"unknown filter profile {self.profile!r}")
        if self.radius <= 0:
            raise ConfigurationError("lobe radius must be positive")
        if not (0.0 <= self.taper < 1.0):
            raise ConfigurationError("taper must lie in [0, 1)")
        if math.hypot(*self.center) <= self.radius + self.dc_guard:
            raise ConfigurationError(
                "lobe overlaps DC: |center| must exceed radius + dc_guard"
            )


def fit_lobe(
    img: RealImage,
    regions: SpectralRegions,
    *,
    energy_fraction: float = 0.99,
    profile: str = RAISED_COSINE,
    taper: float = 0.2,
) -> LobeFilter:
    """Locate the carrier lobe in the u > 0 half-plane of the SN mask.

    The strongest SN component whose energy centroid lies at u > 0 gives
    the filter center; the radius is the smallest circle around it holding
    ``energy_fraction`` of the component's noise-corrected energy.
    """
    if not regions.sn_mask.any():
        raise DomainError("no carrier detected: SN region is empty")
    spec = power_spectrum(img)
    eta = float(np.mean(spec[regions.nr_mask])) if regions.nr_mask.any() else 0.0
    energy = np.maximum(spec - eta, 0.0)
    u, v = frequency_grids(img.width, img.height)
    dc_guard_bins = 3.0
    dc_guard = dc_guard_bins * max(1.0 / img.width, 1.0 / img.height)

    # restricting to the u > 0 half-plane keeps the search meaningful even
    # when scattered signal energy bridges the two lobes across DC
    halfplane = regions.sn_mask & (u > 0)
    labels, count = ndimage.label(halfplane, structure=np.ones((3, 3), dtype=bool))
    best = None
    for idx in range(1, count + 1):
        member = labels == idx
        total = float(energy[member].sum())
        if total <= 0:
            continue
        cu = float((energy[member] * u[member]).sum() / total)
        cv = float((energy[member] * v[member]).sum() / total)
        if best is None or total > best[0]:
            best = (total, cu, cv, member)
    if best is None:
        raise DomainError("no carrier detected: no off-center lobe in u > 0")
    total, cu, cv, member = best

    dist = np.hypot(u[member] - cu, v[member] - cv)
    order = np.argsort(dist, kind="stable")
    cumulative = np.cumsum(energy[member][order])
    idx = int(np.searchsorted(cumulative, energy_fraction * total))
    bin_width = max(1.0 / img.width, 1.0 / img.height)
    radius = float(dist[order[min(idx, len(order) - 1)]])
    radius = max(radius, 2.0 * bin_width) + bin_width
    if profile == RAISED_COSINE and taper < 1.0:
        # pad so the fully-transmitting flat zone still covers the measured
        # energy radius once the cosine roll-off is applied
        radius = radius / (1.0 - taper)
    if math.hypot(cu, cv) <= radius + dc_guard:
        raise DomainError("no carrier detected: lobe touches DC")
    return LobeFilter((cu, cv), radius, profile=profile, taper=taper, dc_guard=dc_guard)


def _profile_weights(filt: LobeFilter, width: int, height: int) -> np.ndarray:
    u, v = frequency_grids(width, height)
    d = np.hypot(u - filt.center[0], v - filt.center[1])
    if filt.profile == HARD:
        return (d <= filt.radius).astype(np.float64)
    flat = filt.radius * (1.0 - filt.taper)
    w = np.zeros_like(d)
    w[d <= flat] = 1.0
    ramp = (d > flat) & (d <= filt.radius)
    span = filt.radius - flat
    if span > 0:
        w[ramp] = 0.5 * (1.0 + np.cos(np.pi * (d[ramp] - flat) / span))
    else:
        w[ramp] = 1.0
    return w


def demodulate_carrier(
    img: RealImage, filt: LobeFilter, keep_carrier: bool = False
) -> ComplexImage:
    """Mask one spectral lobe and inverse-transform to the analytic signal.

    For fringes a + b*cos(phi_total) the output approaches
    (b/2) * exp(i*phi_total); with ``keep_carrier=False`` the linear ramp at
    the filter center is divided out so the argument is the surface-induced
    phase alone.
    """
    if math.hypot(*filt.center) <= filt.radius + filt.dc_guard:
        raise ConfigurationError("filter overlaps DC")
    limit = math.hypot(0.5, 0.5)
    if math.hypot(*filt.center) > limit:
        raise ConfigurationError("filter center lies outside the spectral band")
    spec = dft2(img)
    weights = _profile_weights(filt, img.width, img.height)
    masked = Spectrum(ComplexImage(spec.data.samples * weights), img.width, img.height)
    analytic = idft2(masked).samples
    if not keep_carrier:
        x = np.arange(img.width)[np.newaxis, :]
        y = np.arange(img.height)[:, np.newaxis]
        ramp = np.exp(-2j * np.pi * (filt.center[0] * x + filt.center[1] * y))
        analytic = analytic * ramp
    return ComplexImage(analytic)


def wrap_angle(x: np.ndarray | float):
    """Wrap radians to (-pi, pi]."""
    wrapped = np.mod(np.asarray(x, dtype=np.float64) + np.pi, 2.0 * np.pi) - np.pi
    wrapped = np.where(wrapped <= -np.pi, np.pi, wrapped)
    return float(wrapped) if np.ndim(x) == 0 else wrapped


def wrapped_phase(analytic: ComplexImage) -> RealImage:
    """Per-pixel argument in (-pi, pi].

    Zero-magnitude pixels map to phase 0 and are flagged invalid in the
    returned image's mask (mask is True where the phase is meaningful).
    """
    z = analytic.samples
    valid = np.abs(z) > 0.0
    phase = np.where(valid, np.angle(z), 0.0)
    # np.angle lands on -pi for arguments on the negative real cut with a
    # signed-zero imaginary part; fold the boundary onto +pi.
    phase = np.where(phase == -np.pi, np.pi, phase)
    return RealImage(phase, mask=valid)
