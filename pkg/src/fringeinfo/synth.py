"""Synthetic fringe generation: single interferograms, profilometry
fringe/background pairs and M-frame phase-shifted stacks with AWGN.

Noise determinism: every draw comes from numpy's counter-based Philox
generator keyed by the model seed (frame m of a stack uses seed + m, the
background of a profilometry pair uses seed + 1) through
``Generator.standard_normal`` (numpy's documented ziggurat transform).
Identical (model, seed) therefore gives bit-identical images regardless of
thread count or call order.
"""

import math
import warnings
from dataclasses import dataclass, replace

import numpy as np

from .errors import ConfigurationError
from .grid import RealImage, power

__all__ = [
    "PhaseField",
    "FringeModel",
    "FringeStack",
    "make_phase_defocus",
    "phase_map",
    "synth_fringe",
    "synth_profilometry_pair",
    "synth_phase_shifted_stack",
    "sigma_for_snr",
]

DEFOCUS = "defocus"
PROFILOMETRY = "profilometry-carrier"
EXPLICIT = "explicit"


@dataclass(frozen=True)
class PhaseField:
    """Parameterized phase map.

    kind "defocus": centered quadratic phase whose instantaneous spatial
    frequency grows linearly from 0 at ``center`` to ``f_max`` fringes/pixel
    at the farthest image corner.
    kind "profilometry-carrier": linear carrier of period ``period`` pixels
    along x plus the surface term (2*pi/period) * tan(theta) * surface.
    kind "explicit": a precomputed phase image in radians.
    """

    kind: str
    center: tuple[float, float] | None = None
    f_max: float | None = None
    period: float | None = None
    theta: float | None = None
    surface: RealImage | None = None
    phase: RealImage | None = None

    def __post_init__(self):
        if self.kind == DEFOCUS:
            if self.f_max is None or not (0.0 < self.f_max <= 0.5):
                raise ConfigurationError(
                    f"f_max must be in (0, 0.5] fringes/pixel, got {self.f_max}"
                )
        elif self.kind == PROFILOMETRY:
            if self.period is None or self.period < 2.0:
                raise ConfigurationError(
                    f"carrier period must be >= 2 pixels, got {self.period}"
                )
            if self.theta is None:
                raise ConfigurationError("profilometry phase needs a sensitivity angle")
            if self.surface is None:
                raise ConfigurationError("profilometry phase needs a surface image")
        elif self.kind == EXPLICIT:
            if self.phase is None:
                raise ConfigurationError("explicit phase needs a phase image")
        else:
            raise ConfigurationError(f"unknown phase kind {self.kind!r}")

    @staticmethod
    def defocus(center: tuple[float, float] | None, f_max: float) -> "PhaseField":
        return PhaseField(DEFOCUS, center=center, f_max=f_max)

    @staticmethod
    def profilometry(period: float, theta: float, surface: RealImage) -> "PhaseField":
        return PhaseField(PROFILOMETRY, period=period, theta=theta, surface=surface)

    @staticmethod
    def explicit(phase: RealImage) -> "PhaseField":
        return PhaseField(EXPLICIT, phase=phase)


@dataclass(frozen=True)
class FringeModel:
    """Everything needed to synthesize I = a + b*cos(phi) + n deterministically."""

    width: int
    height: int
    background: float | RealImage
    modulation: float | RealImage
    phase: PhaseField
    noise_sigma: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.width < 2 or self.height < 2:
            raise ConfigurationError("image dimensions must be at least 2x2")
        if self.noise_sigma < 0:
            raise ConfigurationError("noise_sigma must be non-negative")
        for name in ("background", "modulation"):
            value = getattr(self, name)
            if isinstance(value, RealImage) and (
                value.width != self.width or value.height != self.height
            ):
                raise ConfigurationError(f"{name} image does not match model dimensions")
        b = self._field(self.modulation)
        if np.any(b < 0):
            raise ConfigurationError("modulation must be non-negative everywhere")
        if np.any(self._field(self.background) - b < 0):
            warnings.warn(
                "background - modulation dips below zero; fringes will clip "
                "if quantized over a non-negative range"
            )

    def _field(self, value: float | RealImage) -> np.ndarray:
        if isinstance(value, RealImage):
            return value.samples
        return np.full((self.height, self.width), float(value))


@dataclass(frozen=True)
class FringeStack:
    """Ordered phase-shifted frames; frame m carries phase step m * omega0."""

    frames: tuple[RealImage, ...]
    omega0: float
    model: FringeModel

    def __post_init__(self):
        if len(self.frames) < 3:
            raise ConfigurationError("a stack needs at least 3 frames")
        w, h = self.frames[0].width, self.frames[0].height
        if any(f.width != w or f.height != h for f in self.frames):
            raise ConfigurationError("all stack frames must share dimensions")

    @property
    def m(self) -> int:
        return len(self.frames)


def make_phase_defocus(
    width: int,
    height: int,
    center: tuple[float, float] | None = None,
    f_max: float = 0.5,
) -> RealImage:
    """Quadratic defocus phase, peak instantaneous frequency f_max at the
    farthest corner: phi = pi * f_max * r^2 / r_max."""
    if not (0.0 < f_max <= 0.5):
        raise ConfigurationError(f"f_max must be in (0, 0.5], got {f_max}")
    if center is None:
        center = ((width - 1) / 2.0, (height - 1) / 2.0)
    cx, cy = center
    x = np.arange(width) - cx
    y = np.arange(height) - cy
    r2 = x[np.newaxis, :] ** 2 + y[:, np.newaxis] ** 2
    corners = [(0.0, 0.0), (width - 1.0, 0.0), (0.0, height - 1.0), (width - 1.0, height - 1.0)]
    r_max = max(math.hypot(px - cx, py - cy) for px, py in corners)
    if r_max == 0:
        raise ConfigurationError("degenerate image: center coincides with all corners")
    return RealImage(np.pi * f_max * r2 / r_max)


def phase_map(model: FringeModel) -> RealImage:
    """Phase image phi(x, y) in radians for the model's phase field."""
    p = model.phase
    if p.kind == DEFOCUS:
        return make_phase_defocus(model.width, model.height, p.center, p.f_max)
    if p.kind == PROFILOMETRY:
        surface = p.surface
        if surface.width != model.width or surface.height != model.height:
            raise ConfigurationError("surface image does not match model dimensions")
        x = np.arange(model.width)[np.newaxis, :]
        carrier = 2.0 * np.pi * x / p.period
        return RealImage(carrier + (2.0 * np.pi / p.period) * math.tan(p.theta) * surface.samples)
    if p.phase.width != model.width or p.phase.height != model.height:
        raise ConfigurationError("explicit phase image does not match model dimensions")
    return p.phase


def _noise(model: FringeModel, seed: int) -> np.ndarray:
    if model.noise_sigma == 0.0:
        return np.zeros((model.height, model.width))
    rng = np.random.Generator(np.random.Philox(key=seed))
    return model.noise_sigma * rng.standard_normal((model.height, model.width))


def _clean(model: FringeModel, phase_offset: float = 0.0) -> np.ndarray:
    a = model._field(model.background)
    b = model._field(model.modulation)
    phi = phase_map(model).samples
    return a + b * np.cos(phi + phase_offset)


def synth_fringe(model: FringeModel) -> RealImage:
    """Single fringe image I = a + b*cos(phi) + n."""
    return RealImage(_clean(model) + _noise(model, model.seed))


def synth_profilometry_pair(model: FringeModel) -> tuple[RealImage, RealImage]:
    """Carrier fringes plus the matching background frame I_n = a + n.

    The background uses an independent noise draw (seed + 1) with the same
    sigma, mirroring a fringes/background acquisition pair.
    """
    if model.phase.kind != PROFILOMETRY:
        raise ConfigurationError("profilometry pair requires a profilometry-carrier phase")
    fringes = RealImage(_clean(model) + _noise(model, model.seed))
    background = RealImage(model._field(model.background) + _noise(model, model.seed + 1))
    return fringes, background


def synth_phase_shifted_stack(model: FringeModel, m: int) -> FringeStack:
    """M phase-shifted frames, frame k = a + b*cos(phi + k*omega0) + n_k."""
    if m < 3:
        raise ConfigurationError(
            f"a phase-shifted stack needs at least 3 frames, got {m}"
        )
    omega0 = 2.0 * np.pi / m
    frames = tuple(
        RealImage(_clean(model, k * omega0) + _noise(model, model.seed + k))
        for k in range(m)
    )
    return FringeStack(frames, omega0, model)


def sigma_for_snr(model: FringeModel, snr_target: float) -> float:
    """Noise sigma that puts the model's fringe signal b*cos(phi) at the
    requested signal-to-noise power ratio."""
    if snr_target <= 0:
        raise ConfigurationError(f"SNR target must be positive, got {snr_target}")
    b = model._field(model.modulation)
    phi = phase_map(model).samples
    signal = RealImage(b * np.cos(phi))
    return math.sqrt(power(signal) / snr_target)
