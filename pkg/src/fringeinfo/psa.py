"""Phase-shifting algorithms as fringe-data compressors.

A kernel is a set of M complex taps applied frame-wise to a phase-shifted
stack, producing one complex analytic signal.  The frequency transfer
function convention is fixed as H(w) = sum_m c_m * exp(-i*w*m); with the
least-squares taps c_m = exp(i*m*w0) a noiseless stack demodulates to
(M*b/2) * exp(-i*phi), i.e. the recovered phase carries a global minus sign.
"""

import json
import math
import os
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, DomainError
from .grid import ComplexImage, RealImage, power
from .synth import FringeModel, FringeStack, PhaseField, synth_phase_shifted_stack

__all__ = [
    "PsaKernel",
    "QuadratureCheck",
    "least_squares_kernel",
    "ftf_eval",
    "validate_quadrature",
    "demodulate_stack",
    "snr_gain",
    "monte_carlo_gain",
    "save_kernel",
    "load_kernel",
]


@dataclass(frozen=True, eq=False)
class PsaKernel:
    """Complex taps c_m with the temporal carrier omega0 = 2*pi/M."""

    taps: np.ndarray

    def __post_init__(self):
        taps = np.asarray(self.taps, dtype=np.complex128).ravel()
        if taps.size < 3:
            raise ConfigurationError(
                f"a PSA kernel needs at least 3 taps, got {taps.size}"
            )
        taps = np.ascontiguousarray(taps)
        taps.setflags(write=False)
        object.__setattr__(self, "taps", taps)

    @property
    def m(self) -> int:
        return self.taps.size

    @property
    def omega0(self) -> float:
        return 2.0 * math.pi / self.m


@dataclass(frozen=True)
class QuadratureCheck:
    ok: bool
    violations: tuple[str, ...]


def least_squares_kernel(m: int) -> PsaKernel:
    """Taps c_m = exp(i*m*2*pi/M); the quadrature zeros hold exactly because
    sums of roots of unity vanish."""
    if m < 3:
        raise ConfigurationError(f"least-squares kernel needs M >= 3, got {m}")
    omega0 = 2.0 * math.pi / m
    return PsaKernel(np.exp(1j * omega0 * np.arange(m)))


def ftf_eval(kernel: PsaKernel, omega) -> complex | np.ndarray:
    """Frequency transfer function H(w) = sum_m c_m * exp(-i*w*m)."""
    w = np.asarray(omega, dtype=np.float64)
    m = np.arange(kernel.m)
    out = np.sum(kernel.taps * np.exp(-1j * w[..., np.newaxis] * m), axis=-1)
    return complex(out) if np.ndim(omega) == 0 else out


def validate_quadrature(kernel: PsaKernel, rel_tol: float = 1e-9) -> QuadratureCheck:
    """Check the background/conjugate-lobe rejection zeros H(0) = H(-w0) = 0
    and the pass condition H(w0) != 0, with a scale-free tolerance."""
    tol = rel_tol * float(np.sum(np.abs(kernel.taps)))
    w0 = kernel.omega0
    violations = []
    h0 = abs(ftf_eval(kernel, 0.0))
    if h0 > tol:
        violations.append(f"|H(0)| = {h0:.6g} exceeds tolerance {tol:.3g}")
    hneg = abs(ftf_eval(kernel, -w0))
    if hneg > tol:
        violations.append(f"|H(-w0)| = {hneg:.6g} exceeds tolerance {tol:.3g}")
    hpos = abs(ftf_eval(kernel, w0))
    if hpos <= tol:
        violations.append(f"|H(w0)| = {hpos:.6g} does not exceed tolerance {tol:.3g}")
    return QuadratureCheck(ok=not violations, violations=tuple(violations))


def demodulate_stack(stack: FringeStack, kernel: PsaKernel) -> ComplexImage:
    """Collapse M phase-shifted frames into one analytic signal
    sum_m c_m * I_m.

    For a noiseless stack and the least-squares kernel the output is
    (M*b/2) * exp(-i*phi): constant magnitude M*b/2 and the fringe phase up
    to the documented sign convention.
    """
    if kernel.m != stack.m:
        raise ConfigurationError(
            f"kernel has {kernel.m} taps but the stack has {stack.m} frames"
        )
    check = validate_quadrature(kernel)
    if not check.ok:
        raise ConfigurationError(
            "kernel fails quadrature conditions: " + "; ".join(check.violations)
        )
    out = np.zeros((stack.frames[0].height, stack.frames[0].width), dtype=np.complex128)
    for tap, frame in zip(kernel.taps, stack.frames):
        out += tap * frame.samples
    return ComplexImage(out)


def snr_gain(kernel: PsaKernel) -> float:
    """SNR gain |H(w0)|^2 / sum |c_m|^2 (the denominator is the mean of
    |H|^2 over one period, by Parseval).  Bounded above by M, with equality
    exactly for least-squares taps up to a global complex scale."""
    norm = float(np.sum(np.abs(kernel.taps) ** 2))
    if norm == 0.0:
        raise DomainError("all-zero taps have no SNR gain")
    return abs(ftf_eval(kernel, kernel.omega0)) ** 2 / norm


def monte_carlo_gain(
    kernel: PsaKernel, trials: int = 100_000, sigma: float = 1.0, seed: int = 0
) -> float:
    """Empirical estimate of :func:`snr_gain`, independent of the FTF.

    A pure-signal stack (unit cosine with a random phase per pixel) and a
    pure-noise stack are pushed through :func:`demodulate_stack` and the
    measured output/input SNR ratio is formed.  The input signal power is
    referenced to its quadrature component (half the cosine power), the
    portion a quadrature kernel can pass.  One pixel is one trial.
    """
    if trials < 10_000:
        raise ConfigurationError(f"need at least 1e4 trials, got {trials}")
    if sigma <= 0:
        raise ConfigurationError("sigma must be positive")
    side = math.isqrt(trials - 1) + 1  # round the trial count up to a square
    rng = np.random.Generator(np.random.Philox(key=seed))
    theta = RealImage(rng.uniform(0.0, 2.0 * np.pi, size=(side, side)))

    with warnings.catch_warnings():
        # a zero-mean unit cosine is intentional here, not a clipping hazard
        warnings.simplefilter("ignore")
        signal_model = FringeModel(
            width=side, height=side, background=0.0, modulation=1.0,
            phase=PhaseField.explicit(theta), noise_sigma=0.0, seed=seed,
        )
    noise_model = FringeModel(
        width=side, height=side, background=0.0, modulation=0.0,
        phase=PhaseField.explicit(theta), noise_sigma=sigma, seed=seed + 1,
    )
    signal_stack = synth_phase_shifted_stack(signal_model, kernel.m)
    noise_stack = synth_phase_shifted_stack(noise_model, kernel.m)

    p_sig_in = float(np.mean([power(f) for f in signal_stack.frames]))
    p_noise_in = float(np.mean([power(f) for f in noise_stack.frames]))
    p_sig_out = power(demodulate_stack(signal_stack, kernel))
    p_noise_out = power(demodulate_stack(noise_stack, kernel))
    return (p_sig_out / p_noise_out) / ((p_sig_in / 2.0) / p_noise_in)


def save_kernel(kernel: PsaKernel, path: str) -> None:
    """Serialize taps as {"M": M, "taps": [[re, im], ...]}."""
    doc = {
        "M": kernel.m,
        "taps": [[float(t.real), float(t.imag)] for t in kernel.taps],
    }
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w", encoding="ascii") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def load_kernel(path: str) -> PsaKernel:
    with open(path, encoding="ascii") as fh:
        doc = json.load(fh)
    taps = np.array([complex(re, im) for re, im in doc["taps"]])
    if "M" in doc and int(doc["M"]) != taps.size:
        raise ConfigurationError(
            f"kernel file claims M={doc['M']} but stores {taps.size} taps"
        )
    return PsaKernel(taps)
