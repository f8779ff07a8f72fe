"""Information-theoretic formulas: discrete entropy and rate, channel
capacity and reliability, the capacity trade table, the bandwidth/SNR
information rate of fringes, the PSA-boosted rate and the frame-doubling law.

All operations are stateless pure functions.
"""

import math
from dataclasses import dataclass, field

from .errors import ConfigurationError, DomainError

__all__ = [
    "DiscreteSource",
    "ChannelModel",
    "InfoReport",
    "MAX_BANDWIDTH",
    "discrete_entropy",
    "info_rate_discrete",
    "channel_capacity",
    "reliability",
    "capacity_trade_table",
    "fringe_info_rate",
    "analytic_info_rate",
    "doubling_frames",
    "doubling_curve",
]

# Largest representable spatial bandwidth: the corner of the Nyquist square.
MAX_BANDWIDTH = math.sqrt(2.0) * 0.5


@dataclass(frozen=True)
class DiscreteSource:
    """Discrete memoryless source: symbol probabilities and optional rate."""

    probabilities: tuple[float, ...]
    symbol_rate: float | None = None

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        if not probs or any(p <= 0 for p in probs):
            raise DomainError("all symbol probabilities must be strictly positive")
        if abs(sum(probs) - 1.0) > 1e-9:
            raise DomainError(f"probabilities must sum to 1, got {sum(probs)!r}")
        if self.symbol_rate is not None and self.symbol_rate < 0:
            raise ConfigurationError("symbol_rate must be non-negative")
        object.__setattr__(self, "probabilities", probs)


@dataclass(frozen=True)
class ChannelModel:
    """Bandlimited AWGN channel (or its spatial-frequency analog)."""

    bandwidth: float
    signal_power: float
    noise_power: float
    attenuation: float = 1.0

    def __post_init__(self):
        if self.bandwidth <= 0:
            raise DomainError("bandwidth must be positive")
        if self.noise_power <= 0:
            raise DomainError("noise power must be positive")
        if self.signal_power < 0:
            raise DomainError("signal power must be non-negative")
        if not (0.0 < self.attenuation <= 1.0):
            raise ConfigurationError("attenuation must lie in (0, 1]")


@dataclass(frozen=True)
class InfoReport:
    """Information storage of one image or analytic signal."""

    b_f: float
    snr_k: float
    rate: float
    total_bits: float
    camera_bits: float
    utilization: float
    warnings: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "b_f": self.b_f,
            "snr_k": self.snr_k,
            "rate_bits_per_pixel": self.rate,
            "total_bits": self.total_bits,
            "camera_bits": self.camera_bits,
            "utilization": self.utilization,
            "warnings": list(self.warnings),
        }


def discrete_entropy(src: DiscreteSource) -> float:
    """H = -sum p * log2 p, in bits/symbol."""
    return -sum(p * math.log2(p) for p in src.probabilities)


def info_rate_discrete(src: DiscreteSource) -> float:
    """R = r * H, in bits/second."""
    if src.symbol_rate is None:
        raise ConfigurationError("source has no symbol rate")
    return src.symbol_rate * discrete_entropy(src)


def channel_capacity(ch: ChannelModel) -> float:
    """C = B * log2(1 + S/N), in bits/second."""
    return ch.bandwidth * math.log2(1.0 + ch.signal_power / ch.noise_power)


def reliability(rate: float, capacity: float) -> str:
    """"reliable" iff rate < capacity; the boundary counts as unreliable."""
    if rate < 0 or capacity < 0:
        raise DomainError("rate and capacity must be non-negative")
    return "reliable" if rate < capacity else "unreliable"


def capacity_trade_table(
    c_target: float, bandwidths: list[float]
) -> list[tuple[float, float]]:
    """Rows (B, S/N) with S/N = 2**(C/B) - 1 so every row carries c_target."""
    if c_target <= 0:
        raise DomainError("target capacity must be positive")
    if any(b <= 0 for b in bandwidths):
        raise DomainError("all bandwidths must be positive")
    return [(float(b), 2.0 ** (c_target / b) - 1.0) for b in bandwidths]


def fringe_info_rate(
    b_f: float, snr_k: float, pixels: int, camera_bits: float = 8.0
) -> InfoReport:
    """Information rate B_f * log2(1 + SNR) of a noisy fringe image.

    A utilization above 1 means the estimate exceeds the digitizer capacity;
    it is reported as a warning, never clamped.
    """
    if not (0.0 < b_f <= MAX_BANDWIDTH):
        raise DomainError(f"bandwidth must lie in (0, {MAX_BANDWIDTH:.4f}], got {b_f}")
    if snr_k < 0:
        raise DomainError("SNR must be non-negative")
    if camera_bits <= 0:
        raise ConfigurationError("camera_bits must be positive")
    rate = b_f * math.log2(1.0 + snr_k)
    utilization = rate / camera_bits
    warnings = ()
    if utilization > 1.0:
        warnings = ("rate exceeds digitizer capacity",)
    return InfoReport(
        b_f=b_f,
        snr_k=snr_k,
        rate=rate,
        total_bits=rate * pixels,
        camera_bits=camera_bits,
        utilization=utilization,
        warnings=warnings,
    )


def analytic_info_rate(b_f: float, snr_k: float, m: int) -> float:
    """Rate of the analytic signal demodulated from M frames:
    B_f * log2(1 + M * SNR)."""
    if m < 1:
        raise ConfigurationError("frame count must be at least 1")
    if snr_k < 0:
        raise DomainError("SNR must be non-negative")
    return b_f * math.log2(1.0 + m * snr_k)


def doubling_frames(snr_k: float) -> float:
    """Frame count M = 2 + SNR that exactly doubles the information rate:
    log2(1 + M*SNR) = 2 * log2(1 + SNR)."""
    if snr_k < 0:
        raise DomainError("SNR must be non-negative")
    return 2.0 + snr_k


def doubling_curve(
    b_f: float, snr_values: list[float], m_values: list[int]
) -> list[dict]:
    """Grid of analytic rates over (SNR, M); monotone in both arguments."""
    if not snr_values or not m_values:
        raise ConfigurationError("doubling curve needs non-empty ranges")
    rows = []
    for snr in snr_values:
        for m in m_values:
            rows.append(
                {"snr_k": float(snr), "m": int(m), "rate": analytic_info_rate(b_f, snr, m)}
            )
    return rows
