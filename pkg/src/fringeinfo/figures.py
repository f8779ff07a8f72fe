"""Matplotlib rendering of report figures to files.

Every CLI report command drops one or more PNG figures next to its
JSON/CSV output.  Rendering is headless (Agg) and avoids any
time-dependent metadata so reruns produce identical bytes.
"""

import matplotlib

matplotlib.use("Agg")

import numpy as np
from matplotlib import pyplot as plt

from .grid import ComplexImage, RealImage
from .spectral import SpectralRegions, power_spectrum

_SAVE_OPTS = {"dpi": 110, "metadata": {"Software": None}}


def _save(fig, path: str) -> None:
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def fringe_panel(images: list[tuple[str, RealImage]], path: str) -> None:
    """Side-by-side grayscale panels."""
    n = len(images)
    fig, axes = plt.subplots(1, n, figsize=(3.2 * n, 3.4))
    if n == 1:
        axes = [axes]
    for ax, (title, img) in zip(axes, images):
        ax.imshow(img.samples, cmap="gray", interpolation="nearest")
        ax.set_title(title, fontsize=9)
        ax.axis("off")
    fig.tight_layout()
    _save(fig, path)


def analysis_figure(
    img: RealImage | ComplexImage,
    regions: SpectralRegions,
    b_f: float,
    rate: float,
    path: str,
) -> None:
    """Image (or its magnitude), log-power spectrum with the SN outline and
    the bandwidth circle, and the SN mask."""
    spec = power_spectrum(img)
    log_spec = np.log10(spec + spec.max() * 1e-12 + 1e-300)
    h, w = spec.shape
    extent = [-0.5, 0.5, 0.5, -0.5]

    fig, axes = plt.subplots(1, 3, figsize=(10.5, 3.6))
    shown = np.abs(img.samples) if np.iscomplexobj(img.samples) else img.samples
    axes[0].imshow(shown, cmap="gray", interpolation="nearest")
    axes[0].set_title("image", fontsize=9)
    axes[0].axis("off")

    axes[1].imshow(log_spec, cmap="viridis", extent=extent, interpolation="nearest")
    if b_f > 0:
        circle = plt.Circle((0, 0), b_f, fill=False, color="red", linewidth=1.0)
        axes[1].add_patch(circle)
    axes[1].set_title(f"log10 |I(u,v)|^2   B_f={b_f:.3f}", fontsize=9)
    axes[1].set_xlabel("u (cycles/pixel)", fontsize=8)
    axes[1].set_ylabel("v (cycles/pixel)", fontsize=8)

    overlay = np.zeros((h, w))
    overlay[regions.nr_mask] = 1.0
    overlay[regions.sn_mask] = 2.0
    overlay[regions.dc_mask] = 3.0
    axes[2].imshow(overlay, cmap="magma", extent=extent, interpolation="nearest")
    axes[2].set_title(f"regions (SN/NR/DC)   rate={rate:.3f} bits/px", fontsize=9)
    axes[2].set_xlabel("u (cycles/pixel)", fontsize=8)
    fig.tight_layout()
    _save(fig, path)


def capacity_trade_figure(rows: list[tuple[float, float]], c_target: float, path: str) -> None:
    bandwidths = [r[0] for r in rows]
    snrs = [r[1] for r in rows]
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    ax.semilogy(bandwidths, snrs, "o-")
    ax.set_xlabel("bandwidth B (Hz)")
    ax.set_ylabel("required S/N")
    ax.set_title(f"S/N vs B at constant capacity {c_target:g} bits/s", fontsize=9)
    ax.grid(True, which="both", alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def doubling_figure(rows: list[dict], b_f: float, path: str) -> None:
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    by_m: dict[int, list[dict]] = {}
    for row in rows:
        by_m.setdefault(row["m"], []).append(row)
    for m, sub in sorted(by_m.items()):
        sub = sorted(sub, key=lambda r: r["snr_k"])
        ax.plot([r["snr_k"] for r in sub], [r["rate"] for r in sub], label=f"M={m}")
    ax.set_xlabel("fringe SNR")
    ax.set_ylabel("rate (bits/pixel)")
    ax.set_title(f"analytic-signal information rate, B_f={b_f:g}", fontsize=9)
    ax.legend(fontsize=8)
    ax.grid(True, alpha=0.3)
    fig.tight_layout()
    _save(fig, path)


def analytic_figure(analytic: ComplexImage, path: str) -> None:
    """Real part, imaginary part, magnitude, wrapped phase."""
    z = analytic.samples
    panels = [
        ("Re", z.real, "gray"),
        ("Im", z.imag, "gray"),
        ("|A|", np.abs(z), "gray"),
        ("arg", np.angle(z), "twilight"),
    ]
    fig, axes = plt.subplots(1, 4, figsize=(12.4, 3.2))
    for ax, (title, data, cmap) in zip(axes, panels):
        ax.imshow(data, cmap=cmap, interpolation="nearest")
        ax.set_title(title, fontsize=9)
        ax.axis("off")
    fig.tight_layout()
    _save(fig, path)


def compress_figure(
    noiseless: RealImage, noisy: RealImage, size_clean: int, size_noisy: int, path: str
) -> None:
    fig, axes = plt.subplots(1, 2, figsize=(6.6, 3.6))
    for ax, (img, label, size) in zip(
        axes,
        [(noiseless, "noiseless", size_clean), (noisy, "noisy", size_noisy)],
    ):
        ax.imshow(img.samples, cmap="gray", interpolation="nearest")
        ax.set_title(f"{label}: {size} bytes PNG", fontsize=9)
        ax.axis("off")
    fig.tight_layout()
    _save(fig, path)


def downlink_figure(report: dict, path: str) -> None:
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    labels = ["raw frames", "compressed"]
    payloads = [report["raw_payload_bits"], report["compressed_payload_bits"]]
    ax.bar(labels, payloads, color=["tab:red", "tab:green"])
    ax.set_ylabel("payload (bits)")
    ax.set_title(
        f"downlink payload, transmit {report['raw_transmit_seconds']:.1f}s vs "
        f"{report['compressed_transmit_seconds']:.1f}s",
        fontsize=9,
    )
    fig.tight_layout()
    _save(fig, path)
