"""Command-line surface: synthesis, analysis reports, PSA compression,
carrier demodulation, capacity tables, the PNG redundancy experiment and a
downlink byte budget.

Reports are machine-first (JSON or CSV) with a one-line human summary on
stdout; each report command also renders matplotlib figures next to the
delimited output.  Every run writes a manifest echoing its effective
parameters, and rerunning a command from its manifest reproduces every
output byte for byte.

Exit codes: 0 success, 2 configuration error, 3 domain/diagnostic error,
4 I/O error.
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import __version__, figures
from .errors import ConfigurationError, DomainError, FringeError, ImageIOError
from .grid import (
    ComplexImage,
    QuantizationSpec,
    RealImage,
    load_image,
    quantize_codes,
    save_complex,
    save_image,
)
from .infotheory import (
    InfoReport,
    analytic_info_rate,
    capacity_trade_table,
    channel_capacity,
    doubling_curve,
    fringe_info_rate,
)
from .psa import demodulate_stack, least_squares_kernel, load_kernel
from .carrier import demodulate_carrier, fit_lobe, wrapped_phase
from .spectral import (
    SpectralRegions,
    default_regions,
    estimate_bandwidth,
    estimate_noise_density,
    estimate_snr,
)
from .synth import (
    FringeModel,
    FringeStack,
    PhaseField,
    sigma_for_snr,
    synth_fringe,
    synth_phase_shifted_stack,
    synth_profilometry_pair,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3
EXIT_IO = 4


# --------------------------------------------------------------------------
# Serialization helpers
# --------------------------------------------------------------------------


def _sanitize(obj):
    """Make a JSON-safe copy; non-finite floats become "inf"/"-inf"/"nan"."""
    if isinstance(obj, dict):
        return {k: _sanitize(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        f = float(obj)
        if math.isinf(f):
            return "inf" if f > 0 else "-inf"
        if math.isnan(f):
            return "nan"
        return f
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def _write_text_atomic(path: str, text: str) -> None:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    os.replace(tmp, path)


def _write_json(path: str, doc) -> None:
    _write_text_atomic(path, json.dumps(_sanitize(doc), indent=2) + "\n")


def _write_csv(path: str, header: list[str], rows: list[list]) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    _write_text_atomic(path, buf.getvalue())


def _write_manifest(outdir: str, command: str, params: dict) -> None:
    # the output directory is a destination, not content-affecting config,
    # so it stays out of the manifest and reruns into any directory match
    doc = {
        "tool": "fringeinfo",
        "version": __version__,
        "command": command,
        "params": _sanitize(params),
    }
    _write_json(os.path.join(outdir, "manifest.json"), doc)


def _save_mask_pgm(mask: np.ndarray, path: str) -> None:
    save_image(RealImage(np.where(mask, 255.0, 0.0)), path, bits=8)


def _phase_to_codes(phase: RealImage) -> RealImage:
    codes = np.rint((phase.samples + np.pi) / (2.0 * np.pi) * 255.0)
    return RealImage(np.clip(codes, 0.0, 255.0))


# --------------------------------------------------------------------------
# Shared analysis pipeline
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class AnalysisResult:
    eta: float
    regions: SpectralRegions
    report: InfoReport

    def to_dict(self) -> dict:
        doc = {"eta": self.eta}
        doc.update(self.report.to_dict())
        return doc


def analyze_image(
    img: RealImage | ComplexImage,
    background: RealImage | None = None,
    camera_bits: float = 8.0,
    energy_fraction: float = 0.99,
) -> AnalysisResult:
    """Estimate eta, SNR, bandwidth and the information rate of one image.

    When a matched background frame is given, the noise density and the
    region bootstrap come from its spectrum instead of the fringe frame's,
    which removes the signal-leakage bias from the noise floor.
    """
    regions = default_regions(img, eta_probe=background)
    eta_source = background if background is not None else img
    eta = estimate_noise_density(eta_source, regions)
    snr = estimate_snr(img, regions, eta)
    pixels = img.width * img.height
    if regions.empty_signal or snr == 0.0:
        report = InfoReport(
            b_f=0.0,
            snr_k=snr,
            rate=0.0,
            total_bits=0.0,
            camera_bits=camera_bits,
            utilization=0.0,
            warnings=("no signal detected: SN region is empty or carries no energy",),
        )
        return AnalysisResult(eta, regions, report)
    b_f = estimate_bandwidth(img, regions, eta, energy_fraction)
    return AnalysisResult(eta, regions, fringe_info_rate(b_f, snr, pixels, camera_bits))


# --------------------------------------------------------------------------
# Model plumbing: CLI parameters <-> synth models
# --------------------------------------------------------------------------


def _surface_image(kind: str, width: int, height: int, amplitude: float) -> RealImage:
    yy, xx = np.mgrid[0:height, 0:width]
    if kind == "flat":
        data = np.zeros((height, width))
    elif kind == "ramp":
        data = amplitude * xx / max(width - 1, 1)
    elif kind == "dome":
        data = amplitude * np.exp(
            -(((xx - width / 2) / (0.30 * width)) ** 2 + ((yy - height / 2) / (0.30 * height)) ** 2)
        )
    else:
        raise ConfigurationError(f"unknown surface kind {kind!r}")
    return RealImage(data)


def _phase_doc(args) -> dict:
    if args.phase == "defocus":
        doc = {"kind": "defocus", "f_max": args.f_max}
        if args.center_x is not None or args.center_y is not None:
            if args.center_x is None or args.center_y is None:
                raise ConfigurationError("give both --center-x and --center-y or neither")
            doc["center"] = [args.center_x, args.center_y]
        return doc
    return {
        "kind": "profilometry-carrier",
        "period": args.period,
        "theta": args.theta,
        "surface": {"kind": args.surface, "amplitude": args.surface_amplitude},
    }


def _phase_from_doc(doc: dict, width: int, height: int) -> PhaseField:
    if doc["kind"] == "defocus":
        center = tuple(doc["center"]) if doc.get("center") else None
        return PhaseField.defocus(center, doc["f_max"])
    if doc["kind"] == "profilometry-carrier":
        surf = doc["surface"]
        surface = _surface_image(surf["kind"], width, height, surf["amplitude"])
        return PhaseField.profilometry(doc["period"], doc["theta"], surface)
    raise ConfigurationError(f"unknown phase kind {doc['kind']!r} in model")


def _model_from_doc(doc: dict) -> FringeModel:
    width, height = int(doc["width"]), int(doc["height"])
    return FringeModel(
        width=width,
        height=height,
        background=float(doc["background"]),
        modulation=float(doc["modulation"]),
        phase=_phase_from_doc(doc["phase"], width, height),
        noise_sigma=float(doc["noise_sigma"]),
        seed=int(doc["seed"]),
    )


def _resolve_model(args) -> tuple[FringeModel, dict]:
    """Build the model from CLI args, resolving --target-snr to a sigma."""
    phase_doc = _phase_doc(args)
    doc = {
        "width": args.width,
        "height": args.height,
        "background": args.background,
        "modulation": args.modulation,
        "phase": phase_doc,
        "noise_sigma": args.sigma,
        "seed": args.seed,
    }
    if args.target_snr is not None:
        noiseless = _model_from_doc({**doc, "noise_sigma": 0.0})
        doc["noise_sigma"] = sigma_for_snr(noiseless, args.target_snr)
    return _model_from_doc(doc), doc


def _levels_for(images: list[RealImage], args) -> QuantizationSpec:
    if args.auto_levels:
        lo = min(float(img.samples.min()) for img in images)
        hi = max(float(img.samples.max()) for img in images)
        span = hi - lo
        if span == 0.0:
            lo, hi = lo - 0.5, hi + 0.5
        else:
            lo, hi = lo - 0.02 * span, hi + 0.02 * span
        return QuantizationSpec(args.bits, lo, hi)
    return QuantizationSpec(args.bits, args.black, args.white)


def _save_frame(img: RealImage, spec: QuantizationSpec, path: str) -> None:
    save_image(RealImage(quantize_codes(img, spec).astype(np.float64)), path, bits=spec.bits)


def _load_stack(path: str) -> tuple[FringeStack, dict]:
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ImageIOError(f"cannot read stack manifest {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"malformed stack manifest {path}: {exc}") from exc
    base = os.path.dirname(os.path.abspath(path))
    frames = tuple(load_image(os.path.join(base, name)) for name in doc["files"])
    model = _model_from_doc(doc["model"])
    if len(frames) != int(doc["frames"]):
        raise ConfigurationError("stack manifest frame count does not match files")
    return FringeStack(frames, 2.0 * math.pi / len(frames), model), doc


# --------------------------------------------------------------------------
# Commands
# --------------------------------------------------------------------------


def cmd_synth(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    model, model_doc = _resolve_model(args)
    params = _params_of(args)

    if args.frames:
        stack = synth_phase_shifted_stack(model, args.frames)
        spec = _levels_for(list(stack.frames), args)
        names = [f"frame_{m:02d}.{args.image_format}" for m in range(stack.m)]
        for name, frame in zip(names, stack.frames):
            _save_frame(frame, spec, os.path.join(args.out, name))
        stack_doc = {
            "model": model_doc,
            "frames": stack.m,
            "omega0": stack.omega0,
            "files": names,
            "levels": {"bits": spec.bits, "black": spec.black_level, "white": spec.white_level},
        }
        _write_json(os.path.join(args.out, "stack.json"), stack_doc)
        if not args.no_figures:
            figures.fringe_panel(
                [("frame 0", stack.frames[0]), (f"frame {stack.m - 1}", stack.frames[-1])],
                os.path.join(args.out, "preview.png"),
            )
        print(f"wrote {stack.m}-frame stack to {args.out} (sigma={model.noise_sigma:.6g})")
    elif args.pair:
        fringe, background = synth_profilometry_pair(model)
        spec = _levels_for([fringe, background], args)
        _save_frame(fringe, spec, os.path.join(args.out, f"fringe.{args.image_format}"))
        _save_frame(background, spec, os.path.join(args.out, f"background.{args.image_format}"))
        _write_json(
            os.path.join(args.out, "model.json"),
            {
                "model": model_doc,
                "levels": {"bits": spec.bits, "black": spec.black_level, "white": spec.white_level},
            },
        )
        if not args.no_figures:
            figures.fringe_panel(
                [("fringes", fringe), ("background", background)],
                os.path.join(args.out, "preview.png"),
            )
        print(f"wrote fringe/background pair to {args.out} (sigma={model.noise_sigma:.6g})")
    else:
        fringe = synth_fringe(model)
        spec = _levels_for([fringe], args)
        _save_frame(fringe, spec, os.path.join(args.out, f"fringe.{args.image_format}"))
        _write_json(
            os.path.join(args.out, "model.json"),
            {
                "model": model_doc,
                "levels": {"bits": spec.bits, "black": spec.black_level, "white": spec.white_level},
            },
        )
        if not args.no_figures:
            figures.fringe_panel([("fringes", fringe)], os.path.join(args.out, "preview.png"))
        print(f"wrote fringe image to {args.out} (sigma={model.noise_sigma:.6g})")

    _write_manifest(args.out, "synth", params)
    return EXIT_OK


def _report_rows(results: list[tuple[str, AnalysisResult]]) -> tuple[list[str], list[list]]:
    header = [
        "path", "eta", "b_f", "snr_k", "rate_bits_per_pixel",
        "total_bits", "camera_bits", "utilization", "warnings",
    ]
    rows = []
    for path, res in results:
        r = res.report
        rows.append(
            [path, res.eta, r.b_f, r.snr_k, r.rate, r.total_bits,
             r.camera_bits, r.utilization, ";".join(r.warnings)]
        )
    return header, rows


def cmd_analyze(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    background = load_image(args.background) if args.background else None
    results = []
    for path in args.images:
        img = load_image(path)
        results.append((path, analyze_image(img, background, args.camera_bits)))

    doc = {"images": [{"path": p, **res.to_dict()} for p, res in results]}
    if len(results) > 1:
        doc["mean"] = {
            "snr_k": float(np.mean([r.report.snr_k for _, r in results])),
            "b_f": float(np.mean([r.report.b_f for _, r in results])),
            "rate_bits_per_pixel": float(np.mean([r.report.rate for _, r in results])),
        }
    if args.format == "json":
        _write_json(os.path.join(args.out, "report.json"), doc)
    else:
        header, rows = _report_rows(results)
        _write_csv(os.path.join(args.out, "report.csv"), header, rows)

    first = results[0][1]
    _save_mask_pgm(first.regions.sn_mask, os.path.join(args.out, "sn_mask.pgm"))
    _save_mask_pgm(first.regions.nr_mask, os.path.join(args.out, "nr_mask.pgm"))
    _save_mask_pgm(first.regions.dc_mask, os.path.join(args.out, "dc_mask.pgm"))
    if not args.no_figures:
        img = load_image(args.images[0])
        figures.analysis_figure(
            img, first.regions, first.report.b_f, first.report.rate,
            os.path.join(args.out, "spectrum.png"),
        )
    _write_manifest(args.out, "analyze", _params_of(args))
    r = first.report
    print(
        f"eta={first.eta:.6g} SNR_K={r.snr_k:.6g} B_f={r.b_f:.4g} "
        f"rate={r.rate:.4g} bits/pixel utilization={r.utilization:.3g}"
    )
    for warning in r.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return EXIT_OK


def cmd_psa_demod(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    stack, stack_doc = _load_stack(args.stack)
    kernel = load_kernel(args.kernel) if args.kernel else least_squares_kernel(stack.m)

    analytic = demodulate_stack(stack, kernel)
    save_complex(analytic, os.path.join(args.out, "analytic.craw"))
    phase = wrapped_phase(analytic)
    save_image(_phase_to_codes(phase), os.path.join(args.out, "wrapped_phase.pgm"), bits=8)

    frame_results = [analyze_image(f, camera_bits=args.camera_bits) for f in stack.frames]
    before_snr = float(np.mean([r.report.snr_k for r in frame_results]))
    before_bf = frame_results[0].report.b_f
    pixels = stack.frames[0].width * stack.frames[0].height
    before = fringe_info_rate(before_bf, before_snr, pixels, args.camera_bits) if before_bf > 0 \
        else frame_results[0].report
    after_res = analyze_image(analytic, camera_bits=args.camera_bits)

    doc = {
        "frames": stack.m,
        "kernel_taps": kernel.m,
        "before": {"eta": frame_results[0].eta, **before.to_dict()},
        "after": after_res.to_dict(),
        "rate_increase": (after_res.report.rate / before.rate) if before.rate else None,
    }
    if args.format == "json":
        _write_json(os.path.join(args.out, "report.json"), doc)
    else:
        header = ["stage", "eta", "b_f", "snr_k", "rate_bits_per_pixel", "utilization"]
        rows = [
            ["before", frame_results[0].eta, before.b_f, before.snr_k, before.rate, before.utilization],
            ["after", after_res.eta, after_res.report.b_f, after_res.report.snr_k,
             after_res.report.rate, after_res.report.utilization],
        ]
        _write_csv(os.path.join(args.out, "report.csv"), header, rows)
    if not args.no_figures:
        figures.analytic_figure(analytic, os.path.join(args.out, "analytic.png"))
    _write_manifest(args.out, "psa-demod", _params_of(args))
    print(
        f"demodulated {stack.m} frames: rate {before.rate:.4g} -> "
        f"{after_res.report.rate:.4g} bits/pixel (SNR {before.snr_k:.4g} -> "
        f"{after_res.report.snr_k:.4g})"
    )
    return EXIT_OK


def cmd_carrier_demod(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    img = load_image(args.image)
    background = load_image(args.background) if args.background else None
    regions = default_regions(img, eta_probe=background)
    filt = fit_lobe(img, regions)
    analytic = demodulate_carrier(img, filt, keep_carrier=args.keep_carrier)
    save_complex(analytic, os.path.join(args.out, "analytic.craw"))
    phase = wrapped_phase(analytic)
    save_image(_phase_to_codes(phase), os.path.join(args.out, "wrapped_phase.pgm"), bits=8)
    doc = {
        "lobe": {
            "center": list(filt.center),
            "radius": filt.radius,
            "profile": filt.profile,
            "taper": filt.taper,
        },
        "keep_carrier": bool(args.keep_carrier),
    }
    _write_json(os.path.join(args.out, "lobe.json"), doc)
    if not args.no_figures:
        figures.fringe_panel(
            [("fringes", img), ("wrapped phase", phase)],
            os.path.join(args.out, "demodulation.png"),
        )
    _write_manifest(args.out, "carrier-demod", _params_of(args))
    print(
        f"carrier lobe at ({filt.center[0]:.4g}, {filt.center[1]:.4g}) "
        f"radius {filt.radius:.4g} cycles/pixel"
    )
    return EXIT_OK


def cmd_tables(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    bandwidths = [float(b) for b in args.bandwidths.split(",")]
    trade = capacity_trade_table(args.capacity, bandwidths)
    trade_rows = [
        [args.capacity, b, snr, channel_capacity_from(b, snr)] for b, snr in trade
    ]
    _write_csv(
        os.path.join(args.out, "capacity_trade.csv"),
        ["capacity_target_bits_per_s", "bandwidth_hz", "required_snr", "capacity_check"],
        trade_rows,
    )

    snr_values = [float(s) for s in args.snr_values.split(",")]
    m_values = [int(m) for m in args.m_values.split(",")]
    curve = doubling_curve(args.b_f, snr_values, m_values)
    _write_csv(
        os.path.join(args.out, "doubling_curve.csv"),
        ["b_f", "snr_k", "m", "rate_bits_per_pixel"],
        [[args.b_f, row["snr_k"], row["m"], row["rate"]] for row in curve],
    )
    if not args.no_figures:
        figures.capacity_trade_figure(trade, args.capacity, os.path.join(args.out, "capacity_trade.png"))
        figures.doubling_figure(curve, args.b_f, os.path.join(args.out, "doubling_curve.png"))
    _write_manifest(args.out, "tables", _params_of(args))
    print(f"wrote capacity trade ({len(trade)} rows) and doubling curve ({len(curve)} rows)")
    return EXIT_OK


def channel_capacity_from(bandwidth: float, snr: float) -> float:
    return bandwidth * math.log2(1.0 + snr)


def cmd_compress_compare(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    phase = PhaseField.defocus(None, args.f_max)
    clean_model = FringeModel(
        args.width, args.height, args.background, args.modulation, phase, 0.0, args.seed
    )
    sigma = args.sigma if args.sigma is not None else sigma_for_snr(clean_model, args.target_snr)
    spec = QuantizationSpec(8, args.black, args.white)

    clean = synth_fringe(clean_model)
    clean_path = os.path.join(args.out, "noiseless.png")
    _save_frame(clean, spec, clean_path)
    sizes = []
    sigma_levels = [sigma] if not args.sigma_levels else [
        float(s) for s in args.sigma_levels.split(",")
    ]
    noisy_paths = []
    for i, level in enumerate(sigma_levels):
        noisy_model = FringeModel(
            args.width, args.height, args.background, args.modulation, phase, level, args.seed
        )
        noisy = synth_fringe(noisy_model)
        name = "noisy.png" if len(sigma_levels) == 1 else f"noisy_{i}.png"
        path = os.path.join(args.out, name)
        _save_frame(noisy, spec, path)
        sizes.append(os.path.getsize(path))
        noisy_paths.append(path)

    clean_size = os.path.getsize(clean_path)
    doc = {
        "noiseless_bytes": clean_size,
        "noisy": [
            {"sigma": s, "bytes": b} for s, b in zip(sigma_levels, sizes)
        ],
        "ratio": sizes[-1] / clean_size,
    }
    _write_json(os.path.join(args.out, "report.json"), doc)
    if not args.no_figures:
        figures.compress_figure(
            clean, load_image(noisy_paths[-1]), clean_size, sizes[-1],
            os.path.join(args.out, "compression.png"),
        )
    _write_manifest(args.out, "compress-compare", _params_of(args))
    print(
        f"lossless PNG: noiseless {clean_size} bytes, noisy {sizes[-1]} bytes "
        f"(ratio {sizes[-1] / clean_size:.2f})"
    )
    return EXIT_OK


def cmd_downlink_budget(args) -> int:
    os.makedirs(args.out, exist_ok=True)
    stack, stack_doc = _load_stack(args.stack)
    camera_bits = int(stack_doc.get("levels", {}).get("bits", 8))
    pixels = stack.frames[0].width * stack.frames[0].height

    if args.snr is not None and args.b_f is not None:
        snr, b_f = args.snr, args.b_f
    else:
        measured = analyze_image(stack.frames[0], camera_bits=camera_bits)
        snr = args.snr if args.snr is not None else measured.report.snr_k
        b_f = args.b_f if args.b_f is not None else measured.report.b_f

    raw_payload = stack.m * pixels * camera_bits
    if args.payload == "complex64":
        compressed_payload = pixels * 2 * 32
    else:  # wrapped phase at the camera bit depth
        compressed_payload = pixels * camera_bits
    doc = {
        "frames": stack.m,
        "pixels": pixels,
        "camera_bits": camera_bits,
        "channel_capacity_bits_per_s": args.capacity,
        "payload_encoding": args.payload,
        "snr_k": snr,
        "b_f": b_f,
        "raw_payload_bits": raw_payload,
        "compressed_payload_bits": compressed_payload,
        "raw_transmit_seconds": raw_payload / args.capacity,
        "compressed_transmit_seconds": compressed_payload / args.capacity,
        "raw_rate_bits_per_pixel": (
            fringe_info_rate(b_f, snr, pixels, camera_bits).rate if b_f > 0 else 0.0
        ),
        "compressed_rate_bits_per_pixel": (
            analytic_info_rate(b_f, snr, stack.m) if b_f > 0 else 0.0
        ),
    }
    _write_json(os.path.join(args.out, "report.json"), doc)
    if not args.no_figures:
        figures.downlink_figure(doc, os.path.join(args.out, "downlink.png"))
    _write_manifest(args.out, "downlink-budget", _params_of(args))
    print(
        f"raw {raw_payload} bits ({doc['raw_transmit_seconds']:.1f}s) vs "
        f"compressed {compressed_payload} bits "
        f"({doc['compressed_transmit_seconds']:.1f}s) at {args.capacity:g} bits/s"
    )
    return EXIT_OK


# --------------------------------------------------------------------------
# Parser
# --------------------------------------------------------------------------

_EXCLUDED_PARAMS = {"func", "config", "out"}


def _params_of(args) -> dict:
    return {k: v for k, v in vars(args).items() if k not in _EXCLUDED_PARAMS}


def _add_common(sub) -> None:
    sub.add_argument("--out", default=".", help="output directory")
    sub.add_argument("--config", default=None, help="JSON manifest to preload parameters from")
    sub.add_argument("--format", choices=["json", "csv"], default="json", help="report format")
    sub.add_argument("--no-figures", action="store_true", help="skip matplotlib figure rendering")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fringeinfo",
        description="Shannon information storage of noisy fringe patterns "
        "and fringe-data compression by phase-shifting algorithms",
    )
    parser.add_argument("--version", action="version", version=f"fringeinfo {__version__}")
    subs = parser.add_subparsers(dest="command", required=True)

    synth = subs.add_parser("synth", help="synthesize fringe images, pairs or stacks")
    _add_common(synth)
    synth.add_argument("--width", type=int, default=200)
    synth.add_argument("--height", type=int, default=200)
    synth.add_argument("--background", type=float, default=0.5, help="background level a")
    synth.add_argument("--modulation", type=float, default=0.48, help="fringe modulation b")
    synth.add_argument("--phase", choices=["defocus", "carrier"], default="defocus")
    synth.add_argument("--f-max", type=float, default=0.5, help="peak defocus frequency, fringes/pixel")
    synth.add_argument("--center-x", type=float, default=None)
    synth.add_argument("--center-y", type=float, default=None)
    synth.add_argument("--period", type=float, default=10.0, help="carrier period, pixels")
    synth.add_argument("--theta", type=float, default=math.pi / 4, help="sensitivity angle, radians")
    synth.add_argument("--surface", choices=["flat", "ramp", "dome"], default="dome")
    synth.add_argument("--surface-amplitude", type=float, default=10.0)
    synth.add_argument("--sigma", type=float, default=0.0, help="AWGN standard deviation")
    synth.add_argument("--target-snr", type=float, default=None,
                       help="choose sigma for this fringe SNR instead of --sigma")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--frames", type=int, default=0, help="emit an M-frame phase-shifted stack")
    synth.add_argument("--pair", action="store_true", help="emit a fringe/background pair")
    synth.add_argument("--bits", type=int, default=8, help="stored bit depth")
    synth.add_argument("--black", type=float, default=0.0, help="black level for quantization")
    synth.add_argument("--white", type=float, default=1.0, help="white level for quantization")
    synth.add_argument("--auto-levels", action="store_true",
                       help="derive quantization levels from the data range")
    synth.add_argument("--image-format", choices=["png", "pgm"], default="png")
    synth.set_defaults(func=cmd_synth)

    analyze = subs.add_parser("analyze", help="information-rate report for fringe images")
    _add_common(analyze)
    analyze.add_argument("images", nargs="+", help="fringe image path(s)")
    analyze.add_argument("--background", default=None, help="matched background frame")
    analyze.add_argument("--camera-bits", type=float, default=8.0)
    analyze.set_defaults(func=cmd_analyze)

    demod = subs.add_parser("psa-demod", help="demodulate a phase-shifted stack into one analytic signal")
    _add_common(demod)
    demod.add_argument("--stack", required=True, help="stack.json manifest from synth --frames")
    demod.add_argument("--kernel", default=None, help="kernel JSON; default least-squares")
    demod.add_argument("--camera-bits", type=float, default=8.0)
    demod.set_defaults(func=cmd_psa_demod)

    cdem = subs.add_parser("carrier-demod", help="single-lobe Fourier demodulation of carrier fringes")
    _add_common(cdem)
    cdem.add_argument("image", help="carrier fringe image")
    cdem.add_argument("--background", default=None)
    cdem.add_argument("--keep-carrier", action="store_true",
                      help="keep the carrier ramp in the recovered phase")
    cdem.set_defaults(func=cmd_carrier_demod)

    tables = subs.add_parser("tables", help="capacity trade table and doubling curve")
    _add_common(tables)
    tables.add_argument("--capacity", type=float, default=30000.0)
    tables.add_argument("--bandwidths", default="1500,3000,6000,9000,12000")
    tables.add_argument("--b-f", type=float, default=0.5)
    tables.add_argument("--snr-values", default="0.5,1,2,3,5,8,12,20")
    tables.add_argument("--m-values", default="1,2,3,5,8,12,22")
    tables.set_defaults(func=cmd_tables)

    comp = subs.add_parser("compress-compare", help="lossless PNG size of noiseless vs noisy fringes")
    _add_common(comp)
    comp.add_argument("--width", type=int, default=200)
    comp.add_argument("--height", type=int, default=200)
    comp.add_argument("--background", type=float, default=0.5)
    comp.add_argument("--modulation", type=float, default=0.48)
    comp.add_argument("--f-max", type=float, default=0.03125,
                      help="wide smooth fringes compress well losslessly")
    comp.add_argument("--target-snr", type=float, default=1.0)
    comp.add_argument("--sigma", type=float, default=None)
    comp.add_argument("--sigma-levels", default=None,
                      help="comma-separated sigmas; emits one noisy image per level")
    comp.add_argument("--black", type=float, default=0.0)
    comp.add_argument("--white", type=float, default=1.0)
    comp.add_argument("--seed", type=int, default=0)
    comp.set_defaults(func=cmd_compress_compare)

    down = subs.add_parser("downlink-budget", help="raw vs PSA-compressed downlink payload")
    _add_common(down)
    down.add_argument("--stack", required=True, help="stack.json manifest")
    down.add_argument("--capacity", type=float, default=30000.0, help="channel capacity, bits/s")
    down.add_argument("--payload", choices=["complex64", "phase8"], default="complex64")
    down.add_argument("--snr", type=float, default=None, help="override the measured fringe SNR")
    down.add_argument("--b-f", type=float, default=None, help="override the measured bandwidth")
    down.set_defaults(func=cmd_downlink_budget)

    return parser


def _preload_config(argv: list[str]) -> dict | None:
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            path = argv[i + 1]
        elif token.startswith("--config="):
            path = token.split("=", 1)[1]
        else:
            continue
        try:
            with open(path, encoding="utf-8") as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ImageIOError(f"cannot read config {path}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"malformed config {path}: {exc}") from exc
        return doc.get("params", doc)
    return None


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        preset = _preload_config(argv)
        namespace = argparse.Namespace()
        if preset:
            for key, value in preset.items():
                setattr(namespace, key.replace("-", "_"), value)
        args = parser.parse_args(argv, namespace)
        return args.func(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ImageIOError, OSError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
