import csv
import json
import math
import os
import subprocess
import sys

import numpy as np
import pytest

from fringeinfo.cli import main

pytestmark = pytest.mark.filterwarnings("ignore::UserWarning")


def run(*argv):
    return main([str(a) for a in argv])


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def files_equal(a, b):
    with open(a, "rb") as fa, open(b, "rb") as fb:
        return fa.read() == fb.read()


@pytest.fixture
def outdir(tmp_path):
    def make(name):
        path = tmp_path / name
        return str(path)

    return make


class TestSynth:
    def test_repeat_runs_are_byte_identical(self, outdir):
        for name in ("s1", "s2"):
            assert run("synth", "--out", outdir(name), "--sigma", 0.1, "--seed", 5) == 0
        for fname in ("fringe.png", "model.json", "manifest.json", "preview.png"):
            assert files_equal(os.path.join(outdir("s1"), fname), os.path.join(outdir("s2"), fname))

    def test_stack_writes_all_frames_and_manifest(self, outdir):
        out = outdir("stack")
        assert run("synth", "--out", out, "--frames", 12, "--f-max", 0.125,
                   "--target-snr", 8.1, "--seed", 8, "--bits", 16, "--auto-levels") == 0
        doc = read_json(os.path.join(out, "stack.json"))
        assert doc["frames"] == 12
        assert len(doc["files"]) == 12
        assert doc["omega0"] == pytest.approx(2 * math.pi / 12)
        for name in doc["files"]:
            assert os.path.exists(os.path.join(out, name))

    def test_single_frame_stack_is_rejected(self, outdir):
        assert run("synth", "--out", outdir("bad"), "--frames", 1) == 2

    def test_pair_emits_background(self, outdir):
        out = outdir("pair")
        assert run("synth", "--out", out, "--phase", "carrier", "--pair",
                   "--target-snr", 11.2, "--bits", 16, "--auto-levels") == 0
        assert os.path.exists(os.path.join(out, "fringe.png"))
        assert os.path.exists(os.path.join(out, "background.png"))

    def test_rerun_from_manifest_reproduces_bytes(self, outdir):
        first = outdir("m1")
        assert run("synth", "--out", first, "--f-max", 0.25, "--sigma", 0.05, "--seed", 9) == 0
        second = outdir("m2")
        assert run("synth", "--out", second, "--config",
                   os.path.join(first, "manifest.json")) == 0
        for fname in ("fringe.png", "model.json", "manifest.json", "preview.png"):
            assert files_equal(os.path.join(first, fname), os.path.join(second, fname))


class TestAnalyze:
    @pytest.fixture
    def fringe_dir(self, outdir):
        out = outdir("fringes")
        assert run("synth", "--out", out, "--f-max", 0.5, "--seed", 3) == 0
        return out

    def test_report_fields_and_masks(self, fringe_dir, outdir):
        out = outdir("report")
        assert run("analyze", os.path.join(fringe_dir, "fringe.png"), "--out", out) == 0
        doc = read_json(os.path.join(out, "report.json"))
        entry = doc["images"][0]
        for key in ("eta", "b_f", "snr_k", "rate_bits_per_pixel", "total_bits", "utilization"):
            assert key in entry
        assert entry["rate_bits_per_pixel"] == pytest.approx(7.77, abs=0.3)
        for mask in ("sn_mask.pgm", "nr_mask.pgm", "dc_mask.pgm"):
            assert os.path.exists(os.path.join(out, mask))
        assert os.path.exists(os.path.join(out, "spectrum.png"))

    def test_csv_format(self, fringe_dir, outdir):
        out = outdir("csvrep")
        assert run("analyze", os.path.join(fringe_dir, "fringe.png"),
                   "--out", out, "--format", "csv") == 0
        with open(os.path.join(out, "report.csv"), newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "path"
        assert len(rows) == 2

    def test_pure_noise_reports_zero_rate_with_warning(self, outdir, tmp_path):
        from fringeinfo.grid import RealImage, save_image

        rng = np.random.default_rng(7)
        codes = np.clip(np.rint(128 + 40 * rng.standard_normal((128, 128))), 0, 255)
        path = str(tmp_path / "noise.png")
        save_image(RealImage(codes), path, bits=8)
        out = outdir("noisereport")
        assert run("analyze", path, "--out", out) == 0
        entry = read_json(os.path.join(out, "report.json"))["images"][0]
        assert entry["rate_bits_per_pixel"] == 0.0
        assert entry["warnings"]

    def test_missing_file_gives_io_exit_code(self, outdir):
        assert run("analyze", "/nonexistent/fringe.png", "--out", outdir("x")) == 4

    def test_noiseless_pure_tone_reports_infinite_snr(self, outdir, tmp_path):
        from fringeinfo.grid import RealImage, save_image

        x = np.arange(128)
        codes = np.rint(127.5 + 127.49 * np.tile(np.cos(2 * np.pi * 0.25 * x), (128, 1)))
        path = str(tmp_path / "tone.png")
        save_image(RealImage(codes), path, bits=8)
        out = outdir("tonereport")
        assert run("analyze", path, "--out", out) == 0
        entry = read_json(os.path.join(out, "report.json"))["images"][0]
        assert entry["snr_k"] == "inf"
        assert entry["warnings"]


class TestPsaDemod:
    @pytest.fixture
    def stack_dir(self, outdir):
        out = outdir("stack12")
        assert run("synth", "--out", out, "--frames", 12, "--f-max", 0.125,
                   "--target-snr", 8.1, "--seed", 8, "--bits", 16, "--auto-levels") == 0
        return out

    def test_rate_roughly_doubles(self, stack_dir, outdir):
        out = outdir("demod")
        assert run("psa-demod", "--stack", os.path.join(stack_dir, "stack.json"),
                   "--out", out) == 0
        doc = read_json(os.path.join(out, "report.json"))
        assert doc["before"]["rate_bits_per_pixel"] == pytest.approx(0.40, abs=0.06)
        assert doc["after"]["rate_bits_per_pixel"] == pytest.approx(0.82, abs=0.10)
        assert os.path.exists(os.path.join(out, "analytic.craw"))
        assert os.path.exists(os.path.join(out, "wrapped_phase.pgm"))

    def test_non_quadrature_kernel_is_refused(self, stack_dir, outdir, tmp_path):
        kernel_path = str(tmp_path / "bad_kernel.json")
        with open(kernel_path, "w") as fh:
            json.dump({"M": 12, "taps": [[1.0, 0.0]] * 12}, fh)
        assert run("psa-demod", "--stack", os.path.join(stack_dir, "stack.json"),
                   "--kernel", kernel_path, "--out", outdir("ref")) == 2


class TestCarrierDemod:
    def test_recovers_carrier_lobe(self, outdir):
        src = outdir("carrier")
        assert run("synth", "--out", src, "--phase", "carrier", "--pair", "--width", 256,
                   "--height", 256, "--target-snr", 11.2, "--seed", 8,
                   "--bits", 16, "--auto-levels") == 0
        out = outdir("cdem")
        assert run("carrier-demod", os.path.join(src, "fringe.png"),
                   "--background", os.path.join(src, "background.png"), "--out", out) == 0
        lobe = read_json(os.path.join(out, "lobe.json"))["lobe"]
        assert lobe["center"][0] == pytest.approx(0.1, abs=0.01)
        assert os.path.exists(os.path.join(out, "wrapped_phase.pgm"))

    def test_baseband_fringes_exit_with_domain_code(self, outdir):
        src = outdir("baseband")
        assert run("synth", "--out", src, "--f-max", 0.25, "--seed", 1) == 0
        assert run("carrier-demod", os.path.join(src, "fringe.png"),
                   "--out", outdir("nope")) == 3


class TestTables:
    def test_capacity_trade_matches_known_rows(self, outdir):
        out = outdir("tables")
        assert run("tables", "--out", out) == 0
        with open(os.path.join(out, "capacity_trade.csv"), newline="") as fh:
            rows = {float(r["bandwidth_hz"]): r for r in csv.DictReader(fh)}
        assert float(rows[3000.0]["required_snr"]) == pytest.approx(1023.0)
        assert float(rows[12000.0]["required_snr"]) == pytest.approx(4.657, abs=0.001)
        for row in rows.values():
            assert float(row["capacity_check"]) == pytest.approx(30000.0, rel=1e-9)

    def test_doubling_curve_spans_green_zone(self, outdir):
        out = outdir("tables2")
        assert run("tables", "--out", out) == 0
        with open(os.path.join(out, "doubling_curve.csv"), newline="") as fh:
            rows = list(csv.DictReader(fh))
        single = {float(r["snr_k"]): float(r["rate_bits_per_pixel"])
                  for r in rows if r["m"] == "1"}
        assert single[3.0] == pytest.approx(1.0)
        assert os.path.exists(os.path.join(out, "doubling_curve.png"))


class TestCompressCompare:
    def test_noisy_png_at_least_twice_noiseless(self, outdir):
        out = outdir("comp")
        assert run("compress-compare", "--out", out) == 0
        doc = read_json(os.path.join(out, "report.json"))
        assert doc["ratio"] >= 2.0

    def test_noiseless_versus_itself(self, outdir):
        out = outdir("compself")
        assert run("compress-compare", "--out", out, "--sigma", 0.0) == 0
        doc = read_json(os.path.join(out, "report.json"))
        assert doc["ratio"] == pytest.approx(1.0)

    def test_size_monotone_in_noise(self, outdir):
        out = outdir("compmono")
        assert run("compress-compare", "--out", out, "--sigma-levels", "0.01,0.05,0.2") == 0
        doc = read_json(os.path.join(out, "report.json"))
        sizes = [entry["bytes"] for entry in doc["noisy"]]
        assert sizes == sorted(sizes)


class TestDownlinkBudget:
    @pytest.fixture
    def stack8(self, outdir):
        out = outdir("stack8")
        assert run("synth", "--out", out, "--frames", 12, "--f-max", 0.125,
                   "--modulation", 0.4, "--sigma", 0.02, "--seed", 2, "--bits", 8) == 0
        return os.path.join(out, "stack.json")

    def test_raw_transmit_time(self, stack8, outdir):
        out = outdir("budget")
        assert run("downlink-budget", "--stack", stack8, "--capacity", 30000,
                   "--out", out) == 0
        doc = read_json(os.path.join(out, "report.json"))
        assert doc["raw_payload_bits"] == 12 * 200 * 200 * 8
        assert doc["raw_transmit_seconds"] == pytest.approx(128.0)

    def test_compressed_payload_independent_of_frames(self, outdir):
        sizes = []
        for m in (6, 12):
            src = outdir(f"stack_m{m}")
            assert run("synth", "--out", src, "--frames", m, "--f-max", 0.125,
                       "--modulation", 0.4, "--sigma", 0.02, "--seed", 2, "--bits", 8) == 0
            out = outdir(f"budget_m{m}")
            assert run("downlink-budget", "--stack", os.path.join(src, "stack.json"),
                       "--out", out) == 0
            sizes.append(read_json(os.path.join(out, "report.json"))["compressed_payload_bits"])
        assert sizes[0] == sizes[1]

    def test_compressed_rate_dominates_single_frame(self, stack8, outdir):
        out = outdir("budget2")
        assert run("downlink-budget", "--stack", stack8, "--out", out) == 0
        doc = read_json(os.path.join(out, "report.json"))
        assert doc["compressed_rate_bits_per_pixel"] >= doc["raw_rate_bits_per_pixel"]


class TestEntryPoint:
    def test_module_invocation_reports_version(self):
        proc = subprocess.run(
            [sys.executable, "-m", "fringeinfo", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "fringeinfo" in proc.stdout
