import numpy as np
import pytest

from fringeinfo.errors import ConfigurationError
from fringeinfo.grid import RealImage, power
from fringeinfo.spectral import power_spectrum
from fringeinfo.synth import (
    FringeModel,
    PhaseField,
    make_phase_defocus,
    phase_map,
    sigma_for_snr,
    synth_fringe,
    synth_phase_shifted_stack,
    synth_profilometry_pair,
)


def defocus_model(fmax=0.5, sigma=0.0, seed=3, size=200, a=0.5, b=0.48):
    return FringeModel(size, size, a, b, PhaseField.defocus(None, fmax), sigma, seed)


def local_frequency(phase: RealImage) -> np.ndarray:
    gy, gx = np.gradient(phase.samples)
    return np.hypot(gx, gy) / (2 * np.pi)


class TestDefocusPhase:
    def test_zero_at_center(self):
        phi = make_phase_defocus(201, 201, (100.0, 100.0), 0.5)
        assert phi.samples[100, 100] == 0.0

    @pytest.mark.parametrize("fmax", [0.5, 0.125])
    def test_peak_local_frequency(self, fmax):
        phi = make_phase_defocus(200, 200, None, fmax)
        assert np.max(local_frequency(phi)) == pytest.approx(fmax, abs=0.01)

    def test_frequency_grows_from_center(self):
        phi = make_phase_defocus(100, 100, (49.5, 49.5), 0.25)
        freq = local_frequency(phi)
        assert freq[49, 49] < 0.01
        assert freq[0, 0] > freq[25, 25]

    def test_rejects_out_of_range_fmax(self):
        for bad in (0.0, -0.1, 0.6):
            with pytest.raises(ConfigurationError):
                make_phase_defocus(64, 64, None, bad)


class TestSynthFringe:
    def test_zero_modulation_gives_background(self):
        model = FringeModel(32, 32, 0.7, 0.0, PhaseField.defocus(None, 0.25), 0.0, 0)
        assert np.allclose(synth_fringe(model).samples, 0.7)

    def test_unit_modulation_zero_phase(self):
        flat = PhaseField.explicit(RealImage(np.zeros((16, 16))))
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            model = FringeModel(16, 16, 0.0, 1.0, flat, 0.0, 0)
        assert np.allclose(synth_fringe(model).samples, 1.0)

    def test_noise_power_calibrated(self):
        import warnings

        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            model = FringeModel(512, 512, 0.0, 0.0, PhaseField.defocus(None, 0.5), 1.0, 42)
        assert power(synth_fringe(model)) == pytest.approx(1.0, rel=0.02)

    def test_same_seed_bit_identical(self):
        a = synth_fringe(defocus_model(sigma=0.3))
        b = synth_fringe(defocus_model(sigma=0.3))
        assert np.array_equal(a.samples, b.samples)

    def test_noise_calibration_against_clean_frame(self):
        clean = synth_fringe(defocus_model(sigma=0.0, size=256))
        noisy = synth_fringe(defocus_model(sigma=0.2, size=256))
        residual = RealImage(noisy.samples - clean.samples)
        assert power(residual) == pytest.approx(0.04, rel=0.03)

    def test_warns_when_fringes_go_negative(self):
        with pytest.warns(UserWarning, match="clip"):
            FringeModel(16, 16, 0.3, 0.5, PhaseField.defocus(None, 0.25), 0.0, 0)


class TestProfilometryPair:
    def make(self, sigma=0.0, surface=None, size=128, period=8.0, theta=np.pi / 6):
        surface = surface if surface is not None else RealImage(np.zeros((size, size)))
        phase = PhaseField.profilometry(period, theta, surface)
        return FringeModel(size, size, 0.5, 0.4, phase, sigma, 7)

    def test_noiseless_background_equals_a(self):
        _, background = synth_profilometry_pair(self.make())
        assert np.allclose(background.samples, 0.5)

    def test_flat_surface_is_pure_carrier(self):
        fringes, _ = synth_profilometry_pair(self.make())
        spec = power_spectrum(RealImage(fringes.samples - 0.5))
        # all energy in exactly two symmetric bins at +-1/8 cycles/pixel
        h, w = spec.shape
        hot = spec > spec.max() * 1e-6
        assert hot.sum() == 2
        cols = np.where(hot)[1]
        freqs = np.fft.fftshift(np.fft.fftfreq(w))[cols]
        assert sorted(freqs) == pytest.approx([-0.125, 0.125])

    def test_pair_noise_draws_are_independent(self):
        fringes, background = synth_profilometry_pair(self.make(sigma=0.1))
        clean_f, clean_b = synth_profilometry_pair(self.make(sigma=0.0))
        nf = fringes.samples - clean_f.samples
        nb = background.samples - clean_b.samples
        corr = np.corrcoef(nf.ravel(), nb.ravel())[0, 1]
        assert abs(corr) < 0.02

    def test_requires_carrier_phase(self):
        with pytest.raises(ConfigurationError):
            synth_profilometry_pair(defocus_model())

    def test_period_below_two_pixels_rejected(self):
        with pytest.raises(ConfigurationError):
            PhaseField.profilometry(1.5, 0.5, RealImage(np.zeros((8, 8))))


class TestPhaseShiftedStack:
    def test_opposite_frames_mirror_about_background(self):
        stack = synth_phase_shifted_stack(defocus_model(size=64), 4)
        f0, f2 = stack.frames[0].samples, stack.frames[2].samples
        assert np.allclose(f2, 2 * 0.5 - f0, atol=1e-12)

    def test_frames_sum_to_background(self):
        model = defocus_model(size=64)
        stack = synth_phase_shifted_stack(model, 5)
        total = sum(f.samples - 0.5 for f in stack.frames)
        assert np.max(np.abs(total)) < 1e-9

    def test_quadrature_sum_recovers_modulation_and_phase(self):
        model = defocus_model(size=64, b=0.4)
        m = 6
        stack = synth_phase_shifted_stack(model, m)
        acc = sum(
            frame.samples * np.exp(1j * k * stack.omega0)
            for k, frame in enumerate(stack.frames)
        )
        expected = (m * 0.4 / 2.0) * np.exp(-1j * phase_map(model).samples)
        assert np.max(np.abs(acc - expected)) / np.max(np.abs(expected)) < 1e-9

    def test_rejects_fewer_than_three_frames(self):
        with pytest.raises(ConfigurationError):
            synth_phase_shifted_stack(defocus_model(), 2)

    def test_per_frame_noise_is_deterministic(self):
        s1 = synth_phase_shifted_stack(defocus_model(sigma=0.2, size=32), 4)
        s2 = synth_phase_shifted_stack(defocus_model(sigma=0.2, size=32), 4)
        for a, b in zip(s1.frames, s2.frames):
            assert np.array_equal(a.samples, b.samples)
        noises = [f.samples for f in s1.frames]
        assert not np.array_equal(noises[0], noises[1])


class TestSigmaForSnr:
    def test_matches_signal_power_ratio(self):
        model = defocus_model(b=0.4, size=128)
        sigma = sigma_for_snr(model, 4.0)
        signal = synth_fringe(model).samples - 0.5
        assert np.mean(signal**2) / sigma**2 == pytest.approx(4.0, rel=1e-12)

    def test_rejects_non_positive_target(self):
        with pytest.raises(ConfigurationError):
            sigma_for_snr(defocus_model(), 0.0)
