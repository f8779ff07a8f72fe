import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fringeinfo.errors import ConfigurationError, DomainError
from fringeinfo.infotheory import (
    MAX_BANDWIDTH,
    ChannelModel,
    DiscreteSource,
    analytic_info_rate,
    capacity_trade_table,
    channel_capacity,
    discrete_entropy,
    doubling_curve,
    doubling_frames,
    fringe_info_rate,
    info_rate_discrete,
    reliability,
)


class TestDiscreteEntropy:
    def test_uniform_two_symbols(self):
        assert discrete_entropy(DiscreteSource((0.5, 0.5))) == pytest.approx(1.0)

    def test_uniform_256_symbols(self):
        src = DiscreteSource(tuple([1 / 256] * 256))
        assert discrete_entropy(src) == pytest.approx(8.0)

    def test_dyadic_distribution(self):
        assert discrete_entropy(DiscreteSource((0.5, 0.25, 0.25))) == pytest.approx(1.5)

    def test_rejects_zero_probability(self):
        with pytest.raises(DomainError):
            DiscreteSource((1.0, 0.0))

    def test_rejects_unnormalized(self):
        with pytest.raises(DomainError):
            DiscreteSource((0.5, 0.4))


class TestDiscreteRate:
    def test_binary_source_at_100_baud(self):
        assert info_rate_discrete(DiscreteSource((0.5, 0.5), 100.0)) == pytest.approx(100.0)

    def test_zero_rate(self):
        assert info_rate_discrete(DiscreteSource((0.5, 0.5), 0.0)) == 0.0

    def test_dyadic_at_10_baud(self):
        assert info_rate_discrete(DiscreteSource((0.5, 0.25, 0.25), 10.0)) == pytest.approx(15.0)

    def test_missing_rate_rejected(self):
        with pytest.raises(ConfigurationError):
            info_rate_discrete(DiscreteSource((0.5, 0.5)))


class TestChannelCapacity:
    def test_telephone_line(self):
        c = channel_capacity(ChannelModel(3000.0, 1000.0, 1.0))
        assert c == pytest.approx(29901.7, abs=0.1)

    def test_zero_signal(self):
        assert channel_capacity(ChannelModel(3000.0, 0.0, 1.0)) == 0.0

    def test_wideband_low_snr(self):
        c = channel_capacity(ChannelModel(6000.0, 31.0, 1.0))
        assert c == pytest.approx(30000.0, rel=0.01)

    def test_rejects_non_positive_noise(self):
        with pytest.raises(DomainError):
            ChannelModel(3000.0, 1.0, 0.0)


class TestReliability:
    def test_below_capacity(self):
        assert reliability(29000.0, 30000.0) == "reliable"

    def test_above_capacity(self):
        assert reliability(31000.0, 30000.0) == "unreliable"

    def test_boundary_counts_as_unreliable(self):
        assert reliability(30000.0, 30000.0) == "unreliable"

    def test_rejects_negative(self):
        with pytest.raises(DomainError):
            reliability(-1.0, 10.0)


class TestCapacityTradeTable:
    def test_standard_rows(self):
        rows = dict(capacity_trade_table(30000.0, [1500, 3000, 6000, 9000, 12000]))
        assert rows[3000] == pytest.approx(1023.0)
        assert rows[6000] == pytest.approx(31.0)
        assert rows[12000] == pytest.approx(4.657, abs=0.001)

    def test_bandwidth_equal_to_capacity(self):
        (_, snr), = capacity_trade_table(5000.0, [5000.0])
        assert snr == pytest.approx(1.0)

    @given(c=st.floats(100, 1e6), ratio=st.floats(0.05, 40))
    def test_rows_round_trip_to_target(self, c, ratio):
        b = c / ratio
        (_, snr), = capacity_trade_table(c, [b])
        assert channel_capacity(ChannelModel(b, snr, 1.0)) == pytest.approx(c, rel=1e-9)

    def test_rejects_bad_inputs(self):
        with pytest.raises(DomainError):
            capacity_trade_table(0.0, [100.0])
        with pytest.raises(DomainError):
            capacity_trade_table(100.0, [0.0])


class TestFringeInfoRate:
    def test_nyquist_fringes_at_quantization_snr(self):
        report = fringe_info_rate(0.5, 70000.0, 200 * 200)
        assert report.rate == pytest.approx(8.05, abs=0.005)
        assert report.total_bits == pytest.approx(report.rate * 40000)
        assert report.utilization == pytest.approx(report.rate / 8.0)
        assert report.warnings  # above the 8-bit digitizer capacity

    def test_unity_snr_gives_half_bandwidth(self):
        assert fringe_info_rate(0.5, 1.0, 100).rate == pytest.approx(0.5)

    def test_carrier_fringe_regime(self):
        assert fringe_info_rate(0.11, 11.2, 100).rate == pytest.approx(0.397, abs=0.001)

    def test_rate_identity_holds(self):
        report = fringe_info_rate(0.3, 17.0, 10)
        assert report.rate == pytest.approx(0.3 * math.log2(18.0), abs=1e-12)

    def test_bandwidth_domain(self):
        for bad in (0.0, -0.1, MAX_BANDWIDTH + 1e-6):
            with pytest.raises(DomainError):
                fringe_info_rate(bad, 1.0, 10)

    def test_infinite_snr_sentinel_propagates(self):
        report = fringe_info_rate(0.5, math.inf, 100)
        assert math.isinf(report.rate)
        assert report.warnings

    def test_monotone_in_snr_with_limits(self):
        rates = [fringe_info_rate(0.5, s, 10).rate for s in (0.0, 0.1, 1, 10, 1e3, 1e6, 1e9)]
        assert rates[0] == 0.0
        assert all(a < b for a, b in zip(rates, rates[1:]))

    def test_matches_channel_capacity_functionally(self):
        for b, s, n in ((0.5, 3.0, 1.0), (0.125, 81.0, 10.0), (0.7, 0.2, 0.4)):
            c = channel_capacity(ChannelModel(b, s, n))
            r = fringe_info_rate(b, s / n, 1).rate
            assert c == pytest.approx(r, abs=1e-12)


class TestAnalyticRate:
    def test_single_frame_equals_fringe_rate(self):
        assert analytic_info_rate(0.5, 7.0, 1) == pytest.approx(fringe_info_rate(0.5, 7.0, 1).rate)

    def test_twelve_frame_boost(self):
        assert analytic_info_rate(0.125, 8.1, 12) == pytest.approx(0.827, abs=0.001)

    def test_zero_snr_stays_zero(self):
        for m in (1, 5, 50):
            assert analytic_info_rate(0.5, 0.0, m) == 0.0

    def test_rejects_zero_frames(self):
        with pytest.raises(ConfigurationError):
            analytic_info_rate(0.5, 1.0, 0)


class TestDoubling:
    def test_unit_snr_needs_three_frames(self):
        assert doubling_frames(1.0) == 3.0

    def test_snr_twenty_needs_22_frames(self):
        assert doubling_frames(20.0) == 22.0

    def test_zero_snr(self):
        assert doubling_frames(0.0) == 2.0

    @given(snr=st.floats(1e-6, 1e6))
    def test_exactly_doubles_the_log(self, snr):
        m = doubling_frames(snr)
        assert math.log2(1 + m * snr) == pytest.approx(2 * math.log2(1 + snr), rel=1e-12)

    def test_curve_monotone_in_both_arguments(self):
        rows = doubling_curve(0.5, [1.0, 2.0, 4.0], [1, 2, 4, 8])
        by_m = {}
        by_snr = {}
        for row in rows:
            by_m.setdefault(row["m"], []).append(row["rate"])
            by_snr.setdefault(row["snr_k"], []).append(row["rate"])
        for rates in list(by_m.values()) + list(by_snr.values()):
            assert all(a < b for a, b in zip(rates, rates[1:]))

    def test_curve_green_zone_start(self):
        (row,) = doubling_curve(0.5, [3.0], [1])
        assert row["rate"] == pytest.approx(1.0)

    def test_curve_doubling_rows(self):
        # integer SNR keeps the doubling frame count M = 2 + SNR integral
        for snr in (1.0, 5.0, 20.0):
            single = analytic_info_rate(0.5, snr, 1)
            doubled = analytic_info_rate(0.5, snr, round(doubling_frames(snr)))
            assert doubled == pytest.approx(2 * single, rel=1e-9)
