"""AAA间隔方程与控制器测试"""

import logging

import pytest

from vccsched.channel import (
    AaaIntervalController,
    ChannelStats,
    IntervalConfig,
    IntervalState,
    StaticIntervalController,
    VehicleSample,
    adapt_intervals,
    bsm_generated_per_si,
    effective_cch_utilization,
    ms_to_us,
    sent_per_si,
    update_running_stats,
    vc_packets_sent_in_extended_schi,
    vehicle_mean_delay,
)
from vccsched.exception import DataValidationError


@pytest.fixture
def cfg():
    return IntervalConfig()


class TestIntervalConfig:
    def test_defaults(self, cfg):
        assert (cfg.si, cfg.guard, cfg.default_cchi, cfg.default_schi) == (100.0, 4.0, 50.0, 50.0)
        assert cfg.si_us == 100_000
        assert cfg.guard_us == 4_000

    def test_split_must_cover_interval(self):
        with pytest.raises(DataValidationError):
            IntervalConfig(si=100.0, default_cchi=40.0, default_schi=50.0)

    def test_guard_must_fit(self):
        with pytest.raises(DataValidationError):
            IntervalConfig(guard=50.0)

    def test_ms_to_us_rounds_up(self):
        assert ms_to_us(1.5) == 1500
        assert ms_to_us(0.0005) == 1
        assert ms_to_us(33.3) == 33300


class TestCounters:
    @pytest.mark.parametrize("rate,window,expected", [(10, 100, 1), (20, 100, 2), (15, 100, 1), (10, 50, 0)])
    def test_generated_per_si(self, rate, window, expected):
        assert bsm_generated_per_si(rate, window) == expected

    def test_generated_rejects_bad_window(self):
        with pytest.raises(ValueError):
            bsm_generated_per_si(10, 0)

    def test_sent_is_floored_at_zero(self):
        assert sent_per_si(3, 1) == 2
        assert sent_per_si(1, 4) == 0

    def test_vehicle_mean_delay(self):
        assert vehicle_mean_delay(0.0, 0) == 0.0
        assert vehicle_mean_delay(6.0, 3) == pytest.approx(2.0)
        with pytest.raises(ValueError):
            vehicle_mean_delay(1.0, -1)

    def test_vc_sent_in_extended_schi(self):
        assert vc_packets_sent_in_extended_schi([(1, 0), (1, 1), (2, 5)]) == 1


class TestRunningStats:
    def test_single_update(self):
        stats = ChannelStats(n_vehicles=3)
        samples = [VehicleSample(generated=1, queued=0, received=2, delay_sum_ms=2.2)] * 3
        updated = update_running_stats(stats, samples)
        assert updated.s_v2v == pytest.approx(3 / 4)
        assert updated.d_v2v == pytest.approx(6.6 / 7)
        assert updated.sent_total == 3
        assert updated.received_total == 6
        assert updated.updates == 1

    def test_recursion_uses_previous_values(self):
        stats = ChannelStats(n_vehicles=1, s_v2v=3.0, d_v2v=1.0)
        updated = update_running_stats(stats, [VehicleSample(1, 0, 0, 0.0)])
        assert updated.s_v2v == pytest.approx(2.0)
        assert updated.d_v2v == pytest.approx(1.0)

    def test_three_step_trace(self):
        stats = ChannelStats(n_vehicles=4)
        stats = update_running_stats(stats, [VehicleSample(1, 0, 1, 1.0)] * 4)
        assert (stats.s_v2v, stats.d_v2v) == (pytest.approx(0.8), pytest.approx(0.8))
        stats = update_running_stats(stats, [VehicleSample(1, 0, 1, 1.0)] * 4)
        assert (stats.s_v2v, stats.d_v2v) == (pytest.approx(0.96), pytest.approx(0.96))
        stats = update_running_stats(stats, [VehicleSample(2, 1, 2, 3.0)] * 4)
        assert stats.s_v2v == pytest.approx((0.96 + 4) / 5)
        assert stats.d_v2v == pytest.approx((0.96 + 12.0) / 9)
        assert (stats.sent_total, stats.queued_total, stats.received_total) == (12, 4, 16)
        assert stats.delay_sum_total == pytest.approx(20.0)
        assert stats.updates == 3

    def test_reset_keeps_population(self):
        stats = update_running_stats(ChannelStats(n_vehicles=4, bsm_rate=20.0),
                                     [VehicleSample(2, 0, 3, 3.3)] * 4)
        cleared = stats.reset()
        assert cleared == ChannelStats(n_vehicles=4, bsm_rate=20.0)

    def test_utilization_is_product(self):
        assert effective_cch_utilization(ChannelStats(n_vehicles=2, s_v2v=4.0, d_v2v=2.5)) == pytest.approx(10.0)


class TestAdaptIntervals:
    def test_light_load_shrinks_cchi(self, cfg):
        state = adapt_intervals(cfg, 20.0)
        assert state.cchi == pytest.approx(20.0)
        assert state.schi == pytest.approx(80.0)
        assert state.inactivity == pytest.approx(30.0)

    @pytest.mark.parametrize("u_cch", [50.0, 60.0, 1000.0])
    def test_saturation_restores_default(self, cfg, u_cch):
        state = adapt_intervals(cfg, u_cch)
        assert (state.cchi, state.schi, state.inactivity) == (50.0, 50.0, 0.0)

    @pytest.mark.parametrize("u_cch", [0.0, 0.5, 12.34, 49.999, 50.0, 77.0])
    def test_split_always_sums_to_interval(self, cfg, u_cch):
        state = adapt_intervals(cfg, u_cch)
        assert state.cchi + state.schi == pytest.approx(cfg.si)
        assert state.schi >= cfg.default_schi

    @pytest.mark.parametrize("u_cch", [0.0, 9.53, 30.0, 50.0, 75.0])
    def test_idempotent(self, cfg, u_cch):
        state = adapt_intervals(cfg, u_cch)
        assert adapt_intervals(cfg, state.effective_cch_use) == state

    def test_monotone_in_utilization(self, cfg):
        states = [adapt_intervals(cfg, u / 4.0) for u in range(0, 401)]
        for before, after in zip(states, states[1:]):
            assert after.cchi >= before.cchi
            assert after.schi <= before.schi
        assert (states[0].cchi, states[0].schi) == (0.0, 100.0)

    def test_negative_utilization_rejected(self, cfg):
        with pytest.raises(ValueError):
            adapt_intervals(cfg, -1.0)


class TestControllers:
    def test_static_never_changes(self, cfg):
        controller = StaticIntervalController(cfg)
        controller.record_si([VehicleSample(1, 0, 4, 4.4)] * 5)
        assert controller.close_epoch() == IntervalState.default(cfg)
        assert controller.get_name() == "static1609"
        assert len(controller.history()) == 1

    def test_aaa_adapts_and_resets(self, cfg):
        controller = AaaIntervalController(cfg, n_vehicles=3)
        controller.record_si([VehicleSample(1, 0, 2, 2.2)] * 3)
        state = controller.close_epoch()
        expected = (3 / 4) * (6.6 / 7)
        assert state.cchi == pytest.approx(expected)
        assert state.schi == pytest.approx(100.0 - expected)
        assert controller.stats.updates == 0
        assert controller.current_state() == state

    def test_single_vehicle_warns_and_collapses_cchi(self, cfg, caplog):
        with caplog.at_level(logging.WARNING):
            controller = AaaIntervalController(cfg, n_vehicles=1)
        assert any("1 辆车" in record.getMessage() for record in caplog.records)
        controller.record_si([VehicleSample(1, 0, 0, 0.0)])
        state = controller.close_epoch()
        assert state.cchi == 0.0
        assert state.schi == pytest.approx(100.0)

    def test_vc_stats_only_while_schi_extended(self, cfg):
        controller = AaaIntervalController(cfg, n_vehicles=2)
        controller.record_vc([(1, 0), (1, 0)], delay_sum_ms=10.0, received=2)
        assert controller.diagnostics()["s_vc"] == 0

        controller.record_si([VehicleSample(1, 0, 1, 1.1)] * 2)
        controller.close_epoch()
        controller.record_vc([(1, 0), (1, 0)], delay_sum_ms=9.0, received=2)
        diagnostics = controller.diagnostics()
        assert diagnostics["s_vc"] == 2
        assert diagnostics["d_vc"] == pytest.approx(3.0)
        assert diagnostics["epochs"] == 1
