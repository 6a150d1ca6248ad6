"""度量与报表测试"""

import json

import pytest

from vccsched.exception import DataValidationError, OutputIOError
from vccsched.interfaces import ScheduleResult
from vccsched.metrics import (
    METRIC_COLUMNS,
    VCC_SCENARIO_ID,
    MetricRow,
    bot_series,
    per_bot_breakdown,
    per_cloud_reward,
    per_vehicle_throughput,
    plot_series,
    read_rows,
    reward_decomposition,
    rows_to_frame,
    utilization,
    write_plot_data,
    write_rows,
)
from vccsched.scheduler import greedy_schedule, rollout
from vccsched.workload import PAID_TCC, BagOfTasks, PlacementRecord, VccModel

from conftest import single_cloud, unit_tasks


def _row(**changes):
    values = dict(scenario_id="VC1", scheme="aaa", scheduler="greedy", n_vehicles=5,
                  vc_throughput_kbps=600.0, bsm_delay_ms=9.5, vc_delay_ms=20.33, cchi_ms=10.0,
                  schi_ms=90.0, utilization_pct=85.7143, reward=5.8, paid_vms=85, unused_vms=1)
    values.update(changes)
    return MetricRow(**values)


@pytest.fixture
def two_cloud_result():
    vcc = VccModel(clouds=(single_cloud(4, cloud_id=1), single_cloud(3, cloud_id=2)))
    result = ScheduleResult(scheduler="greedy")
    result.add_placement(PlacementRecord(task_id=1, target=1, vms_used=4, bot_id=1)) \
          .add_placement(PlacementRecord(task_id=2, target=2, vms_used=1, bot_id=1)) \
          .add_placement(PlacementRecord(task_id=3, target=PAID_TCC, vms_used=2, bot_id=2))
    return vcc, result.finalize(vcc)


class TestScheduleMetrics:
    def test_finalize_counts(self, two_cloud_result):
        _, result = two_cloud_result
        assert result.per_vc_used == {1: 4, 2: 1}
        assert result.paid_vms == 2
        assert result.unused_vms == 2

    def test_utilization(self, two_cloud_result):
        vcc, result = two_cloud_result
        report = utilization(result, vcc)
        assert report.per_cloud == {1: 100.0, 2: 33.3333}
        assert report.overall == 71.4286

    def test_reward_decomposition(self, two_cloud_result):
        vcc, result = two_cloud_result
        parts = reward_decomposition(result, vcc)
        assert parts.vc_gain == pytest.approx(5.0)
        assert parts.paid_cost == pytest.approx(2.4)
        assert parts.idle_penalty == pytest.approx(2.0)
        assert parts.total == pytest.approx(0.6)

    def test_per_cloud_reward(self, two_cloud_result):
        vcc, result = two_cloud_result
        rewards = per_cloud_reward(result, vcc)
        assert rewards[1] == pytest.approx(4.0)
        assert rewards[2] == pytest.approx(3.0 - 1.2 * 2)

    def test_per_bot_breakdown(self, two_cloud_result):
        _, result = two_cloud_result
        bots = [BagOfTasks(id=1, tasks=unit_tasks(2)), BagOfTasks(id=2, tasks=unit_tasks(1, first_id=3))]
        frame = per_bot_breakdown(result, bots)
        assert frame.to_dict(orient="records") == [
            {"bot_id": 1, "vc_vms": 5, "paid_vms": 0},
            {"bot_id": 2, "vc_vms": 0, "paid_vms": 2},
        ]

    def test_empty_fleet_utilization(self):
        report = utilization(ScheduleResult().finalize(VccModel()), VccModel())
        assert report.overall == 0.0


class TestPerVehicle:
    def test_share(self):
        assert per_vehicle_throughput(600.0, 5) == pytest.approx(120.0)

    def test_aaa_point_at_25_vehicles(self):
        assert per_vehicle_throughput(2880.0, 25) == pytest.approx(115.2)

    def test_requires_vehicle(self):
        with pytest.raises(ValueError):
            per_vehicle_throughput(600.0, 0)


class TestRows:
    def test_utilization_range(self):
        with pytest.raises(DataValidationError):
            _row(utilization_pct=100.5)

    def test_frame_columns(self):
        assert list(rows_to_frame([_row()]).columns) == METRIC_COLUMNS

    @pytest.mark.parametrize("fmt", ["csv", "json"])
    def test_write_and_read_back(self, tmp_path, fmt):
        rows = [_row(), _row(scenario_id=VCC_SCENARIO_ID, reward=116.0, vc_throughput_kbps=1 / 3)]
        path = write_rows(rows, str(tmp_path / f"rows.{fmt}"), fmt)
        assert read_rows(path, fmt) == rows

    def test_unknown_format(self, tmp_path):
        with pytest.raises(DataValidationError):
            write_rows([_row()], str(tmp_path / "rows.xml"), "xml")

    def test_unreadable_file(self, tmp_path):
        with pytest.raises(OutputIOError):
            read_rows(str(tmp_path / "missing.csv"))


class TestPlotSeries:
    def test_series_keys(self):
        rows = [
            _row(scheme="aaa", n_vehicles=5),
            _row(scheme="static1609", n_vehicles=5, cchi_ms=50.0, schi_ms=50.0),
            _row(scenario_id=VCC_SCENARIO_ID, reward=116.0),
        ]
        series = plot_series(rows)
        assert series["vc_throughput/aaa/greedy"] == [(5, 600.0)]
        assert series["adjusted_intervals/static1609/cchi"] == [(5, 50.0)]
        assert series["total_reward/greedy"] == [(0, 116.0)]
        # 同一点在两种方案下只出现一次
        assert series["vm_utilization/greedy"] == [(5, 85.7143)]

    def test_bsm_delay_keyed_by_scheme(self):
        rows = [_row(scheduler="greedy"), _row(scheduler="mdp", reward=7.0)]
        series = plot_series(rows)
        assert series["bsm_delay/aaa"] == [(5, 9.5)]
        assert not any(key.startswith("bsm_delay/aaa/") for key in series)
        assert series["vc_reward/mdp"] == [(5, 7.0)]

    def test_bot_series(self, two_cloud_result):
        _, result = two_cloud_result
        bots = [BagOfTasks(id=1, tasks=unit_tasks(2)), BagOfTasks(id=2, tasks=unit_tasks(1, first_id=3))]
        series = bot_series({"greedy": per_bot_breakdown(result, bots)})
        assert series["bot_placement/greedy/vc"] == [(1, 5), (2, 0)]
        assert series["bot_placement/greedy/paid"] == [(1, 0), (2, 2)]

    def test_write_plot_data(self, tmp_path):
        path = write_plot_data(plot_series([_row()]), str(tmp_path / "plot.json"))
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
        assert data["bsm_delay/aaa"] == [[5, 9.5]]
        assert list(data) == sorted(data)


class TestCanonicalDecomposition:
    def test_mdp(self, canonical_mdp_solution):
        instance, _, policy = canonical_mdp_solution
        parts = reward_decomposition(rollout(policy, instance), instance.vcc)
        assert parts.vc_gain == pytest.approx(272.0)
        assert parts.paid_cost == pytest.approx(69.6)
        assert parts.idle_penalty == pytest.approx(0.0)
        assert parts.total == pytest.approx(202.4, abs=1e-9)

    def test_greedy(self, canonical_instance):
        vcc, bots = canonical_instance
        parts = reward_decomposition(greedy_schedule(vcc, bots), vcc)
        assert tuple(parts) == pytest.approx((245.0, 102.0, 27.0, 116.0), abs=1e-9)
