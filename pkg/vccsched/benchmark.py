"""标准基准套件

对每个调度器（贪心、MDP）求解同一个实例，然后对每个车载云按其VM数作为车辆密度，
在两种信道方案下仿真：全部车辆发送BSM，只有承载了任务的车辆（已用VM数）发送VC流量。
每个 (车载云 × 方案 × 调度器) 生成一行，另外每个 (方案 × 调度器) 生成一行VCC汇总。
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple
import logging

import pandas as pd

from .interfaces import IScheduler, Scheme, ScheduleResult, SchedulerKind
from .metrics import (
    VCC_SCENARIO_ID,
    MetricRow,
    PlotSeries,
    bot_series,
    per_bot_breakdown,
    per_cloud_reward,
    plot_series,
    reward_decomposition,
    utilization,
)
from .scheduler import GreedyScheduler, MdpScheduler, ParallelMdpScheduler
from .scheduler.mdp import DEFAULT_EPSILON, DEFAULT_STATE_CAP
from .simulation import (
    DEFAULT_MIGRATION_TIMES,
    SimTrace,
    VanetScenario,
    bsm_mean_delay,
    dropped_vm_frame,
    run_simulation,
    steady_intervals,
    vc_mean_delay,
    vc_throughput,
)
from .workload import BagOfTasks, VccModel, total_capacity


def build_scheduler(kind: SchedulerKind, workers: int = 1, epsilon: float = DEFAULT_EPSILON,
                    state_cap: int = DEFAULT_STATE_CAP) -> IScheduler:
    """按类型创建调度器"""
    if kind == SchedulerKind.GREEDY:
        return GreedyScheduler()
    if kind == SchedulerKind.MDP:
        return MdpScheduler(epsilon, state_cap)
    return ParallelMdpScheduler(workers, epsilon, state_cap)


@dataclass
class BenchmarkReport:
    """基准结果：对比行、各调度器的调度结果与逐BOT放置表"""
    rows: List[MetricRow] = field(default_factory=list)
    results: Dict[str, ScheduleResult] = field(default_factory=dict)
    bot_breakdowns: Dict[str, pd.DataFrame] = field(default_factory=dict)
    migration_times: Tuple[float, ...] = DEFAULT_MIGRATION_TIMES
    vm_total_size: float = 500.0

    def dropped_vms(self) -> pd.DataFrame:
        return dropped_vm_frame(self.rows, self.migration_times, self.vm_total_size)

    def plot_series(self) -> PlotSeries:
        """对比行序列 + 逐BOT放置 + 各离开时间下随车辆数变化的VM丢弃百分比"""
        series = plot_series(self.rows)
        series.update(bot_series(self.bot_breakdowns))
        dropped: PlotSeries = {}
        for record in self.dropped_vms().to_dict(orient="records"):
            key = f"dropped_vms/{record['scheme']}/{record['scheduler']}/t={record['time_s']:g}"
            dropped.setdefault(key, []).append((int(record["n_vehicles"]), float(record["dropped_pct"])))
        series.update({key: sorted(set(points)) for key, points in dropped.items()})
        return series

    def total_reward(self, scheduler: str) -> float:
        for row in self.rows:
            if row.scenario_id == VCC_SCENARIO_ID and row.scheduler == scheduler:
                return row.reward
        raise KeyError(scheduler)


def _mean(values: Sequence[float]) -> float:
    return sum(values) / len(values) if values else 0.0


class BenchmarkRunner:
    """标准基准运行器"""

    def __init__(self, base_scenario: VanetScenario,
                 schemes: Sequence[Scheme] = (Scheme.STATIC, Scheme.AAA),
                 schedulers: Sequence[IScheduler] = ()):
        self.base_scenario = base_scenario
        self.schemes = list(schemes)
        self.schedulers = list(schedulers) or [GreedyScheduler(), MdpScheduler()]
        self._traces: Dict[Tuple[int, Scheme, int], SimTrace] = {}
        self.logger = logging.getLogger(__name__)

    def _simulate(self, n_vehicles: int, scheme: Scheme, n_vc_active: int) -> SimTrace:
        key = (n_vehicles, scheme, n_vc_active)
        if key not in self._traces:
            scenario = self.base_scenario.with_(n_vehicles=n_vehicles, scheme=scheme,
                                                n_vc_active=n_vc_active)
            self._traces[key] = run_simulation(scenario)
        return self._traces[key]

    def run(self, vcc: VccModel, bots: Sequence[BagOfTasks]) -> BenchmarkReport:
        report = BenchmarkReport()
        vcc = vcc.fresh()
        for scheduler in self.schedulers:
            result = scheduler.schedule(vcc, bots)
            report.results[scheduler.get_name()] = result
            report.bot_breakdowns[scheduler.get_name()] = per_bot_breakdown(result, bots)
            report.rows.extend(self._rows_for(vcc, result))
        self.logger.info(f"基准完成: 共 {len(report.rows)} 行")
        return report

    def _rows_for(self, vcc: VccModel, result: ScheduleResult) -> List[MetricRow]:
        usage = utilization(result, vcc)
        cloud_rewards = per_cloud_reward(result, vcc)
        total = reward_decomposition(result, vcc)
        rows: List[MetricRow] = []

        for scheme in self.schemes:
            cloud_rows: List[MetricRow] = []
            for cloud in vcc.clouds:
                if cloud.vm_total < 1:
                    self.logger.warning(f"车载云 {cloud.id} 没有VM，跳过仿真")
                    continue
                used = result.per_vc_used.get(cloud.id, 0)
                trace = self._simulate(cloud.vm_total, scheme, used)
                state = steady_intervals(trace)
                cloud_rows.append(MetricRow(
                    scenario_id=f"VC{cloud.id}",
                    scheme=scheme.value,
                    scheduler=result.scheduler,
                    n_vehicles=cloud.vm_total,
                    vc_throughput_kbps=vc_throughput(trace),
                    bsm_delay_ms=bsm_mean_delay(trace),
                    vc_delay_ms=vc_mean_delay(trace),
                    cchi_ms=state.cchi,
                    schi_ms=state.schi,
                    utilization_pct=usage.per_cloud[cloud.id],
                    reward=cloud_rewards[cloud.id],
                    paid_vms=result.paid_vms,
                    unused_vms=cloud.vm_free - used,
                ))
            rows.extend(cloud_rows)
            rows.append(MetricRow(
                scenario_id=VCC_SCENARIO_ID,
                scheme=scheme.value,
                scheduler=result.scheduler,
                n_vehicles=total_capacity(vcc),
                vc_throughput_kbps=sum(row.vc_throughput_kbps for row in cloud_rows),
                bsm_delay_ms=_mean([row.bsm_delay_ms for row in cloud_rows]),
                vc_delay_ms=_mean([row.vc_delay_ms for row in cloud_rows]),
                cchi_ms=_mean([row.cchi_ms for row in cloud_rows]),
                schi_ms=_mean([row.schi_ms for row in cloud_rows]),
                utilization_pct=usage.overall,
                reward=total.total,
                paid_vms=result.paid_vms,
                unused_vms=result.unused_vms,
            ))
        return rows


def run_benchmark(vcc: VccModel, bots: Sequence[BagOfTasks], base_scenario: VanetScenario,
                  schedulers: Optional[Sequence[IScheduler]] = None) -> BenchmarkReport:
    """运行标准基准套件"""
    return BenchmarkRunner(base_scenario, schedulers=schedulers or ()).run(vcc, bots)
