"""仿真轨迹上的度量

包括VC吞吐量、BSM/VC平均端到端时延、逐SI轨迹表以及VM迁移丢弃比例
（单点与按车辆数 × 时间展开的表）。
"""

from typing import List, Optional, Sequence

import pandas as pd

from ..channel.aaa import IntervalState, vehicle_mean_delay
from ..interfaces import PacketKind
from ..metrics import VCC_SCENARIO_ID, MetricRow, per_vehicle_throughput
from .scenario import MigrationScenario, SimTrace

# 逐SI轨迹CSV的列
TRACE_COLUMNS = [
    "si_index", "cchi_ms", "schi_ms",
    "bsm_sent", "bsm_queued", "bsm_mean_delay_ms",
    "vc_sent", "vc_queued", "vc_mean_delay_ms",
]


def vc_throughput(trace: SimTrace) -> float:
    """送达的VC比特总数 / 仿真时长，单位 kbps"""
    bits = sum(record.vc_bits for record in trace.si_records)
    return bits / trace.scenario.sim_duration


def _mean_delay_ms(trace: SimTrace, kind: PacketKind) -> float:
    delivered = trace.delivered(kind)
    total_us = sum(packet.delay_us for packet in delivered)
    return vehicle_mean_delay(total_us / 1000.0, len(delivered))


def bsm_mean_delay(trace: SimTrace) -> float:
    """已送达BSM的平均端到端时延（ms），无送达时为0"""
    return _mean_delay_ms(trace, PacketKind.BSM)


def vc_mean_delay(trace: SimTrace) -> float:
    """已送达VC数据包的平均端到端时延（ms），无送达时为0"""
    return _mean_delay_ms(trace, PacketKind.VC)


def steady_intervals(trace: SimTrace) -> IntervalState:
    """最后一个SI使用的间隔划分"""
    return trace.intervals[-1]


def trace_frame(trace: SimTrace) -> pd.DataFrame:
    """逐SI轨迹表"""
    rows: List[dict] = []
    for record in trace.si_records:
        rows.append({
            "si_index": record.si_index,
            "cchi_ms": record.cchi_us / 1000.0,
            "schi_ms": record.schi_us / 1000.0,
            "bsm_sent": record.bsm_sent,
            "bsm_queued": record.bsm_queued,
            "bsm_mean_delay_ms": vehicle_mean_delay(record.bsm_delay_sum_us / 1000.0, record.bsm_sent),
            "vc_sent": record.vc_sent,
            "vc_queued": record.vc_queued,
            "vc_mean_delay_ms": vehicle_mean_delay(record.vc_delay_sum_us / 1000.0, record.vc_sent),
        })
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def dropped_vm_fraction(m: MigrationScenario, t: Optional[float] = None) -> float:
    """车辆在 t 秒离开时尚未迁移的VM数据比例

    每车分得的吞吐量为 Th_VCij / n_vehicles，t 缺省时取 m.departure_time。
    """
    if t is None:
        t = m.departure_time
    if t < 0:
        raise ValueError(f"t 不能为负数: {t}")
    share = per_vehicle_throughput(m.vc_throughput, m.n_vehicles)
    return max(0.0, 1.0 - (t * share) / m.vm_total_size)


# 迁移时间网格（s）
DEFAULT_MIGRATION_TIMES = tuple(float(t) for t in range(1, 17))

DROPPED_VM_COLUMNS = ["scheme", "scheduler", "n_vehicles", "time_s", "dropped_pct"]


def dropped_vm_frame(rows: Sequence[MetricRow], times: Sequence[float] = DEFAULT_MIGRATION_TIMES,
                     vm_total_size: float = 500.0) -> pd.DataFrame:
    """按 车辆数 × 离开时间 × 方案 展开的平均VM丢弃百分比

    每个车载云行的 vc_throughput 作为 Th_VCij，VCC汇总行不参与。
    """
    records: List[dict] = []
    for row in rows:
        if row.scenario_id == VCC_SCENARIO_ID:
            continue
        migration = MigrationScenario(vm_total_size=vm_total_size,
                                      vc_throughput=row.vc_throughput_kbps,
                                      n_vehicles=row.n_vehicles)
        for t in times:
            records.append({
                "scheme": row.scheme,
                "scheduler": row.scheduler,
                "n_vehicles": row.n_vehicles,
                "time_s": float(t),
                "dropped_pct": 100.0 * dropped_vm_fraction(migration, t),
            })
    return pd.DataFrame(records, columns=DROPPED_VM_COLUMNS)
