"""度量与报表模块

计算各类图表级别的度量：每个车载云的VM利用率、奖励分解、每车平均吞吐量，
并把跨方案、跨调度器的对比行写成CSV（规范格式）或JSON（逐字段镜像）。
"""

from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, Iterable, List, NamedTuple, Sequence, Tuple
import json
import logging
import os

import pandas as pd

from .exception import DataValidationError, OutputIOError
from .interfaces import ScheduleResult
from .workload import BagOfTasks, VccModel, total_capacity

logger = logging.getLogger(__name__)

# 百分比保留的小数位数
PERCENT_DECIMALS = 4

# 车载云集合汇总行的场景编号
VCC_SCENARIO_ID = "VCC"

SUPPORTED_FORMATS = ["csv", "json"]


@dataclass
class MetricRow:
    """一行对比结果（场景 × 方案 × 调度器）"""
    scenario_id: str
    scheme: str
    scheduler: str
    n_vehicles: int
    vc_throughput_kbps: float
    bsm_delay_ms: float
    vc_delay_ms: float
    cchi_ms: float
    schi_ms: float
    utilization_pct: float
    reward: float
    paid_vms: int
    unused_vms: int

    def __post_init__(self):
        if not 0.0 <= self.utilization_pct <= 100.0:
            raise DataValidationError(f"利用率必须在 [0, 100] 内: {self.utilization_pct}")


METRIC_COLUMNS = [f.name for f in fields(MetricRow)]


class UtilizationReport(NamedTuple):
    per_cloud: Dict[int, float]
    overall: float


class RewardDecomposition(NamedTuple):
    vc_gain: float
    paid_cost: float
    idle_penalty: float
    total: float


def per_vehicle_throughput(vc_throughput: float, n_vehicles: int) -> float:
    """每车平均吞吐量 Th_ij = Th_VCij / j"""
    if n_vehicles < 1:
        raise ValueError(f"n_vehicles 必须 ≥ 1: {n_vehicles}")
    return vc_throughput / n_vehicles


def _percent(used: int, total: int) -> float:
    if total <= 0:
        return 0.0
    return round(100.0 * used / total, PERCENT_DECIMALS)


def utilization(result: ScheduleResult, vcc: VccModel) -> UtilizationReport:
    """每个车载云及整体的VM利用率（%）"""
    per_cloud = {
        cloud.id: _percent(result.per_vc_used.get(cloud.id, 0), cloud.vm_total)
        for cloud in vcc.clouds
    }
    overall = _percent(sum(result.per_vc_used.values()), total_capacity(vcc))
    return UtilizationReport(per_cloud=per_cloud, overall=overall)


def reward_decomposition(result: ScheduleResult, vcc: VccModel) -> RewardDecomposition:
    """奖励分解 (β_vc·VC放置, β_tc·付费, γ_vc·闲置, 总奖励)

    贪心与MDP调度结果的总奖励都由此计算。
    """
    vc_gain = vcc.reward_per_vc_vm * result.vc_placed_vms
    paid_cost = vcc.cost_per_tcc_vm * result.paid_vms
    idle_penalty = vcc.penalty_per_idle_vm * result.unused_vms
    return RewardDecomposition(vc_gain, paid_cost, idle_penalty, vc_gain - paid_cost - idle_penalty)


def per_cloud_reward(result: ScheduleResult, vcc: VccModel) -> Dict[int, float]:
    """每个车载云的奖励归因：β_vc·vm_total - β_tc·闲置VM数"""
    rewards = {}
    for cloud in vcc.clouds:
        unused = cloud.vm_free - result.per_vc_used.get(cloud.id, 0)
        rewards[cloud.id] = vcc.reward_per_vc_vm * cloud.vm_total - vcc.cost_per_tcc_vm * unused
    return rewards


def per_bot_breakdown(result: ScheduleResult, bots: Sequence[BagOfTasks]) -> pd.DataFrame:
    """每个BOT放到车载云与付费云的VM数"""
    table = {bot.id: {"bot_id": bot.id, "vc_vms": 0, "paid_vms": 0} for bot in bots}
    for record in result.placements:
        entry = table.get(record.bot_id)
        if entry is None:
            continue
        entry["paid_vms" if record.is_paid else "vc_vms"] += record.vms_used
    return pd.DataFrame(list(table.values()), columns=["bot_id", "vc_vms", "paid_vms"])


def rows_to_frame(rows: Iterable[MetricRow]) -> pd.DataFrame:
    return pd.DataFrame([asdict(row) for row in rows], columns=METRIC_COLUMNS)


def _coerce_row(record: Dict[str, Any]) -> MetricRow:
    kwargs = {}
    for f in fields(MetricRow):
        value = record[f.name]
        if f.type in (int, "int"):
            kwargs[f.name] = int(value)
        elif f.type in (float, "float"):
            kwargs[f.name] = float(value)
        else:
            kwargs[f.name] = str(value)
    return MetricRow(**kwargs)


def frame_to_rows(frame: pd.DataFrame) -> List[MetricRow]:
    return [_coerce_row(record) for record in frame.to_dict(orient="records")]


def _check_format(fmt: str) -> str:
    if fmt not in SUPPORTED_FORMATS:
        raise DataValidationError(f"不支持的输出格式: {fmt}，可选 {SUPPORTED_FORMATS}")
    return fmt


def write_table(frame: pd.DataFrame, path: str, fmt: str = "csv") -> str:
    """把表格写成CSV或JSON（记录列表）"""
    _check_format(fmt)
    try:
        directory = os.path.dirname(os.path.abspath(path))
        os.makedirs(directory, exist_ok=True)
        if fmt == "csv":
            frame.to_csv(path, index=False)
        else:
            records = [
                {key: (value.item() if hasattr(value, "item") else value) for key, value in record.items()}
                for record in frame.to_dict(orient="records")
            ]
            with open(path, "w", encoding="utf-8") as f:
                json.dump(records, f, ensure_ascii=False, indent=2)
    except OSError as e:
        logger.error(f"写入文件失败 {path}: {e}")
        raise OutputIOError(f"写入文件失败 {path}: {e}") from e
    logger.info(f"已写入 {len(frame)} 行到 {path}")
    return path


def read_table(path: str, fmt: str = "csv") -> pd.DataFrame:
    """读取 write_table 写出的表格"""
    _check_format(fmt)
    try:
        if fmt == "csv":
            return pd.read_csv(path, float_precision="round_trip")
        with open(path, "r", encoding="utf-8") as f:
            return pd.DataFrame(json.load(f))
    except OSError as e:
        logger.error(f"读取文件失败 {path}: {e}")
        raise OutputIOError(f"读取文件失败 {path}: {e}") from e


def write_rows(rows: Sequence[MetricRow], path: str, fmt: str = "csv") -> str:
    """写出对比行"""
    return write_table(rows_to_frame(rows), path, fmt)


def read_rows(path: str, fmt: str = "csv") -> List[MetricRow]:
    """读回对比行，数值与写出前完全一致"""
    return frame_to_rows(read_table(path, fmt))


PlotSeries = Dict[str, List[Tuple[float, float]]]


def plot_series(rows: Sequence[MetricRow]) -> PlotSeries:
    """按图表名给出 (x, y) 序列，供外部绘图

    车载云行以车辆数为横轴；VCC汇总行给出各调度器的总奖励、付费与闲置VM。
    BSM时延与信道间隔只随方案变化，不按调度器拆分。
    """
    series: PlotSeries = {}

    def add(key: str, x: float, y: float) -> None:
        series.setdefault(key, []).append((x, y))

    for row in rows:
        if row.scenario_id == VCC_SCENARIO_ID:
            add(f"total_reward/{row.scheduler}", 0, row.reward)
            add(f"scheduled_vms/{row.scheduler}/paid", 0, row.paid_vms)
            add(f"scheduled_vms/{row.scheduler}/unused", 0, row.unused_vms)
            continue
        x = row.n_vehicles
        add(f"bsm_delay/{row.scheme}", x, row.bsm_delay_ms)
        add(f"vc_throughput/{row.scheme}/{row.scheduler}", x, row.vc_throughput_kbps)
        add(f"adjusted_intervals/{row.scheme}/cchi", x, row.cchi_ms)
        add(f"adjusted_intervals/{row.scheme}/schi", x, row.schi_ms)
        add(f"vm_utilization/{row.scheduler}", x, row.utilization_pct)
        add(f"vc_reward/{row.scheduler}", x, row.reward)

    # 同一横轴点会在不同方案或调度器下重复出现，按 (x, y) 去重并排序
    return {key: sorted(set(points)) for key, points in series.items()}


def bot_series(breakdowns: Dict[str, pd.DataFrame]) -> PlotSeries:
    """每个调度器的逐BOT放置柱状图，横轴为BOT编号"""
    series: PlotSeries = {}
    for scheduler, frame in breakdowns.items():
        for record in frame.to_dict(orient="records"):
            bot_id = int(record["bot_id"])
            series.setdefault(f"bot_placement/{scheduler}/vc", []).append((bot_id, int(record["vc_vms"])))
            series.setdefault(f"bot_placement/{scheduler}/paid", []).append((bot_id, int(record["paid_vms"])))
    return series


def write_plot_data(series: PlotSeries, path: str) -> str:
    """把绘图序列写成JSON，键按字母序排列"""
    data = {key: [list(point) for point in points] for key, points in series.items()}
    try:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(data, f, ensure_ascii=False, indent=2, sort_keys=True)
    except OSError as e:
        raise OutputIOError(f"写入绘图数据失败 {path}: {e}") from e
    return path
