"""vccsched包的核心接口定义

本模块定义了vccsched包中最关键的接口：
- IScheduler: BOT调度器接口，把任务放置到车载云或付费传统云
- IIntervalController: 信道间隔控制器接口，决定每个同步间隔内CCHI/SCHI的划分
"""

from abc import ABC, abstractmethod
from typing import Any, Dict, List, Optional, Sequence, TYPE_CHECKING
from enum import Enum

from .workload import BagOfTasks, PlacementRecord, VccModel, total_free

if TYPE_CHECKING:
    from .channel.aaa import IntervalState, VehicleSample


class Scheme(Enum):
    """信道切换方案枚举"""
    STATIC = "static1609"   # IEEE 1609.4 固定 50/50 划分
    AAA = "aaa"             # 自适应活动感知方案


class SchedulerKind(Enum):
    """调度器类型枚举"""
    GREEDY = "greedy"               # 快速贪心
    MDP = "mdp"                     # 顺序值迭代
    MDP_PARALLEL = "mdp-parallel"   # 分块并行值迭代


class PacketKind(Enum):
    """数据包类型枚举"""
    BSM = "BSM"   # V2V广播安全消息，CCH上发送
    VC = "VC"     # V2I车载云数据包，SCH上发送到RSU


class ScheduleResult:
    """调度结果，贪心与MDP调度器共用同一形态"""

    def __init__(self,
                 scheduler: str = "",
                 placements: Optional[List[PlacementRecord]] = None,
                 diagnostics: Optional[Dict[str, Any]] = None):
        """
        Args:
            scheduler: 产生该结果的调度器名称
            placements: 放置记录列表（按任务处理顺序）
            diagnostics: 调度器诊断信息（如MDP的 epsilon、sweeps、states_explored）
        """
        self.scheduler = scheduler
        self.placements = placements or []
        self.diagnostics = diagnostics or {}
        self.per_vc_used: Dict[int, int] = {}
        self.paid_vms = 0
        self.unused_vms = 0

    def add_placement(self, record: PlacementRecord) -> 'ScheduleResult':
        """追加一条放置记录"""
        self.placements.append(record)
        return self

    def finalize(self, vcc: VccModel) -> 'ScheduleResult':
        """根据放置记录汇总 per_vc_used、paid_vms 与 unused_vms

        unused_vms 为调度结束后剩余的空闲VM，预先占用的VM不计入。
        """
        self.per_vc_used = {cloud_id: 0 for cloud_id in vcc.cloud_ids}
        self.paid_vms = 0
        for record in self.placements:
            if record.is_paid:
                self.paid_vms += record.vms_used
            else:
                self.per_vc_used[record.target] += record.vms_used
        self.unused_vms = total_free(vcc) - sum(self.per_vc_used.values())
        return self

    @property
    def vc_placed_vms(self) -> int:
        return sum(self.per_vc_used.values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scheduler": self.scheduler,
            "paid_vms": self.paid_vms,
            "unused_vms": self.unused_vms,
            "vc_placed_vms": self.vc_placed_vms,
            "per_vc_used": dict(self.per_vc_used),
            "diagnostics": dict(self.diagnostics),
        }


class IScheduler(ABC):
    """BOT调度器接口"""

    @abstractmethod
    def get_name(self) -> str:
        """获取调度器名称"""
        pass

    @abstractmethod
    def schedule(self, vcc: VccModel, bots: Sequence[BagOfTasks]) -> ScheduleResult:
        """把全部BOT放置到车载云或付费传统云

        Args:
            vcc: 车载云集合（使用其中的 vm_free 作为初始空闲VM）
            bots: 按处理顺序排列的BOT列表

        Returns:
            ScheduleResult: 已汇总的调度结果
        """
        pass


class IIntervalController(ABC):
    """信道间隔控制器接口

    仿真器在每个同步间隔结束时调用 record_si，在每个自适应周期（1秒）边界调用
    close_epoch，由控制器给出下一周期使用的间隔划分。
    """

    @abstractmethod
    def get_name(self) -> str:
        """获取控制器名称"""
        pass

    @abstractmethod
    def current_state(self) -> 'IntervalState':
        """当前生效的间隔划分"""
        pass

    @abstractmethod
    def record_si(self, samples: Sequence['VehicleSample']) -> None:
        """记录一个同步间隔内每辆车的BSM发送/接收样本"""
        pass

    @abstractmethod
    def close_epoch(self) -> 'IntervalState':
        """结束当前自适应周期并返回新的间隔划分"""
        pass

    def record_vc(self, per_vehicle: Sequence[tuple], delay_sum_ms: float, received: int) -> None:
        """记录一个同步间隔内的VC数据包样本，默认忽略"""
        return None

    def history(self) -> List['IntervalState']:
        """已生效的间隔划分历史，默认为空"""
        return []
