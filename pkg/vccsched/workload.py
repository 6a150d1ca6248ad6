"""工作负载与计算资源模型

定义任务包（BOT）中的任务、车载云（VC）、车载云集合（VCC）以及付费传统云（TCC）
的放置记录。本模块与具体调度器无关，所有类型均为不可变值类型，
调度过程中的空闲VM计数只在单次调度运行内部更新。
"""

from dataclasses import dataclass, field, replace
from typing import Iterable, List, Sequence, Tuple, Union

from .exception import DataValidationError


# 付费传统云的放置目标标记
PAID_TCC = "TCC"

# 默认奖励参数
DEFAULT_BETA_VC = 1.0
DEFAULT_BETA_TC = 1.2
DEFAULT_GAMMA_VC = 1.0


@dataclass(frozen=True)
class Task:
    """BOT中的单个任务

    Attributes:
        id: 任务编号
        vm_demand: 需要的VM数量 n_j
        max_delay: 可接受的最大V2I时延（ms）
        min_vm_throughput: 每个VM的最低吞吐量（kbps）
    """
    id: int
    vm_demand: int
    max_delay: float
    min_vm_throughput: float

    def __post_init__(self):
        if self.vm_demand < 1:
            raise DataValidationError(f"任务 {self.id} 的 vm_demand 必须 ≥ 1，实际为 {self.vm_demand}")
        if self.max_delay <= 0 or self.min_vm_throughput <= 0:
            raise DataValidationError(
                f"任务 {self.id} 的 max_delay 与 min_vm_throughput 必须为正数"
            )


@dataclass(frozen=True)
class BagOfTasks:
    """任务包，任务之间相互独立，列表顺序仅为处理顺序"""
    id: int
    tasks: Tuple[Task, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "tasks", tuple(self.tasks))

    @property
    def demand(self) -> int:
        return sum(task.vm_demand for task in self.tasks)


@dataclass(frozen=True)
class VehicularCloud:
    """单个车载云

    Attributes:
        id: 车载云编号
        vm_total: VM总数（贡献OBU的车辆数）
        vm_free: 当前空闲VM数 μ_i
        vm_throughput: 每个VM的吞吐量（kbps）
        v2i_delay: V2I平均时延（ms）
    """
    id: int
    vm_total: int
    vm_free: int
    vm_throughput: float
    v2i_delay: float

    def __post_init__(self):
        if self.vm_total < 0:
            raise DataValidationError(f"车载云 {self.id} 的 vm_total 不能为负数")
        if not 0 <= self.vm_free <= self.vm_total:
            raise DataValidationError(
                f"车载云 {self.id} 的 vm_free={self.vm_free} 超出范围 [0, {self.vm_total}]"
            )

    @property
    def vm_occupied(self) -> int:
        """已占用VM数 T_VMi"""
        return self.vm_total - self.vm_free

    def fresh(self) -> "VehicularCloud":
        """返回全部VM空闲的副本"""
        return replace(self, vm_free=self.vm_total)


@dataclass(frozen=True)
class VccModel:
    """车载云集合及奖励参数

    Attributes:
        clouds: 有序的车载云列表
        reward_per_vc_vm: β_vc，每个VC VM的即时奖励
        cost_per_tcc_vm: β_tc，每个付费TCC VM的成本
        penalty_per_idle_vm: γ_vc，每个闲置VM的惩罚
    """
    clouds: Tuple[VehicularCloud, ...] = ()
    reward_per_vc_vm: float = DEFAULT_BETA_VC
    cost_per_tcc_vm: float = DEFAULT_BETA_TC
    penalty_per_idle_vm: float = DEFAULT_GAMMA_VC

    def __post_init__(self):
        object.__setattr__(self, "clouds", tuple(self.clouds))
        for name in ("reward_per_vc_vm", "cost_per_tcc_vm", "penalty_per_idle_vm"):
            if getattr(self, name) < 0:
                raise DataValidationError(f"奖励参数 {name} 不能为负数")
        ids = [cloud.id for cloud in self.clouds]
        if len(set(ids)) != len(ids):
            raise DataValidationError(f"车载云编号重复: {ids}")

    @property
    def cloud_ids(self) -> List[int]:
        return [cloud.id for cloud in self.clouds]

    def cloud_by_id(self, cloud_id: int) -> VehicularCloud:
        for cloud in self.clouds:
            if cloud.id == cloud_id:
                return cloud
        raise KeyError(cloud_id)

    def fresh(self) -> "VccModel":
        """返回所有车载云VM均空闲的副本"""
        return replace(self, clouds=tuple(cloud.fresh() for cloud in self.clouds))

    def with_rewards(self, beta_vc: float, beta_tc: float, gamma_vc: float) -> "VccModel":
        return replace(self, reward_per_vc_vm=beta_vc, cost_per_tcc_vm=beta_tc,
                       penalty_per_idle_vm=gamma_vc)

    def scaled(self, factor: float) -> "VccModel":
        """三个奖励参数同乘一个正数"""
        if factor <= 0:
            raise ValueError(f"缩放因子必须为正数: {factor}")
        return self.with_rewards(self.reward_per_vc_vm * factor,
                                 self.cost_per_tcc_vm * factor,
                                 self.penalty_per_idle_vm * factor)


@dataclass(frozen=True)
class PlacementRecord:
    """单个任务的放置结果"""
    task_id: int
    target: Union[int, str]
    vms_used: int
    bot_id: int = field(default=-1, compare=False)

    @property
    def is_paid(self) -> bool:
        return self.target == PAID_TCC


def total_demand(bots: Iterable[BagOfTasks]) -> int:
    """所有BOT中全部任务的VM需求总和"""
    return sum(bot.demand for bot in bots)


def total_capacity(vcc: VccModel) -> int:
    """所有车载云的VM总数"""
    return sum(cloud.vm_total for cloud in vcc.clouds)


def total_free(vcc: VccModel) -> int:
    """调度开始前所有车载云的空闲VM数"""
    return sum(cloud.vm_free for cloud in vcc.clouds)


def feasible(cloud: VehicularCloud, task: Task) -> bool:
    """判断车载云能否承载任务（空闲VM、V2I时延与VM吞吐量三个条件同时满足）"""
    return (cloud.vm_free >= task.vm_demand
            and cloud.v2i_delay <= task.max_delay
            and cloud.vm_throughput >= task.min_vm_throughput)


def qos_compatible(cloud: VehicularCloud, task: Task) -> bool:
    """只检查时延与吞吐量要求，不考虑空闲VM"""
    return cloud.v2i_delay <= task.max_delay and cloud.vm_throughput >= task.min_vm_throughput


def flatten_tasks(bots: Sequence[BagOfTasks]) -> List[Tuple[int, Task]]:
    """按BOT顺序、任务顺序展开为 (bot_id, task) 序列"""
    return [(bot.id, task) for bot in bots for task in bot.tasks]


def apply_placement(cloud: VehicularCloud, record: PlacementRecord) -> VehicularCloud:
    """将放置记录作用到车载云，空闲VM数恰好减少 vms_used"""
    if record.target != cloud.id:
        raise DataValidationError(f"放置记录目标 {record.target} 与车载云 {cloud.id} 不符")
    remaining = cloud.vm_free - record.vms_used
    if remaining < 0:
        raise DataValidationError(
            f"车载云 {cloud.id} 空闲VM不足: 需要 {record.vms_used}，仅剩 {cloud.vm_free}"
        )
    return replace(cloud, vm_free=remaining)
