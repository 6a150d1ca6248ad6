"""快速贪心调度器

按BOT顺序、任务顺序依次处理，逐个扫描车载云，把任务放到第一个可行的车载云上，
否则放到付费传统云。任务是原子的：其全部VM来自同一个车载云或全部来自付费云。
"""

from typing import List, Sequence
import logging

from ..interfaces import IScheduler, ScheduleResult, SchedulerKind
from ..metrics import reward_decomposition
from ..workload import (
    PAID_TCC,
    BagOfTasks,
    PlacementRecord,
    VccModel,
    VehicularCloud,
    apply_placement,
    feasible,
)


class GreedyScheduler(IScheduler):
    """首次适配贪心调度器（不排序，按车载云列表顺序扫描）"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    def get_name(self) -> str:
        return SchedulerKind.GREEDY.value

    def schedule(self, vcc: VccModel, bots: Sequence[BagOfTasks]) -> ScheduleResult:
        clouds: List[VehicularCloud] = list(vcc.clouds)
        result = ScheduleResult(scheduler=self.get_name())

        for bot in bots:
            for task in bot.tasks:
                record = PlacementRecord(task_id=task.id, target=PAID_TCC,
                                         vms_used=task.vm_demand, bot_id=bot.id)
                for index, cloud in enumerate(clouds):
                    if feasible(cloud, task):
                        record = PlacementRecord(task_id=task.id, target=cloud.id,
                                                 vms_used=task.vm_demand, bot_id=bot.id)
                        clouds[index] = apply_placement(cloud, record)
                        break
                result.add_placement(record)

        result.finalize(vcc)
        self.logger.info(
            f"贪心调度完成: VC放置 {result.vc_placed_vms} 个VM, 付费 {result.paid_vms} 个VM, "
            f"闲置 {result.unused_vms} 个VM"
        )
        return result


def greedy_schedule(vcc: VccModel, bots: Sequence[BagOfTasks]) -> ScheduleResult:
    """贪心调度的函数形式"""
    return GreedyScheduler().schedule(vcc, bots)


def greedy_reward(result: ScheduleResult, vcc: VccModel) -> float:
    """β_vc·VC放置VM - β_tc·付费VM - γ_vc·闲置VM"""
    return reward_decomposition(result, vcc).total
