"""调度器模块

包含快速贪心调度器、MDP值迭代调度器及其分块并行版本。
"""

from .greedy import GreedyScheduler, greedy_schedule, greedy_reward
from .mdp import (
    PAID,
    MdpState,
    MdpAction,
    MdpInstance,
    ValueTable,
    Policy,
    StateSpace,
    MdpScheduler,
    enumerate_state_space,
    transition,
    step_reward,
    terminal_value,
    bellman_backup,
    value_iteration,
    rollout,
)
from .parallel import (
    BlockPartition,
    SweepBarrier,
    ParallelMdpScheduler,
    parallel_value_iteration,
    measure_speedup,
)

__all__ = [
    'GreedyScheduler',
    'greedy_schedule',
    'greedy_reward',
    'PAID',
    'MdpState',
    'MdpAction',
    'MdpInstance',
    'ValueTable',
    'Policy',
    'StateSpace',
    'MdpScheduler',
    'enumerate_state_space',
    'transition',
    'step_reward',
    'terminal_value',
    'bellman_backup',
    'value_iteration',
    'rollout',
    'BlockPartition',
    'SweepBarrier',
    'ParallelMdpScheduler',
    'parallel_value_iteration',
    'measure_speedup',
]
