"""vccsched - 车载云调度与DSRC信道间隔仿真工具包

一个用于车载云计算研究的Python包：仿真IEEE 1609.4静态与AAA自适应两种
信道间隔切换方案下的BSM时延与VC吞吐量，并用快速贪心、MDP值迭代及其
分块并行版本把任务包（BOT）放置到车载云或付费传统云上。
"""

__version__ = "0.1.0"
__author__ = "vccsched Team"
__description__ = "车载云调度与DSRC信道间隔仿真工具包"

# 核心接口
from .interfaces import (
    IScheduler,
    IIntervalController,
    ScheduleResult,
    Scheme,
    SchedulerKind,
    PacketKind,
)

# 工作负载模型
from .workload import (
    PAID_TCC,
    Task,
    BagOfTasks,
    VehicularCloud,
    VccModel,
    PlacementRecord,
    total_demand,
    total_capacity,
    total_free,
    feasible,
)

# 信道间隔
from .channel import (
    IntervalConfig,
    IntervalState,
    ChannelStats,
    StaticIntervalController,
    AaaIntervalController,
    adapt_intervals,
)

# 仿真
from .simulation import (
    VanetScenario,
    MigrationScenario,
    SimTrace,
    run_simulation,
    vc_throughput,
    bsm_mean_delay,
    dropped_vm_fraction,
)

# 调度器
from .scheduler import (
    GreedyScheduler,
    MdpScheduler,
    ParallelMdpScheduler,
    MdpInstance,
    greedy_schedule,
    greedy_reward,
    value_iteration,
    parallel_value_iteration,
    rollout,
)

# 度量与配置
from .metrics import MetricRow, utilization, reward_decomposition, per_vehicle_throughput
from .config import load_instance, dump_instance, load_scenario

# 异常类
from .exception import (
    VccSchedError,
    ConfigError,
    DataValidationError,
    SimulationError,
    ScenarioValidationError,
    SchedulerError,
    StateSpaceCapError,
    PolicyLookupError,
    InfeasibleActionError,
    OutputIOError,
)

__all__ = [
    # 版本信息
    "__version__",
    "__author__",
    "__description__",

    # 核心接口
    "IScheduler",
    "IIntervalController",
    "ScheduleResult",
    "Scheme",
    "SchedulerKind",
    "PacketKind",

    # 工作负载模型
    "PAID_TCC",
    "Task",
    "BagOfTasks",
    "VehicularCloud",
    "VccModel",
    "PlacementRecord",
    "total_demand",
    "total_capacity",
    "total_free",
    "feasible",

    # 信道间隔
    "IntervalConfig",
    "IntervalState",
    "ChannelStats",
    "StaticIntervalController",
    "AaaIntervalController",
    "adapt_intervals",

    # 仿真
    "VanetScenario",
    "MigrationScenario",
    "SimTrace",
    "run_simulation",
    "vc_throughput",
    "bsm_mean_delay",
    "dropped_vm_fraction",

    # 调度器
    "GreedyScheduler",
    "MdpScheduler",
    "ParallelMdpScheduler",
    "MdpInstance",
    "greedy_schedule",
    "greedy_reward",
    "value_iteration",
    "parallel_value_iteration",
    "rollout",

    # 度量与配置
    "MetricRow",
    "utilization",
    "reward_decomposition",
    "per_vehicle_throughput",
    "load_instance",
    "dump_instance",
    "load_scenario",

    # 异常类
    "VccSchedError",
    "ConfigError",
    "DataValidationError",
    "SimulationError",
    "ScenarioValidationError",
    "SchedulerError",
    "StateSpaceCapError",
    "PolicyLookupError",
    "InfeasibleActionError",
    "OutputIOError",
]
