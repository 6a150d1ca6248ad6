"""仿真模块

单个RSU覆盖范围的DSRC离散事件仿真：场景定义、simpy仿真引擎与轨迹度量。
"""

from .scenario import (
    PENDING,
    VanetScenario,
    PacketEvent,
    SiRecord,
    SimTrace,
    MigrationScenario,
)
from .engine import VanetSimulator, run_simulation, frame_airtime_us
from .measures import (
    TRACE_COLUMNS,
    vc_throughput,
    bsm_mean_delay,
    vc_mean_delay,
    steady_intervals,
    trace_frame,
    dropped_vm_fraction,
    dropped_vm_frame,
    DEFAULT_MIGRATION_TIMES,
    DROPPED_VM_COLUMNS,
)

__all__ = [
    'PENDING',
    'VanetScenario',
    'PacketEvent',
    'SiRecord',
    'SimTrace',
    'MigrationScenario',
    'VanetSimulator',
    'run_simulation',
    'frame_airtime_us',
    'TRACE_COLUMNS',
    'vc_throughput',
    'bsm_mean_delay',
    'vc_mean_delay',
    'steady_intervals',
    'trace_frame',
    'dropped_vm_fraction',
    'dropped_vm_frame',
    'DEFAULT_MIGRATION_TIMES',
    'DROPPED_VM_COLUMNS',
]
