"""仿真场景与轨迹数据类型

所有时间在仿真内部以整数微秒保存，对外以毫秒属性提供。
"""

from dataclasses import dataclass, field, replace
from typing import Any, Dict, List, NamedTuple, Optional, Tuple

from ..channel.aaa import IntervalConfig, IntervalState, ms_to_us
from ..exception import DataValidationError, ScenarioValidationError
from ..interfaces import PacketKind, Scheme

# 数据包尚未送达
PENDING = None

BROADCAST = "broadcast"
RSU = "RSU"


@dataclass(frozen=True)
class VanetScenario:
    """单个RSU覆盖范围内的仿真场景

    默认参数：SI 100 ms、BSM 10 Hz/200 B、VC 10 Hz/1500 B、6 Mbps。
    access_overhead_us 是每帧的抽象信道接入开销（EDCA竞争的简化）。
    n_vc_active 为产生VC流量的车辆数（承载VM的车辆），None 表示全部车辆。
    """
    n_vehicles: int = 5
    sim_duration: float = 1000.0
    interval_cfg: IntervalConfig = field(default_factory=IntervalConfig)
    scheme: Scheme = Scheme.STATIC
    bsm_rate: float = 10.0
    bsm_size: int = 1600
    vc_rate: float = 10.0
    vc_size: int = 12000
    data_rate: float = 6000.0
    mac_efficiency: float = 0.8
    access_overhead_us: int = 766
    adaptation_period_si: int = 10
    rng_seed: int = 1609
    n_vc_active: Optional[int] = None

    def __post_init__(self):
        if not isinstance(self.scheme, Scheme):
            object.__setattr__(self, "scheme", Scheme(self.scheme))

    def validate(self) -> "VanetScenario":
        """检查场景不变量，非法时抛出 ScenarioValidationError"""
        if self.n_vehicles < 1:
            raise ScenarioValidationError(f"n_vehicles 必须 ≥ 1，实际为 {self.n_vehicles}")
        if self.sim_duration < self.interval_cfg.si:
            raise ScenarioValidationError(
                f"sim_duration={self.sim_duration} ms 小于一个同步间隔 {self.interval_cfg.si} ms"
            )
        for name in ("bsm_rate", "bsm_size", "vc_rate", "vc_size", "data_rate"):
            if getattr(self, name) <= 0:
                raise ScenarioValidationError(f"{name} 必须为正数，实际为 {getattr(self, name)}")
        if not 0 < self.mac_efficiency <= 1:
            raise ScenarioValidationError(f"mac_efficiency 必须在 (0, 1] 内: {self.mac_efficiency}")
        if self.access_overhead_us < 0 or self.adaptation_period_si < 1:
            raise ScenarioValidationError("access_overhead_us 不能为负数且 adaptation_period_si 必须 ≥ 1")
        if self.n_vc_active is not None and not 0 <= self.n_vc_active <= self.n_vehicles:
            raise ScenarioValidationError(
                f"n_vc_active={self.n_vc_active} 超出范围 [0, {self.n_vehicles}]"
            )
        return self

    @property
    def n_sync(self) -> int:
        """同步间隔数 N_Sync = ST / SI"""
        return ms_to_us(self.sim_duration) // self.interval_cfg.si_us

    @property
    def vc_senders(self) -> int:
        return self.n_vehicles if self.n_vc_active is None else self.n_vc_active

    def with_(self, **changes: Any) -> "VanetScenario":
        return replace(self, **changes)


@dataclass
class PacketEvent:
    """单个数据包的发送/接收记录（内部时间为微秒）"""
    kind: PacketKind
    src_vehicle: int
    created_at_us: int
    size_bits: int
    dst: str = BROADCAST
    delivered_at_us: Optional[int] = PENDING
    si_index: int = -1

    @property
    def created_at(self) -> float:
        return self.created_at_us / 1000.0

    @property
    def delivered_at(self) -> Optional[float]:
        if self.delivered_at_us is None:
            return PENDING
        return self.delivered_at_us / 1000.0

    @property
    def delivered(self) -> bool:
        return self.delivered_at_us is not None

    @property
    def delay_us(self) -> int:
        return self.delivered_at_us - self.created_at_us

    @property
    def delay_ms(self) -> float:
        return self.delay_us / 1000.0


class SiRecord(NamedTuple):
    """一个同步间隔的汇总"""
    si_index: int
    start_us: int
    cchi_us: int
    schi_us: int
    bsm_generated: int
    bsm_sent: int
    bsm_queued: int
    bsm_delay_sum_us: int
    bsm_bits: int
    vc_generated: int
    vc_sent: int
    vc_queued: int
    vc_delay_sum_us: int
    vc_bits: int
    bsm_queue_depths: Tuple[int, ...]
    vc_queue_depths: Tuple[int, ...]


@dataclass
class SimTrace:
    """仿真轨迹：逐SI的间隔历史、全部数据包事件与队列深度"""
    scenario: VanetScenario
    intervals: List[IntervalState] = field(default_factory=list)
    si_records: List[SiRecord] = field(default_factory=list)
    events: List[PacketEvent] = field(default_factory=list)
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def packets(self, kind: PacketKind) -> List[PacketEvent]:
        return [event for event in self.events if event.kind == kind]

    def delivered(self, kind: PacketKind) -> List[PacketEvent]:
        return [event for event in self.events if event.kind == kind and event.delivered]


@dataclass(frozen=True)
class MigrationScenario:
    """离开RSU覆盖范围的车辆的VM迁移场景

    Attributes:
        vm_total_size: 该车全部VM的数据量 T_VMsize（kbits）
        departure_time: 离开时间（s）
        vc_throughput: 车载云的VC吞吐量 Th_VCij（kbps）
        n_vehicles: 车载云中的车辆数
    """
    vm_total_size: float = 500.0
    departure_time: float = 1.0
    vc_throughput: float = 0.0
    n_vehicles: int = 1

    def __post_init__(self):
        if self.vm_total_size <= 0:
            raise DataValidationError(f"vm_total_size 必须为正数: {self.vm_total_size}")
        if self.n_vehicles < 1:
            raise DataValidationError(f"n_vehicles 必须 ≥ 1: {self.n_vehicles}")
