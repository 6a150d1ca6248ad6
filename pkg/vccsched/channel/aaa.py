"""AAA信道间隔方程

实现自适应活动感知（AAA）方案的运行统计量与间隔更新方程：
每个同步间隔（SI）累积BSM发送数与接收时延的运行均值，
每个自适应周期用 U_CCH = S_V2V * D_V2V 估计控制信道的有效占用，
把CCHI收缩到 U_CCH，并把回收的空闲时间 I_CCH 加到SCHI上。
"""

from dataclasses import dataclass, replace
from typing import NamedTuple, Sequence, Tuple
import math

from ..exception import DataValidationError


@dataclass(frozen=True)
class IntervalConfig:
    """同步间隔配置（单位 ms）"""
    si: float = 100.0
    guard: float = 4.0
    default_cchi: float = 50.0
    default_schi: float = 50.0

    def __post_init__(self):
        if self.si <= 0 or self.guard < 0:
            raise DataValidationError(f"非法的间隔配置: si={self.si}, guard={self.guard}")
        if abs(self.default_cchi + self.default_schi - self.si) > 1e-9:
            raise DataValidationError(
                f"default_cchi + default_schi 必须等于 si: "
                f"{self.default_cchi} + {self.default_schi} != {self.si}"
            )
        if self.guard >= min(self.default_cchi, self.default_schi):
            raise DataValidationError(f"保护间隔 {self.guard} ms 不小于默认信道间隔")

    @property
    def si_us(self) -> int:
        return ms_to_us(self.si)

    @property
    def guard_us(self) -> int:
        return ms_to_us(self.guard)


@dataclass(frozen=True)
class IntervalState:
    """一次间隔划分

    Attributes:
        cchi: 控制信道间隔（ms）
        schi: 服务信道间隔（ms）
        inactivity: 控制信道空闲间隔 I_CCH（ms）
        effective_cch_use: 估计的控制信道有效占用 U_CCH（ms）
    """
    cchi: float
    schi: float
    inactivity: float = 0.0
    effective_cch_use: float = 0.0

    @classmethod
    def default(cls, cfg: IntervalConfig) -> "IntervalState":
        """IEEE 1609.4 固定划分"""
        return cls(cchi=cfg.default_cchi, schi=cfg.default_schi,
                   inactivity=0.0, effective_cch_use=cfg.default_cchi)

    def cchi_us(self) -> int:
        return ms_to_us(self.cchi)


class VehicleSample(NamedTuple):
    """单辆车在一个SI内的BSM样本"""
    generated: int        # NG_BSM
    queued: int           # Qv_h
    received: int         # Rv_hBSM
    delay_sum_ms: float   # Σ (t_R - t_S)

    @property
    def sent(self) -> int:
        return sent_per_si(self.generated, self.queued)


@dataclass(frozen=True)
class ChannelStats:
    """BSM运行统计量

    s_v2v 与 d_v2v 按递推式更新；其余字段是本周期的累积量。
    """
    n_vehicles: int
    bsm_rate: float = 10.0
    s_v2v: float = 0.0
    d_v2v: float = 0.0
    sent_total: int = 0
    queued_total: int = 0
    received_total: int = 0
    delay_sum_total: float = 0.0
    updates: int = 0

    def reset(self) -> "ChannelStats":
        return ChannelStats(n_vehicles=self.n_vehicles, bsm_rate=self.bsm_rate)


def ms_to_us(value_ms: float) -> int:
    """毫秒转整数微秒，向上取整（先消除浮点尾差）"""
    return int(math.ceil(round(value_ms * 1000.0, 3)))


def bsm_generated_per_si(rate: float, window: float) -> int:
    """一个窗口（ms）内每辆车生成的BSM数，小数部分向下取整"""
    if rate < 0 or window <= 0:
        raise ValueError(f"rate 必须 ≥ 0 且 window 必须 > 0: rate={rate}, window={window}")
    return int(math.floor(round(rate * window / 1000.0, 9)))


def sent_per_si(generated: int, queued: int) -> int:
    """Sv_h = NG_BSM - Qv_h，下限为0"""
    return max(0, generated - queued)


def vehicle_mean_delay(delay_sum: float, received: int) -> float:
    """单车接收BSM的平均时延，没有接收时为0"""
    if received < 0:
        raise ValueError(f"received 不能为负数: {received}")
    if received == 0:
        return 0.0
    return delay_sum / received


def update_running_stats(stats: ChannelStats, per_vehicle_samples: Sequence[VehicleSample]) -> ChannelStats:
    """递推更新 S_V2V 与 D_V2V

    S_V2V = (S_V2V + Σ Sv_h) / (1 + N_V)
    D_V2V = (D_V2V + Σ D_h) / (1 + Σ Rv_hBSM)

    其中 D_h 取每辆车本SI接收时延之和。
    """
    n_vehicles = stats.n_vehicles if stats.n_vehicles > 0 else len(per_vehicle_samples)
    sent = sum(sample.sent for sample in per_vehicle_samples)
    queued = sum(sample.queued for sample in per_vehicle_samples)
    received = sum(sample.received for sample in per_vehicle_samples)
    delay_sum = sum(sample.delay_sum_ms for sample in per_vehicle_samples)

    return replace(
        stats,
        s_v2v=(stats.s_v2v + sent) / (1 + n_vehicles),
        d_v2v=(stats.d_v2v + delay_sum) / (1 + received),
        sent_total=stats.sent_total + sent,
        queued_total=stats.queued_total + queued,
        received_total=stats.received_total + received,
        delay_sum_total=stats.delay_sum_total + delay_sum,
        updates=stats.updates + 1,
    )


def effective_cch_utilization(stats: ChannelStats) -> float:
    """U_CCH = S_V2V * D_V2V（ms）"""
    return stats.s_v2v * stats.d_v2v


def adapt_intervals(cfg: IntervalConfig, u_cch: float) -> IntervalState:
    """根据 U_CCH 更新MAC间隔

    U_CCH < DCCHI 时 CCHI 收缩为 U_CCH，SCHI = DSCHI + I_CCH；
    否则恢复 IEEE 1609.4 的默认划分。
    """
    if u_cch < 0:
        raise ValueError(f"u_cch 不能为负数: {u_cch}")
    if u_cch < cfg.default_cchi:
        inactivity = cfg.default_cchi - u_cch
        return IntervalState(cchi=u_cch, schi=cfg.default_schi + inactivity,
                             inactivity=inactivity, effective_cch_use=u_cch)
    return IntervalState(cchi=cfg.default_cchi, schi=cfg.default_schi,
                         inactivity=0.0, effective_cch_use=u_cch)


def vc_packets_sent_in_extended_schi(per_vehicle: Sequence[Tuple[int, int]]) -> int:
    """S_VC = Σ (NG_VC - Qv_i_VC)，每项下限为0"""
    return sum(max(0, generated - queued) for generated, queued in per_vehicle)
