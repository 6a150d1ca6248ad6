"""信道间隔控制器实现

- StaticIntervalController: IEEE 1609.4 固定 50/50 划分
- AaaIntervalController: AAA 自适应划分（每个自适应周期调整一次）
"""

from typing import Any, Dict, List, Sequence, Tuple
import logging

from ..interfaces import IIntervalController
from .aaa import (
    ChannelStats,
    IntervalConfig,
    IntervalState,
    VehicleSample,
    adapt_intervals,
    effective_cch_utilization,
    update_running_stats,
    vc_packets_sent_in_extended_schi,
)


class StaticIntervalController(IIntervalController):
    """IEEE 1609.4 固定划分控制器"""

    def __init__(self, cfg: IntervalConfig):
        self.cfg = cfg
        self._state = IntervalState.default(cfg)
        self._history: List[IntervalState] = []
        self.logger = logging.getLogger(__name__)

    def get_name(self) -> str:
        return "static1609"

    def current_state(self) -> IntervalState:
        return self._state

    def record_si(self, samples: Sequence[VehicleSample]) -> None:
        return None

    def close_epoch(self) -> IntervalState:
        self._history.append(self._state)
        return self._state

    def history(self) -> List[IntervalState]:
        return list(self._history)


class AaaIntervalController(IIntervalController):
    """AAA自适应间隔控制器

    每个SI结束时用本SI的样本更新运行统计量，每个自适应周期结束时
    计算 U_CCH 并调整下一周期的 CCHI/SCHI，然后清零统计量。
    同时记录SCHI被延长时的VC统计量 S_VC、D_VC 作为诊断信息。
    """

    def __init__(self, cfg: IntervalConfig, n_vehicles: int, bsm_rate: float = 10.0):
        self.cfg = cfg
        self.stats = ChannelStats(n_vehicles=n_vehicles, bsm_rate=bsm_rate)
        self._state = IntervalState.default(cfg)
        self._history: List[IntervalState] = []
        self.s_vc = 0
        self.d_vc = 0.0
        self.logger = logging.getLogger(__name__)

        if n_vehicles < 2:
            self.logger.warning("只有 1 辆车时没有BSM接收方，U_CCH 恒为0，CCHI 将收缩为0")

    def get_name(self) -> str:
        return "aaa"

    def current_state(self) -> IntervalState:
        return self._state

    def record_si(self, samples: Sequence[VehicleSample]) -> None:
        self.stats = update_running_stats(self.stats, samples)

    def record_vc(self, per_vehicle: Sequence[Tuple[int, int]], delay_sum_ms: float, received: int) -> None:
        if self._state.schi <= self.cfg.default_schi:
            return
        self.s_vc += vc_packets_sent_in_extended_schi(per_vehicle)
        self.d_vc = (self.d_vc + delay_sum_ms) / (1 + received)

    def close_epoch(self) -> IntervalState:
        u_cch = effective_cch_utilization(self.stats)
        new_state = adapt_intervals(self.cfg, u_cch)
        if u_cch >= self.cfg.default_cchi:
            self.logger.debug(f"控制信道饱和 U_CCH={u_cch:.4f} ms，恢复默认划分")
        else:
            self.logger.debug(
                f"AAA调整间隔: U_CCH={u_cch:.4f} ms, CCHI={new_state.cchi:.4f} ms, SCHI={new_state.schi:.4f} ms"
            )
        self._state = new_state
        self._history.append(new_state)
        self.stats = self.stats.reset()
        return new_state

    def history(self) -> List[IntervalState]:
        return list(self._history)

    def diagnostics(self) -> Dict[str, Any]:
        return {"s_vc": self.s_vc, "d_vc": self.d_vc, "epochs": len(self._history)}
