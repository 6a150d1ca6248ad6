"""DSRC离散事件仿真引擎

基于 simpy 的整数微秒时钟。每个同步间隔（SI）内：
1. SI 开始时每辆车生成本SI的BSM；
2. CCHI 首个保护间隔之后，CCH 按轮询（round-robin）为有积压的车辆逐轮发送BSM；
3. SCHI 开始时承载VM的车辆生成VC数据包，保护间隔之后在 SCH 上轮询发送到RSU；
4. SI 结束时把本SI的样本交给间隔控制器，每 adaptation_period_si 个SI调整一次间隔。

同一轮发送的帧大小相同，统一在轮末送达。
"""

from collections import deque
from typing import Deque, Dict, List, Tuple
import logging
import math

import numpy as np
import simpy

from ..channel.aaa import VehicleSample, bsm_generated_per_si, ms_to_us
from ..channel.controllers import AaaIntervalController, StaticIntervalController
from ..interfaces import IIntervalController, PacketKind, Scheme
from .scenario import BROADCAST, RSU, PacketEvent, SiRecord, SimTrace, VanetScenario


def frame_airtime_us(size_bits: int, data_rate_kbps: float, mac_efficiency: float,
                     access_overhead_us: int = 0) -> int:
    """单帧占用的信道时间（整数微秒）"""
    return int(math.ceil(size_bits * 1000.0 / (data_rate_kbps * mac_efficiency))) + access_overhead_us


def build_controller(scenario: VanetScenario) -> IIntervalController:
    """按方案创建信道间隔控制器"""
    if scenario.scheme == Scheme.AAA:
        return AaaIntervalController(scenario.interval_cfg, scenario.n_vehicles, scenario.bsm_rate)
    return StaticIntervalController(scenario.interval_cfg)


class VanetSimulator:
    """单个RSU覆盖范围的DSRC仿真器"""

    def __init__(self, scenario: VanetScenario):
        """初始化仿真器

        Args:
            scenario: 仿真场景（构造时校验）
        """
        self.scenario = scenario.validate()
        self.logger = logging.getLogger(__name__)
        self.env = simpy.Environment()
        self.rng = np.random.default_rng(scenario.rng_seed)
        self.controller = build_controller(scenario)

        n = scenario.n_vehicles
        self.queues: Dict[PacketKind, List[Deque[PacketEvent]]] = {
            PacketKind.BSM: [deque() for _ in range(n)],
            PacketKind.VC: [deque() for _ in range(n)],
        }
        # 每个信道的轮询指针在各间隔之间延续，初始位置由随机种子决定
        self._rr: Dict[PacketKind, int] = {
            PacketKind.BSM: int(self.rng.integers(n)),
            PacketKind.VC: int(self.rng.integers(n)),
        }
        self.airtime_us: Dict[PacketKind, int] = {
            PacketKind.BSM: frame_airtime_us(scenario.bsm_size, scenario.data_rate,
                                             scenario.mac_efficiency, scenario.access_overhead_us),
            PacketKind.VC: frame_airtime_us(scenario.vc_size, scenario.data_rate,
                                            scenario.mac_efficiency, scenario.access_overhead_us),
        }
        self.trace = SimTrace(scenario=scenario)

    def run(self) -> SimTrace:
        """运行全部同步间隔并返回轨迹"""
        self.env.process(self._sync_clock())
        self.env.run()

        self.trace.diagnostics["controller"] = self.controller.get_name()
        self.trace.diagnostics["airtime_us"] = {kind.value: t for kind, t in self.airtime_us.items()}
        if isinstance(self.controller, AaaIntervalController):
            self.trace.diagnostics.update(self.controller.diagnostics())

        self.logger.info(
            f"仿真完成: 方案={self.scenario.scheme.value}, 车辆数={self.scenario.n_vehicles}, "
            f"SI数={len(self.trace.si_records)}, 事件数={len(self.trace.events)}"
        )
        return self.trace

    def _generate(self, kind: PacketKind, senders: int, count: int, created_at_us: int) -> int:
        size = self.scenario.bsm_size if kind == PacketKind.BSM else self.scenario.vc_size
        dst = BROADCAST if kind == PacketKind.BSM else RSU
        for vehicle in range(senders):
            for _ in range(count):
                packet = PacketEvent(kind=kind, src_vehicle=vehicle, created_at_us=created_at_us,
                                     size_bits=size, dst=dst)
                self.queues[kind][vehicle].append(packet)
                self.trace.events.append(packet)
        return senders * count

    def _serve(self, kind: PacketKind, si_index: int, window_start_us: int, window_end_us: int):
        """在 [window_start, window_end) 内轮询发送，返回本窗口送达的数据包"""
        delivered: List[PacketEvent] = []
        if window_end_us <= window_start_us:
            return delivered
        if self.env.now < window_start_us:
            yield self.env.timeout(window_start_us - self.env.now)

        queues = self.queues[kind]
        n = len(queues)
        tx_us = self.airtime_us[kind]
        while True:
            fit = (window_end_us - self.env.now) // tx_us
            if fit <= 0:
                break
            start = self._rr[kind]
            backlogged = [(start + offset) % n for offset in range(n) if queues[(start + offset) % n]]
            if not backlogged:
                break
            batch = backlogged[:fit]
            yield self.env.timeout(len(batch) * tx_us)
            for vehicle in batch:
                packet = queues[vehicle].popleft()
                packet.delivered_at_us = self.env.now
                packet.si_index = si_index
                delivered.append(packet)
            self._rr[kind] = (batch[-1] + 1) % n
        return delivered

    def _advance_to(self, t_us: int):
        if self.env.now < t_us:
            yield self.env.timeout(t_us - self.env.now)

    def _sync_clock(self):
        scenario = self.scenario
        cfg = scenario.interval_cfg
        si_us = cfg.si_us
        guard_us = cfg.guard_us
        n = scenario.n_vehicles
        ng_bsm = bsm_generated_per_si(scenario.bsm_rate, cfg.si)
        ng_vc = bsm_generated_per_si(scenario.vc_rate, cfg.si)

        for si_index in range(scenario.n_sync):
            si_start = si_index * si_us
            if si_index > 0 and si_index % scenario.adaptation_period_si == 0:
                self.controller.close_epoch()
            state = self.controller.current_state()
            self.trace.intervals.append(state)
            cchi_us = min(ms_to_us(state.cchi), si_us)
            schi_us = si_us - cchi_us

            # 控制信道：BSM
            bsm_generated = self._generate(PacketKind.BSM, n, ng_bsm, si_start)
            bsm_delivered = yield from self._serve(PacketKind.BSM, si_index,
                                                   si_start + guard_us, si_start + cchi_us)
            yield from self._advance_to(si_start + cchi_us)
            samples, bsm_delay_sum = self._bsm_samples(bsm_delivered, ng_bsm)
            bsm_depths = tuple(len(q) for q in self.queues[PacketKind.BSM])

            # 服务信道：VC
            sch_start = si_start + cchi_us
            vc_generated = self._generate(PacketKind.VC, scenario.vc_senders, ng_vc, sch_start)
            vc_delivered = yield from self._serve(PacketKind.VC, si_index,
                                                  sch_start + guard_us, si_start + si_us)
            yield from self._advance_to(si_start + si_us)
            vc_depths = tuple(len(q) for q in self.queues[PacketKind.VC])

            vc_sent_per_vehicle = [0] * n
            for packet in vc_delivered:
                vc_sent_per_vehicle[packet.src_vehicle] += 1
            vc_delay_sum = sum(packet.delay_us for packet in vc_delivered)
            vc_per_vehicle: List[Tuple[int, int]] = [
                (ng_vc, max(0, ng_vc - vc_sent_per_vehicle[v])) for v in range(scenario.vc_senders)
            ]

            self.controller.record_si(samples)
            self.controller.record_vc(vc_per_vehicle, vc_delay_sum / 1000.0, len(vc_delivered))

            self.trace.si_records.append(SiRecord(
                si_index=si_index,
                start_us=si_start,
                cchi_us=cchi_us,
                schi_us=schi_us,
                bsm_generated=bsm_generated,
                bsm_sent=len(bsm_delivered),
                bsm_queued=sum(bsm_depths),
                bsm_delay_sum_us=bsm_delay_sum,
                bsm_bits=sum(packet.size_bits for packet in bsm_delivered),
                vc_generated=vc_generated,
                vc_sent=len(vc_delivered),
                vc_queued=sum(vc_depths),
                vc_delay_sum_us=vc_delay_sum,
                vc_bits=sum(packet.size_bits for packet in vc_delivered),
                bsm_queue_depths=bsm_depths,
                vc_queue_depths=vc_depths,
            ))

            if sum(bsm_depths) > 0 and si_index % scenario.adaptation_period_si == 0:
                self.logger.debug(f"SI {si_index}: 控制信道积压 {sum(bsm_depths)} 个BSM")

    def _bsm_samples(self, delivered: List[PacketEvent], generated: int) -> Tuple[List[VehicleSample], int]:
        """由本SI送达的BSM计算每辆车的发送/接收样本

        每个送达的BSM被其余 N-1 辆车接收。
        """
        n = self.scenario.n_vehicles
        own_count = [0] * n
        own_delay = [0] * n
        for packet in delivered:
            own_count[packet.src_vehicle] += 1
            own_delay[packet.src_vehicle] += packet.delay_us
        total_count = len(delivered)
        total_delay = sum(own_delay)

        samples = []
        for vehicle in range(n):
            queued = max(0, generated - own_count[vehicle])
            received = total_count - own_count[vehicle]
            delay_sum_ms = (total_delay - own_delay[vehicle]) / 1000.0
            samples.append(VehicleSample(generated, queued, received, delay_sum_ms))
        return samples, total_delay


def run_simulation(scenario: VanetScenario) -> SimTrace:
    """运行一次仿真，相同场景与种子得到相同轨迹"""
    return VanetSimulator(scenario).run()
