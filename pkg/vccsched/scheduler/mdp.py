"""有限时域放置MDP与顺序值迭代

状态为 (各车载云空闲VM数, 下一个待处理任务序号)，动作为付费云或某个可行的车载云，
转移是确定性的。VC放置获得 +β_vc·n_j，付费放置付出 -β_tc·n_j，
闲置VM惩罚 -γ_vc·Σ空闲VM 在时域末端一次性计入终止状态价值。

可达状态从初始状态按任务序号逐层广度优先枚举。若某车载云的空闲VM数已小于
后续所有兼容任务的最小需求，则它的空闲VM不会再变化，称为"已结算"：
规范状态把已结算车载云的空闲数记为0，原始状态的价值等于规范状态价值减去
γ_vc·Σ已结算空闲VM。这样的合并是精确的，合法动作集合与即时奖励都不变。
"""

from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple
import logging
import sys
import time

import numpy as np

from ..exception import InfeasibleActionError, PolicyLookupError, StateSpaceCapError
from ..interfaces import IScheduler, ScheduleResult, SchedulerKind
from ..workload import (
    PAID_TCC,
    BagOfTasks,
    PlacementRecord,
    Task,
    VccModel,
    flatten_tasks,
    qos_compatible,
)

logger = logging.getLogger(__name__)

DEFAULT_EPSILON = 1e-6
DEFAULT_STATE_CAP = 5_000_000

# 后续没有兼容任务时的结算阈值
_NO_TASK = sys.maxsize
# 动作表中的空位
_NO_ACTION = -2


class MdpState(NamedTuple):
    """MDP状态"""
    free_vms: Tuple[int, ...]
    next_task_index: int
    terminal: bool = False


class MdpAction(NamedTuple):
    """MDP动作，target 为车载云下标，付费云为 -1"""
    target: int

    @property
    def is_paid(self) -> bool:
        return self.target < 0

    @property
    def sign(self) -> int:
        """付费云为 -1，车载云为 +1"""
        return -1 if self.is_paid else 1


PAID = MdpAction(-1)


class MdpInstance:
    """由车载云集合与BOT列表展开得到的MDP实例"""

    def __init__(self, vcc: VccModel, bots: Sequence[BagOfTasks]):
        self.vcc = vcc
        self.bots = list(bots)
        self.tasks: List[Tuple[int, Task]] = flatten_tasks(self.bots)
        self.horizon = len(self.tasks)
        self.n_clouds = len(vcc.clouds)
        self.cloud_ids = vcc.cloud_ids
        self.initial_free = tuple(cloud.vm_free for cloud in vcc.clouds)
        self.beta_vc = vcc.reward_per_vc_vm
        self.beta_tc = vcc.cost_per_tcc_vm
        self.gamma_vc = vcc.penalty_per_idle_vm

        self.demand = [task.vm_demand for _, task in self.tasks]
        self.compatible: List[Tuple[int, ...]] = [
            tuple(i for i, cloud in enumerate(vcc.clouds) if qos_compatible(cloud, task))
            for _, task in self.tasks
        ]

        # settle_threshold[t][i]: 序号 ≥ t 的兼容任务中最小的VM需求
        thresholds = [(_NO_TASK,) * self.n_clouds]
        for t in range(self.horizon - 1, -1, -1):
            current = list(thresholds[-1])
            for i in self.compatible[t]:
                current[i] = min(current[i], self.demand[t])
            thresholds.append(tuple(current))
        thresholds.reverse()
        self.settle_threshold: List[Tuple[int, ...]] = thresholds

    def initial_state(self) -> MdpState:
        return MdpState(self.initial_free, 0, self.horizon == 0)

    def task_at(self, index: int) -> Task:
        return self.tasks[index][1]

    def legal_actions(self, s: MdpState) -> List[MdpAction]:
        """车载云动作按下标升序，付费云动作排在最后"""
        if s.terminal:
            return []
        demand = self.demand[s.next_task_index]
        actions = [MdpAction(i) for i in self.compatible[s.next_task_index] if s.free_vms[i] >= demand]
        actions.append(PAID)
        return actions

    def canonical_key(self, t: int, free: Sequence[int]) -> Tuple[Tuple[int, ...], int]:
        """返回 (规范空闲向量, 已结算空闲VM总数)"""
        settled = 0
        out = []
        for f, threshold in zip(free, self.settle_threshold[t]):
            if f < threshold:
                settled += f
                out.append(0)
            else:
                out.append(f)
        return tuple(out), settled

    def canonicalize(self, s: MdpState) -> Tuple[MdpState, float]:
        """返回 (规范状态, 价值偏移 -γ_vc·Σ已结算空闲VM)"""
        free, settled = self.canonical_key(s.next_task_index, s.free_vms)
        return MdpState(free, s.next_task_index, s.terminal), -self.gamma_vc * settled


def transition(s: MdpState, a: MdpAction, instance: MdpInstance) -> MdpState:
    """确定性转移：任务序号加一，VC动作使目标车载云空闲VM减少 n_j"""
    if s.terminal:
        raise InfeasibleActionError("终止状态没有可执行的动作")
    t = s.next_task_index
    free = s.free_vms
    if not a.is_paid:
        demand = instance.demand[t]
        if a.target not in instance.compatible[t] or free[a.target] < demand:
            raise InfeasibleActionError(f"任务 {t} 不能放到车载云下标 {a.target}")
        free = free[:a.target] + (free[a.target] - demand,) + free[a.target + 1:]
    return MdpState(free, t + 1, t + 1 == instance.horizon)


def step_reward(s: MdpState, a: MdpAction, s_next: MdpState, instance: MdpInstance) -> float:
    """即时奖励：VC +β_vc·n_j，付费 -β_tc·n_j"""
    demand = instance.demand[s.next_task_index]
    if a.is_paid:
        return -instance.beta_tc * demand
    return instance.beta_vc * demand


def terminal_value(s: MdpState, instance: MdpInstance) -> float:
    """终止价值 -γ_vc·Σ空闲VM"""
    return -instance.gamma_vc * sum(s.free_vms)


class StateSpace:
    """规范可达状态空间（广度优先顺序）及其向量化转移表

    succ/reward/offset/action 的每一行对应一个状态，每一列对应一个合法动作
    （车载云下标升序，付费云最后）；空位的后继指向哨兵下标 N，其价值为 -inf。
    """

    def __init__(self, instance: MdpInstance, states: List[Tuple[int, Tuple[int, ...]]],
                 index: Dict[Tuple[int, Tuple[int, ...]], int], width: int):
        self.instance = instance
        self.states = states
        self.index = index
        n = len(states)
        self.size = n
        self.width = width
        self.succ = np.full((n, width), n, dtype=np.int64)
        self.reward = np.zeros((n, width), dtype=np.float64)
        self.offset = np.zeros((n, width), dtype=np.float64)
        self.action = np.full((n, width), _NO_ACTION, dtype=np.int64)
        self.terminal = np.zeros(n, dtype=bool)
        self.terminal_values = np.zeros(n, dtype=np.float64)

    def __len__(self) -> int:
        return self.size

    def initial_vector(self) -> np.ndarray:
        """V⁰：终止状态取终止价值，其余为0"""
        return np.where(self.terminal, self.terminal_values, 0.0)

    def lookup(self, s: MdpState) -> Tuple[int, float]:
        """原始状态 → (规范状态下标, 价值偏移)"""
        canonical, offset = self.instance.canonicalize(s)
        key = (canonical.next_task_index, canonical.free_vms)
        if key not in self.index:
            raise PolicyLookupError(f"状态不在可达状态空间中: {s}")
        return self.index[key], offset

    def state_at(self, row: int) -> MdpState:
        t, free = self.states[row]
        return MdpState(free, t, t == self.instance.horizon)


def enumerate_state_space(instance: MdpInstance, state_cap: int = DEFAULT_STATE_CAP) -> StateSpace:
    """从初始状态逐层枚举规范可达状态"""
    start_free, _ = instance.canonical_key(0, instance.initial_free)
    states: List[Tuple[int, Tuple[int, ...]]] = [(0, start_free)]
    index: Dict[Tuple[int, Tuple[int, ...]], int] = {(0, start_free): 0}
    # 每个非终止状态的 [(动作, 后继下标, 奖励, 偏移)]
    edges: List[List[Tuple[int, int, float, float]]] = []

    layer = [start_free]
    for t in range(instance.horizon):
        demand = instance.demand[t]
        gain = instance.beta_vc * demand
        cost = -instance.beta_tc * demand
        next_layer: List[Tuple[int, ...]] = []
        for free in layer:
            row_edges = []
            candidates = []
            for i in instance.compatible[t]:
                if free[i] >= demand:
                    moved = free[:i] + (free[i] - demand,) + free[i + 1:]
                    candidates.append((i, moved, gain))
            candidates.append((PAID.target, free, cost))

            for target, moved, reward in candidates:
                canonical, settled = instance.canonical_key(t + 1, moved)
                key = (t + 1, canonical)
                row = index.get(key)
                if row is None:
                    row = len(states)
                    if row >= state_cap:
                        raise StateSpaceCapError(state_cap, row + 1)
                    index[key] = row
                    states.append(key)
                    next_layer.append(canonical)
                row_edges.append((target, row, reward, -instance.gamma_vc * settled))
            edges.append(row_edges)
        layer = next_layer

    width = max((len(row_edges) for row_edges in edges), default=1)
    space = StateSpace(instance, states, index, width)
    for row, row_edges in enumerate(edges):
        for col, (target, succ, reward, offset) in enumerate(row_edges):
            space.action[row, col] = target
            space.succ[row, col] = succ
            space.reward[row, col] = reward
            space.offset[row, col] = offset
    for row in range(len(edges), len(states)):
        t, free = states[row]
        space.terminal[row] = True
        space.terminal_values[row] = -instance.gamma_vc * sum(free)

    logger.debug(f"状态空间枚举完成: {len(states)} 个状态, 动作宽度 {width}")
    return space


def _candidates(space: StateSpace, v_prev_ext: np.ndarray, lo: int, hi: int) -> np.ndarray:
    """r + (V(s') + 偏移)，非法动作为 -inf"""
    return space.reward[lo:hi] + (v_prev_ext[space.succ[lo:hi]] + space.offset[lo:hi])


def sweep_block(space: StateSpace, v_prev_ext: np.ndarray, v_next_ext: np.ndarray, lo: int, hi: int) -> float:
    """对 [lo, hi) 行执行一次Jacobi更新，只读 v_prev_ext、只写 v_next_ext[lo:hi]

    Returns:
        本块的 max |V^{k+1} - V^k|
    """
    if hi <= lo:
        return 0.0
    best = _candidates(space, v_prev_ext, lo, hi).max(axis=1)
    block = np.where(space.terminal[lo:hi], space.terminal_values[lo:hi], best)
    v_next_ext[lo:hi] = block
    return float(np.max(np.abs(block - v_prev_ext[lo:hi])))


def extract_actions(space: StateSpace, v_ext: np.ndarray, lo: int = 0, hi: Optional[int] = None) -> np.ndarray:
    """argmax 策略提取；并列时取最左列（车载云下标最小，付费云最后）"""
    hi = space.size if hi is None else hi
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    columns = _candidates(space, v_ext, lo, hi).argmax(axis=1)
    chosen = space.action[np.arange(lo, hi), columns]
    return np.where(space.terminal[lo:hi], _NO_ACTION, chosen)


def extend(vector: np.ndarray) -> np.ndarray:
    """在末尾追加 -inf 哨兵"""
    return np.append(vector, -np.inf)


class ValueTable:
    """规范状态的价值表"""

    def __init__(self, space: StateSpace, values: np.ndarray, sweeps: int, epsilon: float):
        self.space = space
        self.values = values
        self.sweeps = sweeps
        self.epsilon = epsilon

    def __len__(self) -> int:
        return len(self.values)

    def value(self, s: MdpState) -> float:
        row, offset = self.space.lookup(s)
        return self.values[row] + offset

    @property
    def initial_value(self) -> float:
        return self.value(self.space.instance.initial_state())

    def as_dict(self) -> Dict[MdpState, float]:
        return {self.space.state_at(row): float(v) for row, v in enumerate(self.values)}


class Policy:
    """规范状态上的确定性策略 π: S → A"""

    def __init__(self, space: StateSpace, actions: np.ndarray):
        self.space = space
        self.actions = actions

    def action(self, s: MdpState) -> MdpAction:
        if s.terminal:
            raise PolicyLookupError("终止状态没有策略动作")
        row, _ = self.space.lookup(s)
        target = int(self.actions[row])
        if target == _NO_ACTION:
            raise PolicyLookupError(f"策略中缺少状态: {s}")
        return MdpAction(target)

    def as_dict(self) -> Dict[MdpState, MdpAction]:
        return {
            self.space.state_at(row): MdpAction(int(target))
            for row, target in enumerate(self.actions)
            if target != _NO_ACTION
        }


def check_epsilon(epsilon: float) -> float:
    if not epsilon > 0:
        raise ValueError(f"epsilon 必须为正数: {epsilon}")
    return epsilon


def has_converged(delta: float, sweeps: int, epsilon: float, horizon: int) -> bool:
    """Δ 为0，或 Δ < epsilon 且扫描次数已超过时域长度

    状态图按任务序号分层无环，horizon+1 次扫描后价值精确。
    """
    return delta == 0.0 or (delta < epsilon and sweeps > horizon)


def bellman_backup(s: MdpState, V: ValueTable, instance: MdpInstance) -> Tuple[float, MdpAction]:
    """对非终止状态做一次Bellman备份，返回 (最大价值, 最优动作)"""
    if s.terminal:
        raise InfeasibleActionError("终止状态不做Bellman备份")
    best_value = -np.inf
    best_action = PAID
    for a in instance.legal_actions(s):
        s_next = transition(s, a, instance)
        value = step_reward(s, a, s_next, instance) + V.value(s_next)
        if value > best_value:
            best_value, best_action = value, a
    return float(best_value), best_action


def value_iteration(instance: MdpInstance, epsilon: float = DEFAULT_EPSILON,
                    state_cap: int = DEFAULT_STATE_CAP) -> Tuple[ValueTable, Policy]:
    """顺序Jacobi值迭代，停止条件见 has_converged"""
    check_epsilon(epsilon)
    space = enumerate_state_space(instance, state_cap)
    v_prev = extend(space.initial_vector())
    v_next = v_prev.copy()

    sweeps = 0
    while True:
        sweeps += 1
        delta = sweep_block(space, v_prev, v_next, 0, space.size)
        v_prev, v_next = v_next, v_prev
        logger.debug(f"第 {sweeps} 次扫描: delta={delta:.3e}")
        if has_converged(delta, sweeps, epsilon, instance.horizon):
            break

    values = v_prev[:space.size].copy()
    policy = Policy(space, extract_actions(space, v_prev))
    table = ValueTable(space, values, sweeps, epsilon)
    logger.info(f"值迭代收敛: {sweeps} 次扫描, {space.size} 个状态, V(初始)={table.initial_value:.6f}")
    return table, policy


def rollout(policy: Policy, instance: MdpInstance) -> ScheduleResult:
    """从初始状态执行策略直到终止，返回与贪心相同形态的调度结果"""
    result = ScheduleResult(scheduler=SchedulerKind.MDP.value)
    s = instance.initial_state()
    while not s.terminal:
        a = policy.action(s)
        bot_id, task = instance.tasks[s.next_task_index]
        target = PAID_TCC if a.is_paid else instance.cloud_ids[a.target]
        result.add_placement(PlacementRecord(task_id=task.id, target=target,
                                             vms_used=task.vm_demand, bot_id=bot_id))
        s = transition(s, a, instance)
    return result.finalize(instance.vcc)


class MdpScheduler(IScheduler):
    """基于值迭代的MDP调度器"""

    def __init__(self, epsilon: float = DEFAULT_EPSILON, state_cap: int = DEFAULT_STATE_CAP):
        self.epsilon = check_epsilon(epsilon)
        self.state_cap = state_cap
        self.logger = logging.getLogger(__name__)

    def get_name(self) -> str:
        return SchedulerKind.MDP.value

    def solve(self, instance: MdpInstance) -> Tuple[ValueTable, Policy]:
        return value_iteration(instance, self.epsilon, self.state_cap)

    def schedule(self, vcc: VccModel, bots: Sequence[BagOfTasks]) -> ScheduleResult:
        instance = MdpInstance(vcc, bots)
        started = time.perf_counter()
        table, policy = self.solve(instance)
        elapsed_ms = (time.perf_counter() - started) * 1000.0

        result = rollout(policy, instance)
        result.scheduler = self.get_name()
        result.diagnostics = {
            "epsilon": self.epsilon,
            "sweeps": table.sweeps,
            "states_explored": len(table),
            "initial_value": table.initial_value,
        }
        self.logger.info(
            f"MDP调度完成: VC放置 {result.vc_placed_vms} 个VM, 付费 {result.paid_vms} 个VM, "
            f"闲置 {result.unused_vms} 个VM, 状态数 {len(table)}, 求解耗时 {elapsed_ms:.1f} ms"
        )
        return result
