"""分块并行值迭代

把广度优先顺序的规范状态划分为大小至多相差1的连续块，每个工作线程负责一个块：
每次扫描只读取上一轮价值快照、只写本块的下一轮价值，扫描之间用屏障同步，
屏障释放前由最后到达的线程汇总各块的 Δ 并交换新旧数组。
结果与顺序值迭代逐位相同，扫描次数也相同。
"""

from typing import Callable, List, Optional, Sequence, Tuple
import logging
import threading
import time

import numpy as np
import pandas as pd

from ..exception import SchedulerError
from ..interfaces import SchedulerKind
from .mdp import (
    DEFAULT_EPSILON,
    DEFAULT_STATE_CAP,
    MdpInstance,
    MdpScheduler,
    Policy,
    StateSpace,
    ValueTable,
    check_epsilon,
    enumerate_state_space,
    extend,
    extract_actions,
    has_converged,
    sweep_block,
)

logger = logging.getLogger(__name__)


class BlockPartition:
    """把 n_states 个状态划分为 n_blocks 个连续块"""

    def __init__(self, n_states: int, n_blocks: int):
        if n_blocks < 1:
            raise ValueError(f"n_blocks 必须 ≥ 1: {n_blocks}")
        self.n_states = n_states
        self.n_blocks = n_blocks
        base, extra = divmod(n_states, n_blocks)
        self.bounds: List[Tuple[int, int]] = []
        lo = 0
        for block in range(n_blocks):
            hi = lo + base + (1 if block < extra else 0)
            self.bounds.append((lo, hi))
            lo = hi

    @property
    def block_size(self) -> int:
        return -(-self.n_states // self.n_blocks)

    def sizes(self) -> List[int]:
        return [hi - lo for lo, hi in self.bounds]

    def assignment(self, ordinal: int) -> int:
        """状态序号所在的块编号"""
        if not 0 <= ordinal < self.n_states:
            raise IndexError(ordinal)
        for block, (lo, hi) in enumerate(self.bounds):
            if lo <= ordinal < hi:
                return block
        raise IndexError(ordinal)


class SweepBarrier:
    """带代数计数的扫描屏障

    所有参与者完成第 k 次扫描之前，任何参与者都不会开始第 k+1 次扫描。
    action 在每代释放前由一个线程执行一次。
    """

    def __init__(self, parties: int, action: Optional[Callable[[], None]] = None):
        self.parties = parties
        self.generation = 0
        self._action = action
        self._barrier = threading.Barrier(parties, action=self._release)

    def _release(self) -> None:
        if self._action is not None:
            self._action()
        self.generation += 1

    def wait(self) -> int:
        return self._barrier.wait()

    def abort(self) -> None:
        self._barrier.abort()


class _SweepState:
    def __init__(self, space: StateSpace, n_workers: int, epsilon: float):
        self.space = space
        self.epsilon = epsilon
        self.horizon = space.instance.horizon
        self.v_prev = extend(space.initial_vector())
        self.v_next = self.v_prev.copy()
        self.deltas = [0.0] * n_workers
        self.sweeps = 0
        self.done = False
        self.actions = np.zeros(space.size, dtype=np.int64)
        self.errors: List[BaseException] = []

    def fold(self) -> None:
        """屏障释放前汇总 Δ 并交换快照"""
        delta = max(self.deltas)
        self.sweeps += 1
        self.v_prev, self.v_next = self.v_next, self.v_prev
        if has_converged(delta, self.sweeps, self.epsilon, self.horizon):
            self.done = True


def parallel_value_iteration(instance: MdpInstance, epsilon: float = DEFAULT_EPSILON,
                             n_workers: int = 1, state_cap: int = DEFAULT_STATE_CAP,
                             space: Optional[StateSpace] = None) -> Tuple[ValueTable, Policy]:
    """分块并行Jacobi值迭代

    Args:
        instance: MDP实例
        epsilon: 收敛阈值
        n_workers: 工作线程数
        state_cap: 可达状态数上限
        space: 已枚举的状态空间（可选，用于计时时复用）
    """
    if n_workers < 1:
        raise ValueError(f"n_workers 必须 ≥ 1: {n_workers}")
    check_epsilon(epsilon)
    if space is None:
        space = enumerate_state_space(instance, state_cap)

    partition = BlockPartition(space.size, n_workers)
    state = _SweepState(space, n_workers, epsilon)
    barrier = SweepBarrier(n_workers, action=state.fold)

    def worker(block: int) -> None:
        lo, hi = partition.bounds[block]
        try:
            while True:
                state.deltas[block] = sweep_block(space, state.v_prev, state.v_next, lo, hi)
                barrier.wait()
                if state.done:
                    break
            state.actions[lo:hi] = extract_actions(space, state.v_prev, lo, hi)
        except threading.BrokenBarrierError:
            return
        except BaseException as e:
            state.errors.append(e)
            barrier.abort()

    threads = [threading.Thread(target=worker, args=(block,), name=f"vi-block-{block}")
               for block in range(n_workers)]
    for thread in threads:
        thread.start()
    for thread in threads:
        thread.join()

    if state.errors:
        logger.error(f"并行值迭代失败: {state.errors[0]}")
        raise SchedulerError(f"并行值迭代失败: {state.errors[0]}") from state.errors[0]

    table = ValueTable(space, state.v_prev[:space.size].copy(), state.sweeps, epsilon)
    policy = Policy(space, state.actions)
    logger.info(
        f"并行值迭代收敛: {n_workers} 个线程, {state.sweeps} 次扫描, {space.size} 个状态, "
        f"屏障代数 {barrier.generation}"
    )
    return table, policy


def measure_speedup(instance: MdpInstance, worker_counts: Sequence[int],
                    epsilon: float = DEFAULT_EPSILON, state_cap: int = DEFAULT_STATE_CAP) -> pd.DataFrame:
    """测量不同线程数下值迭代的墙钟时间，speedup 以1个线程为基准

    结果与硬件相关，仅供参考。
    """
    space = enumerate_state_space(instance, state_cap)

    def timed(workers: int) -> float:
        started = time.perf_counter()
        parallel_value_iteration(instance, epsilon, workers, state_cap, space=space)
        return (time.perf_counter() - started) * 1000.0

    baseline = timed(1)
    rows = []
    for workers in worker_counts:
        wall_ms = baseline if workers == 1 else timed(workers)
        rows.append({"workers": workers, "wall_ms": wall_ms, "speedup": baseline / wall_ms})
        logger.info(f"{workers} 个线程: {wall_ms:.2f} ms, 加速比 {baseline / wall_ms:.3f}")
    return pd.DataFrame(rows, columns=["workers", "wall_ms", "speedup"])


class ParallelMdpScheduler(MdpScheduler):
    """分块并行值迭代的MDP调度器

    继承自MDP调度器，只替换求解步骤。
    """

    def __init__(self, n_workers: int = 1, epsilon: float = DEFAULT_EPSILON,
                 state_cap: int = DEFAULT_STATE_CAP):
        super().__init__(epsilon, state_cap)
        if n_workers < 1:
            raise ValueError(f"n_workers 必须 ≥ 1: {n_workers}")
        self.n_workers = n_workers

    def get_name(self) -> str:
        return SchedulerKind.MDP_PARALLEL.value

    def solve(self, instance: MdpInstance) -> Tuple[ValueTable, Policy]:
        return parallel_value_iteration(instance, self.epsilon, self.n_workers, self.state_cap)
