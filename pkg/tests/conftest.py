"""测试共享夹具"""

from typing import Callable, List, Tuple

import numpy as np
import pytest

from vccsched.config import instance_from_dict
from vccsched.sampleData import get_canonical_benchmark_data
from vccsched.workload import BagOfTasks, Task, VccModel, VehicularCloud


@pytest.fixture(scope="session")
def canonical_instance() -> Tuple[VccModel, List[BagOfTasks]]:
    return instance_from_dict(get_canonical_benchmark_data())


@pytest.fixture(scope="session")
def canonical_mdp_solution(canonical_instance):
    from vccsched.scheduler import MdpInstance, value_iteration

    vcc, bots = canonical_instance
    instance = MdpInstance(vcc, bots)
    table, policy = value_iteration(instance)
    return instance, table, policy


def random_instance(seed: int, max_tasks: int = 8, max_clouds: int = 3, max_vm: int = 3,
                    max_demand: int = 2, random_rewards: bool = True) -> Tuple[VccModel, List[BagOfTasks]]:
    """生成随机小实例，QoS要求从少量离散取值中抽取以产生兼容与不兼容的组合"""
    rng = np.random.default_rng(seed)
    n_clouds = int(rng.integers(1, max_clouds + 1))
    clouds = []
    for k in range(n_clouds):
        vm_total = int(rng.integers(1, max_vm + 1))
        clouds.append(VehicularCloud(
            id=k + 1,
            vm_total=vm_total,
            vm_free=vm_total,
            vm_throughput=float(rng.choice([100.0, 200.0, 300.0])),
            v2i_delay=float(rng.choice([10.0, 20.0, 30.0])),
        ))

    n_tasks = int(rng.integers(0, max_tasks + 1))
    tasks = [
        Task(
            id=j + 1,
            vm_demand=int(rng.integers(1, max_demand + 1)),
            max_delay=float(rng.choice([10.0, 20.0, 30.0])),
            min_vm_throughput=float(rng.choice([100.0, 200.0, 300.0])),
        )
        for j in range(n_tasks)
    ]
    cut = int(rng.integers(0, n_tasks + 1))
    bots = [BagOfTasks(id=1, tasks=tuple(tasks[:cut])), BagOfTasks(id=2, tasks=tuple(tasks[cut:]))]

    if random_rewards:
        beta_vc, beta_tc, gamma_vc = (float(x) for x in rng.choice([0.0, 0.5, 1.0, 1.2, 2.0], size=3))
    else:
        beta_vc, beta_tc, gamma_vc = 1.0, 1.2, 1.0
    return VccModel(clouds=tuple(clouds), reward_per_vc_vm=beta_vc,
                    cost_per_tcc_vm=beta_tc, penalty_per_idle_vm=gamma_vc), bots


@pytest.fixture
def make_random_instance() -> Callable[..., Tuple[VccModel, List[BagOfTasks]]]:
    return random_instance


def unit_tasks(count: int, max_delay: float = 100.0, min_thr: float = 50.0, demand: int = 1,
               first_id: int = 1) -> Tuple[Task, ...]:
    return tuple(Task(id=first_id + j, vm_demand=demand, max_delay=max_delay, min_vm_throughput=min_thr)
                 for j in range(count))


@pytest.fixture
def make_unit_tasks():
    return unit_tasks


def single_cloud(vm_total: int, delay: float = 10.0, thr: float = 100.0, cloud_id: int = 1) -> VehicularCloud:
    return VehicularCloud(id=cloud_id, vm_total=vm_total, vm_free=vm_total, vm_throughput=thr, v2i_delay=delay)


@pytest.fixture
def make_cloud():
    return single_cloud
