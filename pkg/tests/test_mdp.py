"""MDP调度器与顺序值迭代测试"""

from dataclasses import replace
from functools import lru_cache

import numpy as np
import pytest

from vccsched.exception import InfeasibleActionError, PolicyLookupError, StateSpaceCapError
from vccsched.metrics import reward_decomposition, utilization
from vccsched.scheduler import (
    PAID,
    MdpAction,
    MdpInstance,
    MdpScheduler,
    MdpState,
    bellman_backup,
    enumerate_state_space,
    greedy_schedule,
    rollout,
    step_reward,
    terminal_value,
    transition,
    value_iteration,
)
from vccsched.workload import BagOfTasks, Task, VccModel, VehicularCloud, feasible

from conftest import random_instance, single_cloud, unit_tasks


def brute_force_reward(vcc: VccModel, bots) -> float:
    """穷举所有放置序列的最优总奖励"""
    tasks = [task for bot in bots for task in bot.tasks]
    clouds = vcc.clouds

    @lru_cache(maxsize=None)
    def best(t, free):
        if t == len(tasks):
            return -vcc.penalty_per_idle_vm * sum(free)
        task = tasks[t]
        value = -vcc.cost_per_tcc_vm * task.vm_demand + best(t + 1, free)
        for i, cloud in enumerate(clouds):
            if feasible(replace(cloud, vm_free=free[i]), task):
                moved = free[:i] + (free[i] - task.vm_demand,) + free[i + 1:]
                value = max(value, vcc.reward_per_vc_vm * task.vm_demand + best(t + 1, moved))
        return value

    return best(0, tuple(cloud.vm_free for cloud in clouds))


@pytest.fixture
def small_instance():
    vcc = VccModel(clouds=(single_cloud(3),))
    return MdpInstance(vcc, [BagOfTasks(id=1, tasks=unit_tasks(2, demand=2))])


@pytest.fixture(scope="module")
def canonical_result(canonical_instance):
    vcc, bots = canonical_instance
    return MdpScheduler().schedule(vcc, bots)


class TestCanonical:
    def test_optimal_totals(self, canonical_instance, canonical_result):
        vcc, _ = canonical_instance
        result = canonical_result
        assert result.paid_vms == 58
        assert result.unused_vms == 0
        assert reward_decomposition(result, vcc).total == pytest.approx(202.4, abs=1e-9)

    def test_every_cloud_full(self, canonical_instance, canonical_result):
        vcc, _ = canonical_instance
        result = canonical_result
        report = utilization(result, vcc)
        assert all(value == 100.0 for value in report.per_cloud.values())
        assert report.overall == 100.0

    def test_value_matches_rollout(self, canonical_mdp_solution):
        instance, table, policy = canonical_mdp_solution
        result = rollout(policy, instance)
        assert table.initial_value == pytest.approx(202.4, abs=1e-9)
        assert reward_decomposition(result, instance.vcc).total == pytest.approx(table.initial_value)

    def test_diagnostics(self, canonical_result):
        result = canonical_result
        assert set(result.diagnostics) == {"epsilon", "sweeps", "states_explored", "initial_value"}
        assert result.diagnostics["epsilon"] == 1e-6
        assert result.diagnostics["states_explored"] > 0

    def test_beats_greedy(self, canonical_instance, canonical_result):
        vcc, bots = canonical_instance
        mdp = reward_decomposition(canonical_result, vcc).total
        greedy = reward_decomposition(greedy_schedule(vcc, bots), vcc).total
        assert mdp - greedy == pytest.approx(86.4)


class TestModel:
    def test_transition_to_cloud(self, small_instance):
        s = small_instance.initial_state()
        s_next = transition(s, MdpAction(0), small_instance)
        assert s_next == MdpState((1,), 1, False)
        assert step_reward(s, MdpAction(0), s_next, small_instance) == pytest.approx(2.0)

    def test_transition_to_paid(self, small_instance):
        s = small_instance.initial_state()
        s_next = transition(s, PAID, small_instance)
        assert s_next == MdpState((3,), 1, False)
        assert step_reward(s, PAID, s_next, small_instance) == pytest.approx(-2.4)

    def test_infeasible_action_rejected(self, small_instance):
        s = MdpState((1,), 1, False)
        assert small_instance.legal_actions(s) == [PAID]
        with pytest.raises(InfeasibleActionError):
            transition(s, MdpAction(0), small_instance)

    def test_terminal_state(self, small_instance):
        s = MdpState((1,), 2, True)
        assert small_instance.legal_actions(s) == []
        assert terminal_value(s, small_instance) == pytest.approx(-1.0)
        with pytest.raises(InfeasibleActionError):
            transition(s, PAID, small_instance)

    def test_optimal_small_value(self, small_instance):
        table, _ = value_iteration(small_instance)
        # 一个任务放到车载云、另一个付费：2 - 2.4 - 1
        assert table.initial_value == pytest.approx(-1.4)

    def test_filling_cloud_is_optimal(self):
        vcc = VccModel(clouds=(single_cloud(4),))
        instance = MdpInstance(vcc, [BagOfTasks(id=1, tasks=unit_tasks(2, demand=2))])
        table, policy = value_iteration(instance)
        assert table.initial_value == pytest.approx(4.0)
        assert policy.action(instance.initial_state()) == MdpAction(0)

        s = instance.initial_state()
        value, action = bellman_backup(s, table, instance)
        assert value == pytest.approx(table.initial_value)
        assert action == MdpAction(0)

    def test_tie_prefers_lowest_cloud(self):
        vcc = VccModel(clouds=(single_cloud(1, cloud_id=1), single_cloud(1, cloud_id=2)))
        instance = MdpInstance(vcc, [BagOfTasks(id=1, tasks=unit_tasks(1))])
        _, policy = value_iteration(instance)
        assert policy.action(instance.initial_state()) == MdpAction(0)

    def test_unreachable_state_lookup(self):
        vcc = VccModel(clouds=(single_cloud(3),))
        instance = MdpInstance(vcc, [BagOfTasks(id=1, tasks=unit_tasks(3))])
        _, policy = value_iteration(instance)
        with pytest.raises(PolicyLookupError):
            policy.action(MdpState((7,), 1, False))
        with pytest.raises(PolicyLookupError):
            policy.action(MdpState((0,), 3, True))


class TestEdges:
    def test_empty_instance_converges_in_one_sweep(self):
        vcc = VccModel(clouds=(single_cloud(4),))
        table, policy = value_iteration(MdpInstance(vcc, []))
        assert table.sweeps == 1
        assert table.initial_value == pytest.approx(-4.0)
        assert policy.as_dict() == {}

    def test_no_clouds(self):
        instance = MdpInstance(VccModel(), [BagOfTasks(id=1, tasks=unit_tasks(3, demand=2))])
        table, _ = value_iteration(instance)
        assert table.initial_value == pytest.approx(-7.2)

    def test_state_cap(self, canonical_instance):
        vcc, bots = canonical_instance
        with pytest.raises(StateSpaceCapError) as info:
            enumerate_state_space(MdpInstance(vcc, bots), state_cap=10)
        assert "10" in str(info.value)

    def test_rewards_below_epsilon(self):
        vcc = VccModel(clouds=(single_cloud(4),))
        bots = [BagOfTasks(id=1, tasks=(
            Task(id=1, vm_demand=1, max_delay=100.0, min_vm_throughput=50.0),
            Task(id=2, vm_demand=2, max_delay=100.0, min_vm_throughput=50.0),
            Task(id=3, vm_demand=2, max_delay=100.0, min_vm_throughput=50.0),
        ))]
        base_table, _ = value_iteration(MdpInstance(vcc, bots))
        assert base_table.initial_value == pytest.approx(2.8)

        scaled = vcc.scaled(1e-8)
        instance = MdpInstance(scaled, bots)
        table, policy = value_iteration(instance)
        assert table.sweeps > instance.horizon
        assert table.initial_value == pytest.approx(2.8e-8, rel=1e-9, abs=0.0)
        result = rollout(policy, instance)
        assert result.paid_vms == 1
        assert reward_decomposition(result, scaled).total == pytest.approx(2.8e-8, rel=1e-9, abs=0.0)

    def test_large_epsilon_still_exact(self):
        vcc = VccModel(clouds=(single_cloud(4),))
        bots = [BagOfTasks(id=1, tasks=(
            Task(id=1, vm_demand=1, max_delay=100.0, min_vm_throughput=50.0),
            Task(id=2, vm_demand=2, max_delay=100.0, min_vm_throughput=50.0),
            Task(id=3, vm_demand=2, max_delay=100.0, min_vm_throughput=50.0),
        ))]
        table, _ = value_iteration(MdpInstance(vcc, bots), epsilon=100.0)
        assert table.initial_value == pytest.approx(2.8)

    def test_pre_occupied_vms(self):
        cloud = VehicularCloud(id=1, vm_total=6, vm_free=3, vm_throughput=100.0, v2i_delay=10.0)
        vcc = VccModel(clouds=(cloud,))
        instance = MdpInstance(vcc, [BagOfTasks(id=1, tasks=unit_tasks(2))])
        table, policy = value_iteration(instance)
        result = rollout(policy, instance)
        assert result.unused_vms == 1
        assert table.initial_value == pytest.approx(1.0)
        assert reward_decomposition(result, vcc).total == pytest.approx(table.initial_value)

    def test_invalid_epsilon(self, small_instance):
        with pytest.raises(ValueError):
            value_iteration(small_instance, epsilon=0.0)


@pytest.mark.parametrize("seed", range(200))
def test_matches_exhaustive_search(seed):
    vcc, bots = random_instance(seed)
    instance = MdpInstance(vcc, bots)
    table, policy = value_iteration(instance)
    expected = brute_force_reward(vcc, bots)
    assert table.initial_value == pytest.approx(expected, abs=1e-9)
    result = rollout(policy, instance)
    assert reward_decomposition(result, vcc).total == pytest.approx(expected, abs=1e-9)


@pytest.mark.parametrize("seed", range(1000, 1100))
def test_never_worse_than_greedy(seed):
    vcc, bots = random_instance(seed, max_tasks=50, max_clouds=6, max_vm=3, max_demand=2)
    mdp = reward_decomposition(MdpScheduler().schedule(vcc, bots), vcc).total
    greedy = reward_decomposition(greedy_schedule(vcc, bots), vcc).total
    assert mdp >= greedy - 1e-9


@pytest.mark.parametrize("factor", [2.0, 0.5, 2.0 ** -30])
@pytest.mark.parametrize("seed", range(20))
def test_reward_scaling(seed, factor):
    vcc, bots = random_instance(seed, max_tasks=10)
    base_table, base_policy = value_iteration(MdpInstance(vcc, bots))
    table, policy = value_iteration(MdpInstance(vcc.scaled(factor), bots))
    assert table.initial_value == pytest.approx(factor * base_table.initial_value)
    np.testing.assert_array_equal(policy.actions, base_policy.actions)
