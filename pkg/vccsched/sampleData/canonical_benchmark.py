"""
标准基准数据

11个车载云（VM数 5,7,10,15,20,25,28,35,40,42,45，共272个VM）和11个BOT
（分别含 5,10,...,55 个单VM任务，共330个任务）。

第 k 个车载云的V2I时延为 10k ms、每VM吞吐量为 100k kbps，因此一个任务的
(最大时延, 最低吞吐量) 要求恰好选中一段连续的车载云 [lo, hi]。任务序列按段构造，
使首次适配贪心在各车载云上留下的闲置VM为
{VC2:1, VC4:2, VC5:4, VC7:4, VC8:1, VC9:1, VC10:7, VC11:7}（共27个），
付费VM为85个；而最优放置可以填满全部272个VM，只需付费58个。
"""

from typing import Any, Dict, List, Tuple

VC_SIZES = [5, 7, 10, 15, 20, 25, 28, 35, 40, 42, 45]

# 密度点与车载云规模相同
DENSITY_POINTS = list(VC_SIZES)

BOT_SIZES = [5 * i for i in range(1, 12)]

REWARDS = {"beta_vc": 1.0, "beta_tc": 1.2, "gamma_vc": 1.0}

# (兼容车载云区间 lo, hi, 数量)；lo > hi 表示没有任何车载云满足要求
TASK_SEGMENTS: List[Tuple[int, int, int]] = [
    # VC1-VC2
    (1, 2, 5), (1, 1, 1), (2, 2, 6),
    # VC3-VC5
    (3, 4, 10), (3, 3, 6), (4, 5, 4), (4, 4, 9), (5, 5, 16),
    # VC6-VC11
    (6, 7, 25), (6, 6, 20), (7, 8, 16), (7, 7, 8), (8, 9, 15), (8, 8, 19),
    (9, 10, 14), (9, 9, 25), (10, 11, 7), (10, 10, 28), (11, 11, 38),
    # 时延要求低于所有车载云的V2I时延，只能付费
    (1, 0, 58),
]

# 无法满足时延要求的任务使用的最大时延（ms）
STRICT_DELAY_MS = 5.0


def cloud_delay_ms(k: int) -> float:
    return 10.0 * k


def cloud_throughput_kbps(k: int) -> float:
    return 100.0 * k


def _task_requirements(lo: int, hi: int) -> Tuple[float, float]:
    """返回 (max_delay_ms, min_vm_throughput_kbps)"""
    if lo > hi:
        return STRICT_DELAY_MS, cloud_throughput_kbps(1)
    return cloud_delay_ms(hi), cloud_throughput_kbps(lo)


def get_canonical_benchmark_data() -> Dict[str, Any]:
    """获取标准基准实例（实例文件格式的键值映射）

    Returns:
        包含 rewards、clouds、bots 的字典
    """
    clouds = [
        {
            "id": k,
            "vm_total": size,
            "vm_throughput_kbps": cloud_throughput_kbps(k),
            "v2i_delay_ms": cloud_delay_ms(k),
        }
        for k, size in enumerate(VC_SIZES, start=1)
    ]

    sequence = []
    for lo, hi, count in TASK_SEGMENTS:
        max_delay, min_thr = _task_requirements(lo, hi)
        sequence.extend([(max_delay, min_thr)] * count)

    bots = []
    task_id = 1
    position = 0
    for bot_id, size in enumerate(BOT_SIZES, start=1):
        tasks = []
        for max_delay, min_thr in sequence[position:position + size]:
            tasks.append({
                "id": task_id,
                "vm_demand": 1,
                "max_delay_ms": max_delay,
                "min_vm_throughput_kbps": min_thr,
            })
            task_id += 1
        position += size
        bots.append({"id": bot_id, "tasks": tasks})

    return {"rewards": dict(REWARDS), "clouds": clouds, "bots": bots}


def get_benchmark_scenario_data() -> Dict[str, Any]:
    """获取基准仿真场景（场景文件格式）

    仿真时长取10秒，使AAA至少经历若干个自适应周期。
    """
    return {
        "si_ms": 100.0,
        "gi_ms": 4.0,
        "default_cchi_ms": 50.0,
        "default_schi_ms": 50.0,
        "scheme": "static1609",
        "n_vehicles": 5,
        "sim_duration_ms": 10000.0,
        "rng_seed": 1609,
    }
