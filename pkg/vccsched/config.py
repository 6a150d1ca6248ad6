"""配置加载模块

用 YAML 读写仿真场景文件与调度实例文件。场景文件中的每个键都有默认值
（典型DSRC参数），可以逐键覆盖；实例文件格式见 instanceDefinition.md。
"""

from typing import Any, Dict, List, Optional, Tuple
import logging

import yaml

from .channel.aaa import IntervalConfig
from .exception import ConfigError, OutputIOError
from .interfaces import Scheme
from .simulation.scenario import VanetScenario
from .workload import (
    DEFAULT_BETA_TC,
    DEFAULT_BETA_VC,
    DEFAULT_GAMMA_VC,
    BagOfTasks,
    Task,
    VccModel,
    VehicularCloud,
)

logger = logging.getLogger(__name__)

# 场景文件键 → (类型, 默认值)
SCENARIO_KEYS: Dict[str, Tuple[type, Any]] = {
    "si_ms": (float, 100.0),
    "gi_ms": (float, 4.0),
    "default_cchi_ms": (float, 50.0),
    "default_schi_ms": (float, 50.0),
    "scheme": (str, Scheme.STATIC.value),
    "n_vehicles": (int, 5),
    "sim_duration_ms": (float, 1000.0),
    "bsm_rate_hz": (float, 10.0),
    "bsm_size_bits": (int, 1600),
    "vc_rate_hz": (float, 10.0),
    "vc_size_bits": (int, 12000),
    "data_rate_kbps": (float, 6000.0),
    "mac_efficiency": (float, 0.8),
    "access_overhead_us": (int, 766),
    "adaptation_period_si": (int, 10),
    "rng_seed": (int, 1609),
    "n_vc_active": (int, None),
}

CLOUD_KEYS = ["id", "vm_total", "vm_throughput_kbps", "v2i_delay_ms"]
TASK_KEYS = ["id", "vm_demand", "max_delay_ms", "min_vm_throughput_kbps"]


def read_yaml(path: str) -> Dict[str, Any]:
    """读取 YAML 文件，文件不可读时抛出 OutputIOError，格式错误时抛出 ConfigError"""
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        logger.error(f"读取配置文件失败 {path}: {e}")
        raise OutputIOError(f"读取配置文件失败 {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"YAML 格式错误 {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"配置文件顶层必须是键值映射: {path}")
    return data


def write_yaml(data: Dict[str, Any], path: str) -> str:
    try:
        with open(path, "w", encoding="utf-8") as f:
            yaml.safe_dump(data, f, allow_unicode=True, sort_keys=False)
    except OSError as e:
        raise OutputIOError(f"写入配置文件失败 {path}: {e}") from e
    return path


def _convert(key: str, value: Any, kind: type) -> Any:
    if kind is str:
        return str(value)
    if isinstance(value, bool):
        raise ConfigError(f"配置项 {key} 必须是数值，实际为布尔值")
    try:
        converted = kind(value)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"配置项 {key} 的值 {value!r} 无法转换为 {kind.__name__}") from e
    if kind is int and converted != value:
        raise ConfigError(f"配置项 {key} 必须是整数: {value!r}")
    return converted


def scenario_from_dict(data: Dict[str, Any], overrides: Optional[Dict[str, Any]] = None) -> VanetScenario:
    """由键值映射构造并校验仿真场景，overrides 中值为 None 的键被忽略"""
    merged = dict(data)
    for key, value in (overrides or {}).items():
        if value is not None:
            merged[key] = value

    unknown = sorted(set(merged) - set(SCENARIO_KEYS))
    if unknown:
        raise ConfigError(f"未知的场景配置项: {unknown}")

    values: Dict[str, Any] = {}
    for key, (kind, default) in SCENARIO_KEYS.items():
        raw = merged.get(key, default)
        values[key] = None if raw is None else _convert(key, raw, kind)

    try:
        scheme = Scheme(values["scheme"])
    except ValueError as e:
        raise ConfigError(
            f"未知的信道方案 {values['scheme']!r}，可选 {[s.value for s in Scheme]}"
        ) from e

    interval_cfg = IntervalConfig(si=values["si_ms"], guard=values["gi_ms"],
                                  default_cchi=values["default_cchi_ms"],
                                  default_schi=values["default_schi_ms"])
    scenario = VanetScenario(
        n_vehicles=values["n_vehicles"],
        sim_duration=values["sim_duration_ms"],
        interval_cfg=interval_cfg,
        scheme=scheme,
        bsm_rate=values["bsm_rate_hz"],
        bsm_size=values["bsm_size_bits"],
        vc_rate=values["vc_rate_hz"],
        vc_size=values["vc_size_bits"],
        data_rate=values["data_rate_kbps"],
        mac_efficiency=values["mac_efficiency"],
        access_overhead_us=values["access_overhead_us"],
        adaptation_period_si=values["adaptation_period_si"],
        rng_seed=values["rng_seed"],
        n_vc_active=values["n_vc_active"],
    )
    return scenario.validate()


def scenario_to_dict(scenario: VanetScenario) -> Dict[str, Any]:
    cfg = scenario.interval_cfg
    data = {
        "si_ms": cfg.si,
        "gi_ms": cfg.guard,
        "default_cchi_ms": cfg.default_cchi,
        "default_schi_ms": cfg.default_schi,
        "scheme": scenario.scheme.value,
        "n_vehicles": scenario.n_vehicles,
        "sim_duration_ms": scenario.sim_duration,
        "bsm_rate_hz": scenario.bsm_rate,
        "bsm_size_bits": scenario.bsm_size,
        "vc_rate_hz": scenario.vc_rate,
        "vc_size_bits": scenario.vc_size,
        "data_rate_kbps": scenario.data_rate,
        "mac_efficiency": scenario.mac_efficiency,
        "access_overhead_us": scenario.access_overhead_us,
        "adaptation_period_si": scenario.adaptation_period_si,
        "rng_seed": scenario.rng_seed,
    }
    if scenario.n_vc_active is not None:
        data["n_vc_active"] = scenario.n_vc_active
    return data


def load_scenario(path: str, overrides: Optional[Dict[str, Any]] = None) -> VanetScenario:
    """读取场景文件"""
    scenario = scenario_from_dict(read_yaml(path), overrides)
    logger.info(f"已加载场景 {path}: {scenario.n_vehicles} 辆车, 方案 {scenario.scheme.value}")
    return scenario


def _require(entry: Any, keys: List[str], where: str) -> Dict[str, Any]:
    if not isinstance(entry, dict):
        raise ConfigError(f"{where} 必须是键值映射")
    missing = [key for key in keys if key not in entry]
    if missing:
        raise ConfigError(f"{where} 缺少字段: {missing}")
    return entry


def _list_of(value: Any, where: str) -> List[Any]:
    if value is None:
        return []
    if not isinstance(value, list):
        raise ConfigError(f"{where} 必须是列表")
    return value


def instance_from_dict(data: Dict[str, Any]) -> Tuple[VccModel, List[BagOfTasks]]:
    """由键值映射构造 (车载云集合, BOT列表)"""
    rewards = data.get("rewards") or {}
    if not isinstance(rewards, dict):
        raise ConfigError("rewards 必须是键值映射")

    clouds = []
    for position, entry in enumerate(_list_of(data.get("clouds"), "clouds")):
        entry = _require(entry, CLOUD_KEYS, f"clouds[{position}]")
        vm_total = _convert("vm_total", entry["vm_total"], int)
        clouds.append(VehicularCloud(
            id=_convert("id", entry["id"], int),
            vm_total=vm_total,
            vm_free=_convert("vm_free", entry.get("vm_free", vm_total), int),
            vm_throughput=_convert("vm_throughput_kbps", entry["vm_throughput_kbps"], float),
            v2i_delay=_convert("v2i_delay_ms", entry["v2i_delay_ms"], float),
        ))

    vcc = VccModel(
        clouds=tuple(clouds),
        reward_per_vc_vm=_convert("beta_vc", rewards.get("beta_vc", DEFAULT_BETA_VC), float),
        cost_per_tcc_vm=_convert("beta_tc", rewards.get("beta_tc", DEFAULT_BETA_TC), float),
        penalty_per_idle_vm=_convert("gamma_vc", rewards.get("gamma_vc", DEFAULT_GAMMA_VC), float),
    )

    bots = []
    for position, entry in enumerate(_list_of(data.get("bots"), "bots")):
        entry = _require(entry, ["id"], f"bots[{position}]")
        tasks = []
        for task_position, task_entry in enumerate(_list_of(entry.get("tasks"), f"bots[{position}].tasks")):
            task_entry = _require(task_entry, TASK_KEYS, f"bots[{position}].tasks[{task_position}]")
            tasks.append(Task(
                id=_convert("id", task_entry["id"], int),
                vm_demand=_convert("vm_demand", task_entry["vm_demand"], int),
                max_delay=_convert("max_delay_ms", task_entry["max_delay_ms"], float),
                min_vm_throughput=_convert("min_vm_throughput_kbps",
                                           task_entry["min_vm_throughput_kbps"], float),
            ))
        bots.append(BagOfTasks(id=_convert("id", entry["id"], int), tasks=tuple(tasks)))

    return vcc, bots


def instance_to_dict(vcc: VccModel, bots: List[BagOfTasks]) -> Dict[str, Any]:
    """instance_from_dict 的逆操作"""
    clouds = []
    for cloud in vcc.clouds:
        entry = {
            "id": cloud.id,
            "vm_total": cloud.vm_total,
            "vm_throughput_kbps": cloud.vm_throughput,
            "v2i_delay_ms": cloud.v2i_delay,
        }
        if cloud.vm_free != cloud.vm_total:
            entry["vm_free"] = cloud.vm_free
        clouds.append(entry)
    return {
        "rewards": {
            "beta_vc": vcc.reward_per_vc_vm,
            "beta_tc": vcc.cost_per_tcc_vm,
            "gamma_vc": vcc.penalty_per_idle_vm,
        },
        "clouds": clouds,
        "bots": [
            {
                "id": bot.id,
                "tasks": [
                    {
                        "id": task.id,
                        "vm_demand": task.vm_demand,
                        "max_delay_ms": task.max_delay,
                        "min_vm_throughput_kbps": task.min_vm_throughput,
                    }
                    for task in bot.tasks
                ],
            }
            for bot in bots
        ],
    }


def load_instance(path: str) -> Tuple[VccModel, List[BagOfTasks]]:
    """读取实例文件"""
    vcc, bots = instance_from_dict(read_yaml(path))
    logger.info(f"已加载实例 {path}: {len(vcc.clouds)} 个车载云, {len(bots)} 个BOT")
    return vcc, bots


def dump_instance(vcc: VccModel, bots: List[BagOfTasks], path: str) -> str:
    """写出实例文件"""
    return write_yaml(instance_to_dict(vcc, bots), path)
