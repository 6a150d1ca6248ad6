"""vccsched 命令行入口

子命令：
- simulate   运行一次DSRC仿真并输出逐SI轨迹
- schedule   对实例运行调度器并输出放置表与汇总
- benchmark  运行标准基准套件并输出对比表
- speedup    测量分块并行值迭代的加速比

退出码：0 成功，2 配置错误，3 状态数超过上限，4 文件读写错误。
"""

from dataclasses import dataclass
from typing import List, Optional, Sequence
import argparse
import logging
import os
import sys

import pandas as pd

from .benchmark import build_scheduler, run_benchmark
from .config import instance_from_dict, load_instance, load_scenario, scenario_from_dict
from .exception import ConfigError, OutputIOError, StateSpaceCapError, VccSchedError
from .interfaces import Scheme, SchedulerKind, ScheduleResult
from .metrics import (
    SUPPORTED_FORMATS,
    reward_decomposition,
    utilization,
    write_plot_data,
    write_rows,
    write_table,
)
from .sampleData import get_benchmark_scenario_data, get_canonical_benchmark_data
from .scheduler import MdpInstance, measure_speedup
from .scheduler.mdp import DEFAULT_EPSILON, DEFAULT_STATE_CAP
from .simulation import bsm_mean_delay, run_simulation, trace_frame, vc_throughput

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CAP = 3
EXIT_IO = 4

SUBCOMMANDS = ["simulate", "schedule", "benchmark", "speedup"]

PLACEMENT_COLUMNS = ["task_id", "bot_id", "target", "vms_used"]
SUMMARY_COLUMNS = ["scheduler", "vc_placed_vms", "paid_vms", "unused_vms", "reward",
                   "utilization_pct", "epsilon", "sweeps", "states_explored"]


@dataclass
class RunConfig:
    """一次命令行运行的配置"""
    subcommand: str
    scenario_path: Optional[str] = None
    instance_path: Optional[str] = None
    scheme: Optional[str] = None
    scheduler: str = SchedulerKind.GREEDY.value
    workers: int = 1
    seed: Optional[int] = None
    epsilon: float = DEFAULT_EPSILON
    state_cap: int = DEFAULT_STATE_CAP
    out: Optional[str] = None
    fmt: str = "csv"
    plot_data: Optional[str] = None
    vehicles: Optional[int] = None

    def validate(self) -> "RunConfig":
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"未知的子命令: {self.subcommand}")
        if self.fmt not in SUPPORTED_FORMATS:
            raise ConfigError(f"不支持的输出格式: {self.fmt}")
        if self.workers < 1:
            raise ConfigError(f"--workers 必须 ≥ 1: {self.workers}")
        if not self.epsilon > 0:
            raise ConfigError(f"--epsilon 必须为正数: {self.epsilon}")
        if self.scheme is not None and self.scheme not in [s.value for s in Scheme]:
            raise ConfigError(f"未知的信道方案: {self.scheme}")
        if self.scheduler not in [k.value for k in SchedulerKind]:
            raise ConfigError(f"未知的调度器: {self.scheduler}")
        for path in (self.scenario_path, self.instance_path):
            if path is not None and not os.path.isfile(path):
                raise OutputIOError(f"文件不存在或不可读: {path}")
        return self

    @property
    def output_path(self) -> str:
        return self.out or f"{self.subcommand}.{self.fmt}"


def summary_path(path: str) -> str:
    """放置表路径对应的汇总表路径"""
    stem, ext = os.path.splitext(path)
    return f"{stem}.summary{ext}"


def _load_scenario(config: RunConfig, **overrides):
    overrides.update({"scheme": config.scheme, "rng_seed": config.seed, "n_vehicles": config.vehicles})
    if config.scenario_path:
        return load_scenario(config.scenario_path, overrides)
    return scenario_from_dict(get_benchmark_scenario_data(), overrides)


def _load_instance(config: RunConfig):
    if config.instance_path:
        return load_instance(config.instance_path)
    return instance_from_dict(get_canonical_benchmark_data())


def placements_frame(result: ScheduleResult) -> pd.DataFrame:
    return pd.DataFrame(
        [{"task_id": r.task_id, "bot_id": r.bot_id, "target": str(r.target), "vms_used": r.vms_used}
         for r in result.placements],
        columns=PLACEMENT_COLUMNS,
    )


def summary_frame(result: ScheduleResult, vcc) -> pd.DataFrame:
    diagnostics = result.diagnostics
    return pd.DataFrame([{
        "scheduler": result.scheduler,
        "vc_placed_vms": result.vc_placed_vms,
        "paid_vms": result.paid_vms,
        "unused_vms": result.unused_vms,
        "reward": reward_decomposition(result, vcc).total,
        "utilization_pct": utilization(result, vcc).overall,
        "epsilon": float(diagnostics.get("epsilon", 0.0)),
        "sweeps": int(diagnostics.get("sweeps", 0)),
        "states_explored": int(diagnostics.get("states_explored", 0)),
    }], columns=SUMMARY_COLUMNS)


def _simulate(config: RunConfig) -> int:
    scenario = _load_scenario(config)
    trace = run_simulation(scenario)
    write_table(trace_frame(trace), config.output_path, config.fmt)
    print(f"simulate: scheme={scenario.scheme.value} vehicles={scenario.n_vehicles} "
          f"vc_throughput_kbps={vc_throughput(trace):.4f} bsm_delay_ms={bsm_mean_delay(trace):.4f}")
    return EXIT_OK


def _schedule(config: RunConfig) -> int:
    vcc, bots = _load_instance(config)
    scheduler = build_scheduler(SchedulerKind(config.scheduler), config.workers,
                                config.epsilon, config.state_cap)
    result = scheduler.schedule(vcc.fresh(), bots)
    write_table(placements_frame(result), config.output_path, config.fmt)
    summary = summary_frame(result, vcc)
    write_table(summary, summary_path(config.output_path), config.fmt)
    print(f"schedule: scheduler={result.scheduler} reward={summary.loc[0, 'reward']:.4f} "
          f"paid={result.paid_vms} unused={result.unused_vms}")
    return EXIT_OK


def _benchmark(config: RunConfig) -> int:
    vcc, bots = _load_instance(config)
    scenario = _load_scenario(config)
    mdp_kind = SchedulerKind.MDP_PARALLEL if config.workers > 1 else SchedulerKind.MDP
    schedulers = [
        build_scheduler(SchedulerKind.GREEDY),
        build_scheduler(mdp_kind, config.workers, config.epsilon, config.state_cap),
    ]
    report = run_benchmark(vcc, bots, scenario, schedulers)
    write_rows(report.rows, config.output_path, config.fmt)
    if config.plot_data:
        write_plot_data(report.plot_series(), config.plot_data)
    for name in report.results:
        print(f"benchmark: {name} total_reward={report.total_reward(name):.4f}")
    return EXIT_OK


def _speedup(config: RunConfig) -> int:
    vcc, bots = _load_instance(config)
    counts: List[int] = []
    workers = 1
    while workers < config.workers:
        counts.append(workers)
        workers *= 2
    counts.append(config.workers)
    table = measure_speedup(MdpInstance(vcc.fresh(), bots), counts, config.epsilon, config.state_cap)
    write_table(table, config.output_path, config.fmt)
    print(table.to_string(index=False))
    return EXIT_OK


HANDLERS = {
    "simulate": _simulate,
    "schedule": _schedule,
    "benchmark": _benchmark,
    "speedup": _speedup,
}


def run(config: RunConfig) -> int:
    """执行一次运行并返回退出码"""
    try:
        config.validate()
        return HANDLERS[config.subcommand](config)
    except StateSpaceCapError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except OutputIOError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_IO
    except (ConfigError, ValueError) as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except VccSchedError as e:
        logger.error(str(e))
        print(f"error: {e}", file=sys.stderr)
        return 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vccsched",
                                     description="车载云调度与DSRC信道间隔仿真工具")
    parser.add_argument("--log-level", default="WARNING",
                        choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    for name in SUBCOMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--scenario", dest="scenario_path", help="场景YAML文件")
        p.add_argument("--instance", dest="instance_path", help="实例YAML文件")
        p.add_argument("--scheme", choices=[s.value for s in Scheme])
        p.add_argument("--scheduler", default=SchedulerKind.GREEDY.value,
                       choices=[k.value for k in SchedulerKind])
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--seed", type=int)
        p.add_argument("--vehicles", type=int, help="覆盖场景中的车辆数")
        p.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
        p.add_argument("--state-cap", dest="state_cap", type=int, default=DEFAULT_STATE_CAP)
        p.add_argument("--out")
        p.add_argument("--format", dest="fmt", default="csv", choices=SUPPORTED_FORMATS)
        if name == "benchmark":
            p.add_argument("--plot-data", dest="plot_data", help="输出绘图数据的JSON文件")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=getattr(logging, args.log_level),
                        format="%(asctime)s %(name)s %(levelname)s %(message)s")
    options = vars(args)
    options.pop("log_level")
    return run(RunConfig(**options))


if __name__ == "__main__":
    sys.exit(main())
