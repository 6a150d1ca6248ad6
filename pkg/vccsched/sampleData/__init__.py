"""
示例数据模块

提供标准基准实例与基准仿真场景，用于测试和演示调度与仿真功能。
"""

from .canonical_benchmark import (
    VC_SIZES,
    DENSITY_POINTS,
    BOT_SIZES,
    get_canonical_benchmark_data,
    get_benchmark_scenario_data,
)

__all__ = [
    'VC_SIZES',
    'DENSITY_POINTS',
    'BOT_SIZES',
    'get_canonical_benchmark_data',
    'get_benchmark_scenario_data',
]
