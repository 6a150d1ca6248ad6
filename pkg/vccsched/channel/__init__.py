"""信道模块

包含AAA间隔方程以及静态/自适应两种信道间隔控制器。
"""

from .aaa import (
    IntervalConfig,
    IntervalState,
    ChannelStats,
    VehicleSample,
    ms_to_us,
    bsm_generated_per_si,
    sent_per_si,
    vehicle_mean_delay,
    update_running_stats,
    effective_cch_utilization,
    adapt_intervals,
    vc_packets_sent_in_extended_schi,
)
from .controllers import StaticIntervalController, AaaIntervalController

__all__ = [
    'IntervalConfig',
    'IntervalState',
    'ChannelStats',
    'VehicleSample',
    'ms_to_us',
    'bsm_generated_per_si',
    'sent_per_si',
    'vehicle_mean_delay',
    'update_running_stats',
    'effective_cch_utilization',
    'adapt_intervals',
    'vc_packets_sent_in_extended_schi',
    'StaticIntervalController',
    'AaaIntervalController',
]
