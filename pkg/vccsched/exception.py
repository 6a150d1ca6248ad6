"""vccsched包的异常类定义

定义了vccsched包中使用的各种异常类，CLI根据异常类型映射退出码。
"""


class VccSchedError(Exception):
    """vccsched包的基础异常类"""
    pass


class ConfigError(VccSchedError):
    """配置异常（场景文件、实例文件或命令行参数不合法）"""
    pass


class DataValidationError(ConfigError):
    """数据验证异常"""
    pass


class SimulationError(VccSchedError):
    """仿真异常"""
    pass


class ScenarioValidationError(SimulationError, DataValidationError):
    """仿真场景验证异常"""
    pass


class SchedulerError(VccSchedError):
    """调度器异常"""
    pass


class StateSpaceCapError(SchedulerError):
    """MDP可达状态数超过上限"""

    def __init__(self, cap: int, explored: int):
        self.cap = cap
        self.explored = explored
        super().__init__(f"可达状态数超过上限 state_cap={cap}（已枚举 {explored} 个状态）")


class PolicyLookupError(SchedulerError):
    """策略中缺少状态"""
    pass


class InfeasibleActionError(SchedulerError):
    """动作在当前状态下不合法"""
    pass


class OutputIOError(VccSchedError):
    """文件读写异常"""
    pass
