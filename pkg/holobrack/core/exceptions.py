"""holobrack 的异常体系

所有领域异常都继承 HolobrackError，同时继承对应的内置异常，
调用方捕获 ValueError / LookupError 的旧代码依然有效。
"""


class HolobrackError(Exception):
    """holobrack 异常基类"""


class DimensionError(HolobrackError, ValueError):
    """相空间不匹配或点的维数不符"""


class VariableNameError(HolobrackError, LookupError):
    """相空间中不存在的变量名"""


class NonPhysicalKineticError(HolobrackError, ValueError):
    """质量矩阵在非退化块上存在负本征值"""


class IterationLimitError(HolobrackError, RuntimeError):
    """Dirac-Bergmann 迭代未在上限内终止"""


class InconsistentDynamicsError(HolobrackError, ValueError):
    """一致性条件无解"""


class DegenerateConstraintError(HolobrackError, ValueError):
    """第二类约束的 Θ 子块奇异或无法求逆"""


class IncompleteSystemError(HolobrackError, ValueError):
    """第二类约束的乘子尚未求出"""


class OffSurfaceError(HolobrackError, ValueError):
    """初始点不在约束面上"""


class DomainError(HolobrackError, ValueError):
    """Airy 函数的参数非法"""


class ZeroForceError(HolobrackError, ValueError):
    """有效力为零，谱不存在"""


class ConsistencyError(HolobrackError, ValueError):
    """本征对与参数不一致"""


class UnsupportedQuantisationError(HolobrackError, ValueError):
    """无法按常数对易子量子化"""


class UnsupportedOrderError(HolobrackError, ValueError):
    """二次-二次对易子不受支持"""


class ConfigurationError(HolobrackError, ValueError):
    """命令行配置非法"""
