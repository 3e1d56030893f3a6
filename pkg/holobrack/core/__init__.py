from .config import Config, get_config, set_config, setup_logging
from .params import BallParams, IntrinsicParams
from .exceptions import (
    HolobrackError,
    DimensionError,
    VariableNameError,
    NonPhysicalKineticError,
    IterationLimitError,
    InconsistentDynamicsError,
    DegenerateConstraintError,
    IncompleteSystemError,
    OffSurfaceError,
    DomainError,
    ZeroForceError,
    ConsistencyError,
    UnsupportedQuantisationError,
    UnsupportedOrderError,
    ConfigurationError,
)

__all__ = [
    "Config",
    "get_config",
    "set_config",
    "setup_logging",
    "BallParams",
    "IntrinsicParams",
    "HolobrackError",
    "DimensionError",
    "VariableNameError",
    "NonPhysicalKineticError",
    "IterationLimitError",
    "InconsistentDynamicsError",
    "DegenerateConstraintError",
    "IncompleteSystemError",
    "OffSurfaceError",
    "DomainError",
    "ZeroForceError",
    "ConsistencyError",
    "UnsupportedQuantisationError",
    "UnsupportedOrderError",
    "ConfigurationError",
]
