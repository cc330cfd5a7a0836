"""Asymmetric universal entangling machine for d-level systems."""

from .errors import (
    AuemError,
    DegenerateConfiguration,
    FidelityTooLow,
    InvalidArgument,
    UnsupportedDimension,
)
from .machine import (
    MachineParams,
    TradeoffRecord,
    apply_standard,
    build_U_M,
    h_d,
    invert_h_d,
    kraus_operators,
    local_outputs,
    minimal_interaction_params,
    minimal_interaction_unitary,
    optimality_scan,
    params_from_fidelity,
)
from .tensor import DensityOperator, OperatorMatrix, PureState

__version__ = "0.1.0"

__all__ = [
    "AuemError",
    "DegenerateConfiguration",
    "DensityOperator",
    "FidelityTooLow",
    "InvalidArgument",
    "MachineParams",
    "OperatorMatrix",
    "PureState",
    "TradeoffRecord",
    "UnsupportedDimension",
    "apply_standard",
    "build_U_M",
    "h_d",
    "invert_h_d",
    "kraus_operators",
    "local_outputs",
    "minimal_interaction_params",
    "minimal_interaction_unitary",
    "optimality_scan",
    "params_from_fidelity",
]
