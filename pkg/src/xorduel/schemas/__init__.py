"""
数据模式模块

游戏、策略与求解结果的 Pydantic 模型。
"""

from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.result_schemas import (
    ClassicalMode,
    DualPairReport,
    OptimizerConfig,
    QuantumMode,
    ResetActivationReport,
    ResultEnvelope,
    SolveResult,
)
from xorduel.schemas.strategy_schemas import (
    BobOp,
    ClassicalGate,
    DeterministicXorStarStrategy,
    DeterministicXorStrategy,
    MeasurementBasisParams,
    QuantumXorStarStrategy,
    QuantumXorStrategy,
    QubitUnitaryParams,
    VectorStrategy,
)

__all__ = [
    "GameKind",
    "GameSpec",
    "ClassicalMode",
    "QuantumMode",
    "OptimizerConfig",
    "SolveResult",
    "DualPairReport",
    "ResetActivationReport",
    "ResultEnvelope",
    "ClassicalGate",
    "DeterministicXorStrategy",
    "DeterministicXorStarStrategy",
    "MeasurementBasisParams",
    "QubitUnitaryParams",
    "BobOp",
    "QuantumXorStrategy",
    "QuantumXorStarStrategy",
    "VectorStrategy",
]
