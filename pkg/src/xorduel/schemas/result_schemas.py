"""
📦 求解结果相关的数据模型

定义优化器配置、求解结果、对偶检查报告以及写入文件的结果信封。
"""

from enum import Enum
from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field

from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.strategy_schemas import AnyStrategy


class ClassicalMode(str, Enum):
    """经典求解模式"""

    XOR = "xor"
    XORSTAR_REVERSIBLE = "xorstar_reversible"
    XORSTAR_IRREVERSIBLE = "xorstar_irreversible"

    @property
    def game_kind(self) -> GameKind:
        return GameKind.XOR if self is ClassicalMode.XOR else GameKind.XOR_STAR


class QuantumMode(str, Enum):
    """量子求解模式"""

    XOR_QUBIT = "xor_qubit"
    XORSTAR_REVERSIBLE = "xorstar_reversible"
    XORSTAR_IRREVERSIBLE = "xorstar_irreversible"

    @property
    def game_kind(self) -> GameKind:
        return GameKind.XOR if self is QuantumMode.XOR_QUBIT else GameKind.XOR_STAR


class OptimizerConfig(BaseModel):
    """多起点优化器配置"""

    model_config = ConfigDict(frozen=True)

    restarts: int = Field(64, ge=1, description="随机重启次数")
    seed: int = Field(0, ge=0, lt=2**64, description="主随机种子（64位无符号）")
    inner_tol: float = Field(1e-9, gt=0, description="局部优化收敛容差")
    max_iters: int = Field(2000, ge=1, description="单轮迭代上限")
    polish_rounds: int = Field(3, ge=0, description="收敛后重新展开单纯形的轮数")
    workers: Optional[int] = Field(None, description="工作进程数，None 表示读取配置")
    seesaw_dim: Optional[int] = Field(None, ge=1, description="see-saw 向量维度覆盖值")

    @classmethod
    def from_settings(cls, settings: Any, **overrides: Any) -> "OptimizerConfig":
        """以全局配置为默认值构造，None 值的覆盖项被忽略"""
        values: Dict[str, Any] = {
            "restarts": settings.DEFAULT_RESTARTS,
            "seed": settings.DEFAULT_SEED,
            "inner_tol": settings.INNER_TOL,
            "max_iters": settings.MAX_ITERS,
            "polish_rounds": settings.POLISH_ROUNDS,
        }
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)


class SolveResult(BaseModel):
    """单次求解结果"""

    model_config = ConfigDict(frozen=True)

    report_type: Literal["solve"] = Field("solve", description="报告类型标记")
    value: float = Field(..., ge=-1e-12, le=1.0 + 1e-12, description="ω_c 或 ω_q")
    strategy: AnyStrategy = Field(..., description="达到该值的策略")
    restarts_used: int = Field(0, ge=0, description="实际使用的重启次数")
    converged: bool = Field(True, description="前两名重启是否一致")
    elapsed_ms: int = Field(0, ge=0, description="耗时（毫秒）")


class DualPairReport(BaseModel):
    """XOR / XOR* 对偶游戏的比较报告"""

    model_config = ConfigDict(frozen=True)

    report_type: Literal["dual"] = Field("dual", description="报告类型标记")
    game_name: str
    omega_c_xor: float
    omega_q_xor: float
    omega_c_xorstar_rev: float
    omega_q_xorstar_rev: float
    gap_xor: float = Field(..., description="Ω(XOR)")
    gap_xorstar: float = Field(..., description="Ω(XOR*|Rev,2D)")
    classical_discrepancy: float
    quantum_discrepancy: float
    max_abs_discrepancy: float
    passed: bool
    strategies: Dict[str, AnyStrategy] = Field(default_factory=dict, description="各侧最优策略")


class ResetActivationReport(BaseModel):
    """重置门激活量子优势的报告"""

    model_config = ConfigDict(frozen=True)

    report_type: Literal["activation"] = Field("activation", description="报告类型标记")
    game_name: str
    omega_c_rev: float
    omega_q_rev: float
    omega_c_irr: float
    omega_q_irr: float
    gap_rev: float
    gap_irr: float
    activated: bool
    strategies: Dict[str, AnyStrategy] = Field(default_factory=dict)


class ExpectedValue(BaseModel):
    """目录中记录的参考值及其容差"""

    model_config = ConfigDict(frozen=True)

    value: float
    tol: float


class ResultEnvelope(BaseModel):
    """写入标准输出或文件的结果信封"""

    model_config = ConfigDict(frozen=True)

    tool_version: str
    game: GameSpec
    mode: str
    config: OptimizerConfig
    result: Union[SolveResult, DualPairReport, ResetActivationReport] = Field(
        ..., discriminator="report_type"
    )
    timestamp: str = Field(..., description="ISO-8601 时间戳")
    expected: Optional[Dict[str, ExpectedValue]] = Field(None, description="目录参考值")
    within_tolerance: Optional[bool] = Field(None, description="计算值是否落在参考值容差内")


class CatalogListingEntry(BaseModel):
    """catalog 命令的单行"""

    key: str
    native_kind: GameKind
    s_card: int
    t_card: int
    params: Dict[str, int] = Field(default_factory=dict)
    expected: Dict[str, ExpectedValue]


class CatalogListing(BaseModel):
    """catalog 命令的输出"""

    tool_version: str
    entries: List[CatalogListingEntry]
