"""
策略相关的Pydantic模式

经典确定性策略、量子比特策略与单位向量策略。
每种策略带有 ``type`` 字段，文件格式即其 JSON 序列化。
"""

import math
from enum import Enum
from typing import Annotated, List, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator

TWO_PI = 2.0 * math.pi


class ClassicalGate(str, Enum):
    """单比特经典门；ID 与 NOT 为可逆子集"""

    ID = "ID"
    NOT = "NOT"
    R0 = "R0"
    R1 = "R1"

    @property
    def is_reversible(self) -> bool:
        return self in (ClassicalGate.ID, ClassicalGate.NOT)

    def apply(self, bit: int) -> int:
        """作用于一个比特"""
        if self is ClassicalGate.ID:
            return bit
        if self is ClassicalGate.NOT:
            return bit ^ 1
        return 0 if self is ClassicalGate.R0 else 1


# 平局时的字典序：ID < NOT < R0 < R1
GATE_ORDER = (ClassicalGate.ID, ClassicalGate.NOT, ClassicalGate.R0, ClassicalGate.R1)


class DeterministicXorStrategy(BaseModel):
    """XOR 游戏的确定性策略：a = a_map[s]，b = b_map[t]"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    type: Literal["det_xor"] = "det_xor"
    a_map: List[Literal[0, 1]] = Field(..., alias="a", description="Alice 的输出比特表")
    b_map: List[Literal[0, 1]] = Field(..., alias="b", description="Bob 的输出比特表")


class DeterministicXorStarStrategy(BaseModel):
    """XOR* 游戏的确定性策略：m = bob_gates[t](alice_gates[s](init_bit))"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    type: Literal["det_xorstar"] = "det_xorstar"
    init_bit: Literal[0, 1] = Field(0, alias="init", description="资源比特的初始值")
    alice_gates: List[ClassicalGate] = Field(..., alias="alice", description="Alice 每个输入的门")
    bob_gates: List[ClassicalGate] = Field(..., alias="bob", description="Bob 每个输入的门")

    @property
    def is_reversible(self) -> bool:
        return all(g.is_reversible for g in (*self.alice_gates, *self.bob_gates))


class MeasurementBasisParams(BaseModel):
    """
    投影测量基的 Bloch 参数

    |0_i⟩ = cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩
    |1_i⟩ = sin(θ/2)|0⟩ − e^{iφ} cos(θ/2)|1⟩
    """

    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., ge=0.0, le=math.pi, description="极角 θ ∈ [0,π]")
    phi: float = Field(..., ge=0.0, lt=TWO_PI, description="方位角 φ ∈ [0,2π)")


class QubitUnitaryParams(BaseModel):
    """
    单比特酉矩阵参数

    U(θ,φ,λ) = [[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]
    """

    model_config = ConfigDict(frozen=True)

    theta: float = Field(..., ge=0.0, le=math.pi, description="θ ∈ [0,π]")
    phi: float = Field(..., ge=0.0, lt=TWO_PI, description="φ ∈ [0,2π)")
    lam: float = Field(..., ge=0.0, lt=TWO_PI, description="λ ∈ [0,2π)")


class BobOp(QubitUnitaryParams):
    """Bob 的操作：酉变换，或先重置到 |0⟩ 再作酉变换（ρ ↦ U|0⟩⟨0|U†）"""

    reset: bool = Field(False, description="是否先执行重置门")


class QuantumXorStrategy(BaseModel):
    """共享 Bell 态 |φ⁺⟩ 上的投影测量策略"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    type: Literal["q_xor"] = "q_xor"
    alice_meas: List[MeasurementBasisParams] = Field(..., alias="alice", description="Alice 的测量基")
    bob_meas: List[MeasurementBasisParams] = Field(..., alias="bob", description="Bob 的测量基")


class QuantumXorStarStrategy(BaseModel):
    """初态 |0⟩、Alice 酉变换、Bob 操作、计算基测量的顺序策略"""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    type: Literal["q_xorstar"] = "q_xorstar"
    alice_unitaries: List[QubitUnitaryParams] = Field(..., alias="alice", description="Alice 的酉变换")
    bob_ops: List[BobOp] = Field(..., alias="bob", description="Bob 的操作")

    @property
    def is_reversible(self) -> bool:
        return not any(op.reset for op in self.bob_ops)


class VectorStrategy(BaseModel):
    """Tsirelson 向量形式：实单位向量 u_s, v_t ∈ R^d"""

    model_config = ConfigDict(frozen=True)

    type: Literal["vector"] = "vector"
    u: List[List[float]] = Field(..., description="Alice 的单位向量")
    v: List[List[float]] = Field(..., description="Bob 的单位向量")

    @field_validator("u", "v")
    @classmethod
    def validate_unit_vectors(cls, vectors):
        """验证向量为单位长度且维度一致"""
        dims = {len(vec) for vec in vectors}
        if len(dims) > 1:
            raise ValueError("向量维度不一致")
        for vec in vectors:
            if abs(math.sqrt(sum(x * x for x in vec)) - 1.0) > 1e-9:
                raise ValueError("向量必须为单位长度")
        return vectors

    @property
    def dim(self) -> int:
        return len(self.u[0]) if self.u else 0


AnyStrategy = Annotated[
    Union[
        DeterministicXorStrategy,
        DeterministicXorStarStrategy,
        QuantumXorStrategy,
        QuantumXorStarStrategy,
        VectorStrategy,
    ],
    Field(discriminator="type"),
]
