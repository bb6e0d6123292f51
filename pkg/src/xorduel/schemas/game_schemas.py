"""
游戏定义相关的Pydantic模式

游戏即数据：输入基数、联合分布 p(s,t) 与二值任务表 f(s,t)。
结构解析由模式负责，不变量检查见 services.game_service.validate。
"""

from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field


class GameKind(str, Enum):
    """游戏类型"""

    XOR = "xor"  # 胜利条件 a⊕b = f(s,t)
    XOR_STAR = "xor_star"  # 胜利条件 m = f(s,t)

    @property
    def dual(self) -> "GameKind":
        """对偶一侧的游戏类型"""
        return GameKind.XOR_STAR if self is GameKind.XOR else GameKind.XOR


class GameSpec(BaseModel):
    """游戏规格"""

    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str = Field(..., min_length=1, description="游戏名称")
    kind: GameKind = Field(..., description="游戏类型")
    s_card: int = Field(..., gt=0, description="Alice 输入基数 |S|")
    t_card: int = Field(..., gt=0, description="Bob 输入基数 |T|")
    dist: List[List[float]] = Field(..., description="联合分布 p(s,t)，形状 s_card×t_card")
    task: List[List[int]] = Field(..., description="任务表 f(s,t)，取值 {0,1}")
    input_encoding: Optional[str] = Field(None, description="元组输入的扁平化说明")

    def with_kind(self, kind: GameKind, name: Optional[str] = None) -> "GameSpec":
        """复制分布与任务表，仅替换类型（及名称）"""
        return self.model_copy(update={"kind": kind, "name": name or self.name})
