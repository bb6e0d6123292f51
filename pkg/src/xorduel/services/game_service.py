"""
游戏模型服务

验证游戏规格的不变量，计算单个输入对的胜利权重。
"""

from typing import Any, Dict

import numpy as np
from pydantic import ValidationError

from xorduel.core.errors import (
    GameParseError,
    GameValidationError,
    IndexOutOfRangeError,
)
from xorduel.core.logging import get_logger
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.utils.validation import (
    validate_binary_task,
    validate_probabilities,
    validate_table_shape,
)

logger = get_logger(__name__)


def validate(spec: GameSpec) -> None:
    """
    检查游戏规格的全部不变量

    按形状、非负性、归一性、二值性的顺序检查，遇到第一个违反项即抛出。

    Args:
        spec: 游戏规格

    Raises:
        GameValidationError: code 为被违反的不变量
    """
    shape_checks = (
        validate_table_shape(spec.dist, spec.s_card, spec.t_card, "dist"),
        validate_table_shape(spec.task, spec.s_card, spec.t_card, "task"),
    )
    for ok, code, message in shape_checks:
        if not ok:
            _fail(spec, code, message)

    for ok, code, message in (
        validate_probabilities(spec.dist),
        validate_binary_task(spec.task),
    ):
        if not ok:
            _fail(spec, code, message)


def _fail(spec: GameSpec, code: str, message: str) -> None:
    logger.warning("游戏规格验证失败", game=spec.name, code=code, reason=message)
    raise GameValidationError(message, code=code, details={"game": spec.name})


def parse_game(data: Dict[str, Any]) -> GameSpec:
    """
    从字典解析并验证游戏规格

    Raises:
        GameParseError: 结构不符合模式
        GameValidationError: 不变量不成立
    """
    try:
        spec = GameSpec.model_validate(data)
    except ValidationError as exc:
        raise GameParseError(
            "游戏定义格式错误",
            details={"errors": exc.errors(include_url=False, include_context=False)},
        ) from exc
    validate(spec)
    return spec


def outcome_wins(kind: GameKind, f: int, outcome_bit: int) -> bool:
    """胜利谓词；XOR 游戏的 outcome_bit 即 a⊕b，XOR* 游戏即 m"""
    return outcome_bit == f


def win_weight(spec: GameSpec, s: int, t: int, outcome_bit: int) -> float:
    """
    单个输入对在给定输出比特下的胜利权重

    Args:
        spec: 已验证的游戏规格
        s: Alice 的输入
        t: Bob 的输入
        outcome_bit: a⊕b（XOR）或 m（XOR*）

    Returns:
        float: f(s,t) = outcome_bit 时为 p(s,t)，否则为 0
    """
    if not (0 <= s < spec.s_card and 0 <= t < spec.t_card):
        raise IndexOutOfRangeError(
            f"输入 ({s},{t}) 超出范围 {spec.s_card}×{spec.t_card}",
            details={"s": s, "t": t},
        )
    if outcome_wins(spec.kind, spec.task[s][t], outcome_bit):
        return spec.dist[s][t]
    return 0.0


def dist_array(spec: GameSpec) -> np.ndarray:
    """分布表的 numpy 视图"""
    return np.asarray(spec.dist, dtype=np.float64)


def task_array(spec: GameSpec) -> np.ndarray:
    """任务表的 numpy 视图"""
    return np.asarray(spec.task, dtype=np.int64)


def win_tables(spec: GameSpec) -> tuple[np.ndarray, np.ndarray]:
    """
    按输出比特拆分的胜利权重表

    Returns:
        (C0, C1): C0[s,t] = p(s,t)·[f=0]，C1[s,t] = p(s,t)·[f=1]
    """
    p = dist_array(spec)
    f = task_array(spec)
    return np.where(f == 0, p, 0.0), np.where(f == 1, p, 0.0)
