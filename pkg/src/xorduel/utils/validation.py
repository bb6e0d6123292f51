"""
数据验证工具

提供游戏表格（分布、任务表）的逐项检查，返回 (是否有效, 错误码, 错误信息)。
"""

import math
from typing import Optional, Sequence, Tuple

NORMALIZATION_TOL = 1e-9

CheckResult = Tuple[bool, Optional[str], Optional[str]]


def validate_table_shape(
    table: Sequence[Sequence[object]], rows: int, cols: int, label: str
) -> CheckResult:
    """
    验证二维表格的形状

    Args:
        table: 待检查的表格
        rows: 期望行数
        cols: 期望列数
        label: 表格名称，用于错误信息

    Returns:
        CheckResult: (是否有效, 错误码, 错误信息)
    """
    if len(table) != rows:
        return False, "SHAPE_MISMATCH", f"{label} 行数为 {len(table)}，期望 {rows}"
    for i, row in enumerate(table):
        if len(row) != cols:
            return (
                False,
                "SHAPE_MISMATCH",
                f"{label} 第 {i} 行长度为 {len(row)}，期望 {cols}",
            )
    return True, None, None


def validate_probabilities(dist: Sequence[Sequence[float]]) -> CheckResult:
    """
    验证联合分布非负、有限且归一

    Args:
        dist: 联合分布 p(s,t)

    Returns:
        CheckResult: (是否有效, 错误码, 错误信息)
    """
    for s, row in enumerate(dist):
        for t, p in enumerate(row):
            if not math.isfinite(p) or p < 0:
                return False, "NEGATIVE_PROBABILITY", f"p({s},{t}) = {p} 不是非负实数"

    total = math.fsum(p for row in dist for p in row)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        return False, "NON_NORMALIZED_DISTRIBUTION", f"分布之和为 {total!r}，应为 1"
    return True, None, None


def validate_binary_task(task: Sequence[Sequence[int]]) -> CheckResult:
    """验证任务表取值均为 0 或 1"""
    for s, row in enumerate(task):
        for t, f in enumerate(row):
            if f not in (0, 1):
                return False, "NON_BINARY_TASK", f"f({s},{t}) = {f} 不在 {{0,1}} 中"
    return True, None, None


def validate_odd_cycle_size(n: int) -> Tuple[bool, Optional[str]]:
    """奇数环游戏要求 n 为不小于 3 的奇数"""
    if n < 3:
        return False, "n 必须不小于 3"
    if n % 2 == 0:
        return False, "n 必须为奇数"
    return True, None
