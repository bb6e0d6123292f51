"""
经典求解服务

穷举确定性策略得到精确的经典值（Bell 界）：
XOR 游戏、仅可逆门的 XOR* 游戏，以及允许重置门的 XOR* 游戏。
"""

import itertools
import math
import time
from functools import partial
from typing import Callable, Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from xorduel.core.config import Settings, get_settings
from xorduel.core.errors import (
    CardinalityTooLargeError,
    IncompatibleModeError,
    ReversibilityViolationError,
    StrategyShapeError,
)
from xorduel.core.logging import get_logger
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.result_schemas import ClassicalMode, SolveResult
from xorduel.schemas.strategy_schemas import (
    GATE_ORDER,
    ClassicalGate,
    DeterministicXorStarStrategy,
    DeterministicXorStrategy,
)
from xorduel.services.game_service import win_tables

logger = get_logger(__name__)

# 平局判定容差
TIE_TOL = 1e-12
# 单个分块展开的比特数上限（行数 × 列数）
CHUNK_CELLS = 1 << 22


def _check_shape(spec: GameSpec, s_len: int, t_len: int) -> None:
    if s_len != spec.s_card or t_len != spec.t_card:
        raise StrategyShapeError(
            f"策略形状 {s_len}×{t_len} 与游戏 {spec.s_card}×{spec.t_card} 不一致",
            details={"game": spec.name},
        )


def eval_xor(spec: GameSpec, strat: DeterministicXorStrategy) -> float:
    """
    确定性 XOR 策略的胜率

    Returns:
        float: Σ p(s,t)·[a(s)⊕b(t) = f(s,t)]
    """
    _check_shape(spec, len(strat.a_map), len(strat.b_map))
    return math.fsum(
        spec.dist[s][t]
        for s in range(spec.s_card)
        for t in range(spec.t_card)
        if strat.a_map[s] ^ strat.b_map[t] == spec.task[s][t]
    )


def eval_xorstar(
    spec: GameSpec,
    strat: DeterministicXorStarStrategy,
    *,
    reversible_only: bool = False,
) -> float:
    """
    确定性 XOR* 策略的胜率

    m = bob_gates[t](alice_gates[s](init_bit))

    Args:
        spec: 游戏规格
        strat: 确定性策略
        reversible_only: 为真时禁止 R0/R1

    Returns:
        float: Σ p(s,t)·[m = f(s,t)]
    """
    _check_shape(spec, len(strat.alice_gates), len(strat.bob_gates))
    if reversible_only and not strat.is_reversible:
        raise ReversibilityViolationError(
            "仅可逆模式下不允许重置门",
            details={"game": spec.name},
        )
    alice_bits = [g.apply(strat.init_bit) for g in strat.alice_gates]
    return math.fsum(
        spec.dist[s][t]
        for s in range(spec.s_card)
        for t in range(spec.t_card)
        if strat.bob_gates[t].apply(alice_bits[s]) == spec.task[s][t]
    )


def brute_force_xorstar_value(
    spec: GameSpec,
    alice_gates: Sequence[ClassicalGate] = GATE_ORDER,
    bob_gates: Sequence[ClassicalGate] = GATE_ORDER,
    init_bits: Sequence[int] = (0, 1),
) -> Tuple[float, DeterministicXorStarStrategy]:
    """
    逐一枚举 XOR* 确定性策略的参考实现

    Args:
        spec: 游戏规格
        alice_gates: Alice 可用的门
        bob_gates: Bob 可用的门
        init_bits: 可选的初始比特

    Returns:
        (最大胜率, 字典序最小的最优策略)
    """
    best_value = -1.0
    best: Optional[DeterministicXorStarStrategy] = None
    for init in init_bits:
        for alice in itertools.product(alice_gates, repeat=spec.s_card):
            for bob in itertools.product(bob_gates, repeat=spec.t_card):
                strat = DeterministicXorStarStrategy(
                    init_bit=init, alice_gates=list(alice), bob_gates=list(bob)
                )
                value = eval_xorstar(spec, strat)
                if value > best_value + TIE_TOL:
                    best_value, best = value, strat
    assert best is not None
    return best_value, best


def _bit_rows(n: int, start: int, stop: int) -> np.ndarray:
    """下标 [start, stop) 的比特展开，第 0 位为最高位"""
    idx = np.arange(start, stop, dtype=np.int64)[:, np.newaxis]
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)[np.newaxis, :]
    return ((idx >> shifts) & 1).astype(np.float64)


def _gate_rows(n: int, start: int, stop: int) -> np.ndarray:
    """下标 [start, stop) 的四进制展开（按 GATE_ORDER 编号），第 0 位为最高位"""
    idx = np.arange(start, stop, dtype=np.int64)[:, np.newaxis]
    powers = 4 ** np.arange(n - 1, -1, -1, dtype=np.int64)[np.newaxis, :]
    return (idx // powers) % 4


def _chunks(
    total: int, row_cells: int, rows: Callable[[int, int], np.ndarray]
) -> Iterator[Tuple[int, np.ndarray]]:
    """按 CHUNK_CELLS 把 [0, total) 切块，逐块生成 (起始下标, 展开的行)"""
    per_chunk = max(1, CHUNK_CELLS // max(1, row_cells))
    for start in range(0, total, per_chunk):
        yield start, rows(start, min(total, start + per_chunk))


def _first_best(scored: Iterable[Tuple[int, np.ndarray]]) -> Tuple[float, int]:
    """
    扫描按下标递增的分块得分

    Returns:
        (最大值, 第一个不低于 最大值 − TIE_TOL 的下标)
    """
    best, first = -math.inf, -1
    for start, totals in scored:
        top = float(totals.max())
        if top > best + TIE_TOL:
            first = start + int(np.flatnonzero(totals >= top - TIE_TOL)[0])
        best = max(best, top)
    return best, first


def _first_choice(values: np.ndarray) -> int:
    """一行候选值中第一个最优项"""
    return int(np.flatnonzero(values >= values.max() - TIE_TOL)[0])


def _parity_values(x: np.ndarray, c0: np.ndarray, c1: np.ndarray) -> np.ndarray:
    """
    固定一方输出比特 x（形状 n×|S|）时，另一方每一列取 0/1 的胜率

    Returns:
        np.ndarray: 形状 n×|T|×2
    """
    return np.stack([x @ c1 + (1.0 - x) @ c0, x @ c0 + (1.0 - x) @ c1], axis=-1)


def _optimal_a_index(c0: np.ndarray, c1: np.ndarray) -> int:
    """
    字典序最小的最优 a 下标

    只枚举较小的一方；另一方的每个分量可以独立取最优。
    """
    s_card, t_card = c0.shape
    cells = s_card + t_card
    if s_card <= t_card:
        return _first_best(
            (start, _parity_values(x, c0, c1).max(axis=-1).sum(axis=1))
            for start, x in _chunks(1 << s_card, cells, partial(_bit_rows, s_card))
        )[1]

    # 枚举 b；每个 b 下 Alice 逐行取第一个最优比特，再在全部最优 b 中取最小的 a
    weights = 1 << np.arange(s_card - 1, -1, -1, dtype=np.int64)
    best, best_a = -math.inf, 0
    for _, y in _chunks(1 << t_card, cells, partial(_bit_rows, t_card)):
        rows = _parity_values(y, c0.T, c1.T)
        totals = rows.max(axis=-1).sum(axis=1)
        a_index = (rows[..., 1] > rows[..., 0] + TIE_TOL).astype(np.int64) @ weights
        top = float(totals.max())
        candidate = int(a_index[totals >= top - TIE_TOL].min())
        if top > best + TIE_TOL:
            best_a = candidate
        elif top >= best - TIE_TOL:
            best_a = min(best_a, candidate)
        best = max(best, top)
    return best_a


def _first_argmax(c0: np.ndarray, c1: np.ndarray) -> Tuple[List[int], List[int]]:
    """字典序最小的最优 (a, b)：先定 a，再逐列取 b 的第一个最优比特"""
    s_card, t_card = c0.shape
    a_idx = _optimal_a_index(c0, c1)
    columns = _parity_values(_bit_rows(s_card, a_idx, a_idx + 1), c0, c1)[0]
    return _index_bits(a_idx, s_card), [_first_choice(columns[t]) for t in range(t_card)]


def _gate_values(x: np.ndarray, c0: np.ndarray, c1: np.ndarray) -> np.ndarray:
    """
    固定 Alice 的输出比特 x（形状 n×|S|）时，Bob 每列四种门的胜率

    Returns:
        np.ndarray: 形状 n×|T|×4，最后一维按 GATE_ORDER
    """
    ones = np.broadcast_to(c1.sum(axis=0), (x.shape[0], c1.shape[1]))
    zeros = np.broadcast_to(c0.sum(axis=0), (x.shape[0], c0.shape[1]))
    parity = _parity_values(x, c0, c1)
    return np.stack([parity[..., 0], parity[..., 1], zeros, ones], axis=-1)


# GATE_ORDER 中各门对输入比特 0/1 的输出
_GATE_OUTPUT = np.array([[0, 1], [1, 0], [0, 0], [1, 1]], dtype=np.float64)


def _optimal_alice_key(c0: np.ndarray, c1: np.ndarray) -> int:
    """
    允许重置门时字典序最小的最优 (init, Alice 门) 编码：init·2^|S| + Alice 下标

    Alice 的门只通过输出比特起作用；两方中枚举量较小的一方，另一方逐行/逐列取最优。
    """
    s_card, t_card = c0.shape
    cells = s_card + t_card
    if 2 * t_card >= s_card:

        def scored() -> Iterator[Tuple[int, np.ndarray]]:
            for init in (0, 1):
                for start, bits in _chunks(1 << s_card, cells, partial(_bit_rows, s_card)):
                    x = bits if init == 0 else 1.0 - bits
                    yield (init << s_card) + start, _gate_values(x, c0, c1).max(axis=-1).sum(axis=1)

        return _first_best(scored())[1]

    # 枚举 Bob 的 4^|T| 种门；Alice 逐行取输出比特，平局时取 ID
    weights = 1 << np.arange(s_card - 1, -1, -1, dtype=np.int64)
    best, best_key = -math.inf, 0
    for _, gates in _chunks(4**t_card, cells, partial(_gate_rows, t_card)):
        outputs = _GATE_OUTPUT[gates]  # n×|T|×2
        rows = np.stack(
            [outputs[..., v] @ c1.T + (1.0 - outputs[..., v]) @ c0.T for v in (0, 1)],
            axis=-1,
        )
        totals = rows.max(axis=-1).sum(axis=1)
        top = float(totals.max())
        hits = totals >= top - TIE_TOL
        candidate = min(
            (init << s_card)
            + int(((rows[..., 1 - init] > rows[..., init] + TIE_TOL).astype(np.int64) @ weights)[hits].min())
            for init in (0, 1)
        )
        if top > best + TIE_TOL:
            best_key = candidate
        elif top >= best - TIE_TOL:
            best_key = min(best_key, candidate)
        best = max(best, top)
    return best_key


def _index_bits(index: int, n: int) -> List[int]:
    return [(index >> (n - 1 - k)) & 1 for k in range(n)]


class ClassicalSolverService:
    """
    经典值求解服务

    通过穷举确定性策略计算精确的经典值，平局时返回字典序最小的最优策略。
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def classical_value(self, spec: GameSpec, mode: ClassicalMode) -> SolveResult:
        """
        计算经典值

        Args:
            spec: 已验证的游戏规格
            mode: 求解模式

        Returns:
            SolveResult: 精确值与字典序最小的最优策略
        """
        self._check_mode(spec, mode)
        self._check_cardinality(spec)

        started = time.perf_counter()
        if mode is ClassicalMode.XOR:
            value, strategy = self._solve_xor(spec)
        elif mode is ClassicalMode.XORSTAR_REVERSIBLE:
            value, strategy = self._solve_xorstar_reversible(spec)
        else:
            value, strategy = self._solve_xorstar_irreversible(spec)
        elapsed_ms = int((time.perf_counter() - started) * 1000)

        logger.info(
            "经典求解完成",
            game=spec.name,
            mode=mode.value,
            value=value,
            elapsed_ms=elapsed_ms,
        )
        return SolveResult(
            value=value,
            strategy=strategy,
            restarts_used=0,
            converged=True,
            elapsed_ms=elapsed_ms,
        )

    def _check_mode(self, spec: GameSpec, mode: ClassicalMode) -> None:
        if mode.game_kind is not spec.kind:
            raise IncompatibleModeError(
                f"模式 {mode.value} 不适用于 {spec.kind.value} 游戏",
                details={"game": spec.name, "mode": mode.value},
            )

    def _check_cardinality(self, spec: GameSpec) -> None:
        limit = self.settings.ENUMERATION_LIMIT
        if spec.s_card + spec.t_card > limit:
            raise CardinalityTooLargeError(
                f"|S|+|T| = {spec.s_card + spec.t_card} 超过穷举上限 {limit}",
                details={"game": spec.name, "limit": limit},
            )

    def _solve_xor(self, spec: GameSpec) -> Tuple[float, DeterministicXorStrategy]:
        c0, c1 = win_tables(spec)
        a_map, b_map = _first_argmax(c0, c1)
        strategy = DeterministicXorStrategy(a_map=a_map, b_map=b_map)
        return eval_xor(spec, strategy), strategy

    def _solve_xorstar_reversible(
        self, spec: GameSpec
    ) -> Tuple[float, DeterministicXorStarStrategy]:
        # init 固定为 0 时 m = x_s ⊕ y_t，与 XOR 游戏的枚举相同
        c0, c1 = win_tables(spec)
        a_map, b_map = _first_argmax(c0, c1)
        to_gate = (ClassicalGate.ID, ClassicalGate.NOT)
        strategy = DeterministicXorStarStrategy(
            init_bit=0,
            alice_gates=[to_gate[b] for b in a_map],
            bob_gates=[to_gate[b] for b in b_map],
        )
        return eval_xorstar(spec, strategy, reversible_only=True), strategy

    def _solve_xorstar_irreversible(
        self, spec: GameSpec
    ) -> Tuple[float, DeterministicXorStarStrategy]:
        """
        Alice 的门只通过其输出比特起作用，ID/NOT 中恰有一个给出该比特；
        固定 init 与 Alice 的门后，Bob 每一列独立取第一个最优的门。
        """
        c0, c1 = win_tables(spec)
        s_card = spec.s_card
        key = _optimal_alice_key(c0, c1)
        init, alice_idx = key >> s_card, key & ((1 << s_card) - 1)

        bits = _bit_rows(s_card, alice_idx, alice_idx + 1)
        columns = _gate_values(bits if init == 0 else 1.0 - bits, c0, c1)[0]
        strategy = DeterministicXorStarStrategy(
            init_bit=init,
            alice_gates=[
                ClassicalGate.NOT if bit else ClassicalGate.ID
                for bit in _index_bits(alice_idx, s_card)
            ],
            bob_gates=[GATE_ORDER[_first_choice(columns[t])] for t in range(spec.t_card)],
        )
        return eval_xorstar(spec, strategy), strategy
