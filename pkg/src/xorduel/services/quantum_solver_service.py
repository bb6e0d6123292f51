"""
量子求解服务

多起点 Nelder-Mead 单纯形搜索量子值（Tsirelson 界）：
- XOR 游戏：共享 |φ⁺⟩ 上的单比特投影测量（每个测量 2 个角）
- XOR* 游戏：|0⟩ 初态上的 Alice 酉变换与 Bob 操作（每个酉变换 3 个角），
  允许重置时枚举 Bob 的 2^|T| 种重置模式
另提供 Tsirelson 单位向量的 see-saw 交替优化，作为 XOR 游戏的独立校验。
"""

import math
import time
from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize

from xorduel.core.config import Settings, get_settings
from xorduel.core.errors import (
    IncompatibleModeError,
    NonConvergenceError,
    ReversibilityViolationError,
    StrategyShapeError,
)
from xorduel.core.logging import get_logger
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.result_schemas import (
    ClassicalMode,
    OptimizerConfig,
    QuantumMode,
    SolveResult,
)
from xorduel.schemas.strategy_schemas import (
    BobOp,
    QuantumXorStarStrategy,
    QuantumXorStrategy,
    QubitUnitaryParams,
    VectorStrategy,
)
from xorduel.services.classical_solver_service import ClassicalSolverService
from xorduel.services.game_service import win_tables
from xorduel.tasks.restart_pool import restart_rng, run_jobs
from xorduel.utils.qubit_algebra import (
    TWO_PI,
    basis_batch,
    born_tables,
    sequential_outcomes,
    stack_bases,
    stack_unitaries,
    to_basis_params,
    to_unitary_params,
    unitary_batch,
)

logger = get_logger(__name__)

# 平凡策略判定余量
TRIVIAL_MARGIN = 1e-9
# 允许重置时每种模式至少使用的重启次数
PATTERN_MIN_RESTARTS = 8


def _xor_win_from_tables(probs: np.ndarray, c0: np.ndarray, c1: np.ndarray) -> float:
    parity0 = probs[:, :, 0, 0] + probs[:, :, 1, 1]
    parity1 = probs[:, :, 0, 1] + probs[:, :, 1, 0]
    return float(np.sum(c0 * parity0) + np.sum(c1 * parity1))


def _xorstar_win_from_outcomes(outcomes: np.ndarray, c0: np.ndarray, c1: np.ndarray) -> float:
    return float(np.sum(c0 * outcomes[:, :, 0]) + np.sum(c1 * outcomes[:, :, 1]))


def eval_quantum_xor(spec: GameSpec, strat: QuantumXorStrategy) -> float:
    """
    Bell 态投影测量策略的胜率

    Returns:
        float: Σ p(s,t)·Σ_{a⊕b=f(s,t)} p(a,b|s,t)
    """
    if len(strat.alice_meas) != spec.s_card or len(strat.bob_meas) != spec.t_card:
        raise StrategyShapeError(
            "量子XOR策略长度与游戏输入基数不一致", details={"game": spec.name}
        )
    c0, c1 = win_tables(spec)
    probs = born_tables(stack_bases(strat.alice_meas), stack_bases(strat.bob_meas))
    return _xor_win_from_tables(probs, c0, c1)


def eval_quantum_xorstar(
    spec: GameSpec,
    strat: QuantumXorStarStrategy,
    *,
    reversible_only: bool = False,
) -> float:
    """
    顺序量子策略的胜率

    Bob 为酉变换时 p(m|s,t) = |⟨m|V_t U_s|0⟩|²；
    Bob 先重置时 p(m|s,t) = |⟨m|V_t|0⟩|²，与 Alice 的操作无关。
    """
    if len(strat.alice_unitaries) != spec.s_card or len(strat.bob_ops) != spec.t_card:
        raise StrategyShapeError(
            "量子XOR*策略长度与游戏输入基数不一致", details={"game": spec.name}
        )
    if reversible_only and not strat.is_reversible:
        raise ReversibilityViolationError(
            "仅可逆模式下不允许重置门", details={"game": spec.name}
        )
    c0, c1 = win_tables(spec)
    reset = np.array([op.reset for op in strat.bob_ops], dtype=bool)
    outcomes = sequential_outcomes(
        stack_unitaries(strat.alice_unitaries), stack_unitaries(strat.bob_ops), reset
    )
    return _xorstar_win_from_outcomes(outcomes, c0, c1)


class _RestartJob(NamedTuple):
    """单次重启的全部输入；需可被进程池序列化"""

    kind: str  # "xor" | "xorstar" | "seesaw"
    c0: np.ndarray
    c1: np.ndarray
    reset_mask: Tuple[bool, ...]
    seed: int
    index: int
    inner_tol: float
    max_iters: int
    polish_rounds: int
    dim: int


def _xor_objective(x: np.ndarray, c0: np.ndarray, c1: np.ndarray) -> float:
    s_card, t_card = c0.shape
    angles_a = x[: 2 * s_card].reshape(2, s_card)
    angles_b = x[2 * s_card :].reshape(2, t_card)
    alpha = basis_batch(angles_a[0], angles_a[1])
    beta = basis_batch(angles_b[0], angles_b[1])
    return -_xor_win_from_tables(born_tables(alpha, beta), c0, c1)


def _search_unitaries(x: np.ndarray, s_card: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    搜索向量 → (Alice 酉矩阵, Bob 可逆列的酉矩阵)

    每个酉变换只搜索两个角：Alice 只有 U|0⟩ 起作用，λ 取 0；
    Bob 的 φ 只给第二行乘相位，不改变测量概率，取 0。
    """
    angles_u = x[: 2 * s_card].reshape(s_card, 2)
    angles_v = x[2 * s_card :].reshape(-1, 2)
    u = unitary_batch(angles_u[:, 0], angles_u[:, 1], np.zeros(s_card))
    v = unitary_batch(angles_v[:, 0], np.zeros(angles_v.shape[0]), angles_v[:, 1])
    return u, v


def _xorstar_objective(
    x: np.ndarray, c0_free: np.ndarray, c1_free: np.ndarray, constant: float
) -> float:
    u, v = _search_unitaries(x, c0_free.shape[0])
    final = np.einsum("tmk,sk->stm", v, u[:, :, 0])
    outcomes = np.abs(final) ** 2
    return -(constant + _xorstar_win_from_outcomes(outcomes, c0_free, c1_free))


def reset_column_values(c0: np.ndarray, c1: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    重置列的最优值：输出态取计算基 |0⟩ 或 |1⟩

    Returns:
        (每列最优值, 每列最优输出比特)
    """
    zero = c0.sum(axis=0)
    one = c1.sum(axis=0)
    bits = (one > zero).astype(np.int64)
    return np.maximum(zero, one), bits


def _nelder_mead(fun, x0: np.ndarray, args: tuple, job: _RestartJob):
    options = {
        "xatol": 1e-7,
        "fatol": job.inner_tol,
        "maxiter": job.max_iters,
        "adaptive": True,
    }
    result = minimize(fun, x0, args=args, method="Nelder-Mead", options=options)
    # 从当前最优点重新展开单纯形，直到不再有改进
    for _ in range(job.polish_rounds):
        polished = minimize(fun, result.x, args=args, method="Nelder-Mead", options=options)
        improved = polished.fun < result.fun - job.inner_tol
        if polished.fun < result.fun:
            result = polished
        if not improved:
            break
    return result


def _run_restart(job: _RestartJob) -> Tuple[float, np.ndarray]:
    """执行一次重启，返回 (胜率, 参数向量)"""
    rng = restart_rng(job.seed, job.index)

    if job.kind == "xor":
        s_card, t_card = job.c0.shape
        x0 = rng.uniform(0.0, TWO_PI, size=2 * (s_card + t_card))
        result = _nelder_mead(_xor_objective, x0, (job.c0, job.c1), job)
        return -float(result.fun), np.asarray(result.x)

    if job.kind == "xorstar":
        mask = np.array(job.reset_mask, dtype=bool)
        reset_values, _ = reset_column_values(job.c0, job.c1)
        constant = float(reset_values[mask].sum())
        c0_free = job.c0[:, ~mask]
        c1_free = job.c1[:, ~mask]
        dim = 2 * (job.c0.shape[0] + int((~mask).sum()))
        x0 = rng.uniform(0.0, TWO_PI, size=dim)
        if c0_free.shape[1] == 0:
            return constant, x0
        result = _nelder_mead(_xorstar_objective, x0, (c0_free, c1_free, constant), job)
        return -float(result.fun), np.asarray(result.x)

    return _run_seesaw(job, rng)


def _normalize_rows(vectors: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    norms = np.linalg.norm(vectors, axis=1)
    degenerate = norms < 1e-15
    if np.any(degenerate):
        vectors = vectors.copy()
        vectors[degenerate] = rng.standard_normal((int(degenerate.sum()), vectors.shape[1]))
        norms = np.linalg.norm(vectors, axis=1)
    return vectors / norms[:, np.newaxis]


def _run_seesaw(job: _RestartJob, rng: np.random.Generator) -> Tuple[float, np.ndarray]:
    """
    交替最大化 E = Σ M[s,t]⟨u_s, v_t⟩，M = p(s,t)(−1)^f(s,t)

    返回的参数向量为 u 与 v 按行拼接。
    """
    m = job.c0 - job.c1
    t_card = m.shape[1]
    v = _normalize_rows(rng.standard_normal((t_card, job.dim)), rng)
    u = _normalize_rows(m @ v, rng)
    energy = float(np.sum(m * (u @ v.T)))
    for _ in range(job.max_iters):
        v = _normalize_rows(m.T @ u, rng)
        u = _normalize_rows(m @ v, rng)
        updated = float(np.sum(m * (u @ v.T)))
        if abs(updated - energy) < job.inner_tol:
            energy = updated
            break
        energy = updated
    return (1.0 + energy) / 2.0, np.concatenate([u.ravel(), v.ravel()])


def _reduce(
    results: Sequence[Tuple[float, np.ndarray]], tol: float
) -> Tuple[int, bool]:
    """确定性归约：取最大值，平局取序号最小者；返回 (最优序号, 前两名是否一致)"""
    order = sorted(range(len(results)), key=lambda i: (-results[i][0], i))
    best = order[0]
    converged = len(order) < 2 or abs(results[order[0]][0] - results[order[1]][0]) < tol
    return best, converged


class QuantumSolverService:
    """
    量子值求解服务

    每次重启的随机数生成器由 (种子, 重启序号) 派生，结果与工作进程数无关。
    """

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()

    def quantum_value(
        self, spec: GameSpec, mode: QuantumMode, cfg: OptimizerConfig
    ) -> SolveResult:
        """
        多起点优化计算量子值

        Args:
            spec: 已验证的游戏规格
            mode: 求解模式
            cfg: 优化器配置

        Returns:
            SolveResult: 找到的最优值与规范化后的策略

        Raises:
            IncompatibleModeError: 模式与游戏类型不符
            NonConvergenceError: 所有重启都未超过平凡策略，而已知经典值更高
        """
        if mode.game_kind is not spec.kind:
            raise IncompatibleModeError(
                f"模式 {mode.value} 不适用于 {spec.kind.value} 游戏",
                details={"game": spec.name, "mode": mode.value},
            )

        started = time.perf_counter()
        c0, c1 = win_tables(spec)
        patterns = self._reset_patterns(spec, mode)
        per_pattern = cfg.restarts
        if len(patterns) > 1:
            per_pattern = max(PATTERN_MIN_RESTARTS, math.ceil(cfg.restarts / len(patterns)))

        kind = "xor" if mode is QuantumMode.XOR_QUBIT else "xorstar"
        jobs = [
            _RestartJob(
                kind=kind,
                c0=c0,
                c1=c1,
                reset_mask=pattern,
                seed=cfg.seed,
                index=p_idx * per_pattern + r_idx,
                inner_tol=cfg.inner_tol,
                max_iters=cfg.max_iters,
                polish_rounds=cfg.polish_rounds,
                dim=0,
            )
            for p_idx, pattern in enumerate(patterns)
            for r_idx in range(per_pattern)
        ]
        workers = self.settings.resolve_workers(cfg.workers)
        logger.info(
            "开始量子求解",
            game=spec.name,
            mode=mode.value,
            seed=cfg.seed,
            restarts=len(jobs),
            workers=workers,
        )
        results = run_jobs(_run_restart, jobs, workers)
        best_idx, converged = _reduce(results, self.settings.CONVERGENCE_TOL)

        best_job = jobs[best_idx]
        if kind == "xor":
            strategy = self._xor_strategy(spec, results[best_idx][1])
            value = eval_quantum_xor(spec, strategy)
        else:
            strategy = self._xorstar_strategy(spec, results[best_idx][1], best_job.reset_mask, c0, c1)
            value = eval_quantum_xorstar(spec, strategy)

        self._check_progress(spec, mode, value, c0, c1)
        if not converged:
            logger.warning("前两名重启结果不一致", game=spec.name, mode=mode.value, value=value)

        elapsed_ms = int((time.perf_counter() - started) * 1000)
        logger.info(
            "量子求解完成",
            game=spec.name,
            mode=mode.value,
            value=value,
            converged=converged,
            elapsed_ms=elapsed_ms,
        )
        return SolveResult(
            value=min(value, 1.0),
            strategy=strategy,
            restarts_used=len(jobs),
            converged=converged,
            elapsed_ms=elapsed_ms,
        )

    def seesaw_xor_value(self, spec: GameSpec, cfg: OptimizerConfig) -> SolveResult:
        """
        Tsirelson 单位向量的 see-saw 交替优化

        维度默认取 min(|S|,|T|)，可由 cfg.seesaw_dim 覆盖。
        """
        if spec.kind is not GameKind.XOR:
            raise IncompatibleModeError(
                "see-saw 仅适用于 XOR 游戏", details={"game": spec.name}
            )
        started = time.perf_counter()
        c0, c1 = win_tables(spec)
        dim = cfg.seesaw_dim or min(spec.s_card, spec.t_card)
        jobs = [
            _RestartJob(
                kind="seesaw",
                c0=c0,
                c1=c1,
                reset_mask=(),
                seed=cfg.seed,
                index=idx,
                inner_tol=cfg.inner_tol,
                max_iters=cfg.max_iters,
                polish_rounds=0,
                dim=dim,
            )
            for idx in range(cfg.restarts)
        ]
        results = run_jobs(_run_restart, jobs, self.settings.resolve_workers(cfg.workers))
        best_idx, converged = _reduce(results, self.settings.CONVERGENCE_TOL)
        value, flat = results[best_idx]
        split = spec.s_card * dim
        strategy = VectorStrategy(
            u=flat[:split].reshape(spec.s_card, dim).tolist(),
            v=flat[split:].reshape(spec.t_card, dim).tolist(),
        )
        elapsed_ms = int((time.perf_counter() - started) * 1000)
        logger.info(
            "see-saw 求解完成",
            game=spec.name,
            dim=dim,
            value=value,
            converged=converged,
            elapsed_ms=elapsed_ms,
        )
        return SolveResult(
            value=min(value, 1.0),
            strategy=strategy,
            restarts_used=len(jobs),
            converged=converged,
            elapsed_ms=elapsed_ms,
        )

    def _reset_patterns(self, spec: GameSpec, mode: QuantumMode) -> List[Tuple[bool, ...]]:
        if mode is not QuantumMode.XORSTAR_IRREVERSIBLE:
            return [tuple(False for _ in range(spec.t_card))]
        return [
            tuple(bool((idx >> (spec.t_card - 1 - t)) & 1) for t in range(spec.t_card))
            for idx in range(1 << spec.t_card)
        ]

    def _xor_strategy(self, spec: GameSpec, x: np.ndarray) -> QuantumXorStrategy:
        angles_a = x[: 2 * spec.s_card].reshape(2, spec.s_card)
        angles_b = x[2 * spec.s_card :].reshape(2, spec.t_card)
        alpha = basis_batch(angles_a[0], angles_a[1])
        beta = basis_batch(angles_b[0], angles_b[1])
        return QuantumXorStrategy(
            alice_meas=[to_basis_params(vec[0]) for vec in alpha],
            bob_meas=[to_basis_params(vec[0]) for vec in beta],
        )

    def _xorstar_strategy(
        self,
        spec: GameSpec,
        x: np.ndarray,
        reset_mask: Tuple[bool, ...],
        c0: np.ndarray,
        c1: np.ndarray,
    ) -> QuantumXorStarStrategy:
        u, v = _search_unitaries(x, spec.s_card)
        free_unitaries = iter(v)
        _, reset_bits = reset_column_values(c0, c1)

        if all(reset_mask):
            # Alice 的操作被全部擦除
            alice = [QubitUnitaryParams(theta=0.0, phi=0.0, lam=0.0) for _ in range(spec.s_card)]
        else:
            alice = [to_unitary_params(matrix) for matrix in u]

        bob = []
        for t, is_reset in enumerate(reset_mask):
            if is_reset:
                # U(π,0,0)|0⟩ = |1⟩
                theta = math.pi if reset_bits[t] else 0.0
                bob.append(BobOp(reset=True, theta=theta, phi=0.0, lam=0.0))
            else:
                params = to_unitary_params(next(free_unitaries))
                bob.append(BobOp(reset=False, **params.model_dump()))
        return QuantumXorStarStrategy(alice_unitaries=alice, bob_ops=bob)

    def _check_progress(
        self,
        spec: GameSpec,
        mode: QuantumMode,
        value: float,
        c0: np.ndarray,
        c1: np.ndarray,
    ) -> None:
        """所有重启都停在平凡常数策略上、而经典值更高时视为不收敛"""
        if spec.s_card + spec.t_card > self.settings.ENUMERATION_LIMIT:
            return
        trivial = max(float(c0.sum()), float(c1.sum()))
        if value > trivial + TRIVIAL_MARGIN:
            return
        classical_mode = {
            QuantumMode.XOR_QUBIT: ClassicalMode.XOR,
            QuantumMode.XORSTAR_REVERSIBLE: ClassicalMode.XORSTAR_REVERSIBLE,
            QuantumMode.XORSTAR_IRREVERSIBLE: ClassicalMode.XORSTAR_IRREVERSIBLE,
        }[mode]
        classical = ClassicalSolverService(self.settings).classical_value(spec, classical_mode)
        if classical.value > trivial + TRIVIAL_MARGIN:
            raise NonConvergenceError(
                "所有重启都未能超过平凡常数策略",
                details={
                    "game": spec.name,
                    "mode": mode.value,
                    "best": value,
                    "trivial": trivial,
                    "classical": classical.value,
                },
            )
