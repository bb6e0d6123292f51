"""
对偶映射服务

二维可逆 XOR* 策略与 Bell 态 XOR 策略之间的双向映射，
以及对偶游戏对、重置激活两类比较报告。

映射依据滑移规则 (M⊗I)|φ⁺⟩ = (I⊗Mᵀ)|φ⁺⟩：
Alice 在 {conj(U_s)|a⟩} 基下测量，Bob 在 {V_t†|b⟩} 基下测量时，
p(a,b|s,t) = ½|⟨b|V_t U_s|a⟩|²，于是 p(a⊕b=m|s,t) = |⟨m|V_t U_s|0⟩|²。
"""

from typing import Optional, Tuple

import numpy as np

from xorduel.core.config import Settings, get_settings
from xorduel.core.errors import ReversibilityViolationError, SpecMismatchError
from xorduel.core.logging import get_logger
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.result_schemas import (
    ClassicalMode,
    DualPairReport,
    OptimizerConfig,
    QuantumMode,
    ResetActivationReport,
)
from xorduel.schemas.strategy_schemas import (
    BobOp,
    QuantumXorStarStrategy,
    QuantumXorStrategy,
)
from xorduel.services.classical_solver_service import ClassicalSolverService
from xorduel.services.quantum_solver_service import QuantumSolverService
from xorduel.utils.qubit_algebra import (
    basis_vectors,
    realize_unitary,
    to_basis_params,
    to_unitary_params,
)

logger = get_logger(__name__)

# 重置激活所需的最小不可逆量子优势
ACTIVATION_MIN_GAP = 0.005


def map_xorstar_to_xor(strat: QuantumXorStarStrategy) -> QuantumXorStrategy:
    """
    把可逆 XOR* 策略映射为 Bell 态 XOR 策略

    Raises:
        ReversibilityViolationError: 存在重置操作
    """
    if not strat.is_reversible:
        raise ReversibilityViolationError("含重置门的策略无法映射为 XOR 策略")

    alice = [to_basis_params(realize_unitary(u).conj()[:, 0]) for u in strat.alice_unitaries]
    bob = [to_basis_params(realize_unitary(op).conj().T[:, 0]) for op in strat.bob_ops]
    return QuantumXorStrategy(alice_meas=alice, bob_meas=bob)


def map_xor_to_xorstar(strat: QuantumXorStrategy) -> QuantumXorStarStrategy:
    """把 Bell 态 XOR 策略映射为可逆 XOR* 策略：U_s = conj(A_s)，V_t = B_t†"""
    alice = []
    for meas in strat.alice_meas:
        basis_change = basis_vectors(meas).T
        alice.append(to_unitary_params(basis_change.conj()))

    bob = []
    for meas in strat.bob_meas:
        basis_change = basis_vectors(meas).T
        params = to_unitary_params(basis_change.conj().T)
        bob.append(BobOp(reset=False, **params.model_dump()))
    return QuantumXorStarStrategy(alice_unitaries=alice, bob_ops=bob)


def check_dual_specs(xor_spec: GameSpec, xorstar_spec: GameSpec) -> None:
    """两个规格必须分属两侧且共享分布与任务表"""
    if xor_spec.kind is not GameKind.XOR or xorstar_spec.kind is not GameKind.XOR_STAR:
        raise SpecMismatchError(
            "对偶检查需要一个 XOR 游戏和一个 XOR* 游戏",
            details={"kinds": [xor_spec.kind.value, xorstar_spec.kind.value]},
        )
    same_tables = (
        (xor_spec.s_card, xor_spec.t_card) == (xorstar_spec.s_card, xorstar_spec.t_card)
        and np.array_equal(np.asarray(xor_spec.dist), np.asarray(xorstar_spec.dist))
        and np.array_equal(np.asarray(xor_spec.task), np.asarray(xorstar_spec.task))
    )
    if not same_tables:
        raise SpecMismatchError(
            "对偶游戏的分布或任务表不一致",
            details={"xor": xor_spec.name, "xor_star": xorstar_spec.name},
        )


class DualityService:
    """对偶游戏对与重置激活的比较"""

    def __init__(self, settings: Optional[Settings] = None):
        self.settings = settings or get_settings()
        self.classical = ClassicalSolverService(self.settings)
        self.quantum = QuantumSolverService(self.settings)

    def compare_dual_pair(
        self,
        spec_pair: Tuple[GameSpec, GameSpec],
        cfg: OptimizerConfig,
    ) -> DualPairReport:
        """
        在对偶两侧分别求经典值与量子值并比较

        经典值须完全相等，量子值之差须小于 DUAL_QUANTUM_TOL。

        Args:
            spec_pair: (XOR 规格, XOR* 规格)
            cfg: 优化器配置

        Returns:
            DualPairReport: 四个值、两侧优势差与通过标记
        """
        xor_spec, xorstar_spec = spec_pair
        check_dual_specs(xor_spec, xorstar_spec)

        c_xor = self.classical.classical_value(xor_spec, ClassicalMode.XOR)
        c_star = self.classical.classical_value(xorstar_spec, ClassicalMode.XORSTAR_REVERSIBLE)
        q_xor = self.quantum.quantum_value(xor_spec, QuantumMode.XOR_QUBIT, cfg)
        q_star = self.quantum.quantum_value(xorstar_spec, QuantumMode.XORSTAR_REVERSIBLE, cfg)

        classical_discrepancy = abs(c_xor.value - c_star.value)
        quantum_discrepancy = abs(q_xor.value - q_star.value)
        passed = (
            classical_discrepancy == 0.0
            and quantum_discrepancy < self.settings.DUAL_QUANTUM_TOL
        )
        report = DualPairReport(
            game_name=xor_spec.name,
            omega_c_xor=c_xor.value,
            omega_q_xor=q_xor.value,
            omega_c_xorstar_rev=c_star.value,
            omega_q_xorstar_rev=q_star.value,
            gap_xor=q_xor.value - c_xor.value,
            gap_xorstar=q_star.value - c_star.value,
            classical_discrepancy=classical_discrepancy,
            quantum_discrepancy=quantum_discrepancy,
            max_abs_discrepancy=max(classical_discrepancy, quantum_discrepancy),
            passed=passed,
            strategies={
                "classical_xor": c_xor.strategy,
                "classical_xorstar": c_star.strategy,
                "quantum_xor": q_xor.strategy,
                "quantum_xorstar": q_star.strategy,
            },
        )
        log = logger.info if passed else logger.warning
        log(
            "对偶检查完成",
            game=xor_spec.name,
            passed=passed,
            classical_discrepancy=classical_discrepancy,
            quantum_discrepancy=quantum_discrepancy,
        )
        return report

    def compare_reset_activation(
        self, spec: GameSpec, cfg: OptimizerConfig
    ) -> ResetActivationReport:
        """
        比较仅可逆与允许重置两种约束下的经典值、量子值

        可逆优势低于 REPORT_TOL 而不可逆优势不低于 ACTIVATION_MIN_GAP 时视为被激活。
        """
        c_rev = self.classical.classical_value(spec, ClassicalMode.XORSTAR_REVERSIBLE)
        c_irr = self.classical.classical_value(spec, ClassicalMode.XORSTAR_IRREVERSIBLE)
        q_rev = self.quantum.quantum_value(spec, QuantumMode.XORSTAR_REVERSIBLE, cfg)
        q_irr = self.quantum.quantum_value(spec, QuantumMode.XORSTAR_IRREVERSIBLE, cfg)

        gap_rev = q_rev.value - c_rev.value
        gap_irr = q_irr.value - c_irr.value
        activated = gap_rev < self.settings.REPORT_TOL and gap_irr >= ACTIVATION_MIN_GAP
        logger.info(
            "重置激活检查完成",
            game=spec.name,
            gap_rev=gap_rev,
            gap_irr=gap_irr,
            activated=activated,
        )
        return ResetActivationReport(
            game_name=spec.name,
            omega_c_rev=c_rev.value,
            omega_q_rev=q_rev.value,
            omega_c_irr=c_irr.value,
            omega_q_irr=q_irr.value,
            gap_rev=gap_rev,
            gap_irr=gap_irr,
            activated=activated,
            strategies={
                "classical_rev": c_rev.strategy,
                "classical_irr": c_irr.strategy,
                "quantum_rev": q_rev.strategy,
                "quantum_irr": q_irr.strategy,
            },
        )
