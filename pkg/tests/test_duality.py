"""
对偶映射与比较测试
"""

import math

import numpy as np
import pytest

from tests.conftest import ALL_KEYS, CHSH_QUANTUM
from xorduel.core.errors import ReversibilityViolationError, SpecMismatchError
from xorduel.schemas.game_schemas import GameKind
from xorduel.schemas.result_schemas import OptimizerConfig
from xorduel.schemas.strategy_schemas import (
    BobOp,
    MeasurementBasisParams,
    QuantumXorStarStrategy,
    QuantumXorStrategy,
    QubitUnitaryParams,
)
from xorduel.services import catalog_service
from xorduel.services.duality_service import (
    DualityService,
    check_dual_specs,
    map_xor_to_xorstar,
    map_xorstar_to_xor,
)
from xorduel.services.quantum_solver_service import eval_quantum_xor, eval_quantum_xorstar


def _random_xor_strategy(rng, s_card, t_card) -> QuantumXorStrategy:
    def meas(n):
        return [
            MeasurementBasisParams(theta=float(rng.uniform(0, math.pi)), phi=float(rng.uniform(0, 2 * math.pi)))
            for _ in range(n)
        ]

    return QuantumXorStrategy(alice_meas=meas(s_card), bob_meas=meas(t_card))


def _random_xorstar_strategy(rng, s_card, t_card) -> QuantumXorStarStrategy:
    def angles():
        return {
            "theta": float(rng.uniform(0, math.pi)),
            "phi": float(rng.uniform(0, 2 * math.pi)),
            "lam": float(rng.uniform(0, 2 * math.pi)),
        }

    return QuantumXorStarStrategy(
        alice_unitaries=[QubitUnitaryParams(**angles()) for _ in range(s_card)],
        bob_ops=[BobOp(reset=False, **angles()) for _ in range(t_card)],
    )


@pytest.mark.unit
class TestStrategyMaps:
    def test_identity_maps_to_computational_bases(self, chsh, chsh_star):
        identity = QubitUnitaryParams(theta=0.0, phi=0.0, lam=0.0)
        star = QuantumXorStarStrategy(
            alice_unitaries=[identity] * 2,
            bob_ops=[BobOp(reset=False, theta=0.0, phi=0.0, lam=0.0)] * 2,
        )
        mapped = map_xorstar_to_xor(star)
        assert all(m.theta == pytest.approx(0.0, abs=1e-12) for m in mapped.alice_meas + mapped.bob_meas)
        assert eval_quantum_xor(chsh, mapped) == pytest.approx(0.75, abs=1e-12)

    def test_reset_cannot_be_mapped(self):
        identity = QubitUnitaryParams(theta=0.0, phi=0.0, lam=0.0)
        star = QuantumXorStarStrategy(
            alice_unitaries=[identity],
            bob_ops=[BobOp(reset=True, theta=0.0, phi=0.0, lam=0.0)],
        )
        with pytest.raises(ReversibilityViolationError):
            map_xorstar_to_xor(star)

    def test_xor_to_xorstar_keeps_value(self, chsh, chsh_star):
        rng = np.random.default_rng(40)
        for _ in range(50):
            strat = _random_xor_strategy(rng, 2, 2)
            mapped = map_xor_to_xorstar(strat)
            assert mapped.is_reversible
            assert eval_quantum_xorstar(chsh_star, mapped) == pytest.approx(
                eval_quantum_xor(chsh, strat), abs=1e-12
            )

    def test_xorstar_to_xor_keeps_value(self, ra):
        xor_spec = ra.with_kind(GameKind.XOR)
        rng = np.random.default_rng(41)
        for _ in range(50):
            strat = _random_xorstar_strategy(rng, 4, 4)
            assert eval_quantum_xor(xor_spec, map_xorstar_to_xor(strat)) == pytest.approx(
                eval_quantum_xorstar(ra, strat), abs=1e-12
            )

    def test_round_trip_keeps_value(self, chsh):
        rng = np.random.default_rng(42)
        for _ in range(20):
            strat = _random_xor_strategy(rng, 2, 2)
            back = map_xorstar_to_xor(map_xor_to_xorstar(strat))
            assert eval_quantum_xor(chsh, back) == pytest.approx(eval_quantum_xor(chsh, strat), abs=1e-12)

    @pytest.mark.slow
    @pytest.mark.parametrize("key", ALL_KEYS)
    def test_many_random_strategies(self, key):
        xor_spec, star_spec = catalog_service.build(key)
        rng = np.random.default_rng(43)
        for _ in range(1000):
            strat = _random_xorstar_strategy(rng, star_spec.s_card, star_spec.t_card)
            assert abs(
                eval_quantum_xor(xor_spec, map_xorstar_to_xor(strat)) - eval_quantum_xorstar(star_spec, strat)
            ) < 1e-12


@pytest.mark.unit
class TestCheckDualSpecs:
    def test_matching_pair(self, chsh, chsh_star):
        check_dual_specs(chsh, chsh_star)

    def test_same_side_rejected(self, chsh):
        with pytest.raises(SpecMismatchError):
            check_dual_specs(chsh, chsh)

    def test_different_tables_rejected(self, chsh):
        eaos_star = catalog_service.build("eaos")[1]
        with pytest.raises(SpecMismatchError):
            check_dual_specs(chsh, eaos_star)

    def test_different_task_rejected(self, chsh, chsh_star):
        flipped = chsh_star.model_copy(update={"task": [[1, 1], [1, 0]]})
        with pytest.raises(SpecMismatchError):
            check_dual_specs(chsh, flipped)


@pytest.mark.unit
class TestCompareDualPair:
    def test_chsh_passes(self, settings):
        cfg = OptimizerConfig(restarts=16, seed=0, workers=1)
        report = DualityService(settings).compare_dual_pair(catalog_service.build("chsh"), cfg)
        assert report.passed
        assert report.classical_discrepancy == 0.0
        assert report.omega_c_xor == 0.75
        assert report.omega_q_xor == pytest.approx(CHSH_QUANTUM, abs=1e-4)
        assert report.gap_xor == pytest.approx(report.gap_xorstar, abs=1e-3)
        assert set(report.strategies) == {
            "classical_xor",
            "classical_xorstar",
            "quantum_xor",
            "quantum_xorstar",
        }

    def test_mismatch_raises(self, settings, chsh, small_cfg):
        with pytest.raises(SpecMismatchError):
            DualityService(settings).compare_dual_pair((chsh, chsh), small_cfg)

    @pytest.mark.slow
    @pytest.mark.parametrize(
        "key,n",
        [
            ("odd_cycle", 3),
            ("odd_cycle", 5),
            ("odd_cycle", 7),
            ("eaos", None),
            ("qrac21", None),
            ("bit_torpedo", None),
            ("gbha_i3", None),
            ("ra", None),
        ],
    )
    def test_catalog_pairs_pass(self, settings, key, n):
        cfg = OptimizerConfig(restarts=64, seed=0, workers=1)
        report = DualityService(settings).compare_dual_pair(catalog_service.build(key, n), cfg)
        assert report.passed
        assert report.max_abs_discrepancy < 1e-3


@pytest.mark.slow
def test_reset_activation_on_ra(settings, ra):
    cfg = OptimizerConfig(restarts=64, seed=0, workers=1)
    report = DualityService(settings).compare_reset_activation(ra, cfg)
    assert report.omega_c_rev == pytest.approx(13 / 16, abs=1e-12)
    assert report.omega_c_irr == pytest.approx(14 / 16, abs=1e-12)
    assert report.gap_rev < 1e-4
    assert report.gap_irr >= 0.005
    assert report.activated


@pytest.mark.unit
def test_no_activation_without_irreversible_gain(settings, chsh_star):
    cfg = OptimizerConfig(restarts=8, seed=0, workers=1)
    report = DualityService(settings).compare_reset_activation(chsh_star, cfg)
    assert report.gap_rev > 0.05
    assert not report.activated
