"""
游戏模型测试
"""

import math

import numpy as np
import pytest

from tests.conftest import ALL_KEYS
from xorduel.core.errors import GameParseError, GameValidationError, IndexOutOfRangeError
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.services import catalog_service
from xorduel.services.game_service import parse_game, validate, win_tables, win_weight


def _spec(**overrides) -> GameSpec:
    data = {
        "name": "g",
        "kind": GameKind.XOR,
        "s_card": 2,
        "t_card": 2,
        "dist": [[0.25, 0.25], [0.25, 0.25]],
        "task": [[0, 0], [0, 1]],
    }
    data.update(overrides)
    return GameSpec(**data)


@pytest.mark.unit
class TestValidate:
    """不变量检查"""

    def test_chsh_is_valid(self, chsh):
        validate(chsh)

    def test_non_normalized(self):
        with pytest.raises(GameValidationError) as exc_info:
            validate(_spec(dist=[[0.5, 0.6], [0.0, 0.0]]))
        assert exc_info.value.code == "NON_NORMALIZED_DISTRIBUTION"

    def test_negative_probability(self):
        with pytest.raises(GameValidationError) as exc_info:
            validate(_spec(dist=[[0.75, -0.25], [0.25, 0.25]]))
        assert exc_info.value.code == "NEGATIVE_PROBABILITY"

    def test_non_binary_task(self):
        with pytest.raises(GameValidationError) as exc_info:
            validate(_spec(task=[[0, 2], [0, 1]]))
        assert exc_info.value.code == "NON_BINARY_TASK"

    def test_shape_mismatch(self):
        with pytest.raises(GameValidationError) as exc_info:
            validate(_spec(task=[[0, 0, 1], [0, 1, 0]]))
        assert exc_info.value.code == "SHAPE_MISMATCH"

    def test_validation_exit_code_is_usage(self):
        with pytest.raises(GameValidationError) as exc_info:
            validate(_spec(dist=[[0.5, 0.6], [0.0, 0.0]]))
        assert exc_info.value.exit_code == 2

    def test_idempotent(self, chsh):
        validate(chsh)
        validate(chsh)
        assert chsh.dist == [[0.25, 0.25], [0.25, 0.25]]


@pytest.mark.unit
class TestParseGame:
    def test_parses_dict(self, chsh_dict):
        spec = parse_game(chsh_dict)
        assert spec.kind is GameKind.XOR
        assert spec.task == [[0, 0], [0, 1]]

    def test_unknown_kind(self, chsh_dict):
        chsh_dict["kind"] = "xor3"
        with pytest.raises(GameParseError):
            parse_game(chsh_dict)

    def test_extra_field_rejected(self, chsh_dict):
        chsh_dict["players"] = 3
        with pytest.raises(GameParseError):
            parse_game(chsh_dict)

    def test_validation_runs_after_parse(self, chsh_dict):
        chsh_dict["dist"] = [[0.2, 0.2], [0.25, 0.25]]
        with pytest.raises(GameValidationError) as exc_info:
            parse_game(chsh_dict)
        assert exc_info.value.code == "NON_NORMALIZED_DISTRIBUTION"


@pytest.mark.unit
class TestWinWeight:
    def test_chsh_winning_bit(self, chsh):
        assert win_weight(chsh, 1, 1, 1) == 0.25

    def test_chsh_losing_bit(self, chsh):
        assert win_weight(chsh, 0, 0, 1) == 0.0

    def test_gbha_zero_probability_pair(self):
        gbha = catalog_service.resolve("gbha_i3")
        assert win_weight(gbha, 2, 1, 0) == 0.0
        assert win_weight(gbha, 2, 1, 1) == 0.0

    def test_out_of_range(self, chsh):
        with pytest.raises(IndexOutOfRangeError):
            win_weight(chsh, 2, 0, 0)

    @pytest.mark.parametrize("key", ALL_KEYS)
    def test_weights_split_probability(self, key):
        spec = catalog_service.resolve(key)
        for s in range(spec.s_card):
            for t in range(spec.t_card):
                total = win_weight(spec, s, t, 0) + win_weight(spec, s, t, 1)
                assert total == spec.dist[s][t]

    @pytest.mark.parametrize("key", ALL_KEYS)
    def test_weights_sum_to_one(self, key):
        spec = catalog_service.resolve(key)
        total = math.fsum(
            win_weight(spec, s, t, bit)
            for s in range(spec.s_card)
            for t in range(spec.t_card)
            for bit in (0, 1)
        )
        assert abs(total - 1.0) < 1e-9

    def test_win_tables_match_weights(self, chsh):
        c0, c1 = win_tables(chsh)
        assert np.allclose(c0, [[0.25, 0.25], [0.25, 0.0]])
        assert np.allclose(c1, [[0.0, 0.0], [0.0, 0.25]])


@pytest.mark.unit
def test_with_kind_keeps_tables(chsh):
    star = chsh.with_kind(GameKind.XOR_STAR, name="CHSH*")
    assert star.kind is GameKind.XOR_STAR
    assert star.name == "CHSH*"
    assert star.dist == chsh.dist and star.task == chsh.task
    assert GameKind.XOR.dual is GameKind.XOR_STAR
