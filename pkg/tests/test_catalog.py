"""
内置游戏目录测试
"""

import math

import pytest

from tests.conftest import ALL_KEYS
from xorduel.core.errors import InvalidCatalogParamError, UnknownCatalogKeyError
from xorduel.schemas.game_schemas import GameKind
from xorduel.services import catalog_service
from xorduel.services.game_service import validate


@pytest.mark.unit
class TestBuild:
    @pytest.mark.parametrize("key", ALL_KEYS)
    def test_pair_shares_tables(self, key):
        xor_spec, star_spec = catalog_service.build(key)
        assert xor_spec.kind is GameKind.XOR
        assert star_spec.kind is GameKind.XOR_STAR
        assert xor_spec.dist == star_spec.dist
        assert xor_spec.task == star_spec.task
        validate(xor_spec)
        validate(star_spec)

    @pytest.mark.parametrize(
        "key,shape",
        [("chsh", (2, 2)), ("eaos", (3, 3)), ("qrac21", (4, 2)), ("bit_torpedo", (4, 3)), ("gbha_i3", (3, 2)), ("ra", (4, 4))],
    )
    def test_shapes(self, key, shape):
        spec = catalog_service.resolve(key)
        assert (spec.s_card, spec.t_card) == shape

    def test_native_side(self):
        assert catalog_service.resolve("chsh").kind is GameKind.XOR
        assert catalog_service.resolve("ra").kind is GameKind.XOR_STAR
        assert catalog_service.resolve("ra", kind=GameKind.XOR).name == "RA-XOR"

    def test_names(self):
        xor_spec, star_spec = catalog_service.build("chsh")
        assert (xor_spec.name, star_spec.name) == ("CHSH", "CHSH*")

    def test_odd_cycle_default_and_name(self):
        xor_spec, star_spec = catalog_service.build("odd_cycle")
        assert xor_spec.s_card == 3
        assert xor_spec.name == "3-Odd-Cycle"
        assert star_spec.name == "3-Odd-Cycle*"

    @pytest.mark.parametrize("n", [5, 7, 9])
    def test_odd_cycle_sizes(self, n):
        spec = catalog_service.resolve("odd_cycle", n)
        assert (spec.s_card, spec.t_card) == (n, n)
        # 每个 s 恰有两个 t 的概率非零
        assert all(sum(p > 0 for p in row) == 2 for row in spec.dist)
        assert spec.task[n - 1][0] == 1

    @pytest.mark.parametrize("n", [4, 1, 2])
    def test_odd_cycle_invalid_size(self, n):
        with pytest.raises(InvalidCatalogParamError) as exc_info:
            catalog_service.build("odd_cycle", n)
        assert exc_info.value.exit_code == 2

    def test_unknown_key(self):
        with pytest.raises(UnknownCatalogKeyError):
            catalog_service.build("chsh3")

    def test_n_ignored_for_fixed_games(self):
        assert catalog_service.build("chsh", 5) == catalog_service.build("chsh")


@pytest.mark.unit
class TestTaskTables:
    def test_chsh(self):
        assert catalog_service.resolve("chsh").task == [[0, 0], [0, 1]]

    def test_eaos(self):
        assert catalog_service.resolve("eaos").task == [[0, 1, 1], [1, 0, 1], [1, 1, 0]]

    def test_bit_torpedo_restricts_to_qrac(self):
        torpedo = catalog_service.resolve("bit_torpedo")
        qrac = catalog_service.resolve("qrac21")
        assert [row[:2] for row in torpedo.task] == qrac.task
        for s in range(4):
            s0, s1 = divmod(s, 2)
            assert torpedo.task[s][2] == s0 ^ s1

    def test_gbha_restricts_to_chsh(self):
        gbha = catalog_service.resolve("gbha_i3")
        assert gbha.task[:2] == catalog_service.resolve("chsh").task
        assert gbha.dist[2][1] == 0.0

    def test_ra(self):
        assert catalog_service.resolve("ra").task == [
            [1, 1, 1, 1],
            [1, 0, 0, 1],
            [1, 0, 0, 0],
            [1, 1, 0, 0],
        ]


@pytest.mark.unit
class TestExpectedBounds:
    def test_chsh(self):
        bounds = catalog_service.expected_bounds("chsh")
        assert bounds[catalog_service.CLASSICAL_XOR].value == 0.75
        assert bounds[catalog_service.QUANTUM_XOR].value == pytest.approx(math.cos(math.pi / 8) ** 2)
        assert catalog_service.CLASSICAL_XORSTAR_IRR not in bounds

    def test_ra_has_reset_bounds(self):
        bounds = catalog_service.expected_bounds("ra")
        assert bounds[catalog_service.CLASSICAL_XORSTAR_IRR].value == 14 / 16
        assert bounds[catalog_service.QUANTUM_XORSTAR_IRR].value == 0.885
        assert bounds[catalog_service.QUANTUM_XORSTAR_IRR].tol == catalog_service.QUOTED_TOL

    @pytest.mark.parametrize("n", [3, 5, 7])
    def test_odd_cycle_closed_forms(self, n):
        bounds = catalog_service.expected_bounds("odd_cycle", n)
        assert bounds[catalog_service.CLASSICAL_XOR].value == pytest.approx(1 - 1 / (2 * n))
        assert bounds[catalog_service.QUANTUM_XOR].value == pytest.approx(math.cos(math.pi / (4 * n)) ** 2)

    def test_list_entries(self):
        entries = catalog_service.list_entries()
        assert [e.key for e in entries] == list(catalog_service.CATALOG)
        odd = next(e for e in entries if e.key == "odd_cycle")
        assert odd.params == {"n": 3}
        assert all(catalog_service.QUANTUM_XOR in e.expected for e in entries)

    def test_is_catalog_key(self):
        assert catalog_service.is_catalog_key("gbha_i3")
        assert not catalog_service.is_catalog_key("games/chsh.json")
