"""
测试公共夹具
"""

import math

import numpy as np
import pytest

from xorduel.core.config import Settings
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.result_schemas import OptimizerConfig
from xorduel.services import catalog_service

CHSH_QUANTUM = math.cos(math.pi / 8) ** 2

XOR_STAR_KEYS = ["qrac21", "bit_torpedo", "gbha_i3", "ra"]
ALL_KEYS = ["chsh", "odd_cycle", "eaos"] + XOR_STAR_KEYS


@pytest.fixture
def settings() -> Settings:
    """不读取环境的默认配置"""
    return Settings(_env_file=None)


@pytest.fixture
def small_cfg() -> OptimizerConfig:
    """单进程、少量重启的优化器配置"""
    return OptimizerConfig(restarts=8, seed=0, workers=1)


@pytest.fixture
def chsh() -> GameSpec:
    return catalog_service.build("chsh")[0]


@pytest.fixture
def chsh_star() -> GameSpec:
    return catalog_service.build("chsh")[1]


@pytest.fixture
def ra() -> GameSpec:
    return catalog_service.build("ra")[1]


@pytest.fixture
def chsh_dict() -> dict:
    return {
        "name": "CHSH",
        "kind": "xor",
        "s_card": 2,
        "t_card": 2,
        "dist": [[0.25, 0.25], [0.25, 0.25]],
        "task": [[0, 0], [0, 1]],
    }


def random_game(rng: np.random.Generator, s_card: int, t_card: int, kind: GameKind) -> GameSpec:
    """随机分布与任务表的游戏"""
    weights = rng.random((s_card, t_card))
    weights /= weights.sum()
    task = rng.integers(0, 2, size=(s_card, t_card))
    return GameSpec(
        name="random",
        kind=kind,
        s_card=s_card,
        t_card=t_card,
        dist=weights.tolist(),
        task=task.tolist(),
    )
