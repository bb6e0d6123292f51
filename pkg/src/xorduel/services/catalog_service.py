"""
游戏目录服务

按闭式任务函数构造内置的对偶游戏对，并给出各自的参考值与容差。
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Tuple

from xorduel.core.errors import InvalidCatalogParamError, UnknownCatalogKeyError
from xorduel.core.logging import get_logger
from xorduel.schemas.game_schemas import GameKind, GameSpec
from xorduel.schemas.result_schemas import CatalogListingEntry, ExpectedValue
from xorduel.services.game_service import validate
from xorduel.utils.validation import validate_odd_cycle_size

logger = get_logger(__name__)

# 参考值容差：精确经典值 / 闭式量子值 / 只给出两三位有效数字的数值
EXACT_TOL = 1e-12
CLOSED_FORM_TOL = 1e-4
QUOTED_TOL = 5e-3

DEFAULT_ODD_CYCLE_N = 3

CLASSICAL_XOR = "classical_xor"
QUANTUM_XOR = "quantum_xor"
CLASSICAL_XORSTAR_REV = "classical_xorstar_rev"
QUANTUM_XORSTAR_REV = "quantum_xorstar_rev"
CLASSICAL_XORSTAR_IRR = "classical_xorstar_irr"
QUANTUM_XORSTAR_IRR = "quantum_xorstar_irr"

Tables = Tuple[List[List[float]], List[List[int]]]


@dataclass(frozen=True)
class CatalogEntry:
    """目录条目"""

    key: str
    native_kind: GameKind
    names: Tuple[str, str]  # (XOR 侧名称, XOR* 侧名称)
    builder: Callable[[int], Tables]
    bounds: Callable[[int], Dict[str, ExpectedValue]]
    input_encoding: Optional[str] = None
    parameterized: bool = False


def _uniform(s_card: int, t_card: int) -> List[List[float]]:
    weight = 1.0 / (s_card * t_card)
    return [[weight] * t_card for _ in range(s_card)]


def _symmetric_bounds(classical: float, quantum: float, quantum_tol: float) -> Dict[str, ExpectedValue]:
    return {
        CLASSICAL_XOR: ExpectedValue(value=classical, tol=EXACT_TOL),
        QUANTUM_XOR: ExpectedValue(value=quantum, tol=quantum_tol),
        CLASSICAL_XORSTAR_REV: ExpectedValue(value=classical, tol=EXACT_TOL),
        QUANTUM_XORSTAR_REV: ExpectedValue(value=quantum, tol=quantum_tol),
    }


def _chsh(_: int) -> Tables:
    task = [[s * t for t in range(2)] for s in range(2)]
    return _uniform(2, 2), task


def _odd_cycle(n: int) -> Tables:
    # 对均匀选取的 s，t 以各 1/2 的概率取 s 或 s+1 (mod n)
    dist = [[0.0] * n for _ in range(n)]
    task = [[0] * n for _ in range(n)]
    for s in range(n):
        dist[s][s] += 1.0 / (2 * n)
        dist[s][(s + 1) % n] += 1.0 / (2 * n)
        for t in range(n):
            task[s][t] = int((s + 1) % n == t)
    return dist, task


def _eaos(_: int) -> Tables:
    task = [[int(s != t) for t in range(3)] for s in range(3)]
    return _uniform(3, 3), task


def _qrac21(_: int) -> Tables:
    task = []
    for s in range(4):
        s0, s1 = divmod(s, 2)
        task.append([(s0 * (t ^ 1)) ^ (s1 * t) for t in range(2)])
    return _uniform(4, 2), task


def _bit_torpedo(_: int) -> Tables:
    task = []
    for s in range(4):
        s0, s1 = divmod(s, 2)
        row = []
        for t in range(3):
            f = (s0 * ((t + 1) % 3)) % 2
            f ^= (s1 * t) % 2
            f ^= ((s0 ^ s1) * ((t + 2) % 3)) % 2
            row.append(f)
        task.append(row)
    return _uniform(4, 3), task


def _gbha_i3(_: int) -> Tables:
    dist = [[0.2, 0.2], [0.2, 0.2], [0.2, 0.0]]
    task = [[int(s + t >= 2) for t in range(2)] for s in range(3)]
    return dist, task


def _ra(_: int) -> Tables:
    task = [[int(s * t == 0) ^ int(s * t == 3) for t in range(4)] for s in range(4)]
    return _uniform(4, 4), task


def _ra_bounds(_: int) -> Dict[str, ExpectedValue]:
    bounds = _symmetric_bounds(13 / 16, 13 / 16, CLOSED_FORM_TOL)
    bounds[CLASSICAL_XORSTAR_IRR] = ExpectedValue(value=14 / 16, tol=EXACT_TOL)
    bounds[QUANTUM_XORSTAR_IRR] = ExpectedValue(value=0.885, tol=QUOTED_TOL)
    return bounds


TUPLE_ENCODING = "s=(s0,s1) -> 2*s0+s1"

CATALOG: Dict[str, CatalogEntry] = {
    entry.key: entry
    for entry in (
        CatalogEntry(
            key="chsh",
            native_kind=GameKind.XOR,
            names=("CHSH", "CHSH*"),
            builder=_chsh,
            bounds=lambda _: _symmetric_bounds(0.75, math.cos(math.pi / 8) ** 2, CLOSED_FORM_TOL),
        ),
        CatalogEntry(
            key="odd_cycle",
            native_kind=GameKind.XOR,
            names=("Odd-Cycle", "Odd-Cycle*"),
            builder=_odd_cycle,
            bounds=lambda n: _symmetric_bounds(
                1.0 - 1.0 / (2 * n), math.cos(math.pi / (4 * n)) ** 2, CLOSED_FORM_TOL
            ),
            input_encoding="s,t in {0..n-1}",
            parameterized=True,
        ),
        CatalogEntry(
            key="eaos",
            native_kind=GameKind.XOR,
            names=("EAOS", "EAOS*"),
            builder=_eaos,
            bounds=lambda _: _symmetric_bounds(7 / 9, 5 / 6, CLOSED_FORM_TOL),
            input_encoding="inputs {1,2,3} -> {0,1,2}",
        ),
        CatalogEntry(
            key="qrac21",
            native_kind=GameKind.XOR_STAR,
            names=("QRAC21-XOR", "QRAC21"),
            builder=_qrac21,
            bounds=lambda _: _symmetric_bounds(0.75, math.cos(math.pi / 8) ** 2, CLOSED_FORM_TOL),
            input_encoding=TUPLE_ENCODING,
        ),
        CatalogEntry(
            key="bit_torpedo",
            native_kind=GameKind.XOR_STAR,
            names=("Bit-Torpedo-XOR", "Bit-Torpedo"),
            builder=_bit_torpedo,
            bounds=lambda _: _symmetric_bounds(0.75, 0.789, QUOTED_TOL),
            input_encoding=TUPLE_ENCODING,
        ),
        CatalogEntry(
            key="gbha_i3",
            native_kind=GameKind.XOR_STAR,
            names=("GBHA-I3-XOR", "GBHA-I3"),
            builder=_gbha_i3,
            bounds=lambda _: _symmetric_bounds(0.8, 0.88, QUOTED_TOL),
        ),
        CatalogEntry(
            key="ra",
            native_kind=GameKind.XOR_STAR,
            names=("RA-XOR", "RA"),
            builder=_ra,
            bounds=_ra_bounds,
        ),
    )
}


def _lookup(key: str) -> CatalogEntry:
    entry = CATALOG.get(key)
    if entry is None:
        raise UnknownCatalogKeyError(
            f"未知的目录键: {key}", details={"key": key, "known": sorted(CATALOG)}
        )
    return entry


def _resolve_n(entry: CatalogEntry, n: Optional[int]) -> int:
    if not entry.parameterized:
        if n is not None:
            logger.debug("忽略目录参数 n", key=entry.key, n=n)
        return 0
    n = DEFAULT_ODD_CYCLE_N if n is None else n
    ok, message = validate_odd_cycle_size(n)
    if not ok:
        raise InvalidCatalogParamError(message, details={"key": entry.key, "n": n})
    return n


def build(key: str, n: Optional[int] = None) -> Tuple[GameSpec, GameSpec]:
    """
    构造对偶游戏对

    Args:
        key: 目录键
        n: 奇数环游戏的规模（奇数，≥3）

    Returns:
        (XOR 规格, XOR* 规格)，两者共享分布与任务表
    """
    entry = _lookup(key)
    size = _resolve_n(entry, n)
    dist, task = entry.builder(size)
    xor_name, star_name = entry.names
    if entry.parameterized:
        xor_name, star_name = f"{size}-{xor_name}", f"{size}-{star_name}"

    xor_spec = GameSpec(
        name=xor_name,
        kind=GameKind.XOR,
        s_card=len(dist),
        t_card=len(dist[0]),
        dist=dist,
        task=task,
        input_encoding=entry.input_encoding,
    )
    validate(xor_spec)
    return xor_spec, xor_spec.with_kind(GameKind.XOR_STAR, name=star_name)


def resolve(key: str, n: Optional[int] = None, kind: Optional[GameKind] = None) -> GameSpec:
    """按目录键取游戏；默认取该游戏的原生一侧"""
    entry = _lookup(key)
    xor_spec, star_spec = build(key, n)
    side = kind or entry.native_kind
    return xor_spec if side is GameKind.XOR else star_spec


def expected_bounds(key: str, n: Optional[int] = None) -> Dict[str, ExpectedValue]:
    """目录参考值：两侧的经典值与量子值，RA 另含允许重置时的两个值"""
    entry = _lookup(key)
    return entry.bounds(_resolve_n(entry, n))


def is_catalog_key(source: str) -> bool:
    return source in CATALOG


def list_entries() -> List[CatalogListingEntry]:
    """全部目录条目（参数化条目取默认参数）"""
    entries = []
    for key, entry in CATALOG.items():
        xor_spec, _ = build(key)
        params = {"n": DEFAULT_ODD_CYCLE_N} if entry.parameterized else {}
        entries.append(
            CatalogListingEntry(
                key=key,
                native_kind=entry.native_kind,
                s_card=xor_spec.s_card,
                t_card=xor_spec.t_card,
                params=params,
                expected=expected_bounds(key),
            )
        )
    return entries
