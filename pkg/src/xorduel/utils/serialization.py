"""
序列化工具

游戏（JSON 或 YAML）、策略与结果信封的读写。
输出 JSON 使用排序键与 Python 浮点 repr（最短往返表示），保证逐字节可复现。
"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import yaml
from pydantic import TypeAdapter, ValidationError

from xorduel.core.errors import GameParseError, ResultIOError
from xorduel.core.logging import get_logger
from xorduel.schemas.game_schemas import GameSpec
from xorduel.schemas.result_schemas import ResultEnvelope
from xorduel.schemas.strategy_schemas import AnyStrategy
from xorduel.services.game_service import parse_game

logger = get_logger(__name__)

PathLike = Union[str, Path]
YAML_SUFFIXES = {".yaml", ".yml"}

_strategy_adapter: TypeAdapter = TypeAdapter(AnyStrategy)


def dumps(data: Any) -> str:
    """确定性 JSON 文本"""
    return json.dumps(data, sort_keys=True, ensure_ascii=False, indent=2, allow_nan=False)


def _read_text(path: Path, error_cls: type) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise error_cls(f"无法读取文件: {path}", details={"path": str(path), "reason": str(exc)}) from exc


def _write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ResultIOError(
            f"无法写入文件: {path}", details={"path": str(path), "reason": str(exc)}
        ) from exc
    logger.debug("已写入文件", path=str(path))


def parse_document(text: str, yaml_format: bool = False) -> Dict[str, Any]:
    """
    解析 JSON 或 YAML 文本为字典

    Raises:
        GameParseError: 语法错误或顶层不是映射
    """
    try:
        data = yaml.safe_load(text) if yaml_format else json.loads(text)
    except (json.JSONDecodeError, yaml.YAMLError) as exc:
        raise GameParseError("文件语法错误", details={"reason": str(exc)}) from exc
    if not isinstance(data, dict):
        raise GameParseError("顶层结构必须是对象")
    return data


def load_game(path: PathLike) -> GameSpec:
    """
    读取并验证游戏文件

    Args:
        path: .json / .yaml / .yml 文件

    Returns:
        GameSpec: 已验证的游戏规格
    """
    path = Path(path)
    text = _read_text(path, GameParseError)
    data = parse_document(text, yaml_format=path.suffix.lower() in YAML_SUFFIXES)
    spec = parse_game(data)
    logger.debug("已加载游戏", path=str(path), game=spec.name, kind=spec.kind.value)
    return spec


def save_game(spec: GameSpec, path: PathLike) -> None:
    """以 JSON 写出游戏"""
    _write_text(Path(path), dumps(spec.model_dump(mode="json")) + "\n")


def load_strategy(path: PathLike) -> AnyStrategy:
    """读取策略文件，按 type 字段分派"""
    path = Path(path)
    text = _read_text(path, GameParseError)
    data = parse_document(text, yaml_format=path.suffix.lower() in YAML_SUFFIXES)
    try:
        return _strategy_adapter.validate_python(data)
    except ValidationError as exc:
        raise GameParseError(
            "策略文件格式错误",
            details={"errors": exc.errors(include_url=False, include_context=False)},
        ) from exc


def strategy_to_dict(strategy: AnyStrategy) -> Dict[str, Any]:
    """策略的文件表示（使用短字段名）"""
    return strategy.model_dump(mode="json", by_alias=True)


def save_strategy(strategy: AnyStrategy, path: PathLike) -> None:
    _write_text(Path(path), dumps(strategy_to_dict(strategy)) + "\n")


def envelope_to_dict(envelope: ResultEnvelope) -> Dict[str, Any]:
    return envelope.model_dump(mode="json", by_alias=True, exclude_none=True)


def save_result(envelope: ResultEnvelope, path: PathLike) -> None:
    """
    写出结果信封

    Raises:
        ResultIOError: 路径不可写
    """
    _write_text(Path(path), dumps(envelope_to_dict(envelope)) + "\n")


def load_result(path: PathLike) -> ResultEnvelope:
    """读回结果信封"""
    path = Path(path)
    text = _read_text(path, ResultIOError)
    try:
        return ResultEnvelope.model_validate_json(text)
    except ValidationError as exc:
        raise ResultIOError(
            "结果文件格式错误",
            details={"path": str(path), "errors": exc.errors(include_url=False, include_context=False)},
        ) from exc
