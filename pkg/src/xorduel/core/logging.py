"""日志配置模块

控制台日志经 Rich 写到 stderr，可选再写一份 JSON 行文件。
标准输出只留给结果信封。
"""

from __future__ import annotations

import json
import logging
import os
import sys
from pathlib import Path
from typing import Optional

import structlog
import structlog.stdlib
import structlog.types
from rich.console import Console
from rich.logging import RichHandler
from structlog.processors import CallsiteParameter, CallsiteParameterAdder

from xorduel.core.config import settings

_LEVEL_STYLES = {
    "DEBUG": "dim cyan",
    "INFO": "cyan",
    "WARNING": "yellow",
    "ERROR": "bold red",
    "CRITICAL": "bold white on red",
}


def setup_logging(level: Optional[str] = None, log_file: Optional[str] = None) -> None:
    """
    配置 structlog 与标准库 logging

    重复调用会替换已有处理器，命令行每次启动调用一次即可。

    Args:
        level: 日志级别，默认取 XORDUEL_LOG_LEVEL
        log_file: JSON 行日志文件路径，默认取 XORDUEL_LOG_FILE
    """
    shared = _shared_processors()

    structlog.configure(
        processors=shared + [structlog.stdlib.ProcessorFormatter.wrap_for_formatter],
        wrapper_class=structlog.stdlib.BoundLogger,
        logger_factory=structlog.stdlib.LoggerFactory(),
        cache_logger_on_first_use=True,
    )

    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(_level_number(level or settings.LOG_LEVEL))
    root.addHandler(_console_handler(shared))

    target = log_file or settings.LOG_FILE
    if target:
        root.addHandler(_json_file_handler(Path(target), shared))

    logging.captureWarnings(True)


def get_logger(name: str) -> structlog.stdlib.BoundLogger:
    """获取结构化日志记录器"""
    return structlog.get_logger(name)


def _level_number(name: str) -> int:
    level = logging.getLevelName(str(name).upper())
    return level if isinstance(level, int) else logging.WARNING


def _shared_processors() -> list[structlog.types.Processor]:
    return [
        structlog.contextvars.merge_contextvars,
        structlog.stdlib.add_logger_name,
        structlog.stdlib.add_log_level,
        structlog.processors.TimeStamper(fmt="iso", key="timestamp", utc=True),
        CallsiteParameterAdder(
            parameters=[CallsiteParameter.MODULE, CallsiteParameter.FUNC_NAME, CallsiteParameter.LINENO]
        ),
        structlog.processors.StackInfoRenderer(),
        structlog.processors.format_exc_info,
    ]


def _use_color() -> bool:
    if settings.LOG_NO_COLOR or os.environ.get("NO_COLOR"):
        return False
    if not (hasattr(sys.stderr, "isatty") and sys.stderr.isatty()):
        return False
    return os.environ.get("TERM", "") != "dumb"


def _console_handler(shared: list[structlog.types.Processor]) -> logging.Handler:
    """Rich 控制台处理器，绑定 stderr"""
    color = _use_color()
    handler = RichHandler(
        console=Console(stderr=True, force_terminal=color, color_system="auto" if color else None),
        show_time=False,
        show_level=False,
        show_path=False,
        markup=color,
        rich_tracebacks=True,
    )
    handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            processor=_render_line(color),
            foreign_pre_chain=shared,
        )
    )
    return handler


def _render_line(color: bool) -> structlog.types.Processor:
    """把事件字典渲染成一行：级别、事件、来源，其余字段按 key=value 追加"""

    def render(
        logger: logging.Logger,
        method_name: str,
        event_dict: structlog.types.EventDict,
    ) -> str:
        event_dict.pop("timestamp", None)
        level = str(event_dict.pop("level", "info")).upper()
        event = str(event_dict.pop("event", ""))
        event_dict.pop("logger", None)
        module = event_dict.pop("module", "")
        func_name = event_dict.pop("func_name", "")
        lineno = event_dict.pop("lineno", "")
        source = f"({module}.{func_name}:{lineno})" if module and func_name else ""
        fields = " ".join(f"{k}={v}" for k, v in event_dict.items())

        if not color:
            return " ".join(p for p in (f"[{level}]", event, source, fields) if p)

        style = _LEVEL_STYLES.get(level, "white")
        parts = [f"[{style}]{level:8}[/{style}]", f"[bold]{event}[/bold]"]
        if source:
            parts.append(f"[dim]{source}[/dim]")
        if event_dict:
            parts.append(
                " ".join(f"[cyan]{k}[/cyan]=[yellow]{v}[/yellow]" for k, v in event_dict.items())
            )
        return " ".join(parts)

    return render


def _json_file_handler(
    path: Path,
    shared: list[structlog.types.Processor],
) -> logging.Handler:
    path.parent.mkdir(parents=True, exist_ok=True)
    handler = logging.FileHandler(str(path), encoding="utf-8", delay=True)
    handler.setFormatter(
        structlog.stdlib.ProcessorFormatter(
            processor=structlog.processors.JSONRenderer(
                serializer=lambda value, **_: json.dumps(value, ensure_ascii=False, default=str),
            ),
            foreign_pre_chain=shared,
        )
    )
    return handler
