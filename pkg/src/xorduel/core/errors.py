"""全局错误处理模块。

定义统一的异常层次（携带错误码、退出码与详情），以及命令行层的错误渲染。
"""

from __future__ import annotations

import json
import sys
import traceback
from typing import Any, Dict, Optional, TextIO

from xorduel.core.logging import get_logger


logger = get_logger(__name__)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2
EXIT_NON_CONVERGENCE = 3
EXIT_DUAL_FAIL = 4


class XorDuelError(Exception):
    """应用自定义异常基类，用于携带统一的错误信息。"""

    default_code = "APPLICATION_ERROR"
    default_exit_code = EXIT_USAGE

    def __init__(
        self,
        message: str,
        *,
        code: Optional[str] = None,
        exit_code: Optional[int] = None,
        details: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.code = code or self.default_code
        self.exit_code = self.default_exit_code if exit_code is None else exit_code
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "code": self.code,
            "message": self.message,
            "details": self.details,
            "exit_code": self.exit_code,
        }


class GameParseError(XorDuelError):
    """游戏文件无法解析"""

    default_code = "PARSE_ERROR"


class GameValidationError(XorDuelError):
    """游戏定义违反不变量；code 指明第一个被违反的不变量"""

    default_code = "VALIDATION_ERROR"


class IndexOutOfRangeError(XorDuelError):
    """输入下标越界"""

    default_code = "INDEX_OUT_OF_RANGE"


class StrategyShapeError(XorDuelError):
    """策略长度与游戏输入基数不一致"""

    default_code = "SHAPE_MISMATCH"


class ReversibilityViolationError(XorDuelError):
    """仅可逆模式下出现了重置门"""

    default_code = "REVERSIBILITY_VIOLATION"


class IncompatibleModeError(XorDuelError):
    """求解模式与游戏类型不匹配"""

    default_code = "INCOMPATIBLE_MODE"


class CardinalityTooLargeError(XorDuelError):
    """输入基数超过穷举保护上限"""

    default_code = "CARDINALITY_TOO_LARGE"


class SpecMismatchError(XorDuelError):
    """对偶游戏的分布或任务表不一致"""

    default_code = "SPEC_MISMATCH"


class UnknownCatalogKeyError(XorDuelError):
    """未知的目录键"""

    default_code = "UNKNOWN_KEY"


class InvalidCatalogParamError(XorDuelError):
    """目录参数非法（例如偶数或过小的 n）"""

    default_code = "INVALID_PARAM"


class InvalidOptionError(XorDuelError):
    """命令行选项取值超出允许范围"""

    default_code = "INVALID_PARAM"


class ResultIOError(XorDuelError):
    """结果或策略文件读写失败"""

    default_code = "IO_ERROR"


class NonConvergenceError(XorDuelError):
    """所有重启都未能超过平凡常数策略"""

    default_code = "NON_CONVERGENCE"
    default_exit_code = EXIT_NON_CONVERGENCE


def render_cli_error(exc: BaseException, stream: Optional[TextIO] = None) -> int:
    """
    记录并输出命令行错误

    参数:
        exc: 捕获到的异常
        stream: 错误JSON的输出流，默认 stderr

    返回:
        int: 进程退出码
    """
    stream = stream or sys.stderr

    if isinstance(exc, XorDuelError):
        payload = exc.to_dict()
        log_level = "warning" if exc.exit_code == EXIT_USAGE else "error"
        _log_error(log_level, payload)
    else:
        payload = {
            "code": "INTERNAL_ERROR",
            "message": "内部错误",
            "details": {"exception": type(exc).__name__, "reason": str(exc)},
            "exit_code": EXIT_INTERNAL,
        }
        _log_error("error", payload, trace=traceback.format_exc())

    stream.write(json.dumps({"error": payload}, ensure_ascii=False, sort_keys=True, default=str))
    stream.write("\n")
    return int(payload["exit_code"])


def _log_error(level: str, payload: Dict[str, Any], trace: Optional[str] = None) -> None:
    log_method = getattr(logger, level, logger.error)
    extra: Dict[str, Any] = {
        "error_code": payload["code"],
        "exit_code": payload["exit_code"],
    }
    if payload.get("details"):
        extra["details"] = payload["details"]
    if trace:
        extra["traceback"] = trace
    log_method(f"❌ {payload['message']}", **extra)
