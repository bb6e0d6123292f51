"""
应用配置管理

使用Pydantic Settings管理求解器的运行配置。
"""

import os
from typing import Optional

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """
    应用程序设置类

    从环境变量（前缀 ``XORDUEL_``）和.env文件中读取配置。
    """

    # 应用基本信息
    APP_NAME: str = Field(default="xorduel", description="应用名称")
    APP_VERSION: str = Field(default="0.1.0", description="应用版本")

    # 并行配置
    THREADS: int = Field(
        default=0,
        ge=0,
        description="重启并行的工作进程上限（0 表示按CPU核数自动选择）",
    )

    # 优化器默认值
    DEFAULT_RESTARTS: int = Field(default=64, ge=1, description="默认随机重启次数")
    DEFAULT_SEED: int = Field(default=0, ge=0, description="默认随机种子")
    INNER_TOL: float = Field(default=1e-9, gt=0, description="单次局部优化的收敛容差")
    MAX_ITERS: int = Field(default=2000, ge=1, description="单轮单纯形迭代上限")
    POLISH_ROUNDS: int = Field(
        default=3,
        ge=0,
        description="单纯形收敛后从最优点重新展开的轮数",
    )

    # 报告容差
    REPORT_TOL: float = Field(default=1e-4, gt=0, description="与参考值比较的报告容差")
    DUAL_QUANTUM_TOL: float = Field(
        default=1e-3,
        gt=0,
        description="对偶检查中量子值允许的最大差异",
    )
    CONVERGENCE_TOL: float = Field(
        default=1e-6,
        gt=0,
        description="前两名重启结果视为一致的容差",
    )

    # 经典穷举保护
    ENUMERATION_LIMIT: int = Field(
        default=26,
        ge=1,
        description="|S|+|T| 超过该值时拒绝穷举",
    )

    # 输出可复现性
    REPRODUCIBLE_OUTPUT: bool = Field(
        default=True,
        description="输出JSON时固定时间戳并将耗时置零，保证逐字节可复现",
    )
    SOURCE_DATE_EPOCH: int = Field(
        default=0,
        ge=0,
        description="可复现模式下写入结果信封的时间戳（Unix秒）",
    )

    # 日志配置
    LOG_LEVEL: str = Field(default="WARNING", description="日志级别")
    LOG_NO_COLOR: bool = Field(default=False, description="禁用彩色日志输出")
    LOG_FILE: Optional[str] = Field(default=None, description="JSON行日志文件路径（可选）")

    model_config = SettingsConfigDict(
        env_prefix="XORDUEL_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",  # 忽略额外的环境变量
    )

    def resolve_workers(self, requested: Optional[int] = None) -> int:
        """
        计算实际使用的工作进程数

        参数:
            requested: 调用方显式指定的数量，None 表示使用 THREADS

        返回:
            int: 至少为1的工作进程数
        """
        workers = self.THREADS if requested is None else requested
        if workers <= 0:
            workers = os.cpu_count() or 1
        return max(1, workers)


# 创建全局设置实例
settings = Settings()


def get_settings() -> Settings:
    """获取应用设置实例"""
    return settings
