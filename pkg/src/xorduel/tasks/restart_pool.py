"""
重启任务执行池

在进程池中执行互相独立的优化重启，结果按任务顺序返回，
因此归约结果与工作进程数无关。
"""

from concurrent.futures import ProcessPoolExecutor
from typing import Callable, List, Sequence, TypeVar

import numpy as np

from xorduel.core.logging import get_logger

logger = get_logger(__name__)

JobT = TypeVar("JobT")
ResultT = TypeVar("ResultT")


def restart_rng(seed: int, index: int) -> np.random.Generator:
    """由 (主种子, 重启序号) 派生独立的随机数生成器"""
    return np.random.default_rng(np.random.SeedSequence([seed, index]))


def run_jobs(
    fn: Callable[[JobT], ResultT],
    jobs: Sequence[JobT],
    workers: int,
) -> List[ResultT]:
    """
    执行一批任务

    Args:
        fn: 可序列化的模块级函数
        jobs: 任务参数列表
        workers: 工作进程数；不大于1或只有一个任务时在当前进程内执行

    Returns:
        List[ResultT]: 与 jobs 顺序一致的结果
    """
    if workers <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]

    workers = min(workers, len(jobs))
    logger.debug("🚀 启动进程池", workers=workers, jobs=len(jobs))
    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(fn, jobs))
