#!/usr/bin/env python3
"""
重现全部目录参考值

对每个目录游戏求两侧的经典值、量子值（RA 另求允许重置时的两个值），
与参考值并列输出为表格。
"""

import argparse
import sys
from pathlib import Path

# 添加src目录到Python路径
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from rich.console import Console
from rich.table import Table

from xorduel.core.config import settings
from xorduel.core.logging import get_logger, setup_logging
from xorduel.schemas.result_schemas import ClassicalMode, OptimizerConfig, QuantumMode
from xorduel.services import catalog_service
from xorduel.services.classical_solver_service import ClassicalSolverService
from xorduel.services.quantum_solver_service import QuantumSolverService

ODD_CYCLE_SIZES = (3, 5, 7)


def _solvers(key, n, cfg):
    xor_spec, star_spec = catalog_service.build(key, n)
    classical = ClassicalSolverService(settings)
    quantum = QuantumSolverService(settings)
    runs = {
        catalog_service.CLASSICAL_XOR: lambda: classical.classical_value(xor_spec, ClassicalMode.XOR),
        catalog_service.QUANTUM_XOR: lambda: quantum.quantum_value(xor_spec, QuantumMode.XOR_QUBIT, cfg),
        catalog_service.CLASSICAL_XORSTAR_REV: lambda: classical.classical_value(
            star_spec, ClassicalMode.XORSTAR_REVERSIBLE
        ),
        catalog_service.QUANTUM_XORSTAR_REV: lambda: quantum.quantum_value(
            star_spec, QuantumMode.XORSTAR_REVERSIBLE, cfg
        ),
        catalog_service.CLASSICAL_XORSTAR_IRR: lambda: classical.classical_value(
            star_spec, ClassicalMode.XORSTAR_IRREVERSIBLE
        ),
        catalog_service.QUANTUM_XORSTAR_IRR: lambda: quantum.quantum_value(
            star_spec, QuantumMode.XORSTAR_IRREVERSIBLE, cfg
        ),
    }
    return xor_spec.name, runs


def main() -> int:
    """主函数"""
    parser = argparse.ArgumentParser(description="重现目录游戏的全部参考值")
    parser.add_argument("--restarts", type=int, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--workers", type=int, default=None, help="工作进程数（默认读取 XORDUEL_THREADS）")
    args = parser.parse_args()

    setup_logging()
    logger = get_logger(__name__)
    cfg = OptimizerConfig.from_settings(
        settings, restarts=args.restarts, seed=args.seed, workers=args.workers
    )

    table = Table(title="📊 目录参考值")
    for column in ("game", "quantity", "computed", "expected", "ok"):
        table.add_column(column)

    failures = 0
    for key in catalog_service.CATALOG:
        sizes = ODD_CYCLE_SIZES if catalog_service.CATALOG[key].parameterized else (None,)
        for n in sizes:
            name, runs = _solvers(key, n, cfg)
            for quantity, expected in catalog_service.expected_bounds(key, n).items():
                value = runs[quantity]().value
                ok = abs(value - expected.value) <= max(expected.tol, settings.REPORT_TOL)
                failures += not ok
                table.add_row(name, quantity, f"{value:.6f}", f"{expected.value:.6f}", "✅" if ok else "❌")

    Console().print(table)
    if failures:
        logger.warning(f"⚠️ {failures} 项超出容差")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
