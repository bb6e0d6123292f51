"""
服务层模块

包含游戏验证、经典/量子求解、对偶映射与游戏目录。
"""

from xorduel.services.classical_solver_service import ClassicalSolverService
from xorduel.services.duality_service import DualityService
from xorduel.services.quantum_solver_service import QuantumSolverService

__all__ = [
    "ClassicalSolverService",
    "QuantumSolverService",
    "DualityService",
]
