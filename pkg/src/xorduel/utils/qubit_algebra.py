"""
量子比特线性代数工具

2 维与 4 维态矢量、单比特酉矩阵、Bell 态上的投影测量，
以及从矩阵/矢量反求规范角度参数的逆映射。
所有函数均为纯函数。
"""

import math
from typing import Iterable, Tuple, Union

import numpy as np

from xorduel.schemas.strategy_schemas import MeasurementBasisParams, QubitUnitaryParams

TWO_PI = 2.0 * math.pi
SQRT_HALF = 1.0 / math.sqrt(2.0)
# 判定 cos/sin 分量为零的阈值
DEGENERATE_TOL = 1e-12

BELL_STATE = np.array([SQRT_HALF, 0.0, 0.0, SQRT_HALF], dtype=np.complex128)
KET_ZERO = np.array([1.0, 0.0], dtype=np.complex128)
IDENTITY2 = np.eye(2, dtype=np.complex128)

UnitaryLike = Union[QubitUnitaryParams, Tuple[float, float, float]]
BasisLike = Union[MeasurementBasisParams, Tuple[float, float]]


def wrap_angle(angle: float) -> float:
    """把角度折回 [0, 2π)"""
    wrapped = math.fmod(angle, TWO_PI)
    if wrapped < 0:
        wrapped += TWO_PI
    # fmod 可能在边界处给出 2π
    return 0.0 if wrapped >= TWO_PI else wrapped


def _unitary_angles(params: UnitaryLike) -> Tuple[float, float, float]:
    if isinstance(params, QubitUnitaryParams):
        return params.theta, params.phi, params.lam
    theta, phi, lam = params
    return float(theta), float(phi), float(lam)


def _basis_angles(params: BasisLike) -> Tuple[float, float]:
    if isinstance(params, MeasurementBasisParams):
        return params.theta, params.phi
    theta, phi = params
    return float(theta), float(phi)


def realize_unitary(params: UnitaryLike) -> np.ndarray:
    """
    构造 U(θ,φ,λ)

    Args:
        params: QubitUnitaryParams 或 (θ, φ, λ)

    Returns:
        np.ndarray: 2×2 复矩阵
    """
    theta, phi, lam = _unitary_angles(params)
    return unitary_batch(np.array([theta]), np.array([phi]), np.array([lam]))[0]


def unitary_batch(thetas: np.ndarray, phis: np.ndarray, lams: np.ndarray) -> np.ndarray:
    """批量构造酉矩阵，返回形状 (n,2,2)"""
    c = np.cos(np.asarray(thetas, dtype=np.float64) / 2.0)
    s = np.sin(np.asarray(thetas, dtype=np.float64) / 2.0)
    e_phi = np.exp(1j * np.asarray(phis, dtype=np.float64))
    e_lam = np.exp(1j * np.asarray(lams, dtype=np.float64))

    out = np.empty((c.shape[0], 2, 2), dtype=np.complex128)
    out[:, 0, 0] = c
    out[:, 0, 1] = -e_lam * s
    out[:, 1, 0] = e_phi * s
    out[:, 1, 1] = e_phi * e_lam * c
    return out


def basis_vectors(params: BasisLike) -> np.ndarray:
    """
    测量基矢量

    Returns:
        np.ndarray: 形状 (2,2)，第 a 行为 |a_i⟩
    """
    theta, phi = _basis_angles(params)
    return basis_batch(np.array([theta]), np.array([phi]))[0]


def basis_batch(thetas: np.ndarray, phis: np.ndarray) -> np.ndarray:
    """批量构造测量基，返回形状 (n,2,2)，[i,a,:] 为 |a_i⟩"""
    c = np.cos(np.asarray(thetas, dtype=np.float64) / 2.0)
    s = np.sin(np.asarray(thetas, dtype=np.float64) / 2.0)
    e_phi = np.exp(1j * np.asarray(phis, dtype=np.float64))

    out = np.empty((c.shape[0], 2, 2), dtype=np.complex128)
    out[:, 0, 0] = c
    out[:, 0, 1] = e_phi * s
    out[:, 1, 0] = s
    out[:, 1, 1] = -e_phi * c
    return out


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker 积"""
    return np.kron(a, b)


def projector(vec: np.ndarray) -> np.ndarray:
    """|v⟩⟨v|"""
    return np.outer(vec, vec.conj())


def born_joint(alice: BasisLike, bob: BasisLike) -> np.ndarray:
    """
    在 |φ⁺⟩ 上做局域投影测量的联合分布

    p(a,b) = ⟨φ⁺| A_a ⊗ B_b |φ⁺⟩

    Returns:
        np.ndarray: 2×2 概率表，下标 [a,b]
    """
    alpha = basis_vectors(alice)
    beta = basis_vectors(bob)
    table = np.empty((2, 2), dtype=np.float64)
    for a in range(2):
        for b in range(2):
            op = kron(projector(alpha[a]), projector(beta[b]))
            table[a, b] = float(np.real(BELL_STATE.conj() @ op @ BELL_STATE))
    return table


def born_tables(alpha: np.ndarray, beta: np.ndarray) -> np.ndarray:
    """
    全部输入对的 Born 概率

    Args:
        alpha: (S,2,2) Alice 的测量基
        beta: (T,2,2) Bob 的测量基

    Returns:
        np.ndarray: (S,T,2,2)，[s,t,a,b] = p(a,b|s,t)
    """
    amp = np.einsum("sak,tbk->stab", alpha.conj(), beta.conj()) * SQRT_HALF
    return np.abs(amp) ** 2


def sequential_outcomes(alice_u: np.ndarray, bob_v: np.ndarray, reset: np.ndarray) -> np.ndarray:
    """
    顺序协议的终态测量概率

    Args:
        alice_u: (S,2,2) Alice 的酉矩阵
        bob_v: (T,2,2) Bob 的酉矩阵
        reset: (T,) 布尔数组，为真时 Bob 先把比特重置到 |0⟩

    Returns:
        np.ndarray: (S,T,2)，[s,t,m] = p(m|s,t)
    """
    psi = alice_u[:, :, 0]
    final = np.einsum("tmk,sk->stm", bob_v, psi)
    if np.any(reset):
        reset_state = bob_v[:, :, 0]
        final[:, reset, :] = reset_state[np.newaxis, reset, :]
    return np.abs(final) ** 2


def unitary_params_from_matrix(matrix: np.ndarray) -> Tuple[float, float, float]:
    """
    从 2×2 酉矩阵反求 (θ, φ, λ)，去掉全局相位

    分量退化时（cos 或 sin 为零）把自由的角取为 0。
    """
    m = np.asarray(matrix, dtype=np.complex128)
    theta = 2.0 * math.atan2(abs(m[1, 0]), abs(m[0, 0]))
    c = math.cos(theta / 2.0)
    s = math.sin(theta / 2.0)

    if c < DEGENERATE_TOL:
        g = float(np.angle(m[1, 0]))
        phi = 0.0
        lam = float(np.angle(-m[0, 1])) - g
    elif s < DEGENERATE_TOL:
        g = float(np.angle(m[0, 0]))
        phi = 0.0
        lam = float(np.angle(m[1, 1])) - g
    else:
        g = float(np.angle(m[0, 0]))
        phi = float(np.angle(m[1, 0])) - g
        lam = float(np.angle(-m[0, 1])) - g
    return min(theta, math.pi), wrap_angle(phi), wrap_angle(lam)


def basis_params_from_vector(vec: np.ndarray) -> Tuple[float, float]:
    """从 |0_i⟩ 方向的矢量反求 (θ, φ)，去掉全局相位"""
    v = np.asarray(vec, dtype=np.complex128)
    theta = 2.0 * math.atan2(abs(v[1]), abs(v[0]))
    if abs(v[0]) < DEGENERATE_TOL or abs(v[1]) < DEGENERATE_TOL:
        phi = 0.0
    else:
        phi = float(np.angle(v[1])) - float(np.angle(v[0]))
    return min(theta, math.pi), wrap_angle(phi)


def to_unitary_params(matrix: np.ndarray) -> QubitUnitaryParams:
    theta, phi, lam = unitary_params_from_matrix(matrix)
    return QubitUnitaryParams(theta=theta, phi=phi, lam=lam)


def to_basis_params(vec: np.ndarray) -> MeasurementBasisParams:
    theta, phi = basis_params_from_vector(vec)
    return MeasurementBasisParams(theta=theta, phi=phi)


def stack_unitaries(params: Iterable[UnitaryLike]) -> np.ndarray:
    """把参数列表转换为 (n,2,2) 矩阵栈"""
    angles = np.array([_unitary_angles(p) for p in params], dtype=np.float64).reshape(-1, 3)
    return unitary_batch(angles[:, 0], angles[:, 1], angles[:, 2])


def stack_bases(params: Iterable[BasisLike]) -> np.ndarray:
    """把参数列表转换为 (n,2,2) 测量基栈"""
    angles = np.array([_basis_angles(p) for p in params], dtype=np.float64).reshape(-1, 2)
    return basis_batch(angles[:, 0], angles[:, 1])
