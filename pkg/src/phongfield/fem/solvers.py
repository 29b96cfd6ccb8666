"""稀疏线性求解与广义对称特征求解"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Mapping

import numpy as np
import scipy.linalg
from scipy import sparse
from scipy.sparse.linalg import ArpackNoConvergence, eigsh, splu
from scipy.sparse.linalg import norm as sparse_norm

from phongfield.core.config import settings
from phongfield.core.constants import EigenConfig
from phongfield.core.exceptions import (
    ConvergenceError,
    FactorizationError,
    ParameterError,
    SingularSystemError,
)
from phongfield.core.logging_config import get_logger, get_perf_logger

logger = get_logger(__name__)
perf_logger = get_perf_logger()

# min/max |pivot| 低于该值视为奇异
SINGULAR_PIVOT_RATIO = 1e-13


class SpdFactor:
    """对称正定矩阵的稀疏 LU 分解

    使用对称排序且不做行主元交换，U 的对角即 LDL^T 的主元序列；
    出现非正主元说明矩阵不正定。

    Raises:
        FactorizationError: 主元非正或趋于零；``pivot`` 为原始行/列下标
    """

    def __init__(self, A: sparse.spmatrix, label: str = "matrix"):
        A = sparse.csc_matrix(A, dtype=np.float64)
        if A.shape[0] != A.shape[1]:
            raise ParameterError("matrix must be square", shape=list(A.shape))
        self.A = A
        self.label = label
        start = time.perf_counter()
        try:
            self._lu = splu(
                A,
                permc_spec="MMD_AT_PLUS_A",
                diag_pivot_thresh=0.0,
                options={"SymmetricMode": True},
            )
        except RuntimeError as e:
            raise FactorizationError(f"{label}: factorization failed ({e})") from e

        diag = self._lu.U.diagonal()
        # 第 k 个主元对应 A 的第 argsort(perm_c)[k] 列
        perm = np.argsort(self._lu.perm_c)
        if diag.size:
            worst = int(np.argmin(diag))
            if diag[worst] <= 0:
                raise FactorizationError(
                    f"{label} is not positive definite",
                    pivot=int(perm[worst]),
                    value=float(diag[worst]),
                )
            ratio = float(diag.min() / diag.max())
            if ratio < SINGULAR_PIVOT_RATIO:
                raise FactorizationError(
                    f"{label} is numerically singular (pivot ratio {ratio:.2e})",
                    pivot=int(perm[worst]),
                    value=float(diag[worst]),
                )
        perf_logger.info(
            f"factor {label}: dim {A.shape[0]}, nnz {A.nnz}, {time.perf_counter() - start:.3f}s"
        )

    @property
    def shape(self) -> tuple[int, int]:
        return self.A.shape

    def solve(self, b: np.ndarray, rtol: float | None = None) -> np.ndarray:
        """求解 A x = b，最多两步迭代精化

        ``b`` 可以是向量，也可以是 (dim, m) 的多右端项块。
        """
        rtol = settings.SOLVE_RTOL if rtol is None else rtol
        b = np.asarray(b, dtype=np.float64)
        x = self._lu.solve(b)
        b_norm = np.linalg.norm(b)
        if b_norm == 0:
            return np.zeros_like(b)
        for _ in range(2):
            r = b - self.A @ x
            rel = np.linalg.norm(r) / b_norm
            if rel <= rtol:
                break
            x = x + self._lu.solve(r)
        else:
            rel = np.linalg.norm(b - self.A @ x) / b_norm
            if rel > rtol:
                logger.warning(f"{self.label}: relative residual {rel:.2e} above {rtol:.0e}")
        return x


def solve_spd(A: sparse.spmatrix, b: np.ndarray, label: str = "matrix") -> np.ndarray:
    """x = A^-1 b for a sparse SPD matrix."""
    return SpdFactor(A, label=label).solve(b)


def solve_constrained(
    S: sparse.spmatrix,
    fixed: Mapping[int, float],
    rhs: np.ndarray | None = None,
    label: str = "constrained system",
) -> np.ndarray:
    """在 x[i] = fixed[i] 约束下最小化 x^T S x / 2 - rhs^T x

    消去约束变量，自由块以 -S[free, fixed] @ values 为右端项求解。

    Raises:
        ParameterError: 没有约束
        SingularSystemError: 自由块奇异
    """
    if not fixed:
        raise ParameterError("at least one constraint is required")
    S = sparse.csr_matrix(S)
    n = S.shape[0]
    idx = np.fromiter(fixed.keys(), dtype=np.int64, count=len(fixed))
    vals = np.fromiter(fixed.values(), dtype=np.float64, count=len(fixed))
    if idx.min() < 0 or idx.max() >= n:
        raise ParameterError("constraint index out of range", dim=n)

    x = np.zeros(n)
    x[idx] = vals
    free_mask = np.ones(n, dtype=bool)
    free_mask[idx] = False
    free = np.flatnonzero(free_mask)
    if free.size == 0:
        return x

    S_free = S[free]
    b = -(S_free[:, idx] @ vals)
    if rhs is not None:
        b = b + np.asarray(rhs, dtype=np.float64)[free]
    try:
        x[free] = SpdFactor(S_free[:, free], label=label).solve(b)
    except FactorizationError as e:
        raise SingularSystemError(
            f"{label}: free block is singular ({e.message})",
            pivot=None if e.details.get("pivot") is None else int(free[e.details["pivot"]]),
            free=int(free.size),
        ) from e
    return x


@dataclass(frozen=True, eq=False)
class EigenResult:
    """升序特征值与 M 正交归一的特征向量（按列）"""

    values: np.ndarray
    vectors: np.ndarray
    residuals: np.ndarray

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dim(self) -> int:
        return self.vectors.shape[0]

    def vector(self, i: int) -> np.ndarray:
        return self.vectors[:, i]


def _m_orthonormalize(X: np.ndarray, M: sparse.spmatrix) -> np.ndarray:
    G = X.T @ (M @ X)
    G = 0.5 * (G + G.T)
    L = scipy.linalg.cholesky(G, lower=True)
    return scipy.linalg.solve_triangular(L, X.T, lower=True).T


def _residuals(S, M, values: np.ndarray, X: np.ndarray) -> np.ndarray:
    """||S x - lambda M x|| / ((||S|| + |lambda| ||M||) ||x||) per column."""
    scale_S = sparse_norm(S, np.inf)
    scale_M = sparse_norm(M, np.inf)
    num = np.linalg.norm(S @ X - (M @ X) * values, axis=0)
    den = (scale_S + np.abs(values) * scale_M) * np.linalg.norm(X, axis=0)
    return num / np.where(den > 0, den, 1.0)


def smallest_generalized_eigs(
    S: sparse.spmatrix,
    M: sparse.spmatrix,
    k: int,
    config: EigenConfig | None = None,
    label: str = "pencil",
) -> EigenResult:
    """S x = lambda M x 代数最小的 k 个特征对

    小规模问题稠密求解；大规模使用 ARPACK shift-invert，
    sigma = -shift_scale * trace(S) / dim，S 有核时 S - sigma M 仍正定。

    Raises:
        ParameterError: k 越界
        ConvergenceError: ARPACK 迭代耗尽或残差超过配置容差
    """
    config = config or EigenConfig.from_settings()
    S = sparse.csr_matrix(S)
    M = sparse.csr_matrix(M)
    dim = S.shape[0]
    if not 1 <= k <= dim:
        raise ParameterError(f"k must lie in [1, {dim}]", k=k)

    start = time.perf_counter()
    if dim <= config.dense_max_dim or k >= dim - 1:
        values, X = scipy.linalg.eigh(
            S.toarray(), M.toarray(), subset_by_index=[0, k - 1]
        )
        method = "dense"
    else:
        trace = float(S.diagonal().sum())
        sigma = -config.shift_scale * (trace / dim if trace > 0 else 1.0)
        try:
            values, X = eigsh(
                sparse.csc_matrix(S),
                k=k,
                M=sparse.csc_matrix(M),
                sigma=sigma,
                which="LM",
                tol=config.tol,
                maxiter=config.max_iter,
            )
        except ArpackNoConvergence as e:
            partial = np.asarray(getattr(e, "eigenvalues", []))
            raise ConvergenceError(
                f"{label}: shift-invert iteration did not converge "
                f"({partial.size} of {k} eigenpairs)",
            ) from e
        method = f"shift-invert sigma={sigma:.3e}"
        order = np.argsort(values)
        values, X = values[order], X[:, order]
        X = _m_orthonormalize(X, M)

    residuals = _residuals(S, M, values, X)
    worst = float(residuals.max(initial=0.0))
    perf_logger.info(
        f"eigs {label}: dim {dim}, k {k}, {method}, max residual {worst:.2e}, "
        f"{time.perf_counter() - start:.3f}s"
    )
    if worst > config.residual_tol:
        raise ConvergenceError(
            f"{label}: eigen residual {worst:.2e} above {config.residual_tol:.0e}",
            residuals=residuals.tolist(),
        )
    return EigenResult(values=values, vectors=X, residuals=residuals)
