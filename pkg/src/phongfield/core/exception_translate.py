#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""异常翻译器（Exception Translator）

用于把底层数值库（numpy / scipy）抛出的异常收敛为 PhongFieldError，
让 CLI 输出结构化错误和对应的退出码。

约定：
- 本模块只负责“异常类型映射”，不打印、不退出
- 日志只在调用方记录一次
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal

from numpy.linalg import LinAlgError
from pydantic import ValidationError
from scipy.sparse.linalg import ArpackError, ArpackNoConvergence
from scipy.spatial import QhullError

from phongfield.core.exceptions import (
    ConvergenceError,
    FactorizationError,
    GenerationError,
    ParameterError,
    PhongFieldError,
)

LogLevel = Literal["debug", "info", "warning", "error"]


@dataclass(frozen=True)
class ExceptionTranslation:
    """翻译结果"""

    error: PhongFieldError
    log_level: LogLevel = "error"


def _iter_exception_chain(exc: BaseException) -> list[BaseException]:
    """广度优先遍历 __cause__ / __context__，每个异常只访问一次"""
    seen: set[int] = set()
    queue: list[BaseException] = [exc]
    out: list[BaseException] = []

    while queue:
        cur = queue.pop(0)
        cur_id = id(cur)
        if cur_id in seen:
            continue
        seen.add(cur_id)
        out.append(cur)

        cause = getattr(cur, "__cause__", None)
        if isinstance(cause, BaseException):
            queue.append(cause)

        context = getattr(cur, "__context__", None)
        if isinstance(context, BaseException):
            queue.append(context)

    return out


def translate_exception(exc: BaseException) -> ExceptionTranslation | None:
    """把第三方异常翻译为 PhongFieldError

    无法识别时返回 None，由调用方按通用失败处理。
    """
    chain = _iter_exception_chain(exc)

    for e in chain:
        if isinstance(e, PhongFieldError):
            return ExceptionTranslation(error=e, log_level="error")

    # 参数模型拒绝越界的 CLI 取值
    for e in chain:
        if isinstance(e, ValidationError):
            return ExceptionTranslation(
                error=ParameterError(
                    "; ".join(
                        f"{'.'.join(str(p) for p in err['loc']) or 'value'}: {err['msg']}"
                        for err in e.errors()
                    )
                ),
            )

    for e in chain:
        if isinstance(e, FileNotFoundError):
            return ExceptionTranslation(error=ParameterError(f"file not found: {e.filename}"))

    # ARPACK 迭代次数耗尽（shift-invert 特征求解）
    for e in chain:
        if isinstance(e, ArpackNoConvergence):
            return ExceptionTranslation(
                error=ConvergenceError(
                    f"eigen-solver did not converge: {e}",
                    residuals=[],
                ),
                log_level="warning",
            )

    for e in chain:
        if isinstance(e, ArpackError):
            return ExceptionTranslation(
                error=ConvergenceError(f"ARPACK failure: {e}"),
            )

    # SuperLU 以 RuntimeError 报告奇异主元
    for e in chain:
        if isinstance(e, RuntimeError) and "singular" in str(e).lower():
            return ExceptionTranslation(
                error=FactorizationError(f"sparse factorization failed: {e}"),
            )

    for e in chain:
        if isinstance(e, LinAlgError):
            return ExceptionTranslation(
                error=FactorizationError(f"dense factorization failed: {e}"),
            )

    for e in chain:
        if isinstance(e, QhullError):
            return ExceptionTranslation(
                error=GenerationError(f"Qhull failed: {e}"),
                log_level="warning",
            )

    return None
