#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
日志配置模块
提供统一的日志记录功能
"""

import logging
import os
from logging.handlers import RotatingFileHandler

try:
    import colorama
    from colorama import Fore, Style
    colorama.init()
    HAS_COLORAMA = True
except ImportError:
    HAS_COLORAMA = False
    class Fore:
        GREEN = BLUE = YELLOW = CYAN = ""
    class Style:
        RESET_ALL = ""

# 配置基本日志格式
BASE_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"

# 标准日志文件与性能日志文件
LOG_FILE_NAME = "phongfield.log"
PERF_LOG_FILE_NAME = "performance.log"

_perf_enabled = True


def _get_log_level() -> str:
    """获取日志级别（不缓存，始终从 settings 读取）"""
    try:
        from phongfield.core.config import settings
        return settings.LOG_LEVEL
    except Exception:
        return "INFO"


def _get_file_handler(file_name: str, fmt: str) -> RotatingFileHandler | None:
    """LOG_TO_FILE 打开时创建滚动文件处理器"""
    try:
        from phongfield.core.config import settings
        if not settings.LOG_TO_FILE:
            return None
        log_dir = settings.get_log_path()
    except Exception:
        return None

    handler = RotatingFileHandler(
        os.path.join(log_dir, file_name),
        maxBytes=10 * 1024 * 1024,  # 10MB
        backupCount=5,
    )
    handler.setFormatter(logging.Formatter(fmt))
    return handler


def get_logger(name: str) -> logging.Logger:
    """获取标准日志记录器

    Args:
        name: 日志记录器名称，通常为 ``__name__``

    Returns:
        配置好的日志记录器
    """
    logger = logging.getLogger(name)

    log_level = _get_log_level()
    level = getattr(logging, log_level, logging.INFO)

    # 始终更新日志级别
    logger.setLevel(level)

    # 如果已经有处理器，更新它们的级别后返回
    if logger.handlers:
        for handler in logger.handlers:
            handler.setLevel(level)
        return logger

    # 控制台处理器
    console_handler = logging.StreamHandler()
    console_handler.setLevel(level)

    # 带颜色的控制台格式
    if HAS_COLORAMA:
        console_format = f"{Fore.GREEN}%(asctime)s{Style.RESET_ALL} - " \
                        f"{Fore.BLUE}%(name)s{Style.RESET_ALL} - " \
                        f"{Fore.YELLOW}%(levelname)s{Style.RESET_ALL} - " \
                        f"%(message)s"
    else:
        console_format = BASE_FORMAT

    console_handler.setFormatter(logging.Formatter(console_format))
    logger.addHandler(console_handler)

    file_handler = _get_file_handler(LOG_FILE_NAME, BASE_FORMAT)
    if file_handler is not None:
        file_handler.setLevel(level)
        logger.addHandler(file_handler)

    return logger


def get_perf_logger() -> logging.Logger:
    """获取性能日志记录器（组装、分解、特征求解耗时）

    Returns:
        性能日志记录器
    """
    if not _perf_enabled:
        return logging.getLogger("null")

    logger = logging.getLogger("performance")
    logger.setLevel(logging.INFO)

    if logger.handlers:
        return logger

    console_handler = logging.StreamHandler()
    console_handler.setLevel(logging.INFO)

    if HAS_COLORAMA:
        console_format = f"{Fore.CYAN}perf - %(asctime)s{Style.RESET_ALL} - %(message)s"
    else:
        console_format = "perf - %(asctime)s - %(message)s"

    console_handler.setFormatter(logging.Formatter(console_format))
    logger.addHandler(console_handler)

    file_handler = _get_file_handler(PERF_LOG_FILE_NAME, "%(asctime)s - perf - %(message)s")
    if file_handler is not None:
        logger.addHandler(file_handler)

    return logger


def set_log_level(level: str) -> None:
    """设置日志级别，对已创建和之后创建的 phongfield 日志记录器都生效"""
    from phongfield.core.config import settings
    settings.LOG_LEVEL = level
    numeric = getattr(logging, level, logging.INFO)
    for name, logger in logging.Logger.manager.loggerDict.items():
        if name.startswith("phongfield") and isinstance(logger, logging.Logger):
            logger.setLevel(numeric)
            for handler in logger.handlers:
                handler.setLevel(numeric)
