"""Pydantic Schema 基类模块

提供统一的 Schema 基类。
"""

from pydantic import BaseModel, ConfigDict


class BaseSchema(BaseModel):
    """Schema 基类

    所有报告、参数类都应继承此基类，便于全局控制 Schema 配置。

    特性:
        - from_attributes: 支持从 dataclass 创建
        - populate_by_name: 支持别名输入
        - arbitrary_types_allowed: 允许 numpy 等非 pydantic 类型字段
    """
    model_config = ConfigDict(
        from_attributes=True,
        populate_by_name=True,
        arbitrary_types_allowed=True,
    )
