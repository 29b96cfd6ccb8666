#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""能量规格 Schema"""

from pydantic import ConfigDict, Field

from phongfield.core.constants import HODGE_COTAN_SCALE, EnergyKind
from phongfield.core.exceptions import ParameterError

from .base import BaseSchema


class EnergySpec(BaseSchema):
    """协变导数标量、无迹对称与反对称部分的非负权重"""

    model_config = ConfigDict(frozen=True)

    c_scalar: float = Field(default=1.0, ge=0.0, description="标量部分 (divergence) 权重")
    c_traceless: float = Field(default=1.0, ge=0.0, description="无迹对称部分权重")
    c_antisym: float = Field(default=1.0, ge=0.0, description="反对称部分 (curl) 权重")

    @property
    def weights(self) -> tuple[float, float, float]:
        return (self.c_scalar, self.c_traceless, self.c_antisym)

    @property
    def is_zero(self) -> bool:
        return not any(self.weights)

    def require_nonzero(self) -> "EnergySpec":
        if self.is_zero:
            raise ParameterError("energy spec needs at least one positive weight")
        return self

    def scaled(self, factor: float) -> "EnergySpec":
        return EnergySpec(
            c_scalar=self.c_scalar * factor,
            c_traceless=self.c_traceless * factor,
            c_antisym=self.c_antisym * factor,
        )

    def __add__(self, other: "EnergySpec") -> "EnergySpec":
        return EnergySpec(
            c_scalar=self.c_scalar + other.c_scalar,
            c_traceless=self.c_traceless + other.c_traceless,
            c_antisym=self.c_antisym + other.c_antisym,
        )

    @classmethod
    def from_kind(cls, kind: EnergyKind | str) -> "EnergySpec":
        c = EnergyKind(kind).weights
        return cls(c_scalar=c[0], c_traceless=c[1], c_antisym=c[2])

    @classmethod
    def connection(cls) -> "EnergySpec":
        return cls.from_kind(EnergyKind.CONNECTION)

    @classmethod
    def hodge_dirichlet(cls) -> "EnergySpec":
        """缩放到 div^2 + curl^2 Dirichlet 能量的 Hodge 能量"""
        return cls.from_kind(EnergyKind.HODGE).scaled(HODGE_COTAN_SCALE)
