#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""schemas 模块"""

from .base import BaseSchema
from .energy import EnergySpec
from .generator import GeneratorSidecar
from .params import (
    BracketSphereParams,
    BracketTorusParams,
    EigenfieldsParams,
    ExperimentParams,
    HodgeCompareParams,
    InterpolateParams,
    MeshParams,
    RotationInvarianceParams,
    SpectrumSphereParams,
    VectorHeatParams,
)
from .report import ExperimentReport

__all__ = [
    "BaseSchema",
    "EnergySpec",
    "GeneratorSidecar",
    "ExperimentReport",
    "ExperimentParams",
    "MeshParams",
    "SpectrumSphereParams",
    "HodgeCompareParams",
    "RotationInvarianceParams",
    "BracketSphereParams",
    "BracketTorusParams",
    "InterpolateParams",
    "VectorHeatParams",
    "EigenfieldsParams",
]
