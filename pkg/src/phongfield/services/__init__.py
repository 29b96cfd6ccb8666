#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""services 模块: 每个实验一个服务"""

from .base_experiment import BaseExperimentService, ExperimentRun
from .bracket_service import (
    BracketSphereService,
    BracketTorusService,
    bracket_sphere_service,
    bracket_torus_service,
)
from .field_service import (
    EigenfieldsService,
    InterpolateService,
    VectorHeatService,
    eigenfields_service,
    interpolate_service,
    vector_heat_service,
)
from .hodge_service import HodgeService, hodge_service
from .rotation_service import RotationService, rotation_service
from .spectrum_service import SpectrumService, spectrum_service

SERVICES: dict[str, BaseExperimentService] = {
    s.EXPERIMENT: s
    for s in (
        spectrum_service,
        hodge_service,
        rotation_service,
        bracket_sphere_service,
        bracket_torus_service,
        interpolate_service,
        vector_heat_service,
        eigenfields_service,
    )
}

__all__ = [
    "BaseExperimentService", "ExperimentRun", "SERVICES",
    "spectrum_service", "SpectrumService",
    "hodge_service", "HodgeService",
    "rotation_service", "RotationService",
    "bracket_sphere_service", "BracketSphereService",
    "bracket_torus_service", "BracketTorusService",
    "interpolate_service", "InterpolateService",
    "vector_heat_service", "VectorHeatService",
    "eigenfields_service", "EigenfieldsService",
]
