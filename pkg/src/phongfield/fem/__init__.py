#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""有限元模块: quadrature, element matrices, assembly and solvers."""

from .assembly import assemble, assemble_rhs, lump
from .basis import TangentBasis
from .quadrature import QuadratureRule, get_quadrature, quadrature_3pt
from .rotation import build_J, rotation_invariance
from .solvers import EigenResult, smallest_generalized_eigs, solve_constrained, solve_spd

__all__ = [
    "EigenResult",
    "QuadratureRule",
    "TangentBasis",
    "assemble",
    "assemble_rhs",
    "build_J",
    "get_quadrature",
    "lump",
    "quadrature_3pt",
    "rotation_invariance",
    "smallest_generalized_eigs",
    "solve_constrained",
    "solve_spd",
]
