#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""向量场算法: evaluation, bracket, interpolation, heat, spectra, error."""

from .bracket import BracketMode, lie_bracket_pointwise, lie_bracket_project
from .error import field_error
from .evaluation import as_ambient, eval_field, gradient_field, project_ambient
from .heat import source_labels, vector_heat
from .interpolation import interpolate_sparse
from .spectral import eigen_clusters, eigenfields, grade_eigenspace, grade_spectrum

__all__ = [
    "BracketMode",
    "as_ambient",
    "eigen_clusters",
    "eigenfields",
    "eval_field",
    "field_error",
    "grade_eigenspace",
    "grade_spectrum",
    "gradient_field",
    "interpolate_sparse",
    "lie_bracket_pointwise",
    "lie_bracket_project",
    "project_ambient",
    "source_labels",
    "vector_heat",
]
