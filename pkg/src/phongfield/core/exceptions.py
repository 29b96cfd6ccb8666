"""Custom exceptions for phongfield.

Provides structured error handling with error codes, messages and the
process exit code the CLI reports.
"""

from typing import Any, Optional

from phongfield.core.constants import ExitCode


class PhongFieldError(Exception):
    """Base exception with structured error info.

    Attributes:
        code: Error code string (e.g., "NON_MANIFOLD")
        message: Human-readable error message
        exit_code: Process exit code used by the CLI
        details: Optional additional error details
    """

    def __init__(
        self,
        code: str,
        message: str,
        exit_code: int = ExitCode.PRECONDITION,
        details: Optional[dict[str, Any]] = None,
    ):
        self.code = code
        self.message = message
        self.exit_code = int(exit_code)
        self.details = details or {}
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        """Convert exception to a report dict."""
        return {
            "success": False,
            "error": {
                "code": self.code,
                "message": self.message,
                **self.details,
            }
        }


# ============= Mesh input =============

class MeshParseError(PhongFieldError):
    """Malformed OBJ record."""
    def __init__(self, message: str, line: int | None = None):
        super().__init__("MESH_PARSE", message, details={"line": line})


class MeshIndexError(PhongFieldError):
    """Triangle index outside [0, |V|)."""
    def __init__(self, index: int, num_vertices: int):
        super().__init__(
            "MESH_INDEX",
            f"vertex index {index} out of range for {num_vertices} vertices",
            details={"index": index, "num_vertices": num_vertices},
        )


class NonManifoldError(PhongFieldError):
    """An edge borders more than two triangles."""
    def __init__(self, edge: tuple[int, int], count: int):
        super().__init__(
            "NON_MANIFOLD",
            f"edge {edge} borders {count} triangles",
            details={"edge": list(edge), "count": count},
        )


class OrientationError(PhongFieldError):
    """Two triangles traverse a shared edge in the same direction."""
    def __init__(self, edge: tuple[int, int]):
        super().__init__(
            "INCONSISTENT_ORIENTATION",
            f"edge {edge} is traversed in the same direction by both incident triangles",
            details={"edge": list(edge)},
        )


class DegenerateTriangleError(PhongFieldError):
    """Triangle area at or below the degeneracy threshold."""
    def __init__(self, triangle: int, area: float):
        super().__init__(
            "DEGENERATE_TRIANGLE",
            f"triangle {triangle} has area {area:.3e}",
            details={"triangle": triangle, "area": area},
        )


class BoundaryUnsupportedError(PhongFieldError):
    """Operation requires a closed mesh."""
    def __init__(self, operation: str, boundary_edges: int):
        super().__init__(
            "BOUNDARY_UNSUPPORTED",
            f"{operation} requires a closed mesh ({boundary_edges} boundary edges)",
            details={"operation": operation, "boundary_edges": boundary_edges},
        )


class IsolatedVertexError(PhongFieldError):
    """Vertex with no incident triangle."""
    def __init__(self, vertex: int):
        super().__init__(
            "ISOLATED_VERTEX",
            f"vertex {vertex} has no incident triangle",
            details={"vertex": vertex},
        )


class TopologyError(PhongFieldError):
    """Mesh is open, disconnected or otherwise unsuitable for a topological query."""
    def __init__(self, message: str, **details):
        super().__init__("TOPOLOGY", message, details=details)


# ============= Geometry =============

class InconsistentNormalError(PhongFieldError):
    """Corner normal disagrees with the face normal or interpolates to ~0."""
    def __init__(self, message: str, triangle: int | None = None, **details):
        super().__init__(
            "INCONSISTENT_NORMALS",
            message,
            details={"triangle": triangle, **details},
        )


class AntipodalError(PhongFieldError):
    """Rodrigues rotation requested between (near) antipodal unit vectors."""
    def __init__(self, margin: float, triangle: int | None = None):
        super().__init__(
            "ANTIPODAL",
            f"rotation between near-antipodal vectors (1 + <v, w> = {margin:.3e})",
            details={"margin": margin, "triangle": triangle},
        )


# ============= Solvers =============

class FactorizationError(PhongFieldError):
    """Sparse factorization failed or the matrix is indefinite."""
    def __init__(self, message: str, pivot: int | None = None, **details):
        super().__init__(
            "FACTORIZATION",
            message,
            details={"pivot": pivot, **details},
        )


class SingularSystemError(PhongFieldError):
    """Constrained system has a singular free block."""
    def __init__(self, message: str = "singular free block", **details):
        super().__init__("SINGULAR_SYSTEM", message, details=details)


class ConvergenceError(PhongFieldError):
    """Iterative solver did not converge."""
    def __init__(self, message: str, residuals: list[float] | None = None):
        super().__init__(
            "NO_CONVERGENCE",
            message,
            exit_code=ExitCode.NO_CONVERGENCE,
            details={"residuals": residuals or []},
        )


# ============= Experiments =============

class ParameterError(PhongFieldError):
    """Invalid operation or command parameter."""
    def __init__(self, message: str = "invalid parameter", **details):
        super().__init__("PARAMETER", message, details=details)


class GenerationError(PhongFieldError):
    """Synthetic geometry could not be generated."""
    def __init__(self, message: str, **details):
        super().__init__("GENERATION", message, details=details)


class OddEigenspaceError(PhongFieldError):
    """Eigenspace grading expects an even-dimensional block."""
    def __init__(self, dim: int, start: Optional[int] = None):
        details: dict[str, Any] = {"dim": dim}
        if start is not None:
            details["start"] = start
        super().__init__(
            "ODD_EIGENSPACE",
            f"eigenspace has odd dimension {dim}",
            details=details,
        )


class UndefinedMetricError(PhongFieldError):
    """Relative error requested for two vanishing fields."""
    def __init__(self, metric: str = "E"):
        super().__init__(
            "UNDEFINED_METRIC",
            f"{metric} is undefined: both fields vanish",
            details={"metric": metric},
        )
