"""
Error hierarchy for mesh loading, validation, curvature and morphing.
All errors derive from ValueError so callers that only care about
"bad input" can keep catching that.
"""

from typing import Optional, Tuple


class MeshError(ValueError):
    """Base class for every mesh-related failure"""


class MalformedFileError(MeshError):
    """OBJ file could not be parsed"""

    def __init__(self, message: str, line_number: Optional[int] = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class MeshIndexError(MeshError):
    """A face references a vertex that does not exist"""


class NotClosedManifoldError(MeshError):
    """An edge is shared by a number of faces other than two"""

    def __init__(self, message: str, edge: Tuple[int, int]):
        super().__init__(message)
        self.edge = edge


class OrientationError(MeshError):
    """Inconsistent winding: shared edge traversed the same way, or inward-facing surface"""

    def __init__(self, message: str, edge: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.edge = edge


class DegenerateFaceError(MeshError):
    """Face has (numerically) zero area"""

    def __init__(self, message: str, face: int):
        super().__init__(message)
        self.face = face


class DegenerateNormalError(MeshError):
    """Averaged vertex normal cancels out (pinched vertex)"""

    def __init__(self, message: str, vertex: int):
        super().__init__(message)
        self.vertex = vertex


class TopologyError(MeshError):
    """Vertex has too few incident edges or faces"""

    def __init__(self, message: str, vertex: int):
        super().__init__(message)
        self.vertex = vertex


class MeshWriteError(MeshError):
    """Mesh could not be written to disk"""


class SpecError(ValueError):
    """Invalid generator, schedule or run parameters"""


class SettingsError(ValueError):
    """Invalid value in the environment configuration"""


class ObserverError(RuntimeError):
    """A checkpoint observer raised; the run is aborted"""

    def __init__(self, message: str, iteration: int):
        super().__init__(message)
        self.iteration = iteration


class MorphFailure(RuntimeError):
    """A morph step failed numerically in the middle of a run"""

    def __init__(self, message: str, iteration: int, cause: Exception):
        super().__init__(message)
        self.iteration = iteration
        self.cause = cause
