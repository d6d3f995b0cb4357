# smg/core/errors.py

from __future__ import annotations

from collections.abc import Sequence


class SmgError(Exception):
    """Base class for every error raised by the smg package."""


class InvalidInputError(SmgError, ValueError):
    pass


class DegenerateDirectionError(SmgError, ValueError):
    """Tangent direction undefined: coincident or antipodal points."""


class DegenerateEmbeddingError(SmgError, ValueError):
    """Two edges leave a vertex with the same initial tangent."""


class MinimumDegreeError(SmgError, ValueError):
    def __init__(self, vertex: int, degree: int):
        super().__init__(
            f"vertex {vertex} has degree {degree}; face tracing needs degree >= 2"
        )
        self.vertex = vertex
        self.degree = degree


class ChargeDomainError(SmgError, ValueError):
    pass


class GroupClosureError(SmgError, RuntimeError):
    pass


class NonInvariantPointSetError(SmgError, ValueError):
    pass


class ConstructionError(SmgError, RuntimeError):
    pass


class SingularSystemError(ConstructionError):
    pass


class JacobianCheckError(ConstructionError):
    pass


class NoConvergenceError(ConstructionError):
    def __init__(self, message: str, history: Sequence[float]):
        super().__init__(message)
        self.history = list(history)


class GraphFileError(SmgError, ValueError):
    pass
