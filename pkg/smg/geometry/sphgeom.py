# smg/geometry/sphgeom.py

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from smg.core.errors import DegenerateDirectionError, InvalidInputError

# Inputs further than this from unit norm are rejected.
UNIT_TOL = 1e-9
# Points closer than this are one point.
IDENTITY_TOL = 1e-12
# Great circles whose normals' cross product is below this are coplanar.
COPLANAR_TOL = 1e-10

TWO_PI = 2.0 * math.pi


# -----------------------------------------------------------
# Value types
# -----------------------------------------------------------

@dataclass(frozen=True)
class UnitVector:
    """A point on the unit sphere (vertex position or cap center)."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(n - 1.0) > UNIT_TOL:
            raise InvalidInputError(
                f"({self.x}, {self.y}, {self.z}) has norm {n!r}; not a unit vector"
            )
        if n != 1.0:
            object.__setattr__(self, "x", self.x / n)
            object.__setattr__(self, "y", self.y / n)
            object.__setattr__(self, "z", self.z / n)

    @classmethod
    def of(cls, x: float, y: float, z: float) -> UnitVector:
        """Normalize an arbitrary non-zero vector onto the sphere."""
        n = math.sqrt(x * x + y * y + z * z)
        if n < IDENTITY_TOL:
            raise InvalidInputError("cannot normalize the zero vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_array(cls, a: Sequence[float] | np.ndarray) -> UnitVector:
        return cls(float(a[0]), float(a[1]), float(a[2]))

    @classmethod
    def from_spherical(cls, theta: float, phi: float) -> UnitVector:
        """theta is colatitude, phi is longitude, both in radians."""
        st = math.sin(theta)
        return cls.of(st * math.cos(phi), st * math.sin(phi), math.cos(theta))

    @property
    def array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    def __neg__(self) -> UnitVector:
        return UnitVector(-self.x, -self.y, -self.z)


VectorLike = Union[UnitVector, np.ndarray, Sequence[float]]


def as_array(v: VectorLike) -> np.ndarray:
    if isinstance(v, UnitVector):
        return v.array
    return np.asarray(v, dtype=float)


def _require_unit(a: np.ndarray) -> None:
    norms = np.linalg.norm(a, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise InvalidInputError(
            f"input is not unit-norm (max deviation {float(np.max(np.abs(norms - 1.0))):.3e})"
        )


def normalize(a: np.ndarray) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    return a / np.linalg.norm(a, axis=-1, keepdims=True)


def to_spherical(v: VectorLike) -> tuple[float, float]:
    """(colatitude, longitude in [0, 2pi)) of a unit vector."""
    a = as_array(v)
    theta = math.atan2(math.hypot(a[0], a[1]), a[2])
    phi = math.atan2(a[1], a[0]) % TWO_PI
    return theta, phi


def from_spherical(theta: np.ndarray | float, phi: np.ndarray | float) -> np.ndarray:
    """Vectorized inverse of to_spherical; returns (..., 3)."""
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    st = np.sin(theta)
    return np.stack([st * np.cos(phi), st * np.sin(phi), np.cos(theta)], axis=-1)


# -----------------------------------------------------------
# Distances
# -----------------------------------------------------------

def angular_distance(u: VectorLike, v: VectorLike) -> float | np.ndarray:
    """
    Great-circle angle between unit vectors, in [0, pi].

    Uses atan2(|u x v|, u . v), which keeps full precision near 0 and near pi.
    Broadcasts over (..., 3) arrays; scalar inputs give a float.
    """
    a = as_array(u)
    b = as_array(v)
    _require_unit(a)
    _require_unit(b)

    s = np.linalg.norm(np.cross(a, b), axis=-1)
    c = np.sum(a * b, axis=-1)
    d = np.arctan2(s, c)
    if np.ndim(d) == 0:
        return float(d)
    return d


def pairwise_distances(points: np.ndarray) -> np.ndarray:
    """Full (n, n) matrix of angular distances."""
    p = np.asarray(points, dtype=float)
    _require_unit(p)
    cross = np.cross(p[:, None, :], p[None, :, :])
    s = np.linalg.norm(cross, axis=-1)
    c = p @ p.T
    return np.arctan2(s, c)


# -----------------------------------------------------------
# Tangents and corner angles
# -----------------------------------------------------------

def tangent_direction(at: VectorLike, toward: VectorLike) -> np.ndarray:
    """Unit tangent at `at` pointing along the minor arc toward `toward`."""
    a = as_array(at)
    b = as_array(toward)
    _require_unit(a)
    _require_unit(b)

    cr = np.cross(a, b)
    s = float(np.linalg.norm(cr))
    if s < IDENTITY_TOL:
        raise DegenerateDirectionError(
            "tangent direction undefined for coincident or antipodal points"
        )
    # (a x b) x a = b - (a.b) a for unit a
    t = np.cross(cr, a) / s
    return t / np.linalg.norm(t)


def tangent_frame(at: VectorLike) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal (e1, e2) spanning the tangent plane with e1 x e2 = at."""
    a = as_array(at)
    ref = np.array([0.0, 0.0, 1.0]) if abs(a[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    e1 = np.cross(ref, a)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(a, e1)
    return e1, e2


def ccw_angle(from_dir: np.ndarray, to_dir: np.ndarray, normal: np.ndarray) -> float:
    """Angle in [0, 2pi) turning counterclockwise about `normal` from one tangent to another."""
    sin_part = float(np.dot(normal, np.cross(from_dir, to_dir)))
    cos_part = float(np.dot(from_dir, to_dir))
    return math.atan2(sin_part, cos_part) % TWO_PI


class Side(Enum):
    """Which side of a boundary walk prev -> apex -> next the angle is measured on."""

    LEFT = "left"
    RIGHT = "right"


def corner_angle(
    prev: VectorLike,
    apex: VectorLike,
    next: VectorLike,
    side: Side = Side.LEFT,
) -> float:
    """
    Angle at `apex` between the arcs toward `prev` and `next`, in (0, 2pi).

    LEFT is the side on the left of the walk prev -> apex -> next as seen from
    outside the sphere; RIGHT is its complement. Reflex angles are returned as is.
    """
    c = as_array(apex)
    t_prev = tangent_direction(c, prev)
    t_next = tangent_direction(c, next)

    if side is Side.LEFT:
        angle = ccw_angle(t_next, t_prev, c)
    else:
        angle = ccw_angle(t_prev, t_next, c)

    if angle < IDENTITY_TOL or angle > TWO_PI - IDENTITY_TOL:
        raise DegenerateDirectionError("both arcs leave the apex in the same direction")
    return angle


# -----------------------------------------------------------
# Arcs and intersections
# -----------------------------------------------------------

@dataclass(frozen=True)
class Arc:
    """Minor great-circle arc between two unit vectors."""

    a: UnitVector
    b: UnitVector

    def __post_init__(self) -> None:
        d = angular_distance(self.a, self.b)
        if not (IDENTITY_TOL < d < math.pi - IDENTITY_TOL):
            raise InvalidInputError(f"arc endpoints at distance {d!r}; minor arc undefined")

    @classmethod
    def between(cls, a: VectorLike, b: VectorLike) -> Arc:
        return cls(UnitVector.from_array(as_array(a)), UnitVector.from_array(as_array(b)))

    @property
    def length(self) -> float:
        return float(angular_distance(self.a, self.b))

    def normal(self) -> np.ndarray:
        return normalize(np.cross(self.a.array, self.b.array))


class IntersectionKind(Enum):
    DISJOINT = "disjoint"
    SHARED_ENDPOINT = "shared_endpoint"
    CROSSING = "crossing"
    OVERLAP = "overlap"


@dataclass(frozen=True)
class IntersectionResult:
    kind: IntersectionKind
    point: Optional[UnitVector] = None


def _arc_coordinate(p: np.ndarray, start: np.ndarray, along: np.ndarray) -> float:
    """Signed angle of p from `start`, in (-pi, pi], on the arc's great circle."""
    return math.atan2(float(np.dot(p, along)), float(np.dot(p, start)))


def _same_point(p: np.ndarray, q: np.ndarray) -> bool:
    return float(np.linalg.norm(p - q)) < IDENTITY_TOL


def arc_intersection(s: Arc, t: Arc) -> IntersectionResult:
    """
    Classify how two minor arcs meet.

    CROSSING means the arcs share a point that is not an endpoint of both
    (a proper crossing, or an endpoint of one touching the interior of the
    other); OVERLAP means coplanar arcs whose interiors share a sub-arc.
    """
    a1, b1 = s.a.array, s.b.array
    a2, b2 = t.a.array, t.b.array
    n1, n2 = s.normal(), t.normal()
    len1, len2 = s.length, t.length

    shared = [
        p for p in (a1, b1) if _same_point(p, a2) or _same_point(p, b2)
    ]

    along1 = np.cross(n1, a1)
    along2 = np.cross(n2, a2)

    m = np.cross(n1, n2)
    m_norm = float(np.linalg.norm(m))

    if m_norm < COPLANAR_TOL:
        # Same great circle: compare the arcs as intervals in s's coordinate.
        def wrapped(p: np.ndarray) -> float:
            return _arc_coordinate(p, a1, along1) % TWO_PI

        ta, tb = wrapped(a2), wrapped(b2)
        start = ta if abs(((tb - ta) % TWO_PI) - len2) < 1e-9 else tb
        for k in (-1, 0, 1):
            lo = max(0.0, start + k * TWO_PI)
            hi = min(len1, start + len2 + k * TWO_PI)
            if hi - lo > IDENTITY_TOL:
                return IntersectionResult(IntersectionKind.OVERLAP)
        if shared:
            return IntersectionResult(IntersectionKind.SHARED_ENDPOINT)
        return IntersectionResult(IntersectionKind.DISJOINT)

    direction = m / m_norm
    for p in (direction, -direction):
        u = _arc_coordinate(p, a1, along1)
        v = _arc_coordinate(p, a2, along2)
        on_s = -IDENTITY_TOL <= u <= len1 + IDENTITY_TOL
        on_t = -IDENTITY_TOL <= v <= len2 + IDENTITY_TOL
        if not (on_s and on_t):
            continue

        end_s = u <= IDENTITY_TOL or u >= len1 - IDENTITY_TOL
        end_t = v <= IDENTITY_TOL or v >= len2 - IDENTITY_TOL
        if end_s and end_t:
            if shared:
                return IntersectionResult(IntersectionKind.SHARED_ENDPOINT)
            # endpoints within tolerance of each other but not identified
            return IntersectionResult(
                IntersectionKind.CROSSING, UnitVector.from_array(p)
            )
        return IntersectionResult(IntersectionKind.CROSSING, UnitVector.from_array(p))

    return IntersectionResult(IntersectionKind.DISJOINT)


# -----------------------------------------------------------
# Areas
# -----------------------------------------------------------

def walk_area(corner_angles: Sequence[float], k: int | None = None) -> float:
    """
    Gauss-Bonnet area of a closed boundary walk with geodesic sides:
        sum(angles) - (k - 2) * pi
    where k counts edge traversals (an edge seen from both sides counts twice).
    """
    if k is None:
        k = len(corner_angles)
    if k < 3:
        raise InvalidInputError(f"walk of length {k}; need at least 3")
    return float(math.fsum(corner_angles) - (k - 2) * math.pi)


def signed_triangle_area(a: VectorLike, b: VectorLike, c: VectorLike) -> float:
    """Signed area of the small triangle abc; positive when abc is counterclockwise."""
    p, q, r = as_array(a), as_array(b), as_array(c)
    num = float(np.dot(p, np.cross(q, r)))
    den = 1.0 + float(np.dot(p, q) + np.dot(q, r) + np.dot(r, p))
    return 2.0 * math.atan2(num, den)


def fan_area(vertices: Sequence[VectorLike]) -> float:
    """Area of a simple polygon by fan triangulation from its first vertex."""
    pts = [as_array(v) for v in vertices]
    if len(pts) < 3:
        raise InvalidInputError("polygon needs at least 3 vertices")
    return math.fsum(
        signed_triangle_area(pts[0], pts[i], pts[i + 1]) for i in range(1, len(pts) - 1)
    )


def sample_arc(a: VectorLike, b: VectorLike, n: int = 64) -> np.ndarray:
    """n points along the minor arc from a to b (slerp), endpoints included."""
    p, q = as_array(a), as_array(b)
    omega = float(angular_distance(p, q))
    ts = np.linspace(0.0, 1.0, n)
    if omega < IDENTITY_TOL:
        return np.repeat(p[None, :], n, axis=0)
    so = math.sin(omega)
    w1 = np.sin((1.0 - ts) * omega) / so
    w2 = np.sin(ts * omega) / so
    return w1[:, None] * p[None, :] + w2[:, None] * q[None, :]
