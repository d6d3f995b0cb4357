# smg/graph/embedding.py

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from smg.core.errors import (
    DegenerateDirectionError,
    DegenerateEmbeddingError,
    InvalidInputError,
    MinimumDegreeError,
)
from smg.core.logger import get_logger
from smg.geometry.sphgeom import (
    UNIT_TOL,
    Side,
    UnitVector,
    corner_angle,
    tangent_direction,
    tangent_frame,
    walk_area,
)

logger = get_logger(__name__)

# Minimum azimuth gap between two edges leaving the same vertex.
AZIMUTH_TOL = 1e-10

Edge = tuple[int, int]
RotationSystem = tuple[tuple[int, ...], ...]


# -------------------------------------------------------------------
# Graph model
# -------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EmbeddedGraph:
    """
    Vertices on the unit sphere joined by minor arcs of common angular length.

    `lam` is the edge angular length lambda. Edges are stored canonically:
    (i, j) with i < j, sorted, without duplicates. Edge lengths are not
    checked here; that is the verifier's job.
    """

    vertices: np.ndarray
    edges: tuple[Edge, ...]
    lam: float
    name: str = ""

    def __post_init__(self) -> None:
        verts = np.array(self.vertices, dtype=float).reshape(-1, 3)
        if len(verts):
            norms = np.linalg.norm(verts, axis=1)
            bad = np.flatnonzero(np.abs(norms - 1.0) > UNIT_TOL)
            if len(bad):
                raise InvalidInputError(f"vertex {int(bad[0])} is not a unit vector")
        verts.setflags(write=False)
        object.__setattr__(self, "vertices", verts)

        if not (0.0 < float(self.lam) < math.pi):
            raise InvalidInputError(f"lambda={self.lam!r} outside (0, pi)")
        object.__setattr__(self, "lam", float(self.lam))

        object.__setattr__(self, "edges", canonical_edges(self.edges, len(verts)))

    # ---------------------------------------------------------------
    # Basic accessors
    # ---------------------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return int(self.vertices.shape[0])

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def vertex(self, i: int) -> UnitVector:
        return UnitVector.from_array(self.vertices[i])

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.n_vertices)]
        for i, j in self.edges:
            adj[i].append(j)
            adj[j].append(i)
        return tuple(tuple(sorted(a)) for a in adj)

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.neighbors], dtype=int)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def edge_lengths(self) -> np.ndarray:
        if not self.edges:
            return np.zeros(0)
        idx = np.array(self.edges)
        a = self.vertices[idx[:, 0]]
        b = self.vertices[idx[:, 1]]
        return np.arctan2(np.linalg.norm(np.cross(a, b), axis=1), np.sum(a * b, axis=1))

    def with_lambda(self, lam: float) -> EmbeddedGraph:
        return EmbeddedGraph(self.vertices, self.edges, lam, self.name)

    def with_edges(self, edges: Iterable[Edge]) -> EmbeddedGraph:
        return EmbeddedGraph(self.vertices, tuple(edges), self.lam, self.name)


def canonical_edges(edges: Iterable[Sequence[int]], n_vertices: int) -> tuple[Edge, ...]:
    """Validate an edge list and return it as sorted (i < j) pairs."""
    seen: set[Edge] = set()
    for raw in edges:
        i, j = int(raw[0]), int(raw[1])
        if i == j:
            raise InvalidInputError(f"edge [{i}, {j}] is a loop")
        if not (0 <= i < n_vertices and 0 <= j < n_vertices):
            raise InvalidInputError(f"edge [{i}, {j}] references a missing vertex")
        e = (min(i, j), max(i, j))
        if e in seen:
            raise InvalidInputError(f"edge [{e[0]}, {e[1]}] is duplicated")
        seen.add(e)
    return tuple(sorted(seen))


# -------------------------------------------------------------------
# Faces
# -------------------------------------------------------------------

@dataclass(frozen=True)
class Face:
    """
    One closed boundary walk.

    walk[i] is the vertex at corner i and corner_angles[i] the interior angle
    there. `ccw` records whether the canonical walk runs counterclockwise as
    seen from outside the sphere (interior on its left).
    """

    walk: tuple[int, ...]
    corner_angles: tuple[float, ...]
    area: float
    ccw: bool = True

    @property
    def degree(self) -> int:
        return len(self.walk)

    def is_simple_cycle(self) -> bool:
        return len(set(self.walk)) == len(self.walk)

    def oriented_walk(self) -> tuple[int, ...]:
        """The walk with the face interior on its left."""
        return self.walk if self.ccw else tuple(reversed(self.walk))


@dataclass(frozen=True)
class AngleIncidence:
    vertex: int
    face: int
    angle: float


@dataclass(frozen=True)
class FaceSet:
    faces: tuple[Face, ...]
    incidences: tuple[AngleIncidence, ...] = field(default=())

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    def degree_sum(self) -> int:
        return sum(f.degree for f in self.faces)

    def total_area(self) -> float:
        return math.fsum(f.area for f in self.faces)

    def vertex_angle_sums(self, n_vertices: int) -> np.ndarray:
        sums = np.zeros(n_vertices)
        for inc in self.incidences:
            sums[inc.vertex] += inc.angle
        return sums

    def census(self) -> dict[int, int]:
        """Face count per face degree."""
        out: dict[int, int] = {}
        for f in self.faces:
            out[f.degree] = out.get(f.degree, 0) + 1
        return dict(sorted(out.items()))


# -------------------------------------------------------------------
# Rotation system and face tracing
# -------------------------------------------------------------------

def rotation_system(g: EmbeddedGraph) -> RotationSystem:
    """
    Counterclockwise (seen from outside) cyclic order of neighbors at every vertex,
    each cycle rotated to start at its smallest neighbor index.
    """
    rotation: list[tuple[int, ...]] = []
    for v in range(g.n_vertices):
        nbrs = g.neighbors[v]
        if len(nbrs) < 2:
            rotation.append(nbrs)
            continue

        apex = g.vertices[v]
        e1, e2 = tangent_frame(apex)
        azimuths = []
        for u in nbrs:
            try:
                t = tangent_direction(apex, g.vertices[u])
            except DegenerateDirectionError as exc:
                raise DegenerateEmbeddingError(
                    f"edge ({v}, {u}) has no initial tangent: {exc}"
                ) from exc
            azimuths.append(math.atan2(float(t @ e2), float(t @ e1)) % (2 * math.pi))

        order = sorted(range(len(nbrs)), key=lambda k: azimuths[k])
        sorted_az = [azimuths[k] for k in order]
        for k in range(len(order)):
            gap = (sorted_az[(k + 1) % len(order)] - sorted_az[k]) % (2 * math.pi)
            if gap < AZIMUTH_TOL:
                a, b = nbrs[order[k]], nbrs[order[(k + 1) % len(order)]]
                raise DegenerateEmbeddingError(
                    f"edges ({v}, {a}) and ({v}, {b}) leave vertex {v} with the same tangent"
                )

        cyc = [nbrs[k] for k in order]
        start = cyc.index(min(cyc))
        rotation.append(tuple(cyc[start:] + cyc[:start]))

    return tuple(rotation)


def _canonical_walk(
    walk: Sequence[int], angles: Sequence[float]
) -> tuple[tuple[int, ...], tuple[float, ...], bool]:
    k = len(walk)
    best: tuple[tuple[int, ...], tuple[float, ...], bool] | None = None
    for seq, ang, forward in (
        (list(walk), list(angles), True),
        (list(reversed(walk)), list(reversed(angles)), False),
    ):
        for s in range(k):
            cand = tuple(seq[s:] + seq[:s])
            if best is None or cand < best[0]:
                best = (cand, tuple(ang[s:] + ang[:s]), forward)
    assert best is not None
    return best


def trace_faces(g: EmbeddedGraph) -> FaceSet:
    """
    Trace every face as a closed walk with the face on its left.

    Arriving at v along (u, v), the walk leaves along (v, w) where w precedes u
    in v's counterclockwise rotation. Every directed edge is used exactly once.
    """
    for v, d in enumerate(g.degrees):
        if d < 2:
            raise MinimumDegreeError(v, int(d))

    rotation = rotation_system(g)
    position = [{u: k for k, u in enumerate(cyc)} for cyc in rotation]

    visited: set[Edge] = set()
    raw_faces: list[tuple[tuple[int, ...], tuple[float, ...], bool]] = []

    for i, j in g.edges:
        for start in ((i, j), (j, i)):
            if start in visited:
                continue
            darts: list[Edge] = []
            dart = start
            while True:
                visited.add(dart)
                darts.append(dart)
                x, y = dart
                cyc = rotation[y]
                w = cyc[(position[y][x] - 1) % len(cyc)]
                dart = (y, w)
                if dart == start:
                    break

            walk = [d[0] for d in darts]
            angles = []
            for k, (tail, head) in enumerate(darts):
                prev = darts[k - 1][0]
                angles.append(
                    corner_angle(g.vertices[prev], g.vertices[tail], g.vertices[head], Side.LEFT)
                )
            raw_faces.append(_canonical_walk(walk, angles))

    raw_faces.sort(key=lambda f: f[0])

    faces = []
    incidences = []
    for f_idx, (walk, angles, ccw) in enumerate(raw_faces):
        faces.append(
            Face(walk=walk, corner_angles=angles, area=walk_area(angles, len(walk)), ccw=ccw)
        )
        incidences.extend(AngleIncidence(v, f_idx, a) for v, a in zip(walk, angles))

    logger.debug(f"Traced {len(faces)} faces on {g.n_vertices} vertices")
    return FaceSet(faces=tuple(faces), incidences=tuple(incidences))


# -------------------------------------------------------------------
# Euler accounting
# -------------------------------------------------------------------

@dataclass(frozen=True)
class EulerReport:
    V: int
    E: int
    F: int
    chi: int
    connected: bool
    components: int

    @property
    def euler_ok(self) -> bool:
        """V - E + F = 2 when connected; faces counted as boundary walks give 2 per component."""
        return self.chi == 2 * self.components

    def as_tuple(self) -> tuple[int, int, int, int, bool]:
        return (self.V, self.E, self.F, self.chi, self.connected)


def count_components(g: EmbeddedGraph) -> int:
    n = g.n_vertices
    if n == 0:
        return 0
    if not g.edges:
        return n
    idx = np.array(g.edges)
    adj = coo_matrix((np.ones(len(idx)), (idx[:, 0], idx[:, 1])), shape=(n, n))
    n_comp, _ = connected_components(adj, directed=False)
    return int(n_comp)


def euler_report(g: EmbeddedGraph, fs: FaceSet) -> EulerReport:
    components = count_components(g)
    V, E, F = g.n_vertices, g.n_edges, fs.n_faces
    report = EulerReport(
        V=V, E=E, F=F, chi=V - E + F, connected=components == 1, components=components
    )
    if report.connected and report.chi != 2:
        logger.warning(
            f"Connected graph with V - E + F = {report.chi}; the drawing is not a valid embedding"
        )
    return report
