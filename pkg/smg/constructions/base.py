# smg/constructions/base.py

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from smg.core.errors import ConstructionError, InvalidInputError
from smg.core.logger import get_logger
from smg.geometry.sphgeom import from_spherical, pairwise_distances, to_spherical
from smg.graph.discharging import AuditResult, audit
from smg.graph.embedding import Edge, EmbeddedGraph
from smg.graph.verifier import VerificationReport, VerifyProfile, verify_all
from smg.symmetry.groups import (
    DEFAULT_DEDUP_TOL,
    MATCH_TOL,
    RotationGroup,
    canonical_group_name,
    canonical_representative,
    orbit_elements,
)

logger = get_logger(__name__)

# (orbit index, group element index) producing a point
PointLabel = tuple[int, int]


# -------------------------------------------------------------------
# Orbit parameters
# -------------------------------------------------------------------

@dataclass(frozen=True)
class OrbitParameters:
    """
    Group choice, one (colatitude, longitude) seed per orbit, and lambda.

    Seeds marked not free sit on symmetry axes and are held fixed by the
    solver; only free seeds and lambda are unknowns.
    """

    group: str
    seeds: tuple[tuple[float, float], ...]
    lam: float
    free: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "group", canonical_group_name(self.group))
        normalized = tuple(
            to_spherical(from_spherical(theta, phi)) for theta, phi in self.seeds
        )
        object.__setattr__(self, "seeds", normalized)
        if not self.free:
            object.__setattr__(self, "free", tuple(True for _ in self.seeds))
        if len(self.free) != len(self.seeds):
            raise InvalidInputError("one free flag per seed is required")
        if not (0.0 < self.lam < math.pi):
            raise InvalidInputError(f"lambda={self.lam!r} outside (0, pi)")

    @property
    def n_unknowns(self) -> int:
        return 2 * sum(self.free) + 1

    def vector(self) -> np.ndarray:
        """Free seed coordinates followed by lambda."""
        out: list[float] = []
        for (theta, phi), free in zip(self.seeds, self.free):
            if free:
                out.extend((theta, phi))
        out.append(self.lam)
        return np.array(out, dtype=float)

    def with_vector(self, x: Sequence[float]) -> OrbitParameters:
        x = list(x)
        seeds = []
        k = 0
        for seed, free in zip(self.seeds, self.free):
            if free:
                seeds.append((x[k], x[k + 1]))
                k += 2
            else:
                seeds.append(seed)
        return OrbitParameters(self.group, tuple(seeds), float(x[k]), self.free)

    def seed_points(self) -> np.ndarray:
        return np.array([from_spherical(t, p) for t, p in self.seeds])

    def points(
        self, group: RotationGroup, dedup_tol: float = DEFAULT_DEDUP_TOL
    ) -> tuple[np.ndarray, list[PointLabel]]:
        """All orbit points, orbit by orbit in group-element order, with labels."""
        pts: list[np.ndarray] = []
        labels: list[PointLabel] = []
        for o, seed in enumerate(self.seed_points()):
            for e in orbit_elements(group, seed, dedup_tol):
                pts.append(group.elements[e] @ seed)
                labels.append((o, e))
        return np.array(pts), labels

    def canonical(self, group: RotationGroup) -> OrbitParameters:
        """Seeds replaced by their canonical orbit representatives, free seeds sorted."""
        reps = [to_spherical(canonical_representative(group, p)) for p in self.seed_points()]
        free = [r for r, f in zip(reps, self.free) if f]
        fixed = [r for r, f in zip(reps, self.free) if not f]
        free.sort()
        seeds = tuple(fixed + free)
        flags = tuple([False] * len(fixed) + [True] * len(free))
        return OrbitParameters(self.group, seeds, self.lam, flags)

    def mirrored(self) -> OrbitParameters:
        seeds = tuple(to_spherical(-p) for p in self.seed_points())
        return OrbitParameters(self.group, seeds, self.lam, self.free)


def label_points(
    group: RotationGroup, params: OrbitParameters, points: np.ndarray, tol: float = MATCH_TOL
) -> list[PointLabel]:
    """Find, for every given point, an (orbit, element) pair producing it."""
    seeds = params.seed_points()
    images = np.einsum("gij,oj->ogi", group.elements, seeds)  # (orbits, order, 3)
    labels = []
    for i, p in enumerate(points):
        gaps = np.linalg.norm(images - p, axis=-1)
        o, e = np.unravel_index(int(np.argmin(gaps)), gaps.shape)
        if gaps[o, e] > tol:
            raise ConstructionError(f"point {i} is not in any orbit of the seeds")
        labels.append((int(o), int(e)))
    return labels


# -------------------------------------------------------------------
# Contact graphs
# -------------------------------------------------------------------

def contact_graph_at(points: np.ndarray, threshold: float) -> list[Edge]:
    """All pairs at angular distance <= threshold, as a sorted edge list."""
    if threshold <= 0:
        raise InvalidInputError("threshold must be positive")
    pts = np.asarray(points, dtype=float)
    if len(pts) < 2:
        return []
    dist = pairwise_distances(pts)
    return [(int(i), int(j)) for i, j in np.argwhere(np.triu(dist <= threshold, k=1))]


# -------------------------------------------------------------------
# Results and certification
# -------------------------------------------------------------------

@dataclass
class ConstructionResult:
    graph: EmbeddedGraph
    name: str
    residual_max: float
    iterations: int
    certificate: VerificationReport
    audit: Optional[AuditResult] = None
    parameters: Optional[OrbitParameters] = None
    class_sizes: tuple[int, ...] = field(default=())

    @property
    def certified(self) -> bool:
        return self.certificate.overall and (self.audit is None or self.audit.passed)

    def summary(self) -> dict[str, object]:
        census = None
        if self.audit is not None:
            census = self.audit.euler.F
        return {
            "name": self.name,
            "V": self.graph.n_vertices,
            "E": self.graph.n_edges,
            "F": census,
            "lambda": self.graph.lam,
            "residual_max": self.residual_max,
            "iterations": self.iterations,
            "certified": self.certified,
        }


def certify(
    g: EmbeddedGraph, degree: int = 5, tol: float = 1e-9
) -> tuple[VerificationReport, AuditResult | None]:
    """verify_all in regular mode plus, when faces trace, the discharging audit."""
    profile = VerifyProfile(k=degree, regular=True, tol=tol, face_conditions=degree == 5)
    report = verify_all(g, profile)
    try:
        result = audit(g, tol=tol)
    except Exception as exc:  # face tracing failed; the report already says why
        logger.debug(f"Audit skipped: {exc}")
        return report, None

    if report.overall and degree == 5 and not result.finals_nonnegative:
        logger.error(
            f"{g.name}: verified min-degree-5 graph with a negative final charge "
            f"({min(result.min_vertex_final, result.min_face_final):.3e})"
        )
    return report, result
