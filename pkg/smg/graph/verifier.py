# smg/graph/verifier.py

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from smg.core.errors import SmgError
from smg.core.logger import get_logger
from smg.geometry.sphgeom import (
    Arc,
    IntersectionKind,
    arc_intersection,
    pairwise_distances,
)
from smg.graph.embedding import EmbeddedGraph, FaceSet, euler_report, trace_faces

logger = get_logger(__name__)

DEFAULT_TOL = 1e-9
ANGLE_LOW = math.pi / 3
ANGLE_HIGH = 2 * math.pi / 3


# -------------------------------------------------------------------
# Report types
# -------------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    margin: Optional[float] = None
    detail: str = ""

    def as_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "margin": self.margin,
            "detail": self.detail,
            "witnesses": self.witnesses,
        }


@dataclass(frozen=True)
class VerifyProfile:
    k: int = 5
    regular: bool = False
    tol: float = DEFAULT_TOL
    face_conditions: bool = False


@dataclass
class VerificationReport:
    checks: list[CheckResult]
    tolerances: dict[str, float]

    @property
    def overall(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks)

    def check(self, name: str) -> CheckResult:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failed(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]

    def as_dict(self) -> dict[str, Any]:
        return {
            "overall": self.overall,
            "tolerances": self.tolerances,
            "checks": [c.as_dict() for c in self.checks],
        }


def _distance_matrix(g: EmbeddedGraph) -> np.ndarray:
    return pairwise_distances(g.vertices)


# -------------------------------------------------------------------
# Individual checks
# -------------------------------------------------------------------

def verify_edge_lengths(g: EmbeddedGraph, tol: float = DEFAULT_TOL) -> CheckResult:
    """Every edge has angular length lambda within tol, and 0 < lambda < pi."""
    witnesses: list[dict[str, Any]] = []
    if not (0.0 < g.lam < math.pi):
        witnesses.append({"lambda": g.lam, "reason": "lambda outside (0, pi)"})

    lengths = g.edge_lengths()
    deviation = np.abs(lengths - g.lam)
    for k in np.flatnonzero(deviation > tol):
        i, j = g.edges[int(k)]
        witnesses.append({"edge": [i, j], "length": float(lengths[k])})

    return CheckResult(
        name="edge_lengths",
        passed=not witnesses,
        witnesses=witnesses,
        margin=float(tol - deviation.max()) if len(deviation) else None,
        detail=f"max |length - lambda| = {float(deviation.max()) if len(deviation) else 0.0:.3e}",
    )


def verify_noncrossing(g: EmbeddedGraph) -> CheckResult:
    """No two edges meet except at a shared endpoint."""
    witnesses: list[dict[str, Any]] = []
    m = g.n_edges
    if m < 2:
        return CheckResult(name="noncrossing", passed=True)

    idx = np.array(g.edges)
    a = g.vertices[idx[:, 0]]
    b = g.vertices[idx[:, 1]]
    mid = a + b
    mid /= np.linalg.norm(mid, axis=1, keepdims=True)
    half = g.edge_lengths() / 2.0

    # All pairs are screened; only pairs whose midpoint distance admits contact
    # reach the exact classifier.
    mid_dist = np.arctan2(
        np.linalg.norm(np.cross(mid[:, None, :], mid[None, :, :]), axis=-1), mid @ mid.T
    )
    reach = half[:, None] + half[None, :] + 1e-9
    candidates = np.argwhere(np.triu(mid_dist <= reach, k=1))

    arcs: list[Arc | None] = []
    for i, j in g.edges:
        try:
            arcs.append(Arc.between(g.vertices[i], g.vertices[j]))
        except SmgError:
            arcs.append(None)
            witnesses.append({"edges": [[i, j]], "kind": "degenerate"})

    for s, t in candidates:
        arc_s, arc_t = arcs[s], arcs[t]
        if arc_s is None or arc_t is None:
            continue
        res = arc_intersection(arc_s, arc_t)
        if res.kind in (IntersectionKind.CROSSING, IntersectionKind.OVERLAP):
            w: dict[str, Any] = {
                "edges": [list(g.edges[int(s)]), list(g.edges[int(t)])],
                "kind": res.kind.value,
            }
            if res.point is not None:
                w["point"] = [res.point.x, res.point.y, res.point.z]
            witnesses.append(w)

    return CheckResult(
        name="noncrossing",
        passed=not witnesses,
        witnesses=witnesses,
        detail=f"{len(candidates)} of {m * (m - 1) // 2} edge pairs classified exactly",
    )


def verify_min_degree(g: EmbeddedGraph, k: int, regular: bool = False) -> CheckResult:
    """Every vertex has degree >= k (or exactly k in regular mode)."""
    degrees = g.degrees
    if regular:
        bad = np.flatnonzero(degrees != k)
        name = "regular_degree"
    else:
        bad = np.flatnonzero(degrees < k)
        name = "min_degree"
    witnesses = [{"vertex": int(v), "degree": int(degrees[v])} for v in bad]
    return CheckResult(
        name=name,
        passed=not witnesses,
        witnesses=witnesses,
        detail=f"k={k}, degrees in [{int(degrees.min()) if len(degrees) else 0}, "
        f"{int(degrees.max()) if len(degrees) else 0}]",
    )


def verify_separation(g: EmbeddedGraph, tol: float = DEFAULT_TOL) -> CheckResult:
    """
    Every non-adjacent pair is farther apart than lambda - tol.

    Passing certifies that g is the contact graph of the caps of angular
    diameter lambda centered at its vertices. The margin is
    min(non-adjacent distance) - lambda.
    """
    n = g.n_vertices
    if n < 2:
        return CheckResult(name="separation", passed=True)

    dist = _distance_matrix(g)
    nonadjacent = np.triu(np.ones((n, n), dtype=bool), k=1)
    for i, j in g.edges:
        nonadjacent[i, j] = False

    pairs = np.argwhere(nonadjacent)
    if len(pairs) == 0:
        return CheckResult(name="separation", passed=True, detail="complete graph")

    d = dist[pairs[:, 0], pairs[:, 1]]
    margin = float(d.min() - g.lam)
    witnesses = [
        {"vertices": [int(i), int(j)], "distance": float(dist[i, j])}
        for i, j in pairs[d <= g.lam - tol]
    ]
    return CheckResult(
        name="separation",
        passed=not witnesses,
        witnesses=witnesses,
        margin=margin,
        detail=f"closest non-adjacent pair exceeds lambda by {margin:.3e}",
    )


def verify_contact_graph(g: EmbeddedGraph, tol: float = DEFAULT_TOL) -> CheckResult:
    """Rebuilding the contact graph at lambda + tol gives exactly the edge set."""
    n = g.n_vertices
    dist = _distance_matrix(g) if n else np.zeros((0, 0))
    rebuilt = {
        (int(i), int(j)) for i, j in np.argwhere(np.triu(dist <= g.lam + tol, k=1))
    }
    edges = set(g.edges)
    witnesses = [
        {"edge": list(e), "reason": "missing from contact graph"} for e in sorted(edges - rebuilt)
    ] + [{"edge": list(e), "reason": "touching non-edge"} for e in sorted(rebuilt - edges)]
    return CheckResult(name="contact_graph", passed=not witnesses, witnesses=witnesses)


def verify_faces(g: EmbeddedGraph, fs: FaceSet | None = None) -> CheckResult:
    """Face tracing sanity: degree sums, Euler count, area and angle sums."""
    try:
        fs = fs if fs is not None else trace_faces(g)
    except SmgError as exc:
        witness: dict[str, Any] = {"error": str(exc)}
        vertex = getattr(exc, "vertex", None)
        if vertex is not None:
            witness["vertex"] = vertex
        return CheckResult(name="faces", passed=False, witnesses=[witness])

    witnesses: list[dict[str, Any]] = []
    if fs.degree_sum() != 2 * g.n_edges:
        witnesses.append({"reason": "sum deg(f) != 2|E|", "value": fs.degree_sum()})

    euler = euler_report(g, fs)
    if not euler.connected:
        witnesses.append({"reason": "graph is not connected", "components": euler.components})
    elif euler.chi != 2:
        witnesses.append({"reason": "V - E + F != 2", "value": euler.chi})

    area = fs.total_area()
    if euler.connected and abs(area - 4 * math.pi) > 1e-8:
        witnesses.append({"reason": "face areas do not sum to 4 pi", "value": area})

    sums = fs.vertex_angle_sums(g.n_vertices)
    for v in np.flatnonzero(np.abs(sums - 2 * math.pi) > 1e-9):
        witnesses.append({"vertex": int(v), "angle_sum": float(sums[v])})

    return CheckResult(
        name="faces",
        passed=not witnesses,
        witnesses=witnesses,
        detail=f"V={euler.V} E={euler.E} F={euler.F} census={fs.census()}",
    )


def verify_face_shapes(fs: FaceSet, tol: float = DEFAULT_TOL) -> CheckResult:
    """Faces are simple 3-, 4- or 5-cycles with corner angles in (pi/3, 2pi/3]."""
    witnesses: list[dict[str, Any]] = []
    lo = hi = None
    for f_idx, face in enumerate(fs.faces):
        if face.degree not in (3, 4, 5) or not face.is_simple_cycle():
            witnesses.append({"face": f_idx, "walk": list(face.walk), "reason": "shape"})
        for v, a in zip(face.walk, face.corner_angles):
            lo = a if lo is None else min(lo, a)
            hi = a if hi is None else max(hi, a)
            if not (ANGLE_LOW - tol < a <= ANGLE_HIGH + tol):
                witnesses.append({"face": f_idx, "vertex": v, "angle": a})
    margin = None
    if lo is not None and hi is not None:
        margin = min(lo - ANGLE_LOW, ANGLE_HIGH - hi)
    return CheckResult(
        name="face_shapes",
        passed=not witnesses,
        witnesses=witnesses,
        margin=margin,
        detail=f"corner angles in [{lo}, {hi}]",
    )


def face_diagonals(face_walk: tuple[int, ...]) -> list[tuple[int, int]]:
    k = len(face_walk)
    out = []
    for a, b in itertools.combinations(range(k), 2):
        if (b - a) % k in (1, k - 1):
            continue
        i, j = face_walk[a], face_walk[b]
        out.append((min(i, j), max(i, j)))
    return out


def verify_face_diagonals(g: EmbeddedGraph, fs: FaceSet, tol: float = DEFAULT_TOL) -> CheckResult:
    """All quadrilateral and pentagon diagonals are longer than lambda."""
    witnesses: list[dict[str, Any]] = []
    dist = _distance_matrix(g) if g.n_vertices else np.zeros((0, 0))
    margin: Optional[float] = None
    for f_idx, face in enumerate(fs.faces):
        if face.degree not in (4, 5):
            continue
        for i, j in face_diagonals(face.walk):
            d = float(dist[i, j])
            margin = d - g.lam if margin is None else min(margin, d - g.lam)
            if d <= g.lam - tol:
                witnesses.append({"face": f_idx, "diagonal": [i, j], "length": d})
    return CheckResult(
        name="face_diagonals",
        passed=not witnesses,
        witnesses=witnesses,
        margin=margin,
        detail="no quadrilateral or pentagon faces" if margin is None else "",
    )


# -------------------------------------------------------------------
# Aggregate
# -------------------------------------------------------------------

def verify_all(g: EmbeddedGraph, profile: VerifyProfile = VerifyProfile()) -> VerificationReport:
    tolerances = {"tol": profile.tol}
    if g.n_vertices == 0:
        return VerificationReport(
            checks=[
                CheckResult(
                    name="nonempty",
                    passed=False,
                    witnesses=[{"reason": "graph has no vertices"}],
                )
            ],
            tolerances=tolerances,
        )

    checks = [
        verify_edge_lengths(g, profile.tol),
        verify_noncrossing(g),
        verify_min_degree(g, profile.k, regular=profile.regular),
        verify_separation(g, profile.tol),
        verify_contact_graph(g, profile.tol),
    ]

    faces_ok = True
    fs: FaceSet | None = None
    try:
        fs = trace_faces(g)
    except SmgError:
        faces_ok = False
    checks.append(verify_faces(g, fs))

    if profile.face_conditions:
        if faces_ok and fs is not None:
            checks.append(verify_face_shapes(fs, profile.tol))
            checks.append(verify_face_diagonals(g, fs, profile.tol))
        else:
            checks.append(
                CheckResult(
                    name="face_shapes",
                    passed=False,
                    witnesses=[{"reason": "faces could not be traced"}],
                )
            )

    report = VerificationReport(checks=checks, tolerances=tolerances)
    for c in report.failed():
        logger.info(f"Check {c.name} failed with {len(c.witnesses)} witness(es)")
    return report


# -------------------------------------------------------------------
# Central symmetry and the elliptic plane
# -------------------------------------------------------------------

def is_centrally_symmetric(points: np.ndarray, tol: float = DEFAULT_TOL) -> bool:
    """True if v -> -v maps the point set onto itself."""
    p = np.asarray(points, dtype=float)
    if len(p) == 0:
        return True
    gap = np.linalg.norm(p[:, None, :] + p[None, :, :], axis=-1)
    return bool(np.all(gap.min(axis=1) <= tol))


@dataclass(frozen=True)
class EllipticQuotient:
    """Antipodal pairs of a centrally symmetric vertex set, with elliptic distances."""

    representatives: tuple[int, ...]
    distances: np.ndarray
    complete: bool


def elliptic_quotient(g: EmbeddedGraph, tol: float = DEFAULT_TOL) -> EllipticQuotient:
    """
    Identify antipodal vertices and measure pairs by min(d, pi - d).

    `complete` is true when every pair of classes is within lambda + tol, i.e.
    the quotient graph is complete.
    """
    p = g.vertices
    if not is_centrally_symmetric(p, tol):
        raise ValueError("vertex set is not centrally symmetric")

    reps: list[int] = []
    taken = np.zeros(len(p), dtype=bool)
    for i in range(len(p)):
        if taken[i]:
            continue
        j = int(np.argmin(np.linalg.norm(p + p[i], axis=1)))
        taken[i] = taken[j] = True
        reps.append(i)

    d = pairwise_distances(p[reps])
    elliptic = np.minimum(d, math.pi - d)
    off_diag = elliptic[~np.eye(len(reps), dtype=bool)]
    complete = bool(np.all(off_diag <= g.lam + tol))
    return EllipticQuotient(representatives=tuple(reps), distances=elliptic, complete=complete)
