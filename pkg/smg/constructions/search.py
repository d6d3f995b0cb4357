# smg/constructions/search.py

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from smg.constructions.base import OrbitParameters, contact_graph_at
from smg.core.config import SearchSettings
from smg.core.logger import get_logger
from smg.geometry.sphgeom import from_spherical, to_spherical
from smg.symmetry.groups import RotationGroup

logger = get_logger(__name__)


# -------------------------------------------------------------------
# Objective
# -------------------------------------------------------------------

class OrbitDistances:
    """
    Distances from each seed to every other orbit point.

    Every pair of orbit points is a rotated copy of a pair containing a
    seed, so these distances cover all pair distances of the union.
    """

    def __init__(self, group: RotationGroup, n_orbits: int):
        self.group = group
        self.n_orbits = n_orbits
        identity = int(np.argmin(np.abs(group.elements - np.eye(3)).sum(axis=(1, 2))))
        keep = np.ones((n_orbits, n_orbits * group.order), dtype=bool)
        for o in range(n_orbits):
            keep[o, o * group.order + identity] = False
        self._keep = keep

    def seeds(self, x: np.ndarray) -> np.ndarray:
        return from_spherical(x[0::2], x[1::2])

    def points(self, x: np.ndarray) -> np.ndarray:
        seeds = self.seeds(x)
        return np.einsum("gij,oj->ogi", self.group.elements, seeds).reshape(-1, 3)

    def __call__(self, x: np.ndarray) -> np.ndarray:
        seeds = self.seeds(x)
        pts = self.points(x)
        cross = np.linalg.norm(np.cross(seeds[:, None, :], pts[None, :, :]), axis=-1)
        dots = seeds @ pts.T
        return np.arctan2(cross, dots)[self._keep]


def softmin(d: np.ndarray, temperature: float) -> float:
    return float(-temperature * logsumexp(-d / temperature))


# -------------------------------------------------------------------
# Multi-start search
# -------------------------------------------------------------------

@dataclass
class SearchCandidate:
    start: int
    seeds: tuple[tuple[float, float], ...]
    min_distance: float
    edges: list[tuple[int, int]]
    points: np.ndarray
    regular: bool

    def parameters(self, group: str) -> OrbitParameters:
        return OrbitParameters(group, self.seeds, self.min_distance)


def start_vector(n_orbits: int, rng: np.random.Generator) -> np.ndarray:
    raw = rng.normal(size=(n_orbits, 3))
    raw /= np.linalg.norm(raw, axis=1, keepdims=True)
    return np.array([c for p in raw for c in to_spherical(p)])


def _anneal(dist: OrbitDistances, x: np.ndarray, temperatures: list[float]) -> np.ndarray:
    for t in temperatures:
        res = minimize(lambda z: -softmin(dist(z), t), x, method="L-BFGS-B")
        x = res.x
    return x


def _refine(dist: OrbitDistances, x: np.ndarray, window: float) -> np.ndarray:
    """Exact max-min over the near-active pairs: maximize t with d_k >= t."""
    d0 = dist(x)
    low = float(d0.min())
    active = d0 <= low + window

    z0 = np.append(x, low)
    res = minimize(
        lambda z: -z[-1],
        z0,
        method="SLSQP",
        constraints=[{"type": "ineq", "fun": lambda z: dist(z[:-1])[active] - z[-1]}],
        options={"maxiter": 500, "ftol": 1e-15},
    )
    refined = res.x[:-1]
    if float(dist(refined).min()) >= low:
        return refined
    logger.debug("Refinement lowered the minimum distance; keeping annealed seeds")
    return x


def maxmin_search(
    group: RotationGroup,
    n_orbits: int,
    degree: int = 5,
    settings: SearchSettings | None = None,
) -> list[SearchCandidate]:
    """
    Phase A: from many random seeds, maximize the minimum distance within
    the union of the seeds' orbits, then read off the contact graph at
    (1 + slack) times that distance.

    Candidates come back sorted by decreasing minimum distance; only those
    with a `degree`-regular contact graph are marked regular.
    """
    settings = settings or SearchSettings()
    dist = OrbitDistances(group, n_orbits)
    temperatures = settings.temperatures()

    candidates = []
    for s in range(settings.starts):
        rng = np.random.default_rng([settings.seed, s])
        x = _anneal(dist, start_vector(n_orbits, rng), temperatures)
        x = _refine(dist, x, settings.refine_window)

        low = float(dist(x).min())
        if low <= 0 or low >= math.pi:
            logger.warning(f"Start {s}: degenerate configuration (min distance {low:.3e})")
            continue

        pts = dist.points(x)
        edges = contact_graph_at(pts, low * (1 + settings.contact_slack))
        degrees = np.bincount(np.array(edges, dtype=int).ravel(), minlength=len(pts))
        regular = bool(np.all(degrees == degree))
        seeds = tuple((float(x[2 * o]), float(x[2 * o + 1])) for o in range(n_orbits))
        candidates.append(
            SearchCandidate(
                start=s, seeds=seeds, min_distance=low, edges=edges, points=pts, regular=regular
            )
        )
        logger.info(
            f"Start {s}: min distance {low:.12f}, {len(edges)} contacts, "
            f"degrees {int(degrees.min())}..{int(degrees.max())}"
        )

    candidates.sort(key=lambda c: -c.min_distance)
    return candidates
