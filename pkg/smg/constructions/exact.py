# smg/constructions/exact.py

from __future__ import annotations

import itertools
import math

import numpy as np

from smg.constructions.base import ConstructionResult, OrbitParameters
from smg.constructions.solver import realize
from smg.core.config import Settings
from smg.core.errors import ConstructionError
from smg.core.logger import get_logger
from smg.geometry.sphgeom import pairwise_distances, to_spherical
from smg.symmetry.groups import PHI, group_elements

logger = get_logger(__name__)

# Agreement required between the polished snub-cube lambda and the closed form.
ORACLE_TOL = 1e-10


# -------------------------------------------------------------------
# Closed-form vertex sets
# -------------------------------------------------------------------

def icosahedron_points() -> np.ndarray:
    """Cyclic permutations of (0, +-1, +-phi), scaled to the unit sphere."""
    pts = []
    for s1 in (1.0, -1.0):
        for s2 in (1.0, -1.0):
            a, b, c = 0.0, s1, s2 * PHI
            pts.extend([(a, b, c), (c, a, b), (b, c, a)])
    out = np.array(pts) / math.sqrt(1 + PHI ** 2)
    return out + 0.0


def octahedron_points() -> np.ndarray:
    return np.array(
        [[1, 0, 0], [-1, 0, 0], [0, 1, 0], [0, -1, 0], [0, 0, 1], [0, 0, -1]], dtype=float
    )


def tribonacci_constant() -> float:
    """Real root of t^3 = t^2 + t + 1."""
    r = math.sqrt(33.0)
    return (1.0 + (19.0 + 3.0 * r) ** (1 / 3) + (19.0 - 3.0 * r) ** (1 / 3)) / 3.0


def _parity(perm: tuple[int, ...]) -> int:
    return sum(1 for i, j in itertools.combinations(range(len(perm)), 2) if perm[i] > perm[j]) % 2


def snub_cube_points() -> np.ndarray:
    """
    Even permutations of (+-1, +-1/t, +-t) with an odd number of plus signs,
    together with odd permutations with an even number of plus signs.
    The set contains (1, 1/t, t) and is invariant under the cube rotations.
    """
    t = tribonacci_constant()
    base = (1.0, 1.0 / t, t)
    pts = []
    for perm in itertools.permutations(range(3)):
        odd_perm = _parity(perm)
        for signs in itertools.product((1.0, -1.0), repeat=3):
            plus = sum(1 for s in signs if s > 0)
            if plus % 2 != odd_perm:
                pts.append([signs[k] * base[perm[k]] for k in range(3)])
    pts = np.array(pts)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)


def min_distance(points: np.ndarray) -> float:
    dist = pairwise_distances(points)
    return float(dist[np.triu_indices(len(points), k=1)].min())


# -------------------------------------------------------------------
# Constructions
# -------------------------------------------------------------------

def construct_icosahedron(settings: Settings | None = None) -> ConstructionResult:
    """
    Regular icosahedron: 12 golden-ratio vertices, lambda = arccos(1/sqrt5).
    The vertex is on a 5-fold axis, so only lambda enters the tangency system.
    """
    points = icosahedron_points()
    params = OrbitParameters(
        "I60", (to_spherical(points[0]),), math.atan(2.0), free=(False,)
    )
    return realize(group_elements("I60"), params, "icosahedron", 5, settings, points=points)


def construct_octahedron(settings: Settings | None = None) -> ConstructionResult:
    """The 4-regular octahedron at lambda = pi/2."""
    points = octahedron_points()
    params = OrbitParameters("O24", ((math.pi / 2, 0.0),), math.pi / 2, free=(False,))
    return realize(group_elements("O24"), params, "octahedron", 4, settings, points=points)


def construct_snub_cube(settings: Settings | None = None) -> ConstructionResult:
    """
    Snub cube as one generic O24 orbit.

    The tribonacci vertex set gives the contact structure and an oracle for
    lambda; the solver starts from the oracle seed rounded to four decimals
    and must reproduce it.
    """
    oracle = snub_cube_points()
    lam_oracle = min_distance(oracle)
    seed = oracle[0]
    params = OrbitParameters("O24", (to_spherical(seed),), lam_oracle)
    start = np.round(params.vector(), 4)

    result = realize(
        group_elements("O24"), params, "snub-cube", 5, settings, points=oracle, start=start
    )
    gap = abs(result.graph.lam - lam_oracle)
    if gap > ORACLE_TOL:
        raise ConstructionError(
            f"snub-cube: polished lambda {result.graph.lam!r} is {gap:.3e} from the closed form"
        )
    logger.debug(f"snub-cube: lambda matches the closed form within {gap:.1e}")
    return result
