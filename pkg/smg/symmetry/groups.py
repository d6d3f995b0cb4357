# smg/symmetry/groups.py

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial.transform import Rotation

from smg.core.errors import GroupClosureError, InvalidInputError, NonInvariantPointSetError
from smg.core.logger import get_logger
from smg.geometry.sphgeom import VectorLike, as_array, to_spherical

logger = get_logger(__name__)

PHI = (1 + math.sqrt(5)) / 2
GROUP_ORDERS = {"O24": 24, "I60": 60}
DEFAULT_DEDUP_TOL = 1e-8
MATCH_TOL = 1e-9

_ALIASES = {
    "O": "O24",
    "O24": "O24",
    "OCTAHEDRAL": "O24",
    "I": "I60",
    "I60": "I60",
    "ICOSAHEDRAL": "I60",
}

# (x, y, z) -> (z, x, y): the 3-fold rotation about (1, 1, 1)
_CYCLE = np.array([[0.0, 0.0, 1.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])


def rotation_matrix(axis: Sequence[float], angle: float) -> np.ndarray:
    """Right-handed rotation by `angle` about `axis`."""
    v = np.asarray(axis, dtype=float)
    v = v / np.linalg.norm(v)
    return np.asarray(Rotation.from_rotvec(v * angle).as_matrix())


def _generators(name: str) -> list[np.ndarray]:
    if name == "O24":
        return [rotation_matrix([0, 0, 1], math.pi / 2), _CYCLE]
    # 5-fold rotation about the icosahedron vertex (0, 1, phi); the vertex set
    # (0, +-1, +-phi) and its cyclic permutations is invariant under both.
    return [rotation_matrix([0, 1, PHI], 2 * math.pi / 5), _CYCLE]


def _key(m: np.ndarray) -> tuple[float, ...]:
    return tuple(float(x) for x in np.round(m, 8).ravel() + 0.0)


def _polar(m: np.ndarray) -> np.ndarray:
    u, _, vt = np.linalg.svd(m)
    return u @ vt


@dataclass(frozen=True, eq=False)
class RotationGroup:
    name: str
    elements: np.ndarray  # (order, 3, 3)

    @property
    def order(self) -> int:
        return int(self.elements.shape[0])

    def __iter__(self):
        return iter(self.elements)

    def __len__(self) -> int:
        return self.order

    def contains(self, m: np.ndarray, tol: float = 1e-9) -> bool:
        return bool(np.any(np.max(np.abs(self.elements - m), axis=(1, 2)) <= tol))


def canonical_group_name(name: str) -> str:
    key = str(name).strip().upper()
    if key not in _ALIASES:
        raise InvalidInputError(f"unknown rotation group {name!r}; expected O24 or I60")
    return _ALIASES[key]


@lru_cache(maxsize=None)
def group_elements(name: str) -> RotationGroup:
    """Close the two standard generators of the group under multiplication."""
    name = canonical_group_name(name)
    expected = GROUP_ORDERS[name]
    gens = _generators(name)

    identity = np.eye(3)
    elements = {_key(identity): identity}
    frontier = [identity]
    rounds = 0
    while frontier:
        rounds += 1
        if rounds > expected or len(elements) > expected:
            raise GroupClosureError(
                f"{name}: closure not reached ({len(elements)} elements after {rounds} rounds)"
            )
        new = []
        for m in frontier:
            for gen in gens:
                p = _polar(gen @ m)
                k = _key(p)
                if k not in elements:
                    elements[k] = p
                    new.append(p)
        frontier = new

    if len(elements) != expected:
        raise GroupClosureError(f"{name}: closed with {len(elements)} elements, expected {expected}")

    ordered = np.array([elements[k] for k in sorted(elements)])
    ordered.setflags(write=False)
    logger.debug(f"Generated {name} with {len(ordered)} elements in {rounds} rounds")
    return RotationGroup(name=name, elements=ordered)


# -------------------------------------------------------------------
# Orbits
# -------------------------------------------------------------------

def orbit_elements(
    group: RotationGroup, seed: VectorLike, dedup_tol: float = DEFAULT_DEDUP_TOL
) -> list[int]:
    """Indices of the group elements producing each distinct orbit point, in element order."""
    p = as_array(seed)
    images = group.elements @ p
    kept: list[int] = []
    for idx, q in enumerate(images):
        if all(np.linalg.norm(q - images[k]) > dedup_tol for k in kept):
            kept.append(idx)
    return kept


def orbit(
    group: RotationGroup, seed: VectorLike, dedup_tol: float = DEFAULT_DEDUP_TOL
) -> np.ndarray:
    """The seed's images under every element, points closer than dedup_tol merged."""
    p = as_array(seed)
    return np.array([group.elements[k] @ p for k in orbit_elements(group, p, dedup_tol)])


def canonical_representative(
    group: RotationGroup, point: VectorLike, tol: float = 1e-9
) -> np.ndarray:
    """Orbit point with the largest z; ties go to the smallest longitude in [0, 2pi)."""
    pts = group.elements @ as_array(point)
    top = pts[:, 2].max()
    tied = [q for q in pts if q[2] >= top - tol]
    return min(tied, key=lambda q: to_spherical(q)[1])


def point_permutation(m: np.ndarray, points: np.ndarray, tol: float = MATCH_TOL) -> np.ndarray:
    """perm[i] = index of m @ points[i] within points."""
    images = points @ m.T
    gaps = np.linalg.norm(images[:, None, :] - points[None, :, :], axis=-1)
    perm = np.argmin(gaps, axis=1)
    worst = float(gaps[np.arange(len(points)), perm].max()) if len(points) else 0.0
    if worst > tol or len(set(perm.tolist())) != len(points):
        raise NonInvariantPointSetError(
            f"point set is not invariant under the group (mismatch {worst:.3e})"
        )
    return perm


def edge_classes(
    points: np.ndarray,
    edges: Sequence[tuple[int, int]],
    group: RotationGroup,
    tol: float = MATCH_TOL,
) -> list[list[tuple[int, int]]]:
    """Partition edges into orbits under the group; classes sorted by their first edge."""
    pts = np.asarray(points, dtype=float)
    canon = sorted({(min(i, j), max(i, j)) for i, j in edges})
    if not canon:
        return []
    index = {e: k for k, e in enumerate(canon)}

    rows: list[int] = []
    cols: list[int] = []
    for m in group.elements:
        perm = point_permutation(m, pts, tol)
        for e, k in index.items():
            a, b = int(perm[e[0]]), int(perm[e[1]])
            image = (min(a, b), max(a, b))
            if image not in index:
                raise NonInvariantPointSetError(f"edge {e} maps to non-edge {image}")
            rows.append(k)
            cols.append(index[image])

    n = len(canon)
    links = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(links, directed=False)

    classes: dict[int, list[tuple[int, int]]] = {}
    for e, label in zip(canon, labels.tolist()):
        classes.setdefault(label, []).append(e)
    return sorted(classes.values(), key=lambda c: c[0])
