# smg/constructions/robinson.py

from __future__ import annotations

from collections.abc import Sequence

import numpy as np

from smg.constructions.base import ConstructionResult, OrbitParameters
from smg.constructions.search import maxmin_search
from smg.constructions.solver import realize
from smg.core.config import Settings
from smg.core.errors import ConstructionError
from smg.core.logger import get_logger
from smg.symmetry.groups import RotationGroup, group_elements

logger = get_logger(__name__)

# Two searches landing on the same canonical parameters within this are one candidate.
SAME_CANDIDATE_TOL = 1e-6
KEY_DECIMALS = 9


def _selection_key(params: OrbitParameters) -> tuple[float, ...]:
    return tuple(float(v) for v in np.round(params.vector(), KEY_DECIMALS))


def canonical_choice(group: RotationGroup, params: OrbitParameters) -> OrbitParameters:
    """Lexicographically smallest canonical form among the parameters and their mirror."""
    options = [params.canonical(group), params.mirrored().canonical(group)]
    return min(options, key=_selection_key)


def solve_orbits(
    group: str,
    n_orbits: int,
    degree: int = 5,
    settings: Settings | None = None,
    name: str | None = None,
    class_sizes: Sequence[int] | None = None,
) -> ConstructionResult:
    """
    Two-phase construction from `n_orbits` generic orbits of a rotation group.

    Phase A (maxmin_search) proposes seeds whose contact graph is
    `degree`-regular; Phase B (realize) polishes the tangencies and
    certifies. Among certified candidates, optionally restricted to the
    given multiset of edge-class sizes, the lexicographically smallest
    canonical parameter vector (mirror images included) is returned.
    """
    settings = settings or Settings()
    g = group_elements(group)
    name = name or f"{g.name}-{n_orbits}-orbits"
    wanted = sorted(class_sizes) if class_sizes is not None else None

    candidates = [c for c in maxmin_search(g, n_orbits, degree, settings.search) if c.regular]
    if not candidates:
        raise ConstructionError(
            f"{name}: no start reached a {degree}-regular contact structure in "
            f"{settings.search.starts} starts; raise search.starts or try another seed"
        )

    seen: list[np.ndarray] = []
    certified: list[ConstructionResult] = []
    for cand in candidates:
        params = cand.parameters(g.name)
        key = params.canonical(g).vector()
        if any(np.max(np.abs(key - k)) <= SAME_CANDIDATE_TOL for k in seen):
            continue
        seen.append(key)

        try:
            result = realize(g, params, name, degree, settings)
        except ConstructionError as exc:
            logger.warning(f"Start {cand.start}: rejected, {exc}")
            continue
        if wanted is not None and sorted(result.class_sizes) != wanted:
            logger.warning(
                f"Start {cand.start}: edge classes {list(result.class_sizes)}, expected {wanted}"
            )
            continue
        certified.append(result)

    if not certified:
        raise ConstructionError(
            f"{name}: {len(candidates)} regular candidates, none certified; "
            f"raise search.starts or try another seed"
        )

    assert all(r.parameters is not None for r in certified)
    choices = [canonical_choice(g, r.parameters) for r in certified]  # type: ignore[arg-type]
    best = min(choices, key=_selection_key)
    logger.info(f"{name}: {len(certified)} certified candidates, selected lambda={best.lam:.15f}")
    return realize(g, best, name, degree, settings)


# -------------------------------------------------------------------
# Named constructions
# -------------------------------------------------------------------

def construct_robinson_48(settings: Settings | None = None) -> ConstructionResult:
    """Two generic orbits of the cube rotation group: 48 vertices, 120 edges."""
    return solve_orbits("O24", 2, 5, settings, name="robinson-48", class_sizes=[24] * 5)


def construct_snub_dodecahedron(settings: Settings | None = None) -> ConstructionResult:
    """One generic orbit of the icosahedral rotation group: 60 vertices, 150 edges."""
    return solve_orbits(
        "I60", 1, 5, settings, name="snub-dodecahedron", class_sizes=[30, 60, 60]
    )


def construct_robinson_120(settings: Settings | None = None) -> ConstructionResult:
    """Two generic orbits of the icosahedral rotation group: 120 vertices, 300 edges."""
    return solve_orbits("I60", 2, 5, settings, name="robinson-120", class_sizes=[60] * 5)
