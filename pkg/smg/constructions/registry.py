# smg/constructions/registry.py

from __future__ import annotations

from collections.abc import Callable

from smg.constructions.base import ConstructionResult
from smg.constructions.exact import (
    construct_icosahedron,
    construct_octahedron,
    construct_snub_cube,
)
from smg.constructions.robinson import (
    construct_robinson_48,
    construct_robinson_120,
    construct_snub_dodecahedron,
)
from smg.core.config import Settings

Builder = Callable[[Settings | None], ConstructionResult]

# The five graphs of the census, smallest first.
CONSTRUCTION_MAP: dict[str, Builder] = {
    "icosahedron": construct_icosahedron,
    "snub-cube": construct_snub_cube,
    "robinson-48": construct_robinson_48,
    "snub-dodecahedron": construct_snub_dodecahedron,
    "robinson-120": construct_robinson_120,
}

# Available to `construct` but outside the census.
FIXTURE_MAP: dict[str, Builder] = {
    "octahedron": construct_octahedron,
}


def available() -> list[str]:
    return [*CONSTRUCTION_MAP, *FIXTURE_MAP]


def build(name: str, settings: Settings | None = None) -> ConstructionResult:
    builder = CONSTRUCTION_MAP.get(name) or FIXTURE_MAP.get(name)
    if builder is None:
        raise ValueError(f"Unknown construction '{name}'. Available: {', '.join(available())}")
    return builder(settings)
