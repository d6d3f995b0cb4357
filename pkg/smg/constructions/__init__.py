# smg/constructions/__init__.py

from smg.constructions.base import ConstructionResult, OrbitParameters, contact_graph_at
from smg.constructions.exact import (
    construct_icosahedron,
    construct_octahedron,
    construct_snub_cube,
)
from smg.constructions.registry import CONSTRUCTION_MAP, build
from smg.constructions.robinson import (
    construct_robinson_48,
    construct_robinson_120,
    construct_snub_dodecahedron,
    solve_orbits,
)
from smg.constructions.solver import TangencySystem, polish_tangencies

__all__ = [
    "CONSTRUCTION_MAP",
    "ConstructionResult",
    "OrbitParameters",
    "TangencySystem",
    "build",
    "construct_icosahedron",
    "construct_octahedron",
    "construct_robinson_48",
    "construct_robinson_120",
    "construct_snub_cube",
    "construct_snub_dodecahedron",
    "contact_graph_at",
    "polish_tangencies",
    "solve_orbits",
]
