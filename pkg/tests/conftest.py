from __future__ import annotations

import numpy as np
import pytest

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
from smg.graph.embedding import EmbeddedGraph


@pytest.fixture(scope="session")
def icosahedron_result() -> ConstructionResult:
    return construct_icosahedron()


@pytest.fixture(scope="session")
def octahedron_result() -> ConstructionResult:
    return construct_octahedron()


@pytest.fixture(scope="session")
def snub_cube_result() -> ConstructionResult:
    return construct_snub_cube()


@pytest.fixture(scope="session")
def snub_dodecahedron_result() -> ConstructionResult:
    return construct_snub_dodecahedron()


@pytest.fixture(scope="session")
def robinson_48_result() -> ConstructionResult:
    return construct_robinson_48()


@pytest.fixture(scope="session")
def robinson_120_result() -> ConstructionResult:
    return construct_robinson_120()


@pytest.fixture
def icosahedron(icosahedron_result: ConstructionResult) -> EmbeddedGraph:
    return icosahedron_result.graph


@pytest.fixture
def octahedron(octahedron_result: ConstructionResult) -> EmbeddedGraph:
    return octahedron_result.graph


@pytest.fixture
def snub_cube(snub_cube_result: ConstructionResult) -> EmbeddedGraph:
    return snub_cube_result.graph


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)

