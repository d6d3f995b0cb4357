from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest
import yaml

from smg.graph.embedding import EmbeddedGraph, trace_faces
from smg.graph.verifier import VerifyProfile, verify_all

GOLDEN = yaml.safe_load((Path(__file__).parent / "golden" / "census.yml").read_text(encoding="utf-8"))

PROFILE = VerifyProfile(k=5, regular=True, face_conditions=True)

FIXTURES = [
    pytest.param("icosahedron", "icosahedron_result"),
    pytest.param("snub-cube", "snub_cube_result"),
    pytest.param("robinson-48", "robinson_48_result", marks=pytest.mark.slow),
    pytest.param("snub-dodecahedron", "snub_dodecahedron_result", marks=pytest.mark.slow),
    pytest.param("robinson-120", "robinson_120_result", marks=pytest.mark.slow),
]


def _reflect(g: EmbeddedGraph) -> EmbeddedGraph:
    return EmbeddedGraph(g.vertices * np.array([1.0, 1.0, -1.0]), g.edges, g.lam, g.name)


def test_golden_file_lists_every_construction():
    assert list(GOLDEN) == [
        "icosahedron",
        "snub-cube",
        "robinson-48",
        "snub-dodecahedron",
        "robinson-120",
    ]
    lams = [entry["lambda"] for entry in GOLDEN.values()]
    assert len(set(lams)) == 5


@pytest.mark.parametrize("name, fixture", FIXTURES)
def test_matches_golden_census(name, fixture, request):
    expected = GOLDEN[name]
    g = request.getfixturevalue(fixture).graph

    assert g.lam == pytest.approx(expected["lambda"], rel=1e-11)
    assert (g.n_vertices, g.n_edges) == (expected["V"], expected["E"])
    assert trace_faces(g).census() == expected["faces"]


@pytest.mark.parametrize("name, fixture", FIXTURES)
def test_separation_margin_is_clear(name, fixture, request):
    report = verify_all(request.getfixturevalue(fixture).graph, PROFILE)
    assert report.overall
    assert report.check("separation").margin > 1e-6


@pytest.mark.parametrize("name, fixture", FIXTURES)
def test_mirror_image_verifies_identically(name, fixture, request):
    g = request.getfixturevalue(fixture).graph
    original = verify_all(g, PROFILE)
    mirrored = verify_all(_reflect(g), PROFILE)

    assert mirrored.overall
    assert [c.name for c in mirrored.checks] == [c.name for c in original.checks]
    assert [c.passed for c in mirrored.checks] == [c.passed for c in original.checks]
    for a, b in zip(original.checks, mirrored.checks):
        if a.margin is None:
            assert b.margin is None
        else:
            assert b.margin == pytest.approx(a.margin, abs=1e-12)
    assert trace_faces(_reflect(g)).census() == trace_faces(g).census()
