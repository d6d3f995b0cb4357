from __future__ import annotations

import math

import numpy as np
import pytest

from smg.core.errors import (
    DegenerateEmbeddingError,
    InvalidInputError,
    MinimumDegreeError,
)
from smg.geometry.sphgeom import from_spherical, tangent_direction, tangent_frame
from smg.graph.embedding import (
    EmbeddedGraph,
    count_components,
    euler_report,
    rotation_system,
    trace_faces,
)


def _ring(colatitude: float, k: int, south: bool = False) -> np.ndarray:
    phis = np.arange(k) * 2 * math.pi / k
    pts = from_spherical(np.full(k, colatitude), phis)
    if south:
        pts = pts * np.array([1.0, 1.0, -1.0])
    return pts


def _index_of(g: EmbeddedGraph, p) -> int:
    return int(np.argmin(np.linalg.norm(g.vertices - np.asarray(p), axis=1)))


def _same_cycle(a, b) -> bool:
    if len(a) != len(b):
        return False
    doubled = list(a) + list(a)
    return any(doubled[s : s + len(b)] == list(b) for s in range(len(a)))


# ---------------------------------------------------------------------
# Graph model
# ---------------------------------------------------------------------

def test_edges_are_stored_canonically():
    pts = _ring(0.4, 3)
    g = EmbeddedGraph(pts, ((2, 0), (1, 0), (2, 1)), lam=0.5)
    assert g.edges == ((0, 1), (0, 2), (1, 2))
    assert g.neighbors == ((1, 2), (0, 2), (0, 1))


@pytest.mark.parametrize(
    "edges",
    [((0, 0),), ((0, 5),), ((0, 1), (1, 0))],
    ids=["loop", "missing-vertex", "duplicate"],
)
def test_bad_edge_lists_are_rejected(edges):
    with pytest.raises(InvalidInputError):
        EmbeddedGraph(_ring(0.4, 3), edges, lam=0.5)


@pytest.mark.parametrize("lam", [0.0, math.pi, -1.0, 3.2])
def test_lambda_must_lie_in_open_interval(lam):
    with pytest.raises(InvalidInputError):
        EmbeddedGraph(_ring(0.4, 3), ((0, 1),), lam=lam)


def test_vertices_are_frozen(icosahedron):
    with pytest.raises(ValueError):
        icosahedron.vertices[0, 0] = 0.0


# ---------------------------------------------------------------------
# Rotation system
# ---------------------------------------------------------------------

def test_octahedron_rotation_at_north_pole(octahedron):
    top = _index_of(octahedron, (0, 0, 1))
    expected = [
        _index_of(octahedron, p)
        for p in ((1, 0, 0), (0, 1, 0), (-1, 0, 0), (0, -1, 0))
    ]
    rot = rotation_system(octahedron)[top]
    assert rot[0] == min(rot)
    assert _same_cycle(rot, expected)


def test_icosahedron_rotation_has_equal_azimuth_gaps(icosahedron):
    rotation = rotation_system(icosahedron)
    for v, cyc in enumerate(rotation):
        apex = icosahedron.vertices[v]
        e1, e2 = tangent_frame(apex)
        az = []
        for u in cyc:
            t = tangent_direction(apex, icosahedron.vertices[u])
            az.append(math.atan2(t @ e2, t @ e1))
        gaps = np.diff(np.unwrap(az + az[:1]))
        assert np.allclose(gaps, 2 * math.pi / 5, atol=1e-12)


def test_parallel_edges_out_of_one_vertex_are_degenerate():
    pts = np.vstack([[0.0, 0.0, 1.0], from_spherical(0.3, 0.0), from_spherical(0.6, 0.0)])
    g = EmbeddedGraph(pts, ((0, 1), (0, 2)), lam=0.3)
    with pytest.raises(DegenerateEmbeddingError):
        rotation_system(g)


# ---------------------------------------------------------------------
# Faces
# ---------------------------------------------------------------------

def test_octahedron_faces(octahedron):
    fs = trace_faces(octahedron)
    assert fs.census() == {3: 8}
    for face in fs.faces:
        assert face.area == pytest.approx(math.pi / 2, abs=1e-12)
        assert np.allclose(face.corner_angles, math.pi / 2, atol=1e-12)


def test_icosahedron_faces(icosahedron):
    fs = trace_faces(icosahedron)
    assert fs.census() == {3: 20}
    for face in fs.faces:
        assert face.is_simple_cycle()
        assert face.area == pytest.approx(math.pi / 5, abs=1e-12)
        assert np.allclose(face.corner_angles, 2 * math.pi / 5, atol=1e-12)


def test_snub_cube_face_census(snub_cube):
    assert trace_faces(snub_cube).census() == {3: 32, 4: 6}


@pytest.mark.parametrize("graph", ["octahedron", "icosahedron", "snub_cube"])
def test_face_accounting_identities(graph, request):
    g = request.getfixturevalue(graph)
    fs = trace_faces(g)
    assert fs.degree_sum() == 2 * g.n_edges
    assert fs.total_area() == pytest.approx(4 * math.pi, abs=1e-9)
    assert np.allclose(fs.vertex_angle_sums(g.n_vertices), 2 * math.pi, atol=1e-9)


def test_oriented_walk_keeps_the_face_on_its_left(icosahedron):
    for face in trace_faces(icosahedron).faces:
        a, b, c = (icosahedron.vertices[v] for v in face.oriented_walk())
        assert np.linalg.det(np.array([a, b, c])) > 0


def test_faces_do_not_depend_on_input_order(snub_cube, rng):
    edges = list(snub_cube.edges)
    shuffled = [edges[k][::-1] if k % 2 else edges[k] for k in rng.permutation(len(edges))]
    again = EmbeddedGraph(snub_cube.vertices, shuffled, snub_cube.lam)
    first, second = trace_faces(snub_cube), trace_faces(again)
    assert [f.walk for f in first.faces] == [f.walk for f in second.faces]
    assert np.allclose(
        [f.area for f in first.faces], [f.area for f in second.faces], atol=0.0
    )


def test_degree_one_vertex_raises():
    pts = np.array([[0.0, 0.0, 1.0], from_spherical(0.5, 0.0)])
    g = EmbeddedGraph(pts, ((0, 1),), lam=0.5)
    with pytest.raises(MinimumDegreeError) as err:
        trace_faces(g)
    assert err.value.degree == 1


def test_removing_an_edge_merges_two_triangles(icosahedron):
    g = icosahedron.with_edges(icosahedron.edges[1:])
    fs = trace_faces(g)
    assert fs.census() == {3: 18, 4: 1}
    assert fs.total_area() == pytest.approx(4 * math.pi, abs=1e-9)


# ---------------------------------------------------------------------
# Euler accounting
# ---------------------------------------------------------------------

def test_icosahedron_euler_report(icosahedron):
    report = euler_report(icosahedron, trace_faces(icosahedron))
    assert report.as_tuple() == (12, 30, 20, 2, True)
    assert report.euler_ok


def test_two_disjoint_triangles():
    pts = np.vstack([_ring(0.3, 3), _ring(0.3, 3, south=True)])
    edges = ((0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5))
    g = EmbeddedGraph(pts, edges, lam=float(np.arccos(pts[0] @ pts[1])))
    fs = trace_faces(g)
    report = euler_report(g, fs)
    assert report.as_tuple() == (6, 6, 4, 4, False)
    assert report.components == 2
    assert report.euler_ok
    # each triangle contributes its inside and its outside
    assert fs.total_area() == pytest.approx(8 * math.pi, abs=1e-9)


def test_count_components_counts_isolated_vertices():
    pts = _ring(0.5, 4)
    assert count_components(EmbeddedGraph(pts, (), lam=0.5)) == 4
    assert count_components(EmbeddedGraph(pts, ((0, 1), (2, 3)), lam=0.5)) == 2
