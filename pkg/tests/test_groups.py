from __future__ import annotations

import math

import numpy as np
import pytest

from smg.core.errors import InvalidInputError, NonInvariantPointSetError
from smg.symmetry.groups import (
    PHI,
    canonical_group_name,
    canonical_representative,
    edge_classes,
    group_elements,
    orbit,
    point_permutation,
    rotation_matrix,
)


def _unit(*v: float) -> np.ndarray:
    a = np.array(v, dtype=float)
    return a / np.linalg.norm(a)


# ---------------------------------------------------------------------
# Group generation
# ---------------------------------------------------------------------

@pytest.mark.parametrize("name, order", [("O24", 24), ("I60", 60)])
def test_group_order(name, order):
    assert group_elements(name).order == order


@pytest.mark.parametrize("alias, name", [("O", "O24"), ("i", "I60"), (" octahedral ", "O24")])
def test_group_aliases(alias, name):
    assert canonical_group_name(alias) == name
    assert np.array_equal(group_elements(alias).elements, group_elements(name).elements)


def test_unknown_group_is_rejected():
    with pytest.raises(InvalidInputError):
        canonical_group_name("T12")


@pytest.mark.parametrize("name", ["O24", "I60"])
def test_elements_are_rotations(name):
    g = group_elements(name)
    for m in g:
        assert np.allclose(m @ m.T, np.eye(3), atol=1e-12)
        assert np.linalg.det(m) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("name", ["O24", "I60"])
def test_group_is_closed(name):
    g = group_elements(name)
    for a in g:
        for b in g:
            assert g.contains(a @ b, tol=1e-12)


@pytest.mark.parametrize("name", ["O24", "I60"])
def test_central_inversion_is_not_a_rotation_in_the_group(name):
    assert not group_elements(name).contains(-np.eye(3))


def test_rotation_matrix_quarter_turn():
    m = rotation_matrix([0, 0, 1], math.pi / 2)
    assert np.allclose(m @ [1, 0, 0], [0, 1, 0], atol=1e-15)


# ---------------------------------------------------------------------
# Orbits
# ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "name, point, size",
    [
        ("O24", (0, 0, 1), 6),
        ("O24", (1, 1, 1), 8),
        ("O24", (1, 1, 0), 12),
        ("O24", (0.3, 0.5, 0.81), 24),
        ("I60", (0, 1, PHI), 12),
        ("I60", (1, 0, 0), 30),
        ("I60", (0.3, 0.5, 0.81), 60),
    ],
)
def test_orbit_sizes(name, point, size):
    pts = orbit(group_elements(name), _unit(*point))
    assert len(pts) == size
    assert np.allclose(np.linalg.norm(pts, axis=1), 1.0, atol=1e-12)


def test_icosahedron_vertex_orbit_matches_golden_coordinates():
    pts = orbit(group_elements("I60"), _unit(0, 1, PHI))
    golden = {tuple(np.round(p * math.sqrt(1 + PHI ** 2), 9)) for p in pts}
    expected = set()
    for s1 in (1, -1):
        for s2 in (1, -1):
            a, b, c = 0.0, float(s1), s2 * PHI
            for q in ((a, b, c), (c, a, b), (b, c, a)):
                expected.add(tuple(np.round(q, 9) + 0.0))
    assert {tuple(np.array(p) + 0.0) for p in golden} == expected


def test_canonical_representative_is_orbit_invariant(rng):
    g = group_elements("I60")
    p = _unit(*rng.normal(size=3))
    rep = canonical_representative(g, p)
    for m in g:
        assert np.allclose(canonical_representative(g, m @ p), rep, atol=1e-12)
    assert rep[2] == pytest.approx(max(q[2] for q in orbit(g, p)), abs=1e-12)


# ---------------------------------------------------------------------
# Edge classes
# ---------------------------------------------------------------------

def test_octahedron_edges_form_one_class(octahedron):
    classes = edge_classes(octahedron.vertices, octahedron.edges, group_elements("O24"))
    assert [len(c) for c in classes] == [12]


def test_snub_cube_edge_classes(snub_cube):
    classes = edge_classes(snub_cube.vertices, snub_cube.edges, group_elements("O24"))
    assert sorted(len(c) for c in classes) == [12, 24, 24]
    assert sorted(e for c in classes for e in c) == list(snub_cube.edges)


def test_edge_classes_do_not_depend_on_edge_order(snub_cube, rng):
    g = group_elements("O24")
    edges = [snub_cube.edges[k][::-1] for k in rng.permutation(snub_cube.n_edges)]
    assert edge_classes(snub_cube.vertices, edges, g) == edge_classes(
        snub_cube.vertices, snub_cube.edges, g
    )


def test_edge_classes_are_orbits(snub_cube):
    g = group_elements("O24")
    classes = edge_classes(snub_cube.vertices, snub_cube.edges, g)
    for cls in classes:
        members = set(cls)
        assert cls == sorted(cls)
        for m in g:
            perm = point_permutation(m, snub_cube.vertices)
            images = {tuple(sorted((int(perm[i]), int(perm[j])))) for i, j in cls}
            assert images == members
    assert [c[0] for c in classes] == sorted(c[0] for c in classes)


def test_edge_classes_of_edge_subset_are_rejected(snub_cube):
    with pytest.raises(NonInvariantPointSetError, match="non-edge"):
        edge_classes(snub_cube.vertices, snub_cube.edges[:-1], group_elements("O24"))


def test_edge_classes_of_no_edges(snub_cube):
    assert edge_classes(snub_cube.vertices, [], group_elements("O24")) == []


def test_point_permutation_rejects_non_invariant_sets(snub_cube):
    with pytest.raises(NonInvariantPointSetError):
        point_permutation(rotation_matrix([0, 1, PHI], 2 * math.pi / 5), snub_cube.vertices)


def test_point_permutation_is_a_bijection(icosahedron):
    g = group_elements("I60")
    for m in g:
        perm = point_permutation(m, icosahedron.vertices)
        assert sorted(perm.tolist()) == list(range(12))
