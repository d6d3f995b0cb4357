from __future__ import annotations

import math

import numpy as np
import pytest

from smg.core.errors import ChargeDomainError
from smg.geometry.sphgeom import from_spherical
from smg.graph.discharging import (
    audit,
    charge_function,
    initial_charges,
    run_transfers,
    vertex_final_charge,
)
from smg.graph.embedding import EmbeddedGraph, trace_faces


def _ring_graph(k: int, colatitude: float, south: bool = False, offset: int = 0):
    pts = from_spherical(np.full(k, colatitude), np.arange(k) * 2 * math.pi / k)
    if south:
        pts = pts * np.array([1.0, 1.0, -1.0])
    edges = [(offset + i, offset + (i + 1) % k) for i in range(k)]
    return pts, edges


# ---------------------------------------------------------------------
# Transfer function
# ---------------------------------------------------------------------

@pytest.mark.parametrize(
    "alpha, expected",
    [
        (math.pi / 3, 0.0),
        (math.pi / 2, 0.25),
        (2 * math.pi / 5, 0.1),
        (2 * math.pi / 3, 0.5),
        (math.pi, 0.5),
        (0.1, 0.0),
    ],
)
def test_charge_function_values(alpha, expected):
    assert charge_function(alpha) == pytest.approx(expected, abs=1e-15)


def test_charge_function_boundaries_are_exact():
    assert charge_function(math.pi / 3) == 0.0
    assert charge_function(2 * math.pi / 3) == 0.5
    assert charge_function(math.pi / 3 + 1e-12) == pytest.approx(0.0, abs=1e-11)
    assert charge_function(2 * math.pi / 3 - 1e-12) == pytest.approx(0.5, abs=1e-11)


def test_charge_function_is_monotone_and_bounded():
    alphas = np.linspace(1e-6, 2 * math.pi - 1e-6, 20_001)
    values = np.array([charge_function(a) for a in alphas])
    assert np.all(np.diff(values) >= 0)
    assert values.min() == 0.0
    assert values.max() == 0.5


@pytest.mark.parametrize("alpha", [0.0, -0.5, 2 * math.pi, 7.0])
def test_charge_function_rejects_out_of_range(alpha):
    with pytest.raises(ChargeDomainError):
        charge_function(alpha)


def test_vertex_final_charge_is_nonnegative_for_degree_five_and_up(rng):
    for _ in range(20_000):
        degree = int(rng.integers(5, 9))
        angles = np.maximum(rng.dirichlet(np.ones(degree)), 1e-15) * 2 * math.pi
        assert vertex_final_charge(degree, angles) >= -1e-12


def test_degree_four_vertex_can_end_negative():
    # two wide corners exactly pay for a degree-4 vertex
    angles = [math.pi / 3, math.pi / 3, 2 * math.pi / 3, 2 * math.pi / 3]
    assert vertex_final_charge(4, angles) == pytest.approx(0.0, abs=1e-15)
    assert vertex_final_charge(4, [0.5, 0.5, 0.5, 2 * math.pi - 1.5]) < 0


# ---------------------------------------------------------------------
# Ledger on the small polyhedra
# ---------------------------------------------------------------------

def test_icosahedron_initial_charges(icosahedron):
    fs = trace_faces(icosahedron)
    ledger = initial_charges(icosahedron, fs)
    assert np.allclose(ledger.vertex_initial, -0.5)
    assert np.allclose(ledger.face_initial, 0.3, atol=1e-12)
    assert ledger.total_initial == pytest.approx(0.0, abs=1e-9)


def test_icosahedron_transfers(icosahedron):
    fs = trace_faces(icosahedron)
    ledger = run_transfers(icosahedron, fs, initial_charges(icosahedron, fs))
    assert len(ledger.transfers) == 60
    assert all(t.amount == pytest.approx(0.1, abs=1e-12) for t in ledger.transfers)
    assert np.allclose(ledger.finals(), 0.0, atol=1e-9)


@pytest.mark.parametrize("graph", ["icosahedron", "snub_cube"])
def test_target_graphs_balance_exactly(graph, request):
    result = audit(request.getfixturevalue(graph))
    assert result.ledger.total_initial == pytest.approx(0.0, abs=1e-9)
    assert result.all_finals_zero
    assert result.ledger.equality_flags.all()
    assert result.passed


def test_octahedron_balances_without_degree_five(octahedron):
    result = audit(octahedron)
    ledger = result.ledger
    assert np.allclose(ledger.vertex_initial, -1.0)
    assert np.allclose(ledger.face_initial, 0.75, atol=1e-12)
    assert result.all_finals_zero
    flags = ledger.equality_flags
    assert flags.connected and flags.all_faces_345 and flags.all_angles_in_interval
    assert not flags.all_degree_5


def test_icosahedron_without_one_edge(icosahedron):
    g = icosahedron.with_edges(icosahedron.edges[1:])
    result = audit(g)
    assert result.ledger.total_initial == pytest.approx(0.0, abs=1e-9)
    assert result.closed_form_total == 0.0
    assert not result.ledger.equality_flags.all_degree_5
    # the two degree-4 ends of the removed edge
    assert result.min_vertex_final == pytest.approx(-0.2, abs=1e-9)
    assert not result.passed


# ---------------------------------------------------------------------
# Conservation and totals
# ---------------------------------------------------------------------

@pytest.mark.parametrize("graph", ["octahedron", "icosahedron", "snub_cube"])
def test_charge_is_conserved(graph, request):
    ledger = audit(request.getfixturevalue(graph)).ledger
    assert ledger.total_final == pytest.approx(ledger.total_initial, abs=1e-12)
    for v in range(len(ledger.vertex_final)):
        incoming = sum(t.amount for t in ledger.transfers if t.vertex == v)
        assert ledger.vertex_final[v] == pytest.approx(ledger.vertex_initial[v] + incoming, abs=1e-12)


@pytest.mark.parametrize("graph", ["octahedron", "icosahedron", "snub_cube"])
def test_total_matches_closed_form(graph, request):
    result = audit(request.getfixturevalue(graph))
    assert result.closed_form_total is not None
    assert result.ledger.total_initial == pytest.approx(result.closed_form_total, abs=1e-9)


def test_hexagon_faces_stay_nonnegative():
    pts, edges = _ring_graph(6, 0.8)
    g = EmbeddedGraph(pts, edges, lam=float(np.arccos(pts[0] @ pts[1])))
    result = audit(g)
    assert trace_faces(g).census() == {6: 2}
    assert np.all(result.ledger.face_final >= 0)
    assert result.ledger.total_initial == pytest.approx(0.0, abs=1e-9)
    assert not result.ledger.equality_flags.all_faces_345


def test_disconnected_total_is_negative_once_faces_merge():
    top, top_edges = _ring_graph(3, 0.3)
    bottom, bottom_edges = _ring_graph(3, 0.3, south=True, offset=3)
    pts = np.vstack([top, bottom])
    g = EmbeddedGraph(pts, top_edges + bottom_edges, lam=float(np.arccos(top[0] @ top[1])))
    result = audit(g)
    assert not result.euler.connected
    assert result.closed_form_total is None
    assert result.euler_adjusted_total == pytest.approx(-3.0, abs=1e-9)
    assert not result.ledger.equality_flags.connected


def test_audit_serializes(icosahedron):
    data = audit(icosahedron).as_dict()
    assert (data["V"], data["E"], data["F"]) == (12, 30, 20)
    assert len(data["transfers"]) == 60
    assert data["equality_flags"]["all_degree_5"] is True
