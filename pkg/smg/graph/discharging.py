# smg/graph/discharging.py

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Any, Optional

import numpy as np

from smg.core.errors import ChargeDomainError
from smg.core.logger import get_logger
from smg.graph.embedding import EmbeddedGraph, EulerReport, FaceSet, euler_report, trace_faces

logger = get_logger(__name__)

THIRD = math.pi / 3
TWO_THIRDS = 2 * math.pi / 3
AREA_RATE = 3 / (2 * math.pi)


# -------------------------------------------------------------------
# Transfer function
# -------------------------------------------------------------------

def charge_function(alpha: float) -> float:
    """
    Charge c(alpha) sent from a face to a vertex across a corner of angle alpha:

        0                          if alpha <= pi/3
        (3 / 2pi) * alpha - 1/2    if pi/3 <= alpha <= 2pi/3
        1/2                        if alpha >= 2pi/3

    The outer branches are returned as exact constants so the boundary
    values agree.
    """
    if not (0.0 < alpha < 2 * math.pi):
        raise ChargeDomainError(f"corner angle {alpha!r} outside (0, 2pi)")
    if alpha <= THIRD:
        return 0.0
    if alpha >= TWO_THIRDS:
        return 0.5
    return AREA_RATE * alpha - 0.5


def vertex_final_charge(degree: int, angles: Sequence[float]) -> float:
    """Final charge of a vertex from its degree and its corner angles."""
    return degree / 2 - 3 + math.fsum(charge_function(a) for a in angles)


# -------------------------------------------------------------------
# Ledger
# -------------------------------------------------------------------

@dataclass(frozen=True)
class Transfer:
    face: int
    vertex: int
    angle: float
    amount: float


@dataclass
class EqualityFlags:
    connected: bool = False
    all_faces_345: bool = False
    all_angles_in_interval: bool = False
    all_degree_5: bool = False

    def all(self) -> bool:
        return (
            self.connected
            and self.all_faces_345
            and self.all_angles_in_interval
            and self.all_degree_5
        )

    def as_dict(self) -> dict[str, bool]:
        return {
            "connected": self.connected,
            "all_faces_345": self.all_faces_345,
            "all_angles_in_interval": self.all_angles_in_interval,
            "all_degree_5": self.all_degree_5,
        }


@dataclass
class ChargeLedger:
    vertex_initial: np.ndarray
    face_initial: np.ndarray
    transfers: list[Transfer] = field(default_factory=list)
    vertex_final: Optional[np.ndarray] = None
    face_final: Optional[np.ndarray] = None
    equality_flags: EqualityFlags = field(default_factory=EqualityFlags)

    @property
    def total_initial(self) -> float:
        return math.fsum(self.vertex_initial) + math.fsum(self.face_initial)

    @property
    def total_final(self) -> float:
        if self.vertex_final is None or self.face_final is None:
            raise ValueError("transfers have not been run")
        return math.fsum(self.vertex_final) + math.fsum(self.face_final)

    def finals(self) -> np.ndarray:
        if self.vertex_final is None or self.face_final is None:
            raise ValueError("transfers have not been run")
        return np.concatenate([self.vertex_final, self.face_final])


def initial_charges(g: EmbeddedGraph, fs: FaceSet) -> ChargeLedger:
    """deg(v)/2 - 3 on every vertex, deg(f) - 3 + (3/2pi) area(f) on every face."""
    vertex_initial = g.degrees / 2.0 - 3.0
    face_initial = np.array(
        [f.degree - 3 + AREA_RATE * f.area for f in fs.faces], dtype=float
    )
    return ChargeLedger(vertex_initial=vertex_initial, face_initial=face_initial)


def run_transfers(g: EmbeddedGraph, fs: FaceSet, ledger: ChargeLedger) -> ChargeLedger:
    """One transfer of c(alpha) per (vertex, face, angle) incidence, face to vertex."""
    transfers = sorted(
        (Transfer(inc.face, inc.vertex, inc.angle, charge_function(inc.angle)) for inc in fs.incidences),
        key=lambda t: (t.face, t.vertex),
    )

    received: list[list[float]] = [[] for _ in range(g.n_vertices)]
    sent: list[list[float]] = [[] for _ in range(fs.n_faces)]
    for t in transfers:
        received[t.vertex].append(t.amount)
        sent[t.face].append(t.amount)

    ledger.transfers = transfers
    ledger.vertex_final = np.array(
        [ledger.vertex_initial[v] + math.fsum(received[v]) for v in range(g.n_vertices)]
    )
    ledger.face_final = np.array(
        [ledger.face_initial[f] - math.fsum(sent[f]) for f in range(fs.n_faces)]
    )
    return ledger


# -------------------------------------------------------------------
# Audit
# -------------------------------------------------------------------

@dataclass
class AuditResult:
    ledger: ChargeLedger
    euler: EulerReport
    tol: float
    # Total with faces bounded by several walks counted once, as the Euler
    # argument counts them; <= 0 with equality iff connected.
    euler_adjusted_total: float
    closed_form_total: Optional[float]

    @property
    def min_vertex_final(self) -> float:
        vf = self.ledger.vertex_final
        return float(vf.min()) if vf is not None and len(vf) else 0.0

    @property
    def min_face_final(self) -> float:
        ff = self.ledger.face_final
        return float(ff.min()) if ff is not None and len(ff) else 0.0

    @property
    def finals_nonnegative(self) -> bool:
        return min(self.min_vertex_final, self.min_face_final) >= -self.tol

    @property
    def all_finals_zero(self) -> bool:
        return bool(np.all(np.abs(self.ledger.finals()) <= self.tol))

    @property
    def total_nonpositive(self) -> bool:
        return self.ledger.total_initial <= self.tol

    @property
    def passed(self) -> bool:
        return self.total_nonpositive and self.finals_nonnegative

    def as_dict(self) -> dict[str, Any]:
        ledger = self.ledger
        assert ledger.vertex_final is not None and ledger.face_final is not None
        return {
            "V": self.euler.V,
            "E": self.euler.E,
            "F": self.euler.F,
            "connected": self.euler.connected,
            "total_initial": ledger.total_initial,
            "total_final": ledger.total_final,
            "euler_adjusted_total": self.euler_adjusted_total,
            "closed_form_total": self.closed_form_total,
            "min_vertex_final": self.min_vertex_final,
            "min_face_final": self.min_face_final,
            "finals_nonnegative": self.finals_nonnegative,
            "all_finals_zero": self.all_finals_zero,
            "equality_flags": ledger.equality_flags.as_dict(),
            "vertex_initial": ledger.vertex_initial.tolist(),
            "vertex_final": ledger.vertex_final.tolist(),
            "face_initial": ledger.face_initial.tolist(),
            "face_final": ledger.face_final.tolist(),
            "transfers": [
                {"face": t.face, "vertex": t.vertex, "angle": t.angle, "amount": t.amount}
                for t in ledger.transfers
            ],
        }


def equality_flags(
    g: EmbeddedGraph, fs: FaceSet, euler: EulerReport, tol: float
) -> EqualityFlags:
    return EqualityFlags(
        connected=euler.connected,
        all_faces_345=all(f.degree in (3, 4, 5) and f.is_simple_cycle() for f in fs.faces),
        all_angles_in_interval=all(
            THIRD - tol < a <= TWO_THIRDS + tol for f in fs.faces for a in f.corner_angles
        ),
        all_degree_5=bool(g.n_vertices) and bool(np.all(g.degrees == 5)),
    )


def audit(g: EmbeddedGraph, tol: float = 1e-9, fs: FaceSet | None = None) -> AuditResult:
    """Run the full charging argument on an embedding and collect the ledger."""
    fs = fs if fs is not None else trace_faces(g)
    euler = euler_report(g, fs)

    ledger = run_transfers(g, fs, initial_charges(g, fs))
    ledger.equality_flags = equality_flags(g, fs, euler, tol)

    drift = abs(ledger.total_final - ledger.total_initial)
    if drift > 1e-12 * max(1.0, len(ledger.transfers)):
        logger.warning(f"Charge not conserved: drift {drift:.3e}")

    closed_form = None
    if euler.connected:
        closed_form = 3 * euler.E - 3 * euler.V - 3 * euler.F + 6.0

    result = AuditResult(
        ledger=ledger,
        euler=euler,
        tol=tol,
        euler_adjusted_total=ledger.total_initial - 1.5 * (euler.chi - 2),
        closed_form_total=closed_form,
    )

    if not result.total_nonpositive:
        logger.error(f"Total initial charge {ledger.total_initial:.3e} is positive")
    if not result.finals_nonnegative:
        logger.info(
            f"Negative final charge: min vertex {result.min_vertex_final:.3e}, "
            f"min face {result.min_face_final:.3e}"
        )
    return result
