# smg/constructions/solver.py

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass, field

import numpy as np

from smg.constructions.base import (
    ConstructionResult,
    OrbitParameters,
    PointLabel,
    certify,
    contact_graph_at,
    label_points,
)
from smg.core.config import PolishSettings, Settings
from smg.core.errors import (
    ConstructionError,
    JacobianCheckError,
    NoConvergenceError,
    SingularSystemError,
)
from smg.core.logger import get_logger
from smg.graph.embedding import Edge, EmbeddedGraph
from smg.symmetry.groups import RotationGroup, edge_classes

logger = get_logger(__name__)

ARMIJO_C = 1e-4
MIN_STEP = 2.0 ** -30


# -------------------------------------------------------------------
# Tangency system
# -------------------------------------------------------------------

@dataclass(frozen=True)
class TangencySystem:
    """
    One residual per edge orbit: distance between the endpoints of a
    representative edge minus lambda.

    Unknowns are the free seed coordinates and lambda, laid out as in
    OrbitParameters.vector().
    """

    group: RotationGroup
    template: OrbitParameters
    representatives: tuple[tuple[PointLabel, PointLabel], ...]
    class_sizes: tuple[int, ...] = field(default=())

    @classmethod
    def from_contacts(
        cls,
        group: RotationGroup,
        params: OrbitParameters,
        points: np.ndarray,
        edges: Sequence[Edge],
        labels: Sequence[PointLabel] | None = None,
    ) -> TangencySystem:
        labels = list(labels) if labels is not None else label_points(group, params, points)
        classes = edge_classes(points, edges, group)
        reps = tuple((labels[c[0][0]], labels[c[0][1]]) for c in classes)
        return cls(
            group=group,
            template=params,
            representatives=reps,
            class_sizes=tuple(len(c) for c in classes),
        )

    @property
    def n_residuals(self) -> int:
        return len(self.representatives)

    @property
    def n_unknowns(self) -> int:
        return self.template.n_unknowns

    def _seeds(self, x: np.ndarray) -> tuple[np.ndarray, float]:
        seeds = []
        k = 0
        for (theta, phi), free in zip(self.template.seeds, self.template.free):
            if free:
                theta, phi = x[k], x[k + 1]
                k += 2
            st = math.sin(theta)
            seeds.append((st * math.cos(phi), st * math.sin(phi), math.cos(theta)))
        return np.array(seeds), float(x[k])

    def residuals(self, x: Sequence[float]) -> np.ndarray:
        seeds, lam = self._seeds(np.asarray(x, dtype=float))
        elements = self.group.elements
        out = np.empty(self.n_residuals)
        for k, ((oa, ea), (ob, eb)) in enumerate(self.representatives):
            p = elements[ea] @ seeds[oa]
            q = elements[eb] @ seeds[ob]
            out[k] = math.atan2(float(np.linalg.norm(np.cross(p, q))), float(p @ q)) - lam
        return out

    def jacobian(self, x: Sequence[float], step: float, central: bool = True) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        base = None if central else self.residuals(x)
        cols = []
        for k in range(len(x)):
            dx = np.zeros_like(x)
            dx[k] = step
            if central:
                cols.append((self.residuals(x + dx) - self.residuals(x - dx)) / (2 * step))
            else:
                cols.append((self.residuals(x + dx) - base) / step)
        return np.column_stack(cols)


# -------------------------------------------------------------------
# Damped Gauss-Newton
# -------------------------------------------------------------------

@dataclass
class PolishResult:
    x: np.ndarray
    residual_max: float
    iterations: int
    history: list[float]


def check_jacobian(system: TangencySystem, x: np.ndarray, settings: PolishSettings) -> np.ndarray:
    """Central-difference Jacobian, compared once against forward differences."""
    central = system.jacobian(x, settings.fd_step, central=True)
    forward = system.jacobian(x, 10 * settings.fd_step, central=False)
    gap = float(np.max(np.abs(central - forward))) if central.size else 0.0
    scale = 1.0 + float(np.max(np.abs(central))) if central.size else 1.0
    if gap > settings.jacobian_check_tol * scale:
        raise JacobianCheckError(
            f"central and forward difference Jacobians differ by {gap:.3e}"
        )
    return central


def _check_conditioning(jac: np.ndarray, settings: PolishSettings) -> float:
    m, n = jac.shape
    if m < n:
        raise SingularSystemError(
            f"{m} tangency residuals cannot determine {n} unknowns"
        )
    s = np.linalg.svd(jac, compute_uv=False)
    if s[-1] <= 0 or s[0] / s[-1] > settings.condition_bound:
        cond = math.inf if s[-1] <= 0 else s[0] / s[-1]
        raise SingularSystemError(
            f"tangency Jacobian is rank deficient (condition number {cond:.3e})"
        )
    return float(s[0] / s[-1])


def polish_tangencies(
    system: TangencySystem,
    start: Sequence[float],
    settings: PolishSettings | None = None,
) -> PolishResult:
    """
    Drive every tangency residual to zero with damped Gauss-Newton.

    Each step solves the linearized system in the least-squares sense and
    backtracks until the squared residual norm drops by the Armijo factor.
    Raises SingularSystemError when the Jacobian at the start is rank
    deficient and NoConvergenceError when the iteration cap is hit.
    """
    settings = settings or PolishSettings()
    x = np.asarray(start, dtype=float).copy()
    if x.shape != (system.n_unknowns,):
        raise ValueError(f"expected {system.n_unknowns} unknowns, got {x.shape}")

    jac = check_jacobian(system, x, settings)
    cond = _check_conditioning(jac, settings)
    logger.debug(
        f"Polishing {system.n_residuals} residuals in {system.n_unknowns} unknowns "
        f"(condition {cond:.2e})"
    )

    history: list[float] = []
    r = system.residuals(x)
    for it in range(settings.max_iter + 1):
        rmax = float(np.max(np.abs(r)))
        history.append(rmax)
        logger.debug(f"Iteration {it}: max residual {rmax:.3e}")
        if rmax <= settings.tol:
            return PolishResult(x=x, residual_max=rmax, iterations=it, history=history)
        if it == settings.max_iter:
            break

        if it > 0:
            jac = system.jacobian(x, settings.fd_step)
        step, *_ = np.linalg.lstsq(jac, -r, rcond=None)

        f0 = float(r @ r)
        alpha = 1.0
        while True:
            trial = x + alpha * step
            r_trial = system.residuals(trial)
            if float(r_trial @ r_trial) <= (1 - 2 * ARMIJO_C * alpha) * f0:
                break
            alpha /= 2
            if alpha < MIN_STEP:
                raise NoConvergenceError(
                    f"line search stalled at max residual {rmax:.3e}", history
                )
        x, r = trial, r_trial

        lam = x[-1]
        if not (0.0 < lam < math.pi):
            raise NoConvergenceError(f"lambda left (0, pi): {lam!r}", history)

    raise NoConvergenceError(
        f"no convergence after {settings.max_iter} iterations "
        f"(max residual {history[-1]:.3e})",
        history,
    )


# -------------------------------------------------------------------
# Polish and certify
# -------------------------------------------------------------------

def realize(
    group: RotationGroup,
    params: OrbitParameters,
    name: str,
    degree: int = 5,
    settings: Settings | None = None,
    points: np.ndarray | None = None,
    start: Sequence[float] | None = None,
) -> ConstructionResult:
    """
    Turn orbit parameters into a certified matchstick graph.

    The contact graph is read at lambda * (1 + slack) from `points` (or the
    orbits of `params`), its edge orbits become the tangency system, the
    system is polished from `start` (default: `params`), and the result is
    certified. Exact `points` are kept when they already solve the system.
    """
    settings = settings or Settings()
    if points is None:
        points, labels = params.points(group, settings.verifier.dedup_tol)
    else:
        labels = label_points(group, params, points)

    edges = contact_graph_at(points, params.lam * (1 + settings.search.contact_slack))
    degrees = np.bincount(np.array(edges, dtype=int).ravel(), minlength=len(points))
    if edges == [] or not np.all(degrees == degree):
        raise ConstructionError(
            f"{name}: contact graph is not {degree}-regular "
            f"(degrees {int(degrees.min())}..{int(degrees.max())})"
        )

    system = TangencySystem.from_contacts(group, params, points, edges, labels)
    logger.info(
        f"{name}: {len(points)} points, {len(edges)} contacts in edge classes {list(system.class_sizes)}"
    )
    x0 = params.vector() if start is None else np.asarray(start, dtype=float)
    polished = polish_tangencies(system, x0, settings.polish)
    final = params.with_vector(polished.x)

    if polished.iterations > 0 or start is not None:
        seeds = final.seed_points()
        points = np.array([group.elements[e] @ seeds[o] for o, e in labels])

    graph = EmbeddedGraph(points, tuple(edges), final.lam, name)
    report, audit_result = certify(graph, degree, settings.verifier.tol)
    result = ConstructionResult(
        graph=graph,
        name=name,
        residual_max=polished.residual_max,
        iterations=polished.iterations,
        certificate=report,
        audit=audit_result,
        parameters=final,
        class_sizes=system.class_sizes,
    )
    if not result.certified:
        failed = ", ".join(c.name for c in report.failed()) or "discharging audit"
        raise ConstructionError(f"{name}: wrong contact structure, failed checks: {failed}")
    logger.info(
        f"{name}: certified, lambda={final.lam:.15f}, max residual {polished.residual_max:.2e} "
        f"after {polished.iterations} iterations"
    )
    return result
