# smg/io/graph_file.py

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, Field, ValidationError

from smg import __version__
from smg.core.errors import GraphFileError
from smg.core.logger import get_logger
from smg.graph.embedding import EmbeddedGraph

logger = get_logger(__name__)

FORMAT_TAG = "smg-1"
# Norm drift corrected silently below the first bound, with a warning up to the second.
RENORMALIZE_QUIET = 1e-12
RENORMALIZE_LIMIT = 1e-9


# -------------------------------------------------------------------
# File model
# -------------------------------------------------------------------

class GraphMetadata(BaseModel):
    name: Optional[str] = None
    residual_max: Optional[float] = None
    generator_version: Optional[str] = None


class GraphFile(BaseModel):
    format: str = Field(pattern=f"^{FORMAT_TAG}$")
    lam: float = Field(alias="lambda")
    vertices: list[tuple[float, float, float]]
    edges: list[tuple[int, int]]
    metadata: Optional[GraphMetadata] = None

    model_config = {"populate_by_name": True}

    @classmethod
    def from_graph(
        cls, g: EmbeddedGraph, residual_max: float | None = None
    ) -> GraphFile:
        return cls(
            format=FORMAT_TAG,
            lam=g.lam,
            vertices=[tuple(float(c) for c in v) for v in g.vertices],
            edges=[(int(i), int(j)) for i, j in g.edges],
            metadata=GraphMetadata(
                name=g.name or None,
                residual_max=residual_max,
                generator_version=__version__,
            ),
        )


def _num(x: float) -> str:
    if not math.isfinite(x):
        raise GraphFileError(f"non-finite value {x!r} cannot be written")
    return f"{x:.17g}"


def dumps(doc: GraphFile) -> str:
    """Fixed key order, one vertex and one edge per line, 17 significant digits."""
    lines = ["{", f'  "format": {json.dumps(doc.format)},', f'  "lambda": {_num(doc.lam)},']

    lines.append('  "vertices": [')
    for k, v in enumerate(doc.vertices):
        sep = "," if k < len(doc.vertices) - 1 else ""
        lines.append(f"    [{_num(v[0])}, {_num(v[1])}, {_num(v[2])}]{sep}")
    lines.append("  ],")

    lines.append('  "edges": [')
    for k, (i, j) in enumerate(doc.edges):
        sep = "," if k < len(doc.edges) - 1 else ""
        lines.append(f"    [{i}, {j}]{sep}")

    if doc.metadata is None:
        lines.append("  ]")
    else:
        lines.append("  ],")
        meta = doc.metadata
        fields = [
            f'"name": {json.dumps(meta.name)}',
            f'"residual_max": {"null" if meta.residual_max is None else _num(meta.residual_max)}',
            f'"generator_version": {json.dumps(meta.generator_version)}',
        ]
        lines.append('  "metadata": {' + ", ".join(fields) + "}")
    lines.append("}")
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------
# Reading
# -------------------------------------------------------------------

def _validation_message(exc: ValidationError) -> str:
    err = exc.errors()[0]
    where = ".".join(str(p) for p in err["loc"]) or "document"
    return f"{where}: {err['msg']}"


def parse_graph(text: str, source: str = "<string>") -> GraphFile:
    try:
        raw: Any = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphFileError(f"{source}: malformed file at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise GraphFileError(f"{source}: top level must be an object")
    try:
        return GraphFile.model_validate(raw)
    except ValidationError as exc:
        raise GraphFileError(f"{source}: {_validation_message(exc)}") from exc


def to_graph(
    doc: GraphFile, source: str = "<string>", unit_tol: float = RENORMALIZE_QUIET
) -> EmbeddedGraph:
    """Check every record of a parsed file and build the graph."""
    if not (0.0 < doc.lam < math.pi):
        raise GraphFileError(f"{source}: lambda={doc.lam!r} outside (0, pi)")

    verts = np.array(doc.vertices, dtype=float).reshape(-1, 3)
    for i, v in enumerate(verts):
        if not np.all(np.isfinite(v)):
            raise GraphFileError(f"{source}: vertices[{i}] is not finite")
        drift = abs(float(np.linalg.norm(v)) - 1.0)
        if drift > RENORMALIZE_LIMIT:
            raise GraphFileError(f"{source}: vertices[{i}] has norm drift {drift:.3e}")
        if drift > unit_tol:
            logger.warning(f"{source}: vertices[{i}] renormalized (drift {drift:.3e})")
            verts[i] = v / np.linalg.norm(v)

    n = len(verts)
    seen: set[tuple[int, int]] = set()
    in_order = True
    previous: tuple[int, int] | None = None
    for k, (i, j) in enumerate(doc.edges):
        if i == j:
            raise GraphFileError(f"{source}: edges[{k}] = [{i}, {j}] is a loop")
        if not (0 <= i < n and 0 <= j < n):
            raise GraphFileError(f"{source}: edges[{k}] = [{i}, {j}] index out of range 0..{n - 1}")
        e = (min(i, j), max(i, j))
        if e in seen:
            raise GraphFileError(f"{source}: edges[{k}] = [{i}, {j}] is a duplicate edge")
        seen.add(e)
        if e != (i, j) or (previous is not None and e < previous):
            in_order = False
        previous = e
    if not in_order:
        logger.warning(f"{source}: edge list not in canonical order; reordered")

    name = doc.metadata.name if doc.metadata is not None and doc.metadata.name else ""
    return EmbeddedGraph(verts, tuple(seen), doc.lam, name)


def read_graph_file(path: str | Path) -> GraphFile:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise GraphFileError(f"{p}: cannot read ({exc.strerror})") from exc
    return parse_graph(text, str(p))


def read_graph(path: str | Path, unit_tol: float = RENORMALIZE_QUIET) -> EmbeddedGraph:
    return to_graph(read_graph_file(path), str(path), unit_tol)


# -------------------------------------------------------------------
# Writing
# -------------------------------------------------------------------

def write_text_atomic(path: str | Path, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    p = Path(path)
    fd, tmp = tempfile.mkstemp(dir=p.parent or Path("."), prefix=f".{p.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, p)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_graph(
    g: EmbeddedGraph, path: str | Path, residual_max: float | None = None
) -> None:
    write_text_atomic(path, dumps(GraphFile.from_graph(g, residual_max)))
    logger.info(f"Wrote {g.n_vertices} vertices and {g.n_edges} edges to {path}")
