# smg/io/exporters.py

from __future__ import annotations

import csv
import io
import xml.etree.ElementTree as ET
from collections.abc import Callable, Sequence

import numpy as np

from smg.core.logger import get_logger
from smg.geometry.sphgeom import normalize, sample_arc, tangent_frame
from smg.graph.embedding import EmbeddedGraph, FaceSet, trace_faces

logger = get_logger(__name__)

ARC_SAMPLES = 64
SVG_SIZE = 512.0
SVG_MARGIN = 16.0


# -------------------------------------------------------------------
# OFF
# -------------------------------------------------------------------

def to_off(g: EmbeddedGraph, fs: FaceSet | None = None) -> str:
    """Polygon mesh: vertices plus traced faces, each listed counterclockwise from outside."""
    fs = fs if fs is not None else trace_faces(g)
    lines = ["OFF", f"{g.n_vertices} {fs.n_faces} {g.n_edges}"]
    lines.extend(f"{x:.17g} {y:.17g} {z:.17g}" for x, y, z in g.vertices)
    for face in fs.faces:
        walk = face.oriented_walk()
        lines.append(" ".join(str(v) for v in (len(walk), *walk)))
    return "\n".join(lines) + "\n"


# -------------------------------------------------------------------
# CSV
# -------------------------------------------------------------------

def to_csv(g: EmbeddedGraph) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["i", "j", "length_rad"])
    for (i, j), length in zip(g.edges, g.edge_lengths()):
        writer.writerow([i, j, f"{length:.17g}"])
    return buf.getvalue()


# -------------------------------------------------------------------
# SVG
# -------------------------------------------------------------------

def _fmt(v: float) -> str:
    return f"{v:.3f}"


def to_svg(
    g: EmbeddedGraph,
    view: Sequence[float] = (0.0, 0.0, 1.0),
    size: float = SVG_SIZE,
    samples: int = ARC_SAMPLES,
) -> str:
    """
    Orthographic projection looking down `view` at the sphere.

    Every edge becomes one sampled polyline path; edges whose midpoint lies
    on the far hemisphere are drawn dashed.
    """
    axis = normalize(np.asarray(view, dtype=float))
    e1, e2 = tangent_frame(axis)
    radius = size / 2 - SVG_MARGIN
    centre = size / 2

    def project(p: np.ndarray) -> tuple[float, float]:
        return centre + radius * float(p @ e1), centre - radius * float(p @ e2)

    svg = ET.Element(
        "svg",
        {
            "xmlns": "http://www.w3.org/2000/svg",
            "version": "1.1",
            "width": _fmt(size),
            "height": _fmt(size),
            "viewBox": f"0 0 {_fmt(size)} {_fmt(size)}",
        },
    )
    if g.name:
        ET.SubElement(svg, "title").text = g.name
    ET.SubElement(
        svg,
        "circle",
        {"cx": _fmt(centre), "cy": _fmt(centre), "r": _fmt(radius), "fill": "none", "stroke": "#999"},
    )

    back = ET.SubElement(svg, "g", {"stroke": "#888", "fill": "none", "stroke-dasharray": "4 3"})
    front = ET.SubElement(svg, "g", {"stroke": "#000", "fill": "none"})
    for i, j in g.edges:
        pts = sample_arc(g.vertices[i], g.vertices[j], samples)
        mid = pts[len(pts) // 2]
        coords = [project(p) for p in pts]
        d = "M " + " L ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in coords)
        parent = back if float(mid @ axis) < 0 else front
        ET.SubElement(parent, "path", {"d": d, "data-edge": f"{i}-{j}"})

    ET.indent(svg)
    return ET.tostring(svg, encoding="unicode") + "\n"


EXPORTERS: dict[str, Callable[[EmbeddedGraph], str]] = {
    "off": to_off,
    "svg": to_svg,
    "csv": to_csv,
}


def export(g: EmbeddedGraph, fmt: str, view: Sequence[float] | None = None) -> str:
    """Render `g` in `fmt`; `view` only applies to svg."""
    if fmt not in EXPORTERS:
        raise ValueError(f"Unknown format '{fmt}'. Available: {', '.join(EXPORTERS)}")
    if fmt == "svg" and view is not None:
        text = to_svg(g, view=view)
    else:
        text = EXPORTERS[fmt](g)
    logger.debug(f"Exported {g.name or 'graph'} as {fmt} ({len(text)} bytes)")
    return text
