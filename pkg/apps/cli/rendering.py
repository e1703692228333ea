"""Deterministic SVG figures of surfaces with connection and cylinder overlays."""

import math
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import drawsvg as draw
import structlog

from libs.geodesics import (
    CylinderDecomposition,
    SaddleConnection,
    cylinder_decomposition,
    cylinder_regions,
    enumerate_saddle_connections,
)
from libs.kvolsearch import construct_witness_pair_bm
from libs.segments import is_delta
from libs.surface import TranslationSurface

logger = structlog.get_logger()

COORD_DIGITS = 6
SCALE = 80.0
MARGIN = 20.0
STROKE = "#222222"
CYLINDER_FILLS = ("#cfe3f7", "#f7dfc4", "#d5efcf", "#ead4f0", "#f4f0c2", "#d8d8d8")
CURVE_COLOURS = ("#c0392b", "#2471a3", "#1e8449", "#7d3c98", "#b9770e")


class OverlayError(ValueError):
    """Raised for an overlay id that names nothing on the surface."""


@dataclass(frozen=True)
class Overlay:
    """One layer drawn over the polygons."""

    name: str
    connections: Tuple[SaddleConnection, ...] = ()
    decomposition: Optional[CylinderDecomposition] = None


def _xy(point: Sequence[float]) -> Tuple[float, float]:
    # svg y grows downwards
    return (
        round(SCALE * float(point[0]), COORD_DIGITS) + 0.0,
        round(-SCALE * float(point[1]), COORD_DIGITS) + 0.0,
    )


def _flat(points: Sequence[Sequence[float]]) -> List[float]:
    out: List[float] = []
    for point in points:
        out.extend(_xy(point))
    return out


def resolve_overlay(
    surface: TranslationSurface, overlay_id: str, lmax: float
) -> Overlay:
    """Turn an overlay id into drawable content.

    Ids: ``cylinders[:θ]``, ``connection:<i>`` (index into the enumeration up
    to ``lmax``), ``delta``, ``witness`` (Bouw-Moller surfaces only).
    """
    kind, _, argument = overlay_id.partition(":")
    if kind == "cylinders":
        try:
            direction = float(argument) if argument else 0.0
        except ValueError:
            raise OverlayError(f"bad cylinder direction {argument!r}") from None
        return Overlay(
            overlay_id, decomposition=cylinder_decomposition(surface, direction)
        )
    if kind == "connection":
        connections = enumerate_saddle_connections(surface, lmax)
        try:
            index = int(argument)
            chosen = connections[index]
        except (ValueError, IndexError):
            raise OverlayError(
                f"no connection {argument!r} among {len(connections)} "
                f"of length <= {lmax}"
            ) from None
        return Overlay(overlay_id, connections=(chosen,))
    if kind == "delta":
        candidates = [
            sc
            for sc in enumerate_saddle_connections(surface, lmax)
            if is_delta(surface, sc)
        ]
        if not candidates:
            raise OverlayError(f"no image of Δ of length <= {lmax}")
        return Overlay(overlay_id, connections=(candidates[0],))
    if kind == "witness":
        if surface.family.kind != "bouw_moller":
            raise OverlayError("the witness overlay needs a Bouw-Moller surface")
        pair = construct_witness_pair_bm(surface.family.m, surface.family.n)
        return Overlay(
            overlay_id,
            connections=pair.first.components + pair.second.components,
        )
    raise OverlayError(f"unknown overlay {overlay_id!r}")


def render_svg(surface: TranslationSurface, overlays: Sequence[Overlay]) -> str:
    points = [p for polygon in surface.polygons for p in polygon.vertices]
    xs = [SCALE * x for x, _ in points]
    ys = [-SCALE * y for _, y in points]
    left, top = min(xs) - MARGIN, min(ys) - MARGIN
    width = math.ceil(max(xs) - min(xs) + 2 * MARGIN)
    height = math.ceil(max(ys) - min(ys) + 2 * MARGIN)
    d = draw.Drawing(width, height, origin=(round(left, 3), round(top, 3)))

    for overlay in overlays:
        if overlay.decomposition is None:
            continue
        regions = cylinder_regions(surface, overlay.decomposition)
        for polygon_id in sorted(regions):
            for cyl_index, band in regions[polygon_id]:
                d.append(
                    draw.Lines(
                        *_flat(band),
                        close=True,
                        fill=CYLINDER_FILLS[cyl_index % len(CYLINDER_FILLS)],
                        stroke="none",
                    )
                )

    for polygon in surface.polygons:
        d.append(
            draw.Lines(
                *_flat(polygon.vertices),
                close=True,
                fill="none",
                stroke=STROKE,
                stroke_width=1.5,
            )
        )
        for edge, label in enumerate(polygon.labels):
            midpoint = polygon.vertex(edge) + 0.5 * polygon.edges[edge]
            inward = polygon.centroid - midpoint
            spot = midpoint + 0.12 * inward / max(float(math.hypot(*inward)), 1e-9)
            x, y = _xy(spot)
            d.append(
                draw.Text(
                    label,
                    11,
                    x,
                    y,
                    text_anchor="middle",
                    dominant_baseline="middle",
                    fill="#555555",
                )
            )

    colour = 0
    for overlay in overlays:
        for sc in overlay.connections:
            stroke = CURVE_COLOURS[colour % len(CURVE_COLOURS)]
            colour += 1
            for piece in sc.pieces:
                x1, y1 = _xy(piece.start)
                x2, y2 = _xy(piece.end)
                d.append(
                    draw.Line(x1, y1, x2, y2, stroke=stroke, stroke_width=2.0)
                )
    return d.as_svg()


def emit_svg(
    surface: TranslationSurface, overlays: Sequence[Overlay], path: Path
) -> Path:
    """Write the figure; raises OSError when ``path`` is not writable."""
    path = Path(path)
    path.write_text(render_svg(surface, overlays))
    logger.info(
        "svg_written",
        path=str(path),
        overlays=[overlay.name for overlay in overlays],
    )
    return path
