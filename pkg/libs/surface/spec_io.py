"""JSON surface spec files."""

import hashlib
import json
from pathlib import Path
from typing import Any, Dict, List, Tuple, Union

from pydantic import BaseModel, Field, ValidationError

from .base import EPS_ANG, EPS_LEN, PolygonSpec, SurfaceValidationError
from .surface import TranslationSurface, build_surface

SPEC_FLOAT_DIGITS = 15


class PolygonSpecModel(BaseModel):
    """One polygon entry of a surface spec file."""

    id: int
    vertices: List[Tuple[float, float]] = Field(min_length=3)
    labels: List[str]


class SurfaceSpecModel(BaseModel):
    """Surface spec file: polygons plus unordered edge pairs."""

    polygons: List[PolygonSpecModel] = Field(min_length=1)
    gluings: List[Tuple[Tuple[int, int], Tuple[int, int]]]

    def to_surface(
        self, eps_len: float = EPS_LEN, eps_ang: float = EPS_ANG
    ) -> TranslationSurface:
        polygons = [
            PolygonSpec(
                id=entry.id,
                vertices=tuple((float(x), float(y)) for x, y in entry.vertices),
                labels=tuple(entry.labels),
            )
            for entry in self.polygons
        ]
        return build_surface(polygons, self.gluings, eps_len=eps_len, eps_ang=eps_ang)


def surface_to_spec(surface: TranslationSurface) -> SurfaceSpecModel:
    return SurfaceSpecModel(
        polygons=[
            PolygonSpecModel(
                id=polygon.id,
                vertices=[
                    (round(x, SPEC_FLOAT_DIGITS), round(y, SPEC_FLOAT_DIGITS))
                    for x, y in polygon.vertices
                ],
                labels=list(polygon.labels),
            )
            for polygon in surface.polygons
        ],
        gluings=[(gluing.first, gluing.second) for gluing in surface.gluings],
    )


def dump_surface_spec(surface: TranslationSurface) -> Dict[str, Any]:
    return surface_to_spec(surface).model_dump(mode="json")


def dumps_surface_spec(surface: TranslationSurface) -> str:
    return json.dumps(dump_surface_spec(surface), sort_keys=True, indent=2) + "\n"


def parse_surface_spec(
    payload: Union[str, bytes, Dict[str, Any]],
    eps_len: float = EPS_LEN,
    eps_ang: float = EPS_ANG,
) -> TranslationSurface:
    """Parse a spec document, raising SurfaceValidationError on any defect."""
    try:
        if isinstance(payload, dict):
            model = SurfaceSpecModel.model_validate(payload)
        else:
            model = SurfaceSpecModel.model_validate_json(payload)
    except ValidationError as e:
        raise SurfaceValidationError(f"malformed surface spec: {e}") from e
    return model.to_surface(eps_len=eps_len, eps_ang=eps_ang)


def load_surface_spec(
    path: Path, eps_len: float = EPS_LEN, eps_ang: float = EPS_ANG
) -> TranslationSurface:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise SurfaceValidationError(f"{path} is not UTF-8 text: {e}") from e
    return parse_surface_spec(text, eps_len=eps_len, eps_ang=eps_ang)


def spec_digest(surface: TranslationSurface) -> str:
    """sha256 of the canonical spec serialization."""
    return hashlib.sha256(dumps_surface_spec(surface).encode("utf-8")).hexdigest()
