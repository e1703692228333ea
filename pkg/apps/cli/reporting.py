"""Report schemas, JSON/CSV writers and the run manifest sidecar."""

import csv
import hashlib
import io
import json
import time
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from libs.builders import detect_ngon
from libs.geodesics import CylinderDecomposition, SaddleConnection
from libs.kvolsearch import (
    CaseLemmaReport,
    ConjectureReport,
    KVolReport,
    PairRecord,
    WitnessPair,
)
from libs.segments import SectorDiagrams, bm_subdivide, classify_type, subdivide
from libs.surface import TranslationSurface

SCHEMA_VERSION = "1.0"
ARTIFACT_VERSION = "0.1.0"

CSV_COLUMNS = (
    "start",
    "end",
    "hx",
    "hy",
    "length",
    "angle",
    "cutting_sequence",
    "n_count",
    "type",
)


class SingularityModel(BaseModel):
    id: int
    cone_angle: float
    order: int
    corners: int


class SurfaceSummary(BaseModel):
    """Invariants of a built surface."""

    schema_version: str = SCHEMA_VERSION
    name: str
    polygons: int
    singularities: List[SingularityModel]
    area: float
    l0: float
    genus: int


class PairModel(BaseModel):
    first_curve: str
    second_curve: str
    algebraic: int
    interior: int
    singular: List[int]
    first_length: float
    second_length: float
    ratio: float
    two_side_pair: bool


class KVolReportModel(BaseModel):
    """Maximal ratio search over one surface."""

    schema_version: str = SCHEMA_VERSION
    surface: str
    lmax: float
    max_components: int
    l0: float
    area: float
    connections: int
    curves: int
    pairs: int
    max_ratio: float
    normalized_ratio: float
    area_sup: float
    closed_form: Optional[float] = None
    closed_form_matches: Optional[bool] = None
    witness: Optional[PairModel] = None
    achievers: List[PairModel] = Field(default_factory=list)
    excluded: int = 0
    excluded_sample: List[Tuple[int, int]] = Field(default_factory=list)
    verified: bool = True
    truncated: int = 0
    side_pairs: int = 0


class CheckModel(BaseModel):
    """One named assertion of a verification suite."""

    name: str
    passed: bool
    gating: bool = True
    details: Dict[str, Any] = Field(default_factory=dict)
    findings: List[str] = Field(default_factory=list)


class VerificationReportModel(BaseModel):
    schema_version: str = SCHEMA_VERSION
    suite: str
    passed: bool
    checks: List[CheckModel]


class WitnessReportModel(BaseModel):
    schema_version: str = SCHEMA_VERSION
    m: int
    n: int
    first_curve: str
    second_curve: str
    first_length: float
    second_length: float
    algebraic: int
    ratio: float


class ConjectureReportModel(BaseModel):
    schema_version: str = SCHEMA_VERSION
    m: int
    n: int
    bound: float
    exceeds_bound: bool
    side_ratio: float
    side_pair_matches: bool
    side_witness: Optional[PairModel] = None
    search: KVolReportModel


class CylinderModel(BaseModel):
    circumference: float
    height: float
    area: float
    modulus: float
    bottom: List[str]
    top: List[str]


class CylindersReportModel(BaseModel):
    schema_version: str = SCHEMA_VERSION
    surface: str
    direction: float
    cylinders: List[CylinderModel]
    total_area: float
    surface_area: float


class RunManifest(BaseModel):
    """Provenance of one report; kept beside it so the report stays stable."""

    command: str
    config_hash: str
    surface_hash: Optional[str] = None
    version: str = ARTIFACT_VERSION
    wall_time: float
    result_digest: str


def round_floats(value: Any, digits: int) -> Any:
    """Round every float in a JSON-like tree; -0.0 becomes 0.0."""
    if isinstance(value, float):
        return round(value, digits) + 0.0
    if isinstance(value, dict):
        return {key: round_floats(item, digits) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [round_floats(item, digits) for item in value]
    return value


def dumps_report(model: BaseModel, digits: int) -> str:
    payload = round_floats(model.model_dump(mode="json"), digits)
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def write_report(
    text: str,
    path: Path,
    command: str,
    config: Dict[str, Any],
    started: float,
    surface_hash: Optional[str] = None,
) -> Path:
    """Write the report and ``<report>.manifest.json`` next to it."""
    path = Path(path)
    path.write_text(text)
    manifest = RunManifest(
        command=command,
        config_hash=digest(json.dumps(config, sort_keys=True, default=str)),
        surface_hash=surface_hash,
        wall_time=round(time.monotonic() - started, 3),
        result_digest=digest(text),
    )
    sidecar = path.with_name(path.name + ".manifest.json")
    sidecar.write_text(
        json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
    )
    return sidecar


def surface_name(surface: TranslationSurface) -> str:
    if surface.family.kind != "custom":
        return surface.family.name
    n = detect_ngon(surface)
    return f"ngon{n}" if n is not None else "custom"


def surface_summary(surface: TranslationSurface) -> SurfaceSummary:
    return SurfaceSummary(
        name=surface_name(surface),
        polygons=len(surface.polygons),
        singularities=[
            SingularityModel(
                id=s.id, cone_angle=s.cone_angle, order=s.order, corners=len(s.fan)
            )
            for s in surface.singularities
        ],
        area=surface.area,
        l0=surface.l0,
        genus=surface.genus,
    )


def pair_model(record: PairRecord) -> PairModel:
    return PairModel(
        first_curve=record.first_curve,
        second_curve=record.second_curve,
        algebraic=record.algebraic,
        interior=record.interior,
        singular=list(record.singular),
        first_length=record.first_length,
        second_length=record.second_length,
        ratio=record.ratio,
        two_side_pair=record.two_side_pair,
    )


def kvol_model(report: KVolReport) -> KVolReportModel:
    return KVolReportModel(
        surface=report.surface,
        lmax=report.lmax,
        max_components=report.max_components,
        l0=report.l0,
        area=report.area,
        connections=report.connections,
        curves=report.curves,
        pairs=report.pairs,
        max_ratio=report.max_ratio,
        normalized_ratio=report.normalized_ratio,
        area_sup=report.area_sup,
        closed_form=report.closed_form,
        closed_form_matches=report.closed_form_matches,
        witness=pair_model(report.witness) if report.witness else None,
        achievers=[pair_model(record) for record in report.achievers],
        excluded=report.excluded,
        excluded_sample=list(report.excluded_sample),
        verified=report.verified,
        truncated=report.truncated,
        side_pairs=len(report.side_pairs),
    )


def witness_model(m: int, n: int, pair: WitnessPair) -> WitnessReportModel:
    return WitnessReportModel(
        m=m,
        n=n,
        first_curve=pair.first.describe(),
        second_curve=pair.second.describe(),
        first_length=pair.first.length,
        second_length=pair.second.length,
        algebraic=pair.report.algebraic,
        ratio=pair.ratio,
    )


def conjecture_model(report: ConjectureReport) -> ConjectureReportModel:
    return ConjectureReportModel(
        m=report.m,
        n=report.n,
        bound=report.bound,
        exceeds_bound=report.exceeds_bound,
        side_ratio=report.side_ratio,
        side_pair_matches=report.side_pair_matches,
        side_witness=pair_model(report.side_witness) if report.side_witness else None,
        search=kvol_model(report.search),
    )


def cylinders_model(
    surface: TranslationSurface, decomposition: CylinderDecomposition
) -> CylindersReportModel:
    describe = [sc.describe() for sc in decomposition.connections]
    return CylindersReportModel(
        surface=surface_name(surface),
        direction=decomposition.direction,
        cylinders=[
            CylinderModel(
                circumference=c.circumference,
                height=c.height,
                area=c.area,
                modulus=c.modulus,
                bottom=[describe[i] for i in c.bottom],
                top=[describe[i] for i in c.top],
            )
            for c in decomposition.cylinders
        ],
        total_area=decomposition.total_area,
        surface_area=surface.area,
    )


def lemma_checks(report: CaseLemmaReport) -> List[CheckModel]:
    return [
        CheckModel(
            name=f"case_lemma_{lemma.name}",
            passed=lemma.passed,
            details={
                "statement": lemma.statement,
                "checked": lemma.checked,
                "equalities": lemma.equalities,
                "max_value": lemma.max_value,
            },
            findings=list(lemma.violations),
        )
        for lemma in report.lemmas
    ]


def connection_rows(
    surface: TranslationSurface,
    connections: Sequence[SaddleConnection],
    digits: int,
) -> List[Dict[str, Any]]:
    """CSV rows; ``n_count`` and ``type`` stay empty where they are undefined."""
    n = detect_ngon(surface)
    diagrams = SectorDiagrams(surface) if n is not None and n % 4 == 2 else None
    bouw_moller = surface.family.kind == "bouw_moller"
    rows = []
    for sc in connections:
        n_count: Any = ""
        sc_type: Any = ""
        if diagrams is not None:
            n_count = subdivide(surface, sc, diagrams).counts.n
            sc_type = classify_type(surface, sc, diagrams)
        elif bouw_moller:
            n_count = bm_subdivide(surface, sc).counts.n
        rows.append(
            {
                "start": sc.start.singularity,
                "end": sc.end.singularity,
                "hx": round(sc.holonomy[0], digits) + 0.0,
                "hy": round(sc.holonomy[1], digits) + 0.0,
                "length": round(sc.length, digits),
                "angle": round(sc.angle, digits),
                "cutting_sequence": " ".join(sc.cutting_sequence),
                "n_count": n_count,
                "type": sc_type,
            }
        )
    return rows


def dumps_csv(rows: Sequence[Dict[str, Any]]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    writer.writerows(rows)
    return buffer.getvalue()
