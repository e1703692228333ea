"""flatcurve CLI - intersection ratios of closed curves on translation surfaces."""

import time
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional

import typer
from pydantic import BaseModel
from rich.console import Console
from rich.table import Table

from libs.builders import (
    BuilderParameterError,
    bouw_moller,
    regular_ngon,
    square_torus,
    surface_by_name,
)
from libs.geodesics import (
    CylinderDecompositionError,
    EnumerationBudgetError,
    NonPeriodicDirectionError,
    cylinder_decomposition,
    enumerate_saddle_connections,
)
from libs.kvolsearch import (
    SearchConfig,
    WitnessConstructionError,
    WitnessPreconditionError,
    construct_witness_pair_bm,
    explore_conjecture,
    sup_ratio,
)
from libs.surface import (
    SurfaceValidationError,
    TranslationSurface,
    dumps_surface_spec,
    load_surface_spec,
    spec_digest,
)

from .config import settings
from .logging import configure_logging
from .reporting import (
    conjecture_model,
    connection_rows,
    cylinders_model,
    dumps_csv,
    dumps_report,
    kvol_model,
    surface_summary,
    witness_model,
    write_report,
)
from .rendering import OverlayError, emit_svg, resolve_overlay
from .services.verification_service import SUITES, VerificationService

app = typer.Typer(
    name="flatcurve",
    help="flatcurve CLI - intersection ratios of closed curves on translation surfaces",
    no_args_is_help=True,
)

# human-readable output goes to stderr; stdout only carries JSON or CSV
console = Console(stderr=True)

SEED_OPTION = typer.Option(
    None, "--seed", help="Accepted and ignored: every computation is deterministic."
)
JSON_OPTION = typer.Option(
    None, "--json", help="Write the JSON report to this file ('-' for stdout)."
)


def _fail(message: str, code: int) -> NoReturn:
    console.print(f"❌ {message}", style="bold red")
    raise typer.Exit(code)


def _load_surface(value: str) -> TranslationSurface:
    """A family name (ngon10, bm-4-8, torus) or a surface spec file."""
    try:
        surface = surface_by_name(value)
        if surface is not None:
            return surface
        path = Path(value)
        if not path.exists():
            _fail(f"Not a surface name or file: {value}", 2)
        return load_surface_spec(
            path, eps_len=settings.EPS_LEN, eps_ang=settings.EPS_ANG
        )
    except (SurfaceValidationError, BuilderParameterError) as e:
        _fail(f"Invalid surface {value}: {e}", 2)
    except OSError as e:
        _fail(f"Cannot read {value}: {e}", 2)


def _emit(
    model: BaseModel,
    json_path: Optional[str],
    command: str,
    config: Dict[str, Any],
    started: float,
    surface: Optional[TranslationSurface] = None,
) -> None:
    if json_path is None:
        return
    text = dumps_report(model, settings.REPORT_FLOAT_DIGITS)
    if json_path == "-":
        typer.echo(text, nl=False)
        return
    try:
        write_report(
            text,
            Path(json_path),
            command=command,
            config=config,
            started=started,
            surface_hash=spec_digest(surface) if surface is not None else None,
        )
    except OSError as e:
        _fail(f"Cannot write {json_path}: {e}", 2)
    console.print(f"💾 Report written to {json_path}", style="green")


def _search_config(lmax: float, max_components: Optional[int]) -> SearchConfig:
    try:
        return SearchConfig(
            lmax=lmax,
            max_components=max_components,
            tolerance=settings.RATIO_TOLERANCE,
            max_copies=settings.MAX_COPIES,
            max_workers=settings.FLATCURVE_THREADS,
        )
    except ValueError as e:
        _fail(str(e), 2)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(
        None, "--log-level", help="structlog level (defaults to LOG_LEVEL)."
    ),
) -> None:
    """Configure logging before any command runs."""
    try:
        configure_logging(log_level or settings.LOG_LEVEL)
    except ValueError as e:
        _fail(str(e), 2)


@app.command()
def build(
    family: str = typer.Option(..., "--family", help="ngon, bm or torus"),
    n: Optional[int] = typer.Option(None, "--n", help="Polygon parameter n"),
    m: Optional[int] = typer.Option(None, "--m", help="Bouw-Moller parameter m"),
    raw_lengths: bool = typer.Option(
        False, "--raw-lengths", help="Keep the sin(iπ/m) side lengths unscaled"
    ),
    out: Optional[Path] = typer.Option(None, "--out", help="Spec file to write"),
) -> None:
    """Build a surface and print its spec JSON."""
    try:
        if family == "ngon" and n is not None:
            surface = regular_ngon(n)
        elif family == "bm" and m is not None and n is not None:
            surface = bouw_moller(m, n, normalized=not raw_lengths)
        elif family == "torus":
            surface = square_torus()
        else:
            _fail(f"Family {family!r} needs --n (ngon) or --m and --n (bm)", 2)
    except (BuilderParameterError, SurfaceValidationError) as e:
        _fail(str(e), 2)

    summary = surface_summary(surface)
    table = Table(title=f"Surface {summary.name}")
    table.add_column("Singularity", style="cyan")
    table.add_column("Cone angle / 2π", justify="right")
    table.add_column("Corners", justify="right")
    for s in summary.singularities:
        table.add_row(f"z{s.id}", str(s.order), str(s.corners))
    console.print(table)
    console.print(
        f"   Area: {summary.area:.9f}   l0: {summary.l0:.9f}   genus: {summary.genus}"
    )

    text = dumps_surface_spec(surface)
    if out is None:
        typer.echo(text, nl=False)
        return
    try:
        out.write_text(text)
    except OSError as e:
        _fail(f"Cannot write {out}: {e}", 2)
    console.print(f"✅ Spec written to {out}", style="bold green")


@app.command("enumerate")
def enumerate_command(
    surface_name: str = typer.Option(..., "--surface", help="Name or spec file"),
    lmax: float = typer.Option(..., "--lmax", help="Maximal length"),
    csv_path: Optional[str] = typer.Option(
        None, "--csv", help="CSV file to write ('-' for stdout)"
    ),
    seed: Optional[int] = SEED_OPTION,
) -> None:
    """Enumerate saddle connections up to a length."""
    surface = _load_surface(surface_name)
    console.print(f"🔍 Enumerating saddle connections up to {lmax}", style="bold blue")
    try:
        connections = enumerate_saddle_connections(
            surface,
            lmax,
            max_copies=settings.MAX_COPIES,
            max_workers=settings.FLATCURVE_THREADS,
            eps_len=settings.EPS_LEN,
            eps_ang=settings.EPS_ANG,
        )
    except ValueError as e:
        _fail(str(e), 2)
    except EnumerationBudgetError as e:
        _fail(f"Enumeration budget exceeded: {e}", 1)
    rows = connection_rows(surface, connections, settings.REPORT_FLOAT_DIGITS)

    if csv_path is None:
        table = Table(title=f"{len(rows)} saddle connections")
        for column in ("start", "end", "length", "angle", "cutting_sequence"):
            table.add_column(column, style="cyan" if column == "length" else None)
        for row in rows[:20]:
            table.add_row(
                str(row["start"]),
                str(row["end"]),
                f"{row['length']:.9f}",
                f"{row['angle']:.9f}",
                row["cutting_sequence"] or "-",
            )
        console.print(table)
        return
    text = dumps_csv(rows)
    if csv_path == "-":
        typer.echo(text, nl=False)
        return
    try:
        Path(csv_path).write_text(text)
    except OSError as e:
        _fail(f"Cannot write {csv_path}: {e}", 2)
    console.print(f"✅ {len(rows)} connections written to {csv_path}", style="green")


@app.command()
def kvol(
    surface_name: str = typer.Option(..., "--surface", help="Name or spec file"),
    lmax: float = typer.Option(
        settings.DEFAULT_LMAX, "--lmax", help="Maximal component length"
    ),
    max_components: Optional[int] = typer.Option(
        None, "--max-components", help="Components per curve (default: singularities)"
    ),
    json_path: Optional[str] = JSON_OPTION,
    seed: Optional[int] = SEED_OPTION,
) -> None:
    """Maximal |Int|/(l·l) over pairs of closed curves."""
    started = time.monotonic()
    surface = _load_surface(surface_name)
    config = _search_config(lmax, max_components)
    console.print(f"🔍 Searching {surface_name} up to length {lmax}", style="bold blue")
    try:
        report = sup_ratio(surface, config)
    except EnumerationBudgetError as e:
        _fail(f"Enumeration budget exceeded: {e}", 1)

    table = Table(title=f"Maximal ratio on {report.surface}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("max |Int|/(l·l)", f"{report.max_ratio:.12f}")
    table.add_row("× l0²", f"{report.normalized_ratio:.12f}")
    table.add_row("area · sup", f"{report.area_sup:.12f}")
    if report.closed_form is not None:
        table.add_row("(n/8)·tan(π/n)", f"{report.closed_form:.12f}")
    table.add_row("curves / pairs", f"{report.curves} / {report.pairs}")
    table.add_row("achievers", str(len(report.achievers)))
    table.add_row("excluded overlaps", str(report.excluded))
    console.print(table)
    if report.witness is not None:
        console.print(f"   Witness: {report.witness.first_curve}")
        console.print(f"            {report.witness.second_curve}")

    _emit(
        kvol_model(report),
        json_path,
        "kvol",
        {"surface": surface_name, "lmax": lmax, "max_components": max_components},
        started,
        surface,
    )
    if not report.verified:
        _fail("An achiever failed the independent recount", 1)
    if report.truncated:
        _fail(f"{report.truncated} achievers were left unverified", 1)
    console.print("✅ Search complete", style="bold green")


@app.command()
def verify(
    suite: str = typer.Option(..., "--suite", help=" | ".join(SUITES)),
    lmax: Optional[float] = typer.Option(
        None, "--lmax", help="Override the search window of the suite"
    ),
    json_path: Optional[str] = JSON_OPTION,
    seed: Optional[int] = SEED_OPTION,
) -> None:
    """Run a verification suite; exit 1 when a gating check fails."""
    started = time.monotonic()
    if suite not in SUITES:
        _fail(f"Unknown suite {suite!r}; choose from {', '.join(SUITES)}", 2)
    console.print(f"🧪 Running suite {suite}", style="bold blue")
    service = VerificationService(
        max_workers=settings.FLATCURVE_THREADS,
        max_copies=settings.MAX_COPIES,
        tolerance=settings.RATIO_TOLERANCE,
        kvol_lmax=lmax,
    )
    try:
        report = service.run(suite)
    except EnumerationBudgetError as e:
        _fail(f"Enumeration budget exceeded: {e}", 1)

    table = Table(title=f"Suite {suite}")
    table.add_column("Check", style="cyan")
    table.add_column("Status", justify="center")
    for check in report.checks:
        if check.passed:
            status = "[green]passed[/green]"
        elif check.gating:
            status = "[red]failed[/red]"
        else:
            status = "[yellow]noted[/yellow]"
        table.add_row(check.name, status)
    console.print(table)
    for check in report.checks:
        for finding in check.findings[:3]:
            console.print(f"   {check.name}: {finding}", style="yellow")

    _emit(report, json_path, "verify", {"suite": suite, "lmax": lmax}, started)
    if not report.passed:
        _fail(f"Suite {suite} failed", 1)
    console.print(f"✅ Suite {suite} passed", style="bold green")


@app.command()
def witness(
    family: str = typer.Option("bm", "--family", help="Only bm is supported"),
    m: int = typer.Option(..., "--m"),
    n: int = typer.Option(..., "--n"),
    json_path: Optional[str] = JSON_OPTION,
    seed: Optional[int] = SEED_OPTION,
) -> None:
    """Two side curves meeting twice with the same sign on S_{m,n}."""
    started = time.monotonic()
    if family != "bm":
        _fail(f"No witness construction for family {family!r}", 2)
    try:
        pair = construct_witness_pair_bm(m, n)
    except (WitnessPreconditionError, BuilderParameterError) as e:
        _fail(str(e), 2)
    except WitnessConstructionError as e:
        _fail(str(e), 1)

    console.print(f"🎯 Witness on S_{m},{n}", style="bold blue")
    console.print(f"   α = {pair.first.describe()}  (length {pair.first.length:.9f})")
    console.print(f"   β = {pair.second.describe()}  (length {pair.second.length:.9f})")
    console.print(f"   Int(α, β) = {pair.report.algebraic}   ratio = {pair.ratio:.12f}")
    _emit(witness_model(m, n, pair), json_path, "witness", {"m": m, "n": n}, started)


@app.command()
def conjecture(
    m: int = typer.Option(..., "--m"),
    n: int = typer.Option(..., "--n"),
    lmax: float = typer.Option(
        settings.DEFAULT_LMAX, "--lmax", help="Maximal component length"
    ),
    max_components: Optional[int] = typer.Option(2, "--max-components"),
    json_path: Optional[str] = JSON_OPTION,
    seed: Optional[int] = SEED_OPTION,
) -> None:
    """Compare the maximal ratio on S_{m,n}, gcd(m, n) = n, with 1/(4·l0²)."""
    started = time.monotonic()
    config = _search_config(lmax, max_components)
    try:
        report = explore_conjecture(m, n, config)
    except (WitnessPreconditionError, BuilderParameterError) as e:
        _fail(str(e), 2)
    except EnumerationBudgetError as e:
        _fail(f"Enumeration budget exceeded: {e}", 1)

    table = Table(title=f"S_{m},{n} against 1/(4·l0²)")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", justify="right")
    table.add_row("bound", f"{report.bound:.12f}")
    table.add_row("max ratio", f"{report.search.max_ratio:.12f}")
    table.add_row("best side pair", f"{report.side_ratio:.12f}")
    console.print(table)
    if report.exceeds_bound:
        console.print(
            "⚠️  A pair exceeds 1/(4·l0²): the bound fails at this scale",
            style="bold red",
        )
    _emit(
        conjecture_model(report),
        json_path,
        "conjecture",
        {"m": m, "n": n, "lmax": lmax, "max_components": max_components},
        started,
    )


@app.command()
def cylinders(
    surface_name: str = typer.Option(..., "--surface", help="Name or spec file"),
    direction: float = typer.Option(0.0, "--direction", help="Angle in radians"),
    json_path: Optional[str] = JSON_OPTION,
) -> None:
    """Cylinder decomposition in a periodic direction."""
    started = time.monotonic()
    surface = _load_surface(surface_name)
    try:
        decomposition = cylinder_decomposition(surface, direction)
    except (NonPeriodicDirectionError, CylinderDecompositionError) as e:
        _fail(str(e), 2)

    model = cylinders_model(surface, decomposition)
    table = Table(title=f"Cylinders of {model.surface} in direction {direction}")
    table.add_column("#", style="cyan")
    table.add_column("Circumference", justify="right")
    table.add_column("Height", justify="right")
    table.add_column("Modulus", justify="right")
    for index, cylinder in enumerate(model.cylinders):
        table.add_row(
            str(index),
            f"{cylinder.circumference:.9f}",
            f"{cylinder.height:.9f}",
            f"{cylinder.modulus:.9f}",
        )
    console.print(table)
    console.print(f"   Area: {model.total_area:.9f} of {model.surface_area:.9f}")
    _emit(
        model,
        json_path,
        "cylinders",
        {"surface": surface_name, "direction": direction},
        started,
        surface,
    )


@app.command()
def svg(
    surface_name: str = typer.Option(..., "--surface", help="Name or spec file"),
    out: Path = typer.Option(..., "--out", help="SVG file to write"),
    overlay: List[str] = typer.Option(
        [],
        "--overlay",
        help="cylinders[:θ], connection:<i>, delta or witness; repeatable",
    ),
    lmax: float = typer.Option(4.0, "--lmax", help="Window for connection overlays"),
) -> None:
    """Draw the polygons with overlays."""
    surface = _load_surface(surface_name)
    try:
        layers = [resolve_overlay(surface, item, lmax) for item in overlay]
    except OverlayError as e:
        _fail(str(e), 2)
    except (NonPeriodicDirectionError, CylinderDecompositionError) as e:
        _fail(f"Cannot draw cylinders: {e}", 2)
    except (WitnessPreconditionError, WitnessConstructionError) as e:
        _fail(f"Cannot draw the witness: {e}", 2)
    try:
        emit_svg(surface, layers, out)
    except OSError as e:
        _fail(f"Cannot write {out}: {e}", 2)
    console.print(f"✅ Figure written to {out}", style="bold green")


def cli() -> None:
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    cli()
