# modshare/cli/commands/place.py

from pathlib import Path
from typing import Optional

import typer

from modshare.application.use_cases.plan_placement import PlanPlacement
from modshare.cli.options.common import FormatOption, IncludeCloudOption, ReplicateOption, ScenarioArgument
from modshare.cli.utils import handle_cli_errors, planning_options, resolve_format, seconds
from modshare.container import container
from modshare.domain.exceptions.exception import PlacementInfeasibleException
from modshare.domain.models.common import OutputFormat, format_params

PLACEMENT_COLUMNS = ["module", "kind", "memory", "devices", "owners"]


def default_placement_path(scenario: str) -> Path:
    return Path(f"{Path(scenario).stem}.placement.json")


@handle_cli_errors
def place(
    scenario: str = ScenarioArgument,
    upper: bool = typer.Option(False, "--upper", help="Brute-force optimal placement instead of greedy"),
    output: Optional[Path] = typer.Option(None, "--output", "-o", help="Placement file (default: <scenario>.placement.json)"),
    include_cloud: Optional[bool] = IncludeCloudOption,
    replicate: Optional[bool] = ReplicateOption,
    fmt: Optional[OutputFormat] = FormatOption,
):
    """Place the shared modules on devices (greedy, or brute force with --upper)."""
    fmt = resolve_format(fmt)
    use_case = PlanPlacement(repository=container.get_repository())
    try:
        outcome = use_case.execute(
            scenario,
            options=planning_options(include_cloud, replicate),
            upper=upper,
            output=output or default_placement_path(scenario),
        )
    except PlacementInfeasibleException as e:
        if e.trace is not None:
            typer.echo("🧭 Placement steps before failing:", err=True)
            for line in e.trace.log_lines():
                typer.echo(f"   {line}", err=True)
        raise

    rows = [
        {
            "module": m.function_key,
            "kind": m.kind.value,
            "memory": format_params(m.memory_req) if fmt == OutputFormat.table else m.memory_req,
            "devices": ",".join(outcome.placement.hosts(m.function_key)),
            "owners": ",".join(outcome.catalog.owners[m.function_key]),
        }
        for m in outcome.catalog.distinct_modules
    ]
    renderer = container.get_renderer(fmt)
    typer.echo(renderer.render(f"{outcome.method} placement", PLACEMENT_COLUMNS, rows))

    if fmt == OutputFormat.table:
        if outcome.trace is not None:
            typer.echo("🧭 Placement steps:")
            for line in outcome.trace.log_lines():
                typer.echo(f"   {line}")
        typer.secho(f"⏱️  Objective (sum of analytic latency): {seconds(outcome.objective)}s", fg=typer.colors.BRIGHT_CYAN)
        typer.secho(f"✅ Placement written to {outcome.written_to}", fg=typer.colors.GREEN)


def register_place_commands(app: typer.Typer):
    app.command("place")(place)
