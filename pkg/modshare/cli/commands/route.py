# modshare/cli/commands/route.py

from pathlib import Path
from typing import Optional

import typer

from modshare.application.use_cases.route_requests import RouteRequests
from modshare.cli.options.common import (
    AutoOption,
    FormatOption,
    IncludeCloudOption,
    PlacementOption,
    ReplicateOption,
    ScenarioArgument,
)
from modshare.cli.utils import handle_cli_errors, planning_options, resolve_format, seconds
from modshare.config.settings import settings
from modshare.container import container
from modshare.domain.models.common import OutputFormat

ROUTE_COLUMNS = [
    "request", "modality", "device", "input_comm", "comp", "output_comm", "path",
    "head_device", "t_enc", "t_head", "t_total", "oracle_total",
]


@handle_cli_errors
def route(
    scenario: str = ScenarioArgument,
    placement: Optional[Path] = PlacementOption,
    auto: bool = AutoOption,
    oracle: bool = typer.Option(False, "--oracle", help="Also report the brute-force route for each request"),
    include_cloud: Optional[bool] = IncludeCloudOption,
    replicate: Optional[bool] = ReplicateOption,
    fmt: Optional[OutputFormat] = FormatOption,
):
    """Route every request to its fastest hosts and print the analytic latency breakdown."""
    fmt = resolve_format(fmt)
    use_case = RouteRequests(repository=container.get_repository())
    outcome = use_case.execute(
        scenario,
        placement_path=None if auto else placement,
        options=planning_options(include_cloud, replicate),
        oracle=oracle,
        limit=settings.routing.brute_force_limit,
    )

    rows = []
    for item in outcome.requests:
        b = item.breakdown
        for path in b.encoders:
            rows.append({
                "request": b.request_id,
                "modality": path.modality,
                "device": path.device_id,
                "input_comm": seconds(path.input_comm),
                "comp": seconds(path.comp),
                "output_comm": seconds(path.output_comm),
                "path": seconds(path.path_total),
                "head_device": item.route.head_device,
                "t_enc": seconds(b.t_enc),
                "t_head": seconds(b.t_head),
                "t_total": seconds(b.t_total),
                "oracle_total": seconds(item.oracle_total),
            })
    columns = ROUTE_COLUMNS if oracle else ROUTE_COLUMNS[:-1]
    typer.echo(container.get_renderer(fmt).render("routes", columns, rows))

    if fmt == OutputFormat.table:
        typer.secho(f"⏱️  Mean analytic latency: {seconds(outcome.mean_total)}s", fg=typer.colors.BRIGHT_CYAN)
        if outcome.mean_gap is not None:
            typer.secho(f"🔍 Mean gap to brute-force routing: {seconds(outcome.mean_gap)}s", fg=typer.colors.BRIGHT_CYAN)


def register_route_commands(app: typer.Typer):
    app.command("route")(route)
