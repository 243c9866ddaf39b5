# modshare/cli/commands/compare.py

from typing import Optional

import typer

from modshare.application.use_cases.compare_deployments import CompareDeployments
from modshare.cli.options.common import FormatOption, IncludeCloudOption, ScenarioArgument
from modshare.cli.utils import handle_cli_errors, planning_options, resolve_format, seconds, sim_options, split_list
from modshare.container import container
from modshare.domain.models.common import OutputFormat, format_params

DEPLOYMENT_COLUMNS = ["model", "centralized", "split_max", "delta", "cloud", "local", "split"]
MODE_COLUMNS = ["mode", "mean_total", "makespan", "max_device_memory", "total_memory"]


@handle_cli_errors
def compare(
    scenario: str = ScenarioArgument,
    devices: Optional[str] = typer.Option(None, "--devices", help="Comma-separated devices to keep"),
    requester: Optional[str] = typer.Option(None, "--requester", help="Device issuing the requests"),
    modes: bool = typer.Option(False, "--modes", help="With csv/json, print the mode comparison instead"),
    end_to_end: Optional[bool] = typer.Option(None, "--end-to-end/--inference-only", help="Charge module load times"),
    include_cloud: Optional[bool] = IncludeCloudOption,
    fmt: Optional[OutputFormat] = FormatOption,
):
    """Deployment cost and latency per model, plus a comparison of execution modes."""
    fmt = resolve_format(fmt)
    table = fmt == OutputFormat.table
    use_case = CompareDeployments(repository=container.get_repository())
    outcome = use_case.execute(
        scenario,
        devices=split_list(devices),
        requester=requester,
        options=planning_options(include_cloud),
        sim=sim_options(end_to_end),
    )

    params = format_params if table else (lambda count: count)
    deployment_rows = [
        {
            "model": row.model_id,
            "centralized": params(row.centralized_params),
            "split_max": params(row.split_max_params),
            "delta": f"{row.delta_percent}%" if table else row.delta_percent,
            "cloud": seconds(row.cloud_latency),
            "local": seconds(row.local_latency),
            "split": seconds(row.split_latency),
        }
        for row in outcome.deployments
    ]
    mode_rows = [
        {
            "mode": m.mode,
            "mean_total": seconds(m.mean_total),
            "makespan": seconds(m.makespan),
            "max_device_memory": params(m.max_device_memory),
            "total_memory": params(m.total_memory),
        }
        for m in outcome.modes.modes
    ]

    renderer = container.get_renderer(fmt)
    if not table:
        if modes:
            typer.echo(renderer.render("modes", MODE_COLUMNS, mode_rows))
        else:
            typer.echo(renderer.render("deployment", DEPLOYMENT_COLUMNS, deployment_rows))
        return

    typer.echo(renderer.render("deployment cost and latency", DEPLOYMENT_COLUMNS, deployment_rows))
    typer.echo(renderer.render("execution modes", MODE_COLUMNS, mode_rows))


def register_compare_commands(app: typer.Typer):
    app.command("compare")(compare)
