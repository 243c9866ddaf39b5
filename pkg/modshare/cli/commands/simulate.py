# modshare/cli/commands/simulate.py

from pathlib import Path
from typing import Optional

import typer

from modshare.application.use_cases.simulate_trace import SimulateTrace
from modshare.cli.options.common import (
    AutoOption,
    FormatOption,
    IncludeCloudOption,
    PlacementOption,
    ReplicateOption,
    ScenarioArgument,
)
from modshare.cli.utils import handle_cli_errors, planning_options, resolve_format, seconds, sim_options
from modshare.container import container
from modshare.domain.models.common import OutputFormat, Pipelining, format_params
from modshare.infrastructure.render.timeline import gantt_text, timeline_csv

REQUEST_COLUMNS = ["request", "model", "arrival", "t_enc", "t_head", "t_total", "queue_wait"]
MEMORY_COLUMNS = ["model", "no_share", "shared", "delta", "saving"]


@handle_cli_errors
def simulate(
    scenario: str = ScenarioArgument,
    placement: Optional[Path] = PlacementOption,
    auto: bool = AutoOption,
    share: bool = typer.Option(True, "--share/--no-share", help="Deduplicate modules across models"),
    timeline: bool = typer.Option(False, "--timeline", help="Print a per-device Gantt view"),
    timeline_csv_path: Optional[Path] = typer.Option(None, "--timeline-csv", help="Write the event timeline as CSV"),
    repeat: int = typer.Option(1, "--repeat", min=1, help="Number of runs; runs after the first get arrival jitter"),
    jitter: float = typer.Option(0.0, "--jitter", min=0.0, help="Maximum arrival jitter in seconds"),
    seed: int = typer.Option(0, "--seed", help="Seed for the arrival jitter"),
    end_to_end: Optional[bool] = typer.Option(None, "--end-to-end/--inference-only", help="Charge module load times"),
    pipelining: Optional[Pipelining] = typer.Option(None, "--pipelining", help="fine, coarse or none"),
    sequential: bool = typer.Option(False, "--sequential", help="Run each request's encoders one after another"),
    include_cloud: Optional[bool] = IncludeCloudOption,
    replicate: Optional[bool] = ReplicateOption,
    fmt: Optional[OutputFormat] = FormatOption,
):
    """Route and simulate the request trace; reports latency, makespan and memory."""
    fmt = resolve_format(fmt)
    placement = None if auto else placement
    if placement is not None and not share:
        typer.secho("❌ --no-share plans its own per-model copies; drop --placement or use --share.",
                    fg=typer.colors.RED, err=True)
        raise typer.Exit(code=1)
    if repeat > 1 and jitter == 0:
        typer.secho(f"⚠️  --repeat {repeat} without --jitter repeats the same run.", fg=typer.colors.YELLOW, err=True)

    use_case = SimulateTrace(repository=container.get_repository())
    outcome = use_case.execute(
        scenario,
        placement_path=placement,
        share=share,
        options=planning_options(include_cloud, replicate),
        sim=sim_options(end_to_end, pipelining, sequential),
        repeat=repeat,
        jitter=jitter,
        seed=seed,
    )
    result = outcome.result

    rows = [
        {
            "request": r.request_id,
            "model": r.model_id,
            "arrival": seconds(r.arrival),
            "t_enc": seconds(r.t_enc),
            "t_head": seconds(r.t_head),
            "t_total": seconds(r.t_total),
            "queue_wait": seconds(r.queue_wait),
        }
        for r in result.requests
    ]
    renderer = container.get_renderer(fmt)
    typer.echo(renderer.render("latency", REQUEST_COLUMNS, rows))

    if timeline_csv_path is not None:
        timeline_csv_path.write_text(timeline_csv(result), encoding="utf-8")

    summary = [
        f"⏱️  Mean latency: {seconds(result.mean_total)}s   Makespan: {seconds(result.makespan)}s",
        f"🧠 Deployed parameters ({'shared' if outcome.shared else 'no-share'}): {format_params(outcome.deployed_memory)}",
    ]
    if len(outcome.runs) > 1:
        summary.append(
            f"🔁 Over {len(outcome.runs)} runs: mean latency {seconds(outcome.mean_total)}s, "
            f"mean makespan {seconds(outcome.mean_makespan)}s"
        )
    if fmt != OutputFormat.table:
        # keep stdout machine-readable
        for line in summary:
            typer.echo(line, err=True)
        return

    for line in summary:
        typer.secho(line, fg=typer.colors.BRIGHT_CYAN)
    typer.echo(renderer.render("memory", MEMORY_COLUMNS, outcome.memory.rows()))
    typer.echo(
        f"💾 Total: {format_params(outcome.memory.shared_total)} shared vs "
        f"{format_params(outcome.memory.no_share_total)} without sharing (-{outcome.memory.share_saving}%)"
    )
    if timeline:
        typer.echo(gantt_text(result, outcome.scenario))


def register_simulate_commands(app: typer.Typer):
    app.command("simulate")(simulate)
