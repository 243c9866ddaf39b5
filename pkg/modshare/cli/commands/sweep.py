# modshare/cli/commands/sweep.py

from pathlib import Path
from typing import Optional

import typer

from modshare.application.use_cases.sweep_optimality import SweepOptimality, SweepRow
from modshare.cli.options.common import FormatOption
from modshare.cli.utils import handle_cli_errors, resolve_format
from modshare.config.settings import settings
from modshare.container import container
from modshare.domain.models.common import OutputFormat
from modshare.domain.models.instance import GenParams

SWEEP_COLUMNS = list(SweepRow.model_fields)


@handle_cli_errors
def sweep(
    seed: int = typer.Option(0, "--seed", min=0, help="First seed"),
    seeds: int = typer.Option(100, "--seeds", min=1, help="Number of consecutive seeds"),
    devices: str = typer.Option("5..5", "--devices", help="Device count range, e.g. 3..4"),
    models: str = typer.Option("1..1", "--models", help="Model count range"),
    encoders: str = typer.Option("1..3", "--encoders", help="Encoders per model"),
    modules: Optional[str] = typer.Option("2..4", "--modules", help="Distinct module count range"),
    requests: str = typer.Option("1..1", "--requests", help="Requests per model"),
    heterogeneity: str = typer.Option("10..20", "--heterogeneity", help="Slowest over fastest device"),
    share_probability: float = typer.Option(0.5, "--share-probability", min=0.0, max=1.0),
    infeasible_probability: float = typer.Option(0.0, "--infeasible-probability", min=0.0, max=1.0),
    csv_path: Optional[Path] = typer.Option(None, "--csv", help="Write per-instance results to this CSV file"),
    emit: bool = typer.Option(False, "--emit", help="Write each generated scenario for replay"),
    emit_dir: Path = typer.Option(Path("."), "--emit-dir", help="Directory for --emit"),
    fmt: Optional[OutputFormat] = FormatOption,
):
    """Greedy placement against the brute-force optimum on generated instances."""
    fmt = resolve_format(fmt)
    params = GenParams(
        seed=seed,
        n_devices=devices,
        n_models=models,
        encoders_per_model=encoders,
        n_modules=modules,
        requests_per_model=requests,
        heterogeneity=heterogeneity,
        share_probability=share_probability,
        infeasible_probability=infeasible_probability,
    )
    use_case = SweepOptimality(repository=container.get_repository())
    outcome = use_case.execute(
        params, seeds=seeds, emit_dir=emit_dir if emit else None, limit=settings.placement.brute_force_limit,
    )

    rows = [row.model_dump() for row in outcome.rows]
    if csv_path is not None:
        table = container.get_renderer(OutputFormat.csv).render("sweep", SWEEP_COLUMNS, rows)
        csv_path.write_text(table, encoding="utf-8")

    summary = [
        f"🎯 Optimality rate: {outcome.optimality_rate:.3f} ({sum(r.optimal for r in outcome.rows)}/{len(outcome.rows)})",
        f"📏 Mean gap: {outcome.mean_gap:.6f}s",
        "📊 Gap histogram: " + ", ".join(f"{k}: {v}" for k, v in outcome.histogram().items()),
        f"⏭️  Skipped: {outcome.skipped}",
    ]
    for path in outcome.emitted:
        summary.append(f"💾 Wrote {path}")

    if fmt != OutputFormat.table:
        typer.echo(container.get_renderer(fmt).render("sweep", SWEEP_COLUMNS, rows))
        for line in summary:
            typer.echo(line, err=True)
        return
    for line in summary:
        typer.secho(line, fg=typer.colors.BRIGHT_CYAN)


def register_sweep_commands(app: typer.Typer):
    app.command("sweep")(sweep)
