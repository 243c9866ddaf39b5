# modshare/cli/commands/validate.py

import typer

from modshare.application.use_cases.validate_scenario import ValidateScenario
from modshare.cli.options.common import ScenarioArgument
from modshare.cli.utils import handle_cli_errors
from modshare.container import container


@handle_cli_errors
def validate(scenario: str = ScenarioArgument):
    """Check a scenario file and list every problem found."""
    violations = ValidateScenario(repository=container.get_repository()).execute(scenario)
    if not violations:
        typer.secho(f"✅ {scenario} is valid", fg=typer.colors.GREEN)
        return
    typer.secho(f"❌ {len(violations)} problem(s) in {scenario}:", fg=typer.colors.RED)
    for v in violations:
        typer.echo(f"   - [{v.kind}] {v.subject_type} '{v.subject_id}': {v.message}")
    raise typer.Exit(code=1)


def register_validate_commands(app: typer.Typer):
    app.command("validate")(validate)
