# modshare/cli/main.py
import typer

from modshare import __version__
from modshare.cli.commands.compare import register_compare_commands
from modshare.cli.commands.config import register_config_app
from modshare.cli.commands.place import register_place_commands
from modshare.cli.commands.route import register_route_commands
from modshare.cli.commands.simulate import register_simulate_commands
from modshare.cli.commands.sweep import register_sweep_commands
from modshare.cli.commands.validate import register_validate_commands
from modshare.config.logging import configure_logging, verbosity_level
from modshare.config.settings import settings

app = typer.Typer(
    name="modshare",
    help="Plan and evaluate split-and-share deployments of multi-modal models on edge devices",
    no_args_is_help=True
)


@app.callback()
def main_callback(
    verbose: int = typer.Option(0, "--verbose", "-v", count=True, help="-v for info, -vv for debug logs"),
):
    configure_logging(verbosity_level(verbose, settings.log_level))


register_place_commands(app)
register_route_commands(app)
register_simulate_commands(app)
register_compare_commands(app)
register_sweep_commands(app)
register_validate_commands(app)
register_config_app(app)


@app.command("version")
def version():
    """Show modshare version"""
    typer.echo(f"modshare version {__version__}")


def main():
    """Entry point for the CLI."""
    app()


if __name__ == "__main__":
    main()
