# modshare/cli/commands/config.py
import typer

from modshare.cli.utils import handle_cli_errors
from modshare.config.settings import AppConfig, get_config_keys

config_app = typer.Typer()


def key_autocomplete(incomplete: str):
    return [k for k in get_config_keys(AppConfig.load()) if k.startswith(incomplete)]


@config_app.command("set")
@handle_cli_errors
def config_set(
    key: str = typer.Argument(..., autocompletion=key_autocomplete),
    value: str = typer.Argument(...),
):
    """Update a configuration key, e.g. placement.replicate true"""
    AppConfig.load().update(key, value)
    typer.echo(f"✅ '{key}' set to '{value}'")


@config_app.command("show")
@handle_cli_errors
def config_show():
    """Show the current configuration"""
    config = AppConfig.load()
    for key in get_config_keys(config):
        value = config
        for part in key.split("."):
            value = getattr(value, part)
        typer.echo(f"{key}: {getattr(value, 'value', value)}")


def register_config_app(app: typer.Typer):
    app.add_typer(config_app, name="config", help="Configuration management commands")
