# modshare/cli/utils.py

import logging
from functools import wraps
from typing import List, Optional

import typer

from modshare.application.use_cases.plan_placement import PlanningOptions
from modshare.config.settings import settings
from modshare.domain.exceptions.exception import ModshareException, ScenarioValidationException
from modshare.domain.models.common import OutputFormat, Pipelining
from modshare.domain.models.simulation import SimOptions

logger = logging.getLogger(__name__)


def handle_cli_errors(func):
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except (typer.Exit, typer.Abort):
            raise
        except ScenarioValidationException as e:
            typer.secho(f"❌ Error: {str(e)}", fg=typer.colors.RED, err=True)
            for violation in e.violations:
                typer.echo(f"   - [{violation.kind}] {violation.message}", err=True)
            raise typer.Exit(code=e.exit_code)
        except ModshareException as e:
            typer.secho(f"❌ Error: {str(e)}", fg=typer.colors.RED, err=True)
            raise typer.Exit(code=e.exit_code)
        except Exception as e:
            logger.debug("Unexpected failure", exc_info=True)
            typer.secho(f"💥 Unexpected error: {str(e)}", fg=typer.colors.BRIGHT_RED, err=True)
            raise typer.Exit(code=1)

    return wrapper


def resolve_format(fmt: Optional[OutputFormat]) -> OutputFormat:
    return fmt or settings.output.format


def planning_options(include_cloud: Optional[bool] = None, replicate: Optional[bool] = None) -> PlanningOptions:
    """Flags override the configured defaults"""
    placement = settings.placement
    return PlanningOptions(
        include_cloud=placement.include_cloud if include_cloud is None else include_cloud,
        replicate=placement.replicate if replicate is None else replicate,
        accumulate_heads=placement.accumulate_heads,
        brute_force_limit=placement.brute_force_limit,
    )


def sim_options(end_to_end: Optional[bool] = None, pipelining: Optional[Pipelining] = None,
                sequential: bool = False) -> SimOptions:
    simulation = settings.simulation
    return SimOptions(
        end_to_end=simulation.end_to_end if end_to_end is None else end_to_end,
        pipelining=pipelining or simulation.pipelining,
        parallel_encoding=simulation.parallel_encoding and not sequential,
    )


def split_list(value: Optional[str]) -> Optional[List[str]]:
    if not value:
        return None
    return [item.strip() for item in value.split(",") if item.strip()]


def seconds(value: Optional[float]) -> Optional[float]:
    return None if value is None else round(value, 6)
