# modshare/cli/options/common.py
import typer

ScenarioArgument = typer.Argument(..., help="Scenario file, a name in the scenario directory, or a bundled scenario")

FormatOption = typer.Option(None, "--format", "-f", help="Output format: table, csv or json")

PlacementOption = typer.Option(None, "--placement", "-p", help="Placement file written by 'place'")

AutoOption = typer.Option(False, "--auto", help="Run greedy placement first (default when no --placement)")

IncludeCloudOption = typer.Option(None, "--include-cloud/--edge-only", help="Let split placement use cloud devices")

ReplicateOption = typer.Option(None, "--replicate/--no-replicate", help="Fill spare memory with module replicas")
