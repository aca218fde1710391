import logging
import sys
from pathlib import Path
from typing import List, Optional

import typer

from elatlab.config.settings import settings
from elatlab.handlers.aut_handler import show_aut
from elatlab.handlers.axioms_handler import check_axioms_file
from elatlab.handlers.base import CommandOptions
from elatlab.handlers.compare_handler import show_compare
from elatlab.handlers.group_handler import show_group
from elatlab.handlers.verify_handler import run_verify
from elatlab.utils.validators import split_list_option

logger = logging.getLogger(__name__)

app = typer.Typer(
    add_completion=False,
    no_args_is_help=True,
    help="Subgroup ε-lattices of finite groups: analysis, automorphisms and theorem checks.",
)

JSON_OPTION = typer.Option(False, "--json", help="Print the machine-readable report.")
MAX_ORDER_OPTION = typer.Option(None, "--max-order", min=1, help=f"Group order bound (default {settings.max_order}).")
ENUM_OPTION = typer.Option(
    None, "--enum-threshold", min=1, help=f"Aut_E enumeration bound (default {settings.enum_threshold})."
)
TIMING_OPTION = typer.Option(False, "--timing", help="Add the elapsed time to the report.")


def configure_logging() -> None:
    logging.basicConfig(
        level=settings.log_level,
        stream=sys.stderr,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )


@app.callback()
def main() -> None:
    configure_logging()


@app.command()
def group(
    spec: str = typer.Argument(..., help="Catalog name (S3, D4, Dih8, C4xC2, ...) or perm:<cycles>,<cycles>,..."),
    dump: Optional[Path] = typer.Option(None, "--dump", help="Write the subgroup ε-lattice to this file."),
    json_output: bool = JSON_OPTION,
    max_order: Optional[int] = MAX_ORDER_OPTION,
    timing: bool = TIMING_OPTION,
):
    """Subgroups, normal cores, ε-classes and group properties."""
    options = CommandOptions(json_output=json_output, max_order=max_order, timing=timing)
    raise typer.Exit(show_group(spec, options, dump))


@app.command()
def aut(
    spec: str = typer.Argument(..., help="Group spec."),
    json_output: bool = JSON_OPTION,
    max_order: Optional[int] = MAX_ORDER_OPTION,
    enum_threshold: Optional[int] = ENUM_OPTION,
    timing: bool = TIMING_OPTION,
):
    """Structure of Aut_E of the subgroup ε-lattice and its towers."""
    options = CommandOptions(json_output=json_output, max_order=max_order, enum_threshold=enum_threshold, timing=timing)
    raise typer.Exit(show_aut(spec, options))


@app.command()
def compare(
    spec1: str = typer.Argument(..., help="First group spec."),
    spec2: str = typer.Argument(..., help="Second group spec."),
    json_output: bool = JSON_OPTION,
    max_order: Optional[int] = MAX_ORDER_OPTION,
    timing: bool = TIMING_OPTION,
):
    """Group, subgroup lattice, normal subgroup lattice and εL isomorphism."""
    options = CommandOptions(json_output=json_output, max_order=max_order, timing=timing)
    raise typer.Exit(show_compare(spec1, spec2, options))


@app.command()
def verify(
    checks: Optional[List[str]] = typer.Argument(None, help="Check ids, or 'all'."),
    scope: Optional[str] = typer.Option(None, "--scope", help="Comma-separated catalog names."),
    json_output: bool = JSON_OPTION,
    max_order: Optional[int] = MAX_ORDER_OPTION,
    enum_threshold: Optional[int] = ENUM_OPTION,
    timing: bool = TIMING_OPTION,
):
    """Run theorem checks; exits with 1 if any check fails."""
    options = CommandOptions(json_output=json_output, max_order=max_order, enum_threshold=enum_threshold, timing=timing)
    names = split_list_option(scope) if scope is not None else None
    raise typer.Exit(run_verify(list(checks or []), names, options))


@app.command()
def axioms(
    path: Path = typer.Argument(..., help="ε-lattice JSON file."),
    json_output: bool = JSON_OPTION,
    timing: bool = TIMING_OPTION,
):
    """Check an ε-lattice file against the axioms."""
    options = CommandOptions(json_output=json_output, timing=timing)
    raise typer.Exit(check_axioms_file(path, options))


if __name__ == "__main__":
    app()
