"""
Command-line front end.

    dihedral-xi validate --input data/6_1.scene.json
    dihedral-xi lists --input data/6_1.scene.json --component alpha
    dihedral-xi block --input data/6_1.scene.json --first beta --second beta_r
    dihedral-xi xi --input data/8_11.problem.json --provider table:data/8_11.blocks.json
"""

import functools
import json
import logging
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Literal, Optional

import click
from pydantic import BaseModel, ValidationError, model_validator
from rich.console import Console
from rich.panel import Panel
from rich.table import Table

from . import __version__
from .config import XiSettings
from .coloring import check_fox_coloring
from .cover import build_cover_complex, euler_characteristic
from .diagram import derive_gauss_lists, format_gauss_lists, load_scene, scene_summary
from .errors import ColoringError, XiError
from .linking import LinkingBlock, linking_block
from .pipeline import XiReport, compute_xi, load_problem
from .providers import TableBlockProvider, parse_provider_option

console = Console()
logger = logging.getLogger(__name__)

ENGINE_COMMANDS = ("validate", "block", "xi")


class RunConfig(BaseModel):
    """One validated CLI invocation."""

    subcommand: Literal["validate", "lists", "block", "xi"]
    input: Path
    provider: str = "computed"
    output: Optional[Path] = None
    p: int = 3

    @model_validator(mode="after")
    def _check(self) -> "RunConfig":
        if self.provider != "computed":
            kind, sep, path = self.provider.partition(":")
            if kind != "table" or not path:
                raise ValueError("provider 'table' requires a table file: table:<path>")
        if self.subcommand in ENGINE_COMMANDS and self.p != 3:
            raise ValueError(f"{self.subcommand} runs the cover engine, which needs p=3")
        if not self.input.exists():
            raise ValueError(f"input file not found: {self.input}")
        return self


class XiCommandError(click.ClickException):
    """Prints a machine-readable error record on stderr and exits with status 1."""

    exit_code = 1

    def __init__(self, record: Dict[str, Any]):
        super().__init__(record.get("message", "error"))
        self.record = record

    def show(self, file: Any = None) -> None:
        click.echo(json.dumps(self.record), file=file or sys.stderr)


def _fail_with_record(func: Callable[..., Any]) -> Callable[..., Any]:
    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except XiError as e:
            logger.error(f"{e.code}: {e.message}")
            raise XiCommandError(e.to_record()) from e
        except ValidationError as e:
            raise XiCommandError({"error": "config", "message": str(e)}) from e

    return wrapper


def _common_options(func: Callable[..., Any]) -> Callable[..., Any]:
    func = click.option(
        "--config", "config_path", type=click.Path(path_type=Path), default=None,
        help="YAML settings file",
    )(func)
    func = click.option("--json", "as_json", is_flag=True, help="Machine-readable output")(func)
    func = click.option("--log-level", default=None, help="Override the configured log level")(func)
    return func


def _settings(config_path: Optional[Path], **overrides: Any) -> XiSettings:
    settings = XiSettings.from_yaml(config_path, **overrides)
    logging.basicConfig(
        level=getattr(logging, settings.log_level),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    return settings


def _emit_json(data: Any, indent: int) -> None:
    click.echo(json.dumps(data, indent=indent, ensure_ascii=False))


@click.group()
@click.version_option(__version__, prog_name="dihedral-xi")
def main() -> None:
    """Dihedral cover linking numbers and the Xi ribbon obstruction."""


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(path_type=Path))
@click.option("--dump-complex", type=click.Path(path_type=Path), default=None,
              help="Write the cover chain complex to this file")
@click.option("--mirror/--no-mirror", default=None, help="Negate every crossing sign")
@_common_options
@_fail_with_record
def validate(
    input_path: Path,
    dump_complex: Optional[Path],
    mirror: Optional[bool],
    config_path: Optional[Path],
    as_json: bool,
    log_level: Optional[str],
) -> None:
    """Check a scene, its coloring and its cover."""
    settings = _settings(config_path, log_level=log_level)
    RunConfig(subcommand="validate", input=input_path, p=settings.p)
    scene = load_scene(input_path, mirror=_mirror(settings, mirror))
    diagnostics = check_fox_coloring(scene)
    if not diagnostics.valid:
        raise ColoringError(
            "invalid coloring: " + "; ".join(diagnostics.violations), scene=scene.name
        )
    complex_ = build_cover_complex(scene)
    homology = complex_.homology()
    if dump_complex is not None:
        dump_complex.write_text(complex_.dump(), encoding="utf-8")
        logger.info(f"Wrote complex dump to {dump_complex}")

    result = {
        "scene": scene_summary(scene),
        "coloring": {"valid": True, "colors_used": list(diagnostics.colors_used)},
        "cover": {
            "cells": list(complex_.counts),
            "euler_characteristic": euler_characteristic(complex_),
            "boundaries_compose_to_zero": complex_.boundaries_compose_to_zero(),
            "betti": list(homology.betti),
            "h1": homology.h1_factors,
            "rational_homology_sphere": homology.is_rational_homology_sphere,
        },
    }
    if as_json:
        _emit_json(result, settings.report_indent)
        return

    table = Table(title=f"Scene {scene.name}")
    table.add_column("Check", style="cyan")
    table.add_column("Value", style="magenta")
    table.add_row("Crossings", str(result["scene"]["crossings"]))
    table.add_row("Faces", str(result["scene"]["faces"]))
    table.add_row("Alpha arcs", str(result["scene"]["arcs"][scene.alpha.name]))
    table.add_row("Colors used", str(list(diagnostics.colors_used)))
    table.add_row("Cells (0..3)", str(list(complex_.counts)))
    table.add_row("Euler characteristic", str(result["cover"]["euler_characteristic"]))
    table.add_row("H1 invariant factors", str(homology.h1_factors or "trivial"))
    console.print(table)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(path_type=Path))
@click.option("--component", default="alpha", show_default=True)
@click.option("--plain", is_flag=True, help="Print bare lists without labels")
@click.option("--mirror/--no-mirror", default=None, help="Negate every crossing sign")
@_common_options
@_fail_with_record
def lists(
    input_path: Path,
    component: str,
    plain: bool,
    mirror: Optional[bool],
    config_path: Optional[Path],
    as_json: bool,
    log_level: Optional[str],
) -> None:
    """Print the over-crossing, sign, type (and color) lists of a component."""
    settings = _settings(config_path, log_level=log_level)
    RunConfig(subcommand="lists", input=input_path, p=settings.p)
    scene = load_scene(input_path, mirror=_mirror(settings, mirror))
    gauss = derive_gauss_lists(scene, component)
    if as_json:
        _emit_json(
            {
                "component": gauss.component,
                "f": list(gauss.f),
                "eps": list(gauss.eps),
                "t": list(gauss.t),
                "c": list(gauss.c),
            },
            settings.report_indent,
        )
        return
    for line in format_gauss_lists(gauss, labelled=not plain):
        click.echo(line)


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(path_type=Path))
@click.option("--first", required=True, help="Curve whose lifts index the rows")
@click.option("--second", required=True, help="Push-off whose lifts index the columns")
@click.option("--mirror/--no-mirror", default=None, help="Negate every crossing sign")
@_common_options
@_fail_with_record
def block(
    input_path: Path,
    first: str,
    second: str,
    mirror: Optional[bool],
    config_path: Optional[Path],
    as_json: bool,
    log_level: Optional[str],
) -> None:
    """Compute the 3x3 block of linking numbers of lifts."""
    settings = _settings(config_path, log_level=log_level)
    RunConfig(subcommand="block", input=input_path, p=settings.p)
    scene = load_scene(input_path, mirror=_mirror(settings, mirror))
    result = linking_block(scene, first, second)
    if as_json:
        _emit_json(
            {"first": first, "second": second, "matrix": result.as_lists()},
            settings.report_indent,
        )
        return
    console.print(_block_table(result))


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(path_type=Path))
@click.option("--provider", default=None, help="computed | table:<path>")
@click.option("--output", type=click.Path(path_type=Path), default=None,
              help="Write the JSON report here")
@click.option("--mirror/--no-mirror", default=None, help="Negate every crossing sign")
@_common_options
@_fail_with_record
def xi(
    input_path: Path,
    provider: Optional[str],
    output: Optional[Path],
    mirror: Optional[bool],
    config_path: Optional[Path],
    as_json: bool,
    log_level: Optional[str],
) -> None:
    """Evaluate Xi and the ribbon verdict for a problem or scene file."""
    settings = _settings(config_path, log_level=log_level, provider=provider)
    run = RunConfig(
        subcommand="xi", input=input_path, provider=settings.provider,
        output=output, p=settings.p,
    )
    problem = load_problem(run.input, mirror=_mirror(settings, mirror))
    kind, table_path = parse_provider_option(run.provider)
    source = TableBlockProvider.from_file(table_path) if kind == "table" else None
    report = compute_xi(
        problem,
        provider=source,
        max_workers=settings.max_workers,
        sign_digits=settings.sign_digits,
    )
    text = report.to_json(settings.report_indent)
    if run.output is not None:
        run.output.write_text(text + "\n", encoding="utf-8")
        logger.info(f"Wrote report to {run.output}")
    if as_json:
        click.echo(text)
        return
    _print_report(report)


def _mirror(settings: XiSettings, flag: Optional[bool]) -> bool:
    return settings.mirror_convention if flag is None else flag


def _block_table(result: LinkingBlock) -> Table:
    table = Table(title=f"lk({result.first}^j, {result.second}^k)")
    table.add_column("j \\ k", style="cyan")
    for k in range(1, 4):
        table.add_column(str(k), style="magenta", justify="right")
    for j, row in enumerate(result.as_lists(), start=1):
        table.add_row(str(j), *row)
    return table


def _print_report(report: XiReport) -> None:
    table = Table(title=f"Xi_{report.p} for {report.name}")
    table.add_column("Quantity", style="cyan")
    table.add_column("Value", style="magenta")
    h1 = "not computed" if report.h1 is None else (str(report.h1) if report.h1 else "trivial")
    rows: List[tuple] = [
        ("H1 of the cover", h1),
        ("c0", str(report.c0)),
        *((f"monodromy {k}", v) for k, v in report.monodromies.items()),
        ("basis", ", ".join(report.basis)),
        ("M", str([[str(x) for x in r] for r in report.matrix])),
        ("sigma(M)", str(report.sigma_M)),
        ("sigma(W)", str(report.sigma_W)),
        ("L_V(beta, beta)", str(report.self_linking)),
        ("first term", str(report.term1)),
        ("Tristram-Levine sum", str(report.term2)),
        ("Xi", str(report.xi)),
    ]
    for name, value in rows:
        table.add_row(name, value)
    console.print(table)
    style = "red" if report.verdict == "obstructed" else "green"
    console.print(
        Panel(f"{report.verdict} (bound |Xi| <= {report.ribbon_bound})", title="Ribbon verdict"),
        style=style,
    )
    for warning in report.warnings:
        console.print(f"warning: {warning}", style="yellow")


if __name__ == "__main__":
    main()
