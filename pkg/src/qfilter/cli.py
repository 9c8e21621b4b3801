"""Command line interface: ``qfilter filter1d | filter2d | transpose | selftest``.

Exit codes are 0 on success, 1 on a usage error, 2 on bad data and 3 when postselection
removes everything or runs out of trials.
"""

import logging
import typing as t
from contextlib import contextmanager
from pathlib import Path

import click
import typer
from pydantic import ValidationError
from rich.console import Console
from rich.logging import RichHandler
from rich.table import Table
from typer.core import TyperGroup

from qfilter.exceptions import DATA_ERROR_EXIT_CODE, QFilterError
from qfilter.io import load_run_config
from qfilter.pipeline import run_filter_1d, run_filter_2d, run_transpose
from qfilter.schemas import EncodingMode, FilterKind, InputFormat, RunConfig, RunMode, RunReport, SchemeKind, SpatialMode
from qfilter.selftest import run_selftest

USAGE_EXIT_CODE = 1

console = Console()
err_console = Console(stderr=True)


class ExitCodeGroup(TyperGroup):
    """Command group that reports usage errors with exit code 1 rather than click's 2."""

    def main(self, *args: t.Any, **kwargs: t.Any) -> t.Any:  # noqa: D102
        try:
            result = super().main(*args, **{**kwargs, "standalone_mode": False})
        except click.UsageError as exc:
            exc.show()
            raise SystemExit(USAGE_EXIT_CODE) from None
        except click.Abort:
            err_console.print("Aborted.")
            raise SystemExit(USAGE_EXIT_CODE) from None
        if isinstance(result, int) and result:
            raise SystemExit(result)
        return result


app = typer.Typer(cls=ExitCodeGroup, no_args_is_help=True, add_completion=False)

InputArg = t.Annotated[
    Path | None, typer.Argument(help="Input file. May instead come from the --config file.", show_default=False)
]
ConfigOpt = t.Annotated[Path | None, typer.Option("--config", help="YAML run configuration; flags override it.")]
FormatOpt = t.Annotated[InputFormat | None, typer.Option("--format", help="Input format, inferred from the suffix.")]
FilterOpt = t.Annotated[FilterKind | None, typer.Option("--filter", help="Named filter, or custom with explicit marks.")]
MarkedOpt = t.Annotated[str | None, typer.Option("--marked", help="Comma-separated frequency indices to mark.")]
PrefixOpt = t.Annotated[
    list[str] | None, typer.Option("--prefix", help="Ket-notation prefix to mark, most significant qubit first.")
]
KeepMarkedOpt = t.Annotated[bool, typer.Option("--keep-marked", help="Keep the marked branch instead of dropping it.")]
CutoffOpt = t.Annotated[int | None, typer.Option("--cutoff", help="Low/high pass cutoff width.")]
BandOpt = t.Annotated[str | None, typer.Option("--band", help="Band edges as low,high.")]
ModeOpt = t.Annotated[RunMode | None, typer.Option("--mode", help="Exact projection or seeded sampling.")]
SeedOpt = t.Annotated[int | None, typer.Option("--seed", help="Seed for sample mode.")]
MaxTrialsOpt = t.Annotated[int | None, typer.Option("--max-trials", help="Trial budget for sample mode.")]
EncodingOpt = t.Annotated[EncodingMode | None, typer.Option("--encoding", help="How values become amplitudes.")]
CompareOpt = t.Annotated[bool, typer.Option("--compare-classical", help="Compare with the direct DFT filter.")]
ReportOpt = t.Annotated[Path | None, typer.Option("--report", help="Where to write the JSON run report.")]
OutOpt = t.Annotated[Path | None, typer.Option("--out", help="Where to write the output.")]


@app.callback()
def configure(
    verbose: t.Annotated[int, typer.Option("--verbose", "-v", count=True, help="-v for INFO, -vv for DEBUG.")] = 0,
) -> None:
    """Quantum Fourier filtering and matrix transposes on a state-vector simulator."""
    level = {0: logging.WARNING, 1: logging.INFO}.get(verbose, logging.DEBUG)
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=err_console, rich_tracebacks=True)],
        force=True,
    )


@contextmanager
def data_errors() -> t.Iterator[None]:
    """Turn domain, validation and file errors into their exit codes."""
    try:
        yield
    except QFilterError as exc:
        err_console.print(f"[bold red]Error:[/bold red] {exc.message}")
        raise typer.Exit(exc.exit_code) from exc
    except ValidationError as exc:
        err_console.print(f"[bold red]Invalid configuration:[/bold red] {exc}")
        raise typer.Exit(DATA_ERROR_EXIT_CODE) from exc
    except OSError as exc:
        err_console.print(f"[bold red]Cannot access file:[/bold red] {exc}")
        raise typer.Exit(DATA_ERROR_EXIT_CODE) from exc


def _int_list(value: str, name: str) -> list[int]:
    try:
        return [int(v) for v in value.split(",") if v.strip()]
    except ValueError:
        msg = f"Expected comma-separated integers, got '{value}'."
        raise typer.BadParameter(msg, param_hint=name) from None


def _filter_overrides(  # noqa: PLR0913
    kind: FilterKind | None,
    marked: str | None,
    prefixes: list[str] | None,
    cutoff: int | None,
    band: str | None,
    *,
    keep_marked: bool,
) -> dict[str, t.Any]:
    overrides: dict[str, t.Any] = {
        "kind": kind,
        "marked": _int_list(marked, "--marked") if marked else None,
        "prefixes": prefixes or None,
        "cutoff": cutoff,
        "keep_marked": True if keep_marked else None,
    }
    if band:
        edges = _int_list(band, "--band")
        if len(edges) != 2:  # noqa: PLR2004
            msg = f"Expected two band edges, got {len(edges)}."
            raise typer.BadParameter(msg, param_hint="--band")
        overrides["band"] = tuple(edges)
    if (overrides["marked"] or overrides["prefixes"]) and kind is None:
        overrides["kind"] = FilterKind.CUSTOM
    return {k: v for k, v in overrides.items() if v is not None}


def build_config(config_path: Path | None, overrides: dict[str, t.Any]) -> RunConfig:
    """Merge a YAML configuration with command line overrides; flags win."""
    base = load_run_config(config_path).model_dump(exclude_unset=True) if config_path else {}
    filter_overrides = overrides.pop("filter", {})
    merged = base | {k: v for k, v in overrides.items() if v is not None}
    if filter_overrides:
        merged["filter"] = {"kind": FilterKind.HIGH_PASS} | base.get("filter", {}) | filter_overrides
    if merged.get("mode") is RunMode.SAMPLE and merged.get("seed") is None:
        msg = "Sample mode needs a seed."
        raise typer.BadParameter(msg, param_hint="--seed")
    if merged.get("input") is None:
        msg = "Give an input file or a --config naming one."
        raise typer.BadParameter(msg, param_hint="INPUT")
    return RunConfig.model_validate(merged)


def _summarise(report: RunReport) -> None:
    table = Table(title=report.command, show_header=False)
    for field, value in report.model_dump(exclude={"schema_version", "command"}).items():
        if value is not None:
            table.add_row(field, f"{value:.6g}" if isinstance(value, float) else str(value))
    console.print(table)


@app.command()
def filter1d(  # noqa: PLR0913
    input_path: InputArg = None,
    config: ConfigOpt = None,
    input_format: FormatOpt = None,
    filter_kind: FilterOpt = None,
    marked: MarkedOpt = None,
    prefix: PrefixOpt = None,
    cutoff: CutoffOpt = None,
    band: BandOpt = None,
    mode: ModeOpt = None,
    seed: SeedOpt = None,
    max_trials: MaxTrialsOpt = None,
    encoding: EncodingOpt = None,
    report: ReportOpt = None,
    out: OutOpt = None,
    *,
    keep_marked: KeepMarkedOpt = False,
    compare_classical: CompareOpt = False,
    shift: t.Annotated[bool, typer.Option("--shift", help="Also write the FFT-shifted spectrum magnitudes.")] = False,
) -> None:
    """Filter a 1-D series read from CSV or JSON."""
    with data_errors():
        run_config = build_config(
            config,
            {
                "input": input_path,
                "input_format": input_format,
                "filter": _filter_overrides(filter_kind, marked, prefix, cutoff, band, keep_marked=keep_marked),
                "mode": mode,
                "seed": seed,
                "max_trials": max_trials,
                "encoding": encoding,
                "report": report,
                "output": out,
                "compare_classical": compare_classical or None,
                "shift": shift or None,
            },
        )
        _summarise(run_filter_1d(run_config))


@app.command()
def filter2d(  # noqa: PLR0913
    input_path: InputArg = None,
    config: ConfigOpt = None,
    filter_kind: FilterOpt = None,
    marked: MarkedOpt = None,
    prefix: PrefixOpt = None,
    cutoff: CutoffOpt = None,
    mode: ModeOpt = None,
    seed: SeedOpt = None,
    max_trials: MaxTrialsOpt = None,
    report: ReportOpt = None,
    out: OutOpt = None,
    spatial: t.Annotated[
        SpatialMode | None, typer.Option("--spatial", help="Flattened 1-D spectrum or composed 2-D transform.")
    ] = None,
    *,
    keep_marked: KeepMarkedOpt = False,
    compare_classical: CompareOpt = False,
    absolute: t.Annotated[bool, typer.Option("--abs", help="Write magnitudes instead of clamping at zero.")] = False,
) -> None:
    """Filter a PGM or PPM image."""
    with data_errors():
        run_config = build_config(
            config,
            {
                "input": input_path,
                "filter": _filter_overrides(filter_kind, marked, prefix, cutoff, None, keep_marked=keep_marked),
                "mode": mode,
                "seed": seed,
                "max_trials": max_trials,
                "report": report,
                "output": out,
                "spatial": spatial,
                "compare_classical": compare_classical or None,
                "absolute": absolute or None,
            },
        )
        _summarise(run_filter_2d(run_config))


@app.command()
def transpose(  # noqa: PLR0913
    input_path: InputArg = None,
    config: ConfigOpt = None,
    scheme: t.Annotated[SchemeKind | None, typer.Option("--scheme", help="Transpose circuit.")] = None,
    layout: t.Annotated[Path | None, typer.Option("--layout", help="JSON grid of basis indices.")] = None,
    encoding: EncodingOpt = None,
    report: ReportOpt = None,
    out: OutOpt = None,
) -> None:
    """Transpose a CSV matrix with a basis-permutation circuit."""
    with data_errors():
        run_config = build_config(
            config,
            {
                "input": input_path,
                "scheme": scheme,
                "layout": layout,
                "encoding": encoding,
                "report": report,
                "output": out,
            },
        )
        _summarise(run_transpose(run_config))


@app.command()
def selftest() -> None:
    """Reproduce every shipped fixture and print a pass/fail table."""
    with data_errors():
        results = run_selftest()
    table = Table(title="Fixture checks")
    table.add_column("check")
    table.add_column("error", justify="right")
    table.add_column("tolerance", justify="right")
    table.add_column("result")
    for result in results:
        verdict = "[green]pass[/green]" if result.passed else "[red]FAIL[/red]"
        table.add_row(result.name, f"{result.error:.3g}", f"{result.tolerance:.3g}", verdict)
    console.print(table)
    if not all(r.passed for r in results):
        raise typer.Exit(DATA_ERROR_EXIT_CODE)


def main() -> None:
    """Console script entry point."""
    app()
