"""JSON run reports and layouts, and YAML run configurations."""

import typing as t

from pydantic_yaml import parse_yaml_file_as

from qfilter.schemas import BasisLayout, RunConfig, RunReport

if t.TYPE_CHECKING:
    from pathlib import Path


def write_report(path: Path, report: RunReport) -> None:
    """Write the report as indented JSON."""
    path.write_text(report.model_dump_json(indent=2) + "\n", encoding="utf-8")


def read_report(path: Path) -> RunReport:
    """Read a report written by `write_report`."""
    return RunReport.model_validate_json(path.read_text(encoding="utf-8"))


def load_run_config(path: Path) -> RunConfig:
    """Load a run configuration from YAML."""
    return parse_yaml_file_as(RunConfig, path)


def read_layout(path: Path) -> BasisLayout:
    """Read a layout stored as a JSON grid of basis indices."""
    return BasisLayout.model_validate_json(path.read_text(encoding="utf-8"))


def write_layout(path: Path, layout: BasisLayout) -> None:
    """Write a layout as a JSON grid of basis indices."""
    path.write_text(layout.model_dump_json() + "\n", encoding="utf-8")
