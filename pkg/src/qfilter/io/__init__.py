"""Reading and writing signals, images, layouts and reports."""

from qfilter.io.netpbm import Magic, NetpbmImage, format_netpbm, parse_netpbm, read_netpbm, write_netpbm
from qfilter.io.reports import load_run_config, read_layout, read_report, write_layout, write_report
from qfilter.io.series import format_csv, parse_csv, read_csv, write_csv

__all__ = [
    "Magic",
    "NetpbmImage",
    "format_csv",
    "format_netpbm",
    "load_run_config",
    "parse_csv",
    "parse_netpbm",
    "read_csv",
    "read_layout",
    "read_netpbm",
    "read_report",
    "write_csv",
    "write_layout",
    "write_netpbm",
    "write_report",
]
