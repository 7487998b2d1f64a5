"""Verification harness: bound catalog, scenario builders, checks, suites."""

from .bounds import BOUND_IDS, bound_value
from .checks import BoundReport, CHECK_IDS, run_check
from .suite import SUITE_NAMES, load_config, run_suite, write_reports

__all__ = [
    "BOUND_IDS",
    "bound_value",
    "BoundReport",
    "CHECK_IDS",
    "run_check",
    "SUITE_NAMES",
    "load_config",
    "run_suite",
    "write_reports",
]
