"""Command-line driver, end-to-end demo and benchmark harness."""

from elaunira.eticket.cli.bench import BenchRow, run_bench, write_csv
from elaunira.eticket.cli.demo import DemoReport, Scenario, load_scenario, run_demo
from elaunira.eticket.cli.main import build_parser, main

__all__ = [
    "BenchRow",
    "DemoReport",
    "Scenario",
    "build_parser",
    "load_scenario",
    "main",
    "run_bench",
    "run_demo",
    "write_csv",
]
