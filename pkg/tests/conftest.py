"""Shared fixtures: reference parameter sets and the frozen oracle table.

The three parameter sets cover the qualitatively distinct regimes:

* BASE       -- both queues overloaded, r2 > 1.
* UNDERLOAD2 -- queue 2 underloaded (lambda2 < mu2c2), near critical.
* OVERLOAD2  -- queue 2 slightly overloaded (lambda2 > mu2c2).
"""

import json
import pathlib

import pytest

from qwblock.model import ModelParams

GOLDEN_PATH = pathlib.Path(__file__).parent / "golden" / "oracle_golden.json"

BASE = ModelParams(3.0, 5.0, 1.0, 2.0)
UNDERLOAD2 = ModelParams(1.2, 9.9, 1.0, 10.0)
OVERLOAD2 = ModelParams(1.2, 11.0, 1.0, 10.0)

CASES = {"base": BASE, "underload2": UNDERLOAD2, "overload2": OVERLOAD2}


SCORECARD = []


def pytest_terminal_summary(terminalreporter):
    """Print one pass/fail line per acceptance criterion in the run log."""
    if SCORECARD:
        terminalreporter.section("acceptance scorecard")
        for line in SCORECARD:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def golden():
    """Frozen truncated-chain blocking values, keyed by (case name, a)."""
    rows = json.loads(GOLDEN_PATH.read_text())
    return {(r["name"], r["a"]): r for r in rows}
