"""Pytest configuration: hypothesis profiles and the acceptance summary.

The acceptance suite (test_acceptance.py) prints one line per criterion
at the end of the run; details recorded by the tests via the
``acceptance_log`` fixture are appended to each line.
"""

from __future__ import annotations

import re

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

CRITERIA = {
    1: "feature oracle equivalence (500 random graphs <= 8 nodes, < 30 s)",
    2: "graphlet oracle equivalence (200 random graphs <= 25 nodes, < 2 min)",
    3: "portrait correctness (hand tables, bounds, symmetry, row sums)",
    4: "KS statistic and ROC/AUC hand cases plus monotone invariance",
    5: "logistic regression gradient check and separable-data AUC",
    6: "stratified CV proportions and seed reproducibility",
    7: "synthetic benchmark AUC >= 0.90 per bucket with shuffled control (< 10 min)",
    8: "portrait-distance K-NN AUC >= 0.85 on the medium bucket (< 15 min)",
    9: "size-bucket AUC comparison recorded (small vs medium)",
}

_DETAILS: dict[int, str] = {}
_NODE_PATTERN = re.compile(r"test_acceptance\.py::test_c(\d+)")


@pytest.fixture(scope="session")
def acceptance_log():
    """Record a short measured-value string for one criterion."""

    def log(criterion: int, detail: str) -> None:
        _DETAILS[criterion] = detail

    return log


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    outcomes: dict[int, str] = {}
    for category, verdict in (
        ("passed", "PASS"),
        ("failed", "FAIL"),
        ("error", "ERROR"),
        ("skipped", "SKIP"),
    ):
        for report in terminalreporter.stats.get(category, []):
            match = _NODE_PATTERN.search(getattr(report, "nodeid", ""))
            if match and getattr(report, "when", "call") in ("call", "setup"):
                outcomes[int(match.group(1))] = verdict
    if not outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(CRITERIA):
        verdict = outcomes.get(num, "NOT RUN")
        detail = _DETAILS.get(num, "")
        suffix = f" [{detail}]" if detail else ""
        terminalreporter.write_line(f"{verdict:7s} criterion {num}: {CRITERIA[num]}{suffix}")
