from pathlib import Path

import pytest

from chromavar.group_core import (
    alternating_group,
    cyclic_group,
    dihedral_group,
    quaternion_group,
    symmetric_group,
    trivial_group,
)

ROOT = Path(__file__).resolve().parents[1]
BATTERY = ROOT / "battery"

GROUPS = {
    "trivial": trivial_group,
    "Z2": lambda: cyclic_group(2),
    "Z3": lambda: cyclic_group(3),
    "Z4": lambda: cyclic_group(4),
    "S3": lambda: symmetric_group(3),
    "D4": lambda: dihedral_group(4),
    "Q8": quaternion_group,
    "A4": lambda: alternating_group(4),
}

_cache = {}


def group(name):
    if name not in _cache:
        _cache[name] = GROUPS[name]()
    return _cache[name]


@pytest.fixture
def s3():
    return group("S3")


@pytest.fixture
def q8():
    return group("Q8")


@pytest.fixture
def d4():
    return group("D4")


@pytest.fixture
def a4():
    return group("A4")


# one summary line per acceptance criterion
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for key in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[key])
