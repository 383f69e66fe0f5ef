"""Shared fixtures and the acceptance summary printed at the end of a run."""

from __future__ import annotations

from collections import defaultdict

import pytest

from entangle_cert.families import make_family
from entangle_cert.states import PartySpec, PureState, StateSet

CRITERIA = {
    1: "rank-15 certificates for U and complex S_z",
    2: "real-z rank drop and verified OPM witness",
    3: "Groebner goldens for the Omega cuts and W'",
    4: "QCES elimination generator and back-substitution",
    5: "root and coordinate tables with nonzero Gram overlaps",
    6: "ubb, split, stability and distillability certificates",
    7: "property suites",
    8: "results not reproducible at desk scale",
}

_outcomes: dict[int, list[bool]] = defaultdict(list)


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion this test certifies")
    config.addinivalue_line("markers", "slow: runs longer than a few seconds")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    _outcomes[marker.args[0]].append(call.excinfo is None)


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    terminalreporter.section("acceptance criteria")
    for n, text in CRITERIA.items():
        runs = _outcomes.get(n)
        if not runs:
            status = "NOT RUN"
        else:
            status = "PASS" if all(runs) else "FAIL"
        terminalreporter.write_line(f"criterion {n}: {status}  {text} ({len(runs or [])} test(s))")


@pytest.fixture(scope="session")
def U():
    return make_family("ubb-U")


@pytest.fixture(scope="session")
def Omega():
    return make_family("omega")


QUBITS2 = PartySpec((2, 2))


def two_qubit_set(*vectors, name="toy") -> StateSet:
    """States of 2x2 from flat amplitude lists in the order 00, 01, 10, 11."""
    idx = [(0, 0), (0, 1), (1, 0), (1, 1)]
    states = [PureState(QUBITS2, {i: a for i, a in zip(idx, v) if a}, f"s{k}") for k, v in enumerate(vectors)]
    return StateSet(QUBITS2, states, name)
