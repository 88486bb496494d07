from __future__ import annotations

import pytest

CRITERIA = {
    1: "metric axioms on randomized instances",
    2: "Prohorov flow value equals subset enumeration",
    3: "exact integrator against quadrature; e^-2 closed form",
    4: "GH enumeration against a second enumerator; two-point closed form",
    5: "stability inequalities under two gluings",
    6: "RF/RV coincidence sandwich (plain and compact)",
    7: "restriction-system axioms; quadratic system fails RS4",
    8: "entropy: grid count, convergence certificates, star blow-up",
    9: "Skorohod DP against the interleaving oracle; closed forms",
    10: "pushforward along isometric injections",
    11: "CLI goldens, round-trip and determinism",
}

_outcomes: dict = {}
_notes: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion exercised by the test")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    n = marker.args[0]
    if rep.when == "call" or rep.failed or rep.skipped:
        _outcomes.setdefault(n, []).append(rep.passed and rep.when == "call")


@pytest.fixture
def note(request):
    """Attach a one-line measurement to the criterion of the running test."""
    marker = request.node.get_closest_marker("criterion")

    def add(text: str) -> None:
        _notes.setdefault(marker.args[0], []).append(text)

    return add


def pytest_terminal_summary(terminalreporter):
    if not _outcomes:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n, title in CRITERIA.items():
        results = _outcomes.get(n)
        status = "PASS" if results and all(results) else "FAIL"
        extra = "" if results else " (not run)"
        tr.write_line(f"criterion {n:2d}: {status}  {title}{extra}")
        for text in _notes.get(n, []):
            tr.write_line(f"              {text}")
