import random
from itertools import combinations

import pytest

from admissible.core import TernaryVector, VectorFamily, is_pair_clash, is_triple_clash_scalar


def naive_find_clash(family):
    """Scan every pair, then every triple, in index order."""
    vs = list(family)
    for i, j in combinations(range(len(vs)), 2):
        if is_pair_clash(vs[i], vs[j]):
            return ("pair", (i, j))
    for i, j, k in combinations(range(len(vs)), 3):
        if is_triple_clash_scalar(vs[i], vs[j], vs[k]):
            return ("triple", (i, j, k))
    return None


def random_vector(rng: random.Random, m: int) -> TernaryVector:
    return TernaryVector(tuple(rng.randrange(3) for _ in range(m)))


@pytest.fixture
def rng():
    return random.Random(20261017)


_ACCEPTANCE: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        prev = _ACCEPTANCE.get(name)
        if not (prev or "").startswith("FAIL"):
            _ACCEPTANCE[name] = "PASS" if report.outcome == "passed" else report.outcome.upper()
            if report.outcome == "failed":
                _ACCEPTANCE[name] = "FAIL"
            notes = ", ".join(f"{k}={v}" for k, v in report.user_properties)
            if notes:
                _ACCEPTANCE[name] += f" ({notes})"


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, status in _ACCEPTANCE.items():
        verdict, _, notes = status.partition(" ")
        terminalreporter.write_line(f"{verdict:5} {name} {notes}".rstrip())
