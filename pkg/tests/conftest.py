import pytest

from flashrewrite.harness import RUN_STATS

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


class Criterion:
    def __init__(self, number):
        self.number = number

    def check(self, ok: bool, detail: str):
        ACCEPTANCE[self.number] = (bool(ok), detail)
        assert ok, f"criterion {self.number}: {detail}"


@pytest.fixture
def criterion(request):
    return lambda number: Criterion(number)


def pytest_collection_modifyitems(items):
    # the suite-wide t <= n(q-1) tally must be checked after every other test ran
    last = [it for it in items if it.name == "test_c03_tally_no_violations"]
    items[:] = [it for it in items if it not in last] + last


def pytest_sessionfinish(session, exitstatus):
    if RUN_STATS["ub_violations"] or RUN_STATS["contract_violations"]:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED


def pytest_terminal_summary(terminalreporter):
    terminalreporter.write_line(
        "run tally: {runs} runs, {ub_violations} t>n(q-1) violations, "
        "{contract_violations} contract violations".format(**RUN_STATS))
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE):
            ok, detail = ACCEPTANCE[k]
            terminalreporter.write_line(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
