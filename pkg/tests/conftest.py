import pytest

from equistab.groups import FiniteAbelianGroup

# every abelian group of order <= 8, by invariant factors
SMALL_ABELIAN = [(), (2,), (3,), (4,), (2, 2), (5,), (6,), (7,), (8,), (2, 4), (2, 2, 2)]


@pytest.fixture(params=SMALL_ABELIAN, ids=lambda f: "x".join(f"C{d}" for d in f) or "1")
def small_group(request):
    return FiniteAbelianGroup(request.param)


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


@pytest.fixture
def acceptance(request):
    """Record one pass/fail line for an acceptance criterion."""
    lines = request.config.stash[ACCEPTANCE_KEY]

    def record(number, title, ok, detail=""):
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
        lines.append((number, line))
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
