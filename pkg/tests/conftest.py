import pytest
from hypothesis import settings

from dendroidal.trees import parse_term

settings.register_profile("repo", deadline=None, max_examples=60, derandomize=True)
settings.load_profile("repo")

# root r; f carries v1 (two leaves); g carries a vertex with inputs
# e (v2, three leaves), the stump edge h and one leaf
EXAMPLE = "v[v[eta,eta],v[v[eta,eta,eta],v[],eta]]"
F, G, E, H = (0,), (1,), (1, 0), (1, 1)


@pytest.fixture
def example_tree():
    return parse_term(EXAMPLE)


# one line per acceptance criterion, repeated after the run so the report
# shows them even when output is captured
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split("[")[1].split("]")[0])):
            terminalreporter.write_line(line)
