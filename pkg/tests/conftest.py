import pytest
from hypothesis import settings

from escgen import ClusterSizeSpec

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture(
    params=[
        ClusterSizeSpec.shifted_poisson(2.0),
        ClusterSizeSpec.shifted_nb(2.0, 0.5),
        ClusterSizeSpec.shifted_nb(0.7, 0.3),
        ClusterSizeSpec.geometric(0.3),
    ],
    ids=lambda s: f"{s.kind}[{s.describe()}]",
)
def closed_family(request):
    return request.param


ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(number: int, passed: bool, detail: str) -> bool:
        ACCEPTANCE_LINES[number] = f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
