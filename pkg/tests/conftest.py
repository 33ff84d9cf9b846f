import pytest

from kohn.chain import run_chain
from kohn.domain import DomainSpec
from kohn.parsing import parse_polynomial


def example_spec(M=2, N=3, K=3):
    F = (parse_polynomial(f"z1^{M}", 2), parse_polynomial(f"z2^{N} + z2*z1^{K}", 2))
    return DomainSpec(2, F)


@pytest.fixture(scope="session")
def example_report():
    return run_chain(example_spec())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
