import pytest

from elliptic_blocks.corpus import corpus_blocks, special_pair


@pytest.fixture(scope="session")
def blocks():
    return corpus_blocks()


@pytest.fixture(scope="session")
def g1(blocks):
    return blocks["G1"]


@pytest.fixture(scope="session")
def pair():
    return special_pair()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])
