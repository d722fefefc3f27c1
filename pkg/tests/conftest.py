import pathlib

import pytest
from hypothesis import settings

DATA = pathlib.Path(__file__).parent / "data"

settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def pairing_text():
    return (DATA / "pairing_r.fasta").read_text(), (DATA / "pairing_s.fasta").read_text()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for k in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[k])
