import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from hexlink import catalog  # noqa: E402


@pytest.fixture
def rng():
    return random.Random(20240601)


@pytest.fixture(scope="session")
def bricard_params():
    return catalog.bricard()


@pytest.fixture(scope="session")
def bricard_linkage():
    from hexlink.motion import assemble
    return assemble(catalog.bricard())


ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE, key=lambda k: (int(k.split(".")[0]), k)):
        ok, text = ACCEPTANCE[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {text}")
