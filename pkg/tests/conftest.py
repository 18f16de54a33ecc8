import sys
from pathlib import Path

import numpy as np
import pytest

TESTS = Path(__file__).parent
sys.path.insert(0, str(TESTS))

from tempaug.clip import Clip  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_clip(rng, T=4, H=9, W=11, source_id="clip"):
    return Clip(rng.integers(0, 256, (T, H, W, 3), dtype=np.uint8), source_id)


@pytest.fixture
def make_clip():
    return random_clip


ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in sorted(ACCEPTANCE_RESULTS, key=lambda r: int(r[0].split()[0])):
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
