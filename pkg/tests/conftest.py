import sys

import numpy as np
import pytest
from hypothesis import settings

from dcapolar.crc import CRC24C, CrcSpec
from dcapolar.polar import build_code_config

settings.register_profile("default", max_examples=100, deadline=None)
settings.load_profile("default")

TOY_CRC3 = CrcSpec.from_exponents([3, 1, 0])


@pytest.fixture(scope="session")
def pbch():
    return build_code_config(512, 32, 24, CRC24C)


@pytest.fixture(scope="session")
def small_crc_code():
    # N = 64 with a 6-bit CRC keeps the reference decoder fast
    return build_code_config(64, 14, 6, CrcSpec.from_exponents([6, 5, 0]))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is not None and mod.REPORT:
        terminalreporter.section("acceptance criteria")
        for line in sorted(mod.REPORT):
            terminalreporter.write_line(line)
