import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from zetaint.precision import PrecisionContext  # noqa: E402


@pytest.fixture(scope="session")
def ctx():
    return PrecisionContext(256, 32)


@pytest.fixture(scope="session")
def mp(ctx):
    return ctx.mp
