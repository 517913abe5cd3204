from __future__ import annotations

import random

import pytest

from hytn.fixtures import workflow_join


@pytest.fixture(scope="session")
def join_net():
    return workflow_join()


@pytest.fixture()
def rng():
    return random.Random(0xC0FFEE)
