from __future__ import annotations

import pytest

import util


@pytest.fixture
def t4():
    return util.t4_instance()


@pytest.fixture
def t5():
    return util.t5_instance()
