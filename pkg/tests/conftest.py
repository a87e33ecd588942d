import random

import pytest
from hypothesis import settings

from csa.fields import FieldTower

settings.register_profile("csa", max_examples=60, deadline=None)
settings.load_profile("csa")


@pytest.fixture
def Q():
    return FieldTower(0, 1, ())


@pytest.fixture
def Qt():
    return FieldTower(0, 1, ("t",))


@pytest.fixture
def Qt12():
    return FieldTower(0, 1, ("t1", "t2"))


@pytest.fixture
def rng():
    return random.Random(12345)
