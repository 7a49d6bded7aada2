import random

import pytest

from semecs.group import PRODUCTION_GROUP, TOY_GROUP, generate_toy_group


@pytest.fixture
def rng():
    return random.Random(0x5EED)


@pytest.fixture(scope="session")
def big_toy():
    # q = 524351, p = 1048703: large enough that beta tokens rarely collide,
    # small enough for the exhaustive oracles
    return generate_toy_group(1 << 19)


@pytest.fixture(scope="session")
def toy():
    return TOY_GROUP


@pytest.fixture(scope="session")
def prod():
    return PRODUCTION_GROUP
