import os
import random

import pytest

os.environ.setdefault("ENVIRONMENT", "test")

from app.core.config import settings  # noqa: E402
from app.models.enums import Mode  # noqa: E402
from app.schemas.bvass import Bvass, ReachInstance, SplitRule, UnaryRule  # noqa: E402
from app.services.syntax import parse_formula  # noqa: E402


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run whole-corpus acceptance tests")


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: whole-corpus run, needs --runslow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def rng():
    return random.Random(settings.DEFAULT_SEED)


@pytest.fixture
def f():
    return parse_formula


@pytest.fixture
def tiny_system():
    # r -e1-> leaf: (r, (1)) is derivable from (leaf, 0)
    return Bvass(
        states=("r", "leaf"), dimension=1,
        unary_rules=(UnaryRule(source="r", vector=(-1,), target="leaf"),),
    )


@pytest.fixture
def tiny_instance(tiny_system):
    return ReachInstance(system=tiny_system, root_state="r", leaf_state="leaf")


@pytest.fixture
def duplication_instance():
    """Reachable only with an expansion: the split needs two units, one is produced."""
    system = Bvass(
        states=("r", "p", "s", "leaf"), dimension=1,
        unary_rules=(
            UnaryRule(source="r", vector=(1,), target="p"),
            UnaryRule(source="s", vector=(-1,), target="leaf"),
        ),
        split_rules=(SplitRule(source="p", left="s", right="s"),),
    )
    return ReachInstance(system=system, root_state="r", leaf_state="leaf", mode=Mode.EXPANSIVE)
