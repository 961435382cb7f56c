from pathlib import Path

import pytest

from app.services.ledley_solver import FeedbackLaw, StateSet
from app.services.logic_model import compile_network, parse_network

NETWORKS = Path(__file__).resolve().parent.parent / "networks"

BCN_M_F = [
    2, 4, 4, 2, 2, 4, 4, 2, 3, 7, 1, 5, 3, 7, 1, 5,
    1, 7, 3, 5, 1, 7, 3, 5, 4, 8, 2, 6, 4, 8, 2, 6,
    2, 4, 4, 2, 10, 12, 12, 10, 3, 7, 1, 5, 11, 15, 9, 13,
    1, 7, 3, 5, 9, 15, 11, 13, 4, 8, 2, 6, 12, 16, 10, 14,
]
BCN_POINT_LAW = [1, 2, 4, 2, 4, 2, 2, 4, 3, 3, 2, 4, 1, 1, 3, 3]
BCN_POINT_M_C = [2, 7, 3, 5, 9, 7, 3, 13, 3, 7, 2, 6, 3, 7, 9, 13]
BCN_SET = [6, 7, 12]
BCN_SET_LAW = [1, 2, 3, 1, 1, 3, 3, 4, 2, 1, 2, 4, 4, 1, 4, 2]
BCN_SET_M_C = [2, 7, 4, 2, 2, 12, 12, 13, 4, 7, 2, 6, 12, 7, 10, 6]

MIX_M_F = [1, 1, 4, 5, 5, 2, 2, 2, 5, 6, 6, 3, 3, 3, 6, 4, 4, 1]
MIX_POINT_LAW = [1, 1, 3, 2, 2, 3]
MIX_SET_LAW = [3, 3, 3, 2, 2, 2]

LEDLEY_M_F = [1, 3, 2, 4, 2, 4, 2, 2]


def _compiled(filename):
    net = parse_network((NETWORKS / filename).read_text(encoding="utf-8"))
    return net, compile_network(net)


@pytest.fixture(scope="session")
def bcn_source():
    return _compiled("bcn_point.net")[0]


@pytest.fixture(scope="session")
def bcn():
    return _compiled("bcn_point.net")[1]


@pytest.fixture(scope="session")
def mix():
    return _compiled("mix_valued.net")[1]


@pytest.fixture(scope="session")
def ledley():
    return _compiled("ledley_example.net")[1]


@pytest.fixture
def bcn_set(bcn):
    return StateSet.of(bcn.N, BCN_SET)


@pytest.fixture
def bcn_point_law():
    return FeedbackLaw.from_controls(4, BCN_POINT_LAW)


@pytest.fixture
def bcn_set_law():
    return FeedbackLaw.from_controls(4, BCN_SET_LAW)


@pytest.fixture
def networks_dir():
    return NETWORKS
