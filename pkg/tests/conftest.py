import numpy as np
import pytest

from config import TSPLIB_DIR
from utils.tsplib_handler import figure2_instance, parse_instance, random_instance

BERLIN5 = """NAME: berlin5
TYPE: TSP
COMMENT: first five cities of berlin52
DIMENSION: 5
EDGE_WEIGHT_TYPE: EUC_2D
NODE_COORD_SECTION
1 565.0 575.0
2 25.0 185.0
3 345.0 750.0
4 945.0 685.0
5 845.0 655.0
EOF
"""

ATT4 = """NAME : att4
TYPE : TSP
DIMENSION : 4
EDGE_WEIGHT_TYPE : ATT
NODE_COORD_SECTION
1 0 0
2 10 0
3 0 30
4 10 10
EOF
"""


def labels(*cities):
    """Tour from the worked examples' 1-based city labels"""
    return np.array([c - 1 for c in cities], dtype=np.int64)


@pytest.fixture
def fig2():
    return figure2_instance()


@pytest.fixture
def berlin5():
    return parse_instance(BERLIN5)


@pytest.fixture
def att4():
    return parse_instance(ATT4)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(scope="session")
def random_instances():
    return {n: random_instance(n, seed=n) for n in (4, 7, 12, 25, 50, 100)}


def tsplib_file(name):
    path = TSPLIB_DIR / f"{name}.tsp"
    if not path.is_file():
        pytest.skip(f"{path} not available (run quick_scripts/dl_tsplib.py)")
    return path
