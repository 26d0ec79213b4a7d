import pytest

from support import river_map


@pytest.fixture
def doc():
    return river_map()


@pytest.fixture
def doc_with_flow():
    return river_map(flow_east=1.0)
