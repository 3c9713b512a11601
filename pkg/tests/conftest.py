import pytest

from tgmatch.core import full_view, load_graph

FIXTURE_EDGES = """source,etype,target,time,weight,source_location,target_location
1,email,2,100,1,,
1,email,2,200,1,,
2,phone,3,150,1,,
1,sell,4,300,2,A,B
3,buy,4,400,5,B,A
"""

# same rows minus the email edge at t=200
THINNED_EDGES = """source,etype,target,time,weight,source_location,target_location
1,email,2,100,1,,
2,phone,3,150,1,,
1,sell,4,300,2,A,B
3,buy,4,400,5,B,A
"""

FIXTURE_NODES = """node,kind,label
1,Person,
2,Person,
3,Person,
4,Item,
"""


@pytest.fixture(scope="session")
def fixture_graph():
    return load_graph(FIXTURE_EDGES, FIXTURE_NODES)


@pytest.fixture(scope="session")
def fixture_view(fixture_graph):
    return full_view(fixture_graph)


@pytest.fixture(scope="session")
def thinned_view():
    return full_view(load_graph(THINNED_EDGES, FIXTURE_NODES))
