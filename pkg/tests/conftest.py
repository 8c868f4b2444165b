import pytest
from hypothesis import HealthCheck, settings

from grpd.graph import Bundle, Graph
from grpd.loader import corpus_graph, corpus_names

settings.register_profile(
    "grpd", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("grpd")


@pytest.fixture(scope="session")
def corpus():
    return {name: corpus_graph(name) for name in corpus_names()}


@pytest.fixture(scope="session")
def one_edge():
    return corpus_graph("one_edge")


@pytest.fixture(scope="session")
def o1():
    return corpus_graph("o1")


@pytest.fixture(scope="session")
def o2():
    return corpus_graph("o2")


@pytest.fixture(scope="session")
def o_infty():
    return corpus_graph("o_infty")


@pytest.fixture(scope="session")
def tail_loop():
    return corpus_graph("tail_into_loop")


@pytest.fixture(scope="session")
def disjoint_loops():
    return corpus_graph("two_loops_disjoint")


@pytest.fixture(scope="session")
def strongly_connected():
    """Two vertices with edges both ways and a loop at each."""
    return Graph(("u", "w"), (
        Bundle("a", "u", "w"), Bundle("b", "w", "u"),
        Bundle("p", "u", "u"), Bundle("q", "w", "w")))
