import pytest
from hypothesis import HealthCheck, settings

from steinparity.dyadic import PlaneVector
from steinparity.graph import BalancedGraph, Edge

settings.register_profile(
    "default", deadline=None, max_examples=200,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def theta(*vectors):
    """Two vertices u, v joined by three u->v edges carrying ``vectors``."""
    edges = [Edge(f"e{i}", "u", "v", PlaneVector.of(*b)) for i, b in enumerate(vectors)]
    return BalancedGraph(["u", "v"], edges)


def disjoint_union(*graphs):
    vertices, edges = [], []
    for k, G in enumerate(graphs):
        vertices += [f"{k}:{v}" for v in G.vertices]
        edges += [Edge(f"{k}:{e.id}", f"{k}:{e.tail}", f"{k}:{e.head}", e.b) for e in G.edges]
    return BalancedGraph(vertices, edges)


@pytest.fixture
def theta_unit():
    return theta((1, 0), (0, 1), (-1, -1))


@pytest.fixture
def theta_m1():
    return theta((1, 1), (1, -1), (-2, 0))


@pytest.fixture
def theta_doubled():
    return theta((2, 0), (0, 2), (-2, -2))


@pytest.fixture
def theta_collinear():
    return theta((1, 0), (2, 0), (-3, 0))


# one summary line per acceptance criterion
_acceptance = []


def pytest_runtest_logreport(report):
    if report.when == "call" and "acceptance" in report.keywords:
        detail = dict(report.user_properties).get("detail", "")
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome, detail))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome, detail in _acceptance:
        tag = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{tag}  {name}  {detail}")
