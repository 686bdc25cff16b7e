import numpy as np
import pytest

from patmine import _accel
from patmine.graph import build_network
from patmine.ingest import CoRegistrationEdge

_acceptance_outcomes: dict[str, str] = {}


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile (or load from cache) every jitted kernel once per session."""
    _accel.warmup()


@pytest.fixture(scope="session")
def fixture_corpus_path():
    from importlib import resources
    return str(resources.files("patmine.data").joinpath("fixture_corpus.jsonl"))


def net_from_pairs(pairs, weights=None):
    """Tiny-network helper: integer node pairs -> CollabNetwork.

    Node i is named n{i:02d} so name order matches index order.
    """
    edges = []
    for idx, (u, v) in enumerate(pairs):
        w = 1 if weights is None else weights[idx]
        a, b = f"n{u:02d}", f"n{v:02d}"
        if b < a:
            a, b = b, a
        edges.append(CoRegistrationEdge(a, b, w))
    return build_network(edges)


def random_graph(seed, n_max=12, p_choices=(0.2, 0.5, 0.8)):
    """Seeded G(n, p) as an (n, pair list) tuple; always has >= 1 edge."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(4, n_max + 1))
    p = p_choices[seed % len(p_choices)]
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)
             if rng.random() < p]
    if not pairs:
        pairs = [(0, 1)]
    return n, pairs


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _acceptance_outcomes[report.nodeid] = report.outcome


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_outcomes:
        return
    terminalreporter.write_sep("-", "acceptance criteria")
    for nodeid in sorted(_acceptance_outcomes):
        outcome = _acceptance_outcomes[nodeid]
        label = nodeid.split("::")[-1].removeprefix("test_").replace("_", "-")
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {label}")
