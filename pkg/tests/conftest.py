import os
import random
import shutil
import stat
import sys

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from kclub.graph import Graph

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

HAVE_RC2 = shutil.which("rc2.py") is not None
RC2 = ["rc2.py", "-vvv"]  # prints the model only at this verbosity


@st.composite
def graphs(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


def random_graph(n, p, rnd: random.Random) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)
                                if rnd.random() < p])


@pytest.fixture
def fake_solver(tmp_path):
    """Write an executable script printing ``body`` (``{path}`` is the wcnf argument)."""
    def make(body: str, name="fake_solver.py"):
        path = tmp_path / name
        path.write_text(f"#!{sys.executable}\nimport sys\npath = sys.argv[1]\n{body}\n")
        path.chmod(path.stat().st_mode | stat.S_IEXEC)
        return [str(path)]
    return make


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    lines = getattr(mod, "_lines", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
