from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from bilattice_morita import GroundSpace, Relation, bilattice_generate, csl_generate

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES = pytest.StashKey[list]()

GOLDEN_DIR = Path(__file__).resolve().parents[1] / "src" / "bilattice_morita" / "data" / "golden"


@st.composite
def relations(draw, max_m=4, max_n=4, min_size=1, nondegenerate=False):
    m = draw(st.integers(min_size, max_m))
    n = draw(st.integers(min_size, max_n))
    rows = draw(st.lists(st.integers(0, (1 << n) - 1), min_size=m, max_size=m))
    if nondegenerate:
        rows = [r or 1 << (i % n) for i, r in enumerate(rows)]
        covered = 0
        for r in rows:
            covered |= r
        for b in range(n):
            if not covered >> b & 1:
                rows[b % m] |= 1 << b
    return Relation(GroundSpace(m), GroundSpace(n), tuple(rows))


@st.composite
def csls(draw, max_n=5):
    n = draw(st.integers(1, max_n))
    gens = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=6))
    return csl_generate(n, gens)


@st.composite
def bilattices(draw, max_l=3, max_r=3):
    nl = draw(st.integers(1, max_l))
    nr = draw(st.integers(1, max_r))
    gens = draw(st.lists(st.tuples(st.integers(0, (1 << nl) - 1), st.integers(0, (1 << nr) - 1)), max_size=5))
    return bilattice_generate(nl, nr, gens)


@pytest.fixture
def diag2():
    return Relation.diagonal(2)


@pytest.fixture
def a3():
    return Relation.from_pairs(3, 2, [(0, 0), (1, 0), (2, 1)])


@pytest.fixture
def e_tri():
    return Relation.from_pairs(2, 2, [(0, 0), (1, 0), (1, 1)])


@pytest.fixture
def verdict(request):
    """Record one acceptance verdict line; the lines are printed in the terminal summary."""
    lines = request.config.stash.setdefault(ACCEPTANCE_LINES, [])

    def record(number: int, ok: bool, detail: str) -> None:
        lines.append((number, f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"))
    return record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_LINES, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
