import random

import pytest
from hypothesis import strategies as st

from newton_mld.errors import SupportError
from newton_mld.newton import SupportSet, validate_support

CORPUS_SEED = 20261015
CORPUS_SIZE = 150


@st.composite
def supports(draw, min_dim=2, max_dim=4, max_exp=6, validated=False):
    dim = draw(st.integers(min_dim, max_dim))
    pts = draw(
        st.lists(
            st.tuples(*[st.integers(0, max_exp)] * dim).filter(any),
            min_size=1,
            max_size=8,
            unique=True,
        )
    )
    if validated:
        # give every coordinate a monomial free of it
        for i in range(dim):
            if all(m[i] for m in pts):
                j = draw(st.integers(0, len(pts) - 1))
                m = list(pts[j])
                m[i] = 0
                if any(m):
                    pts[j] = tuple(m)
        try:
            return validate_support(pts, dim)
        except SupportError:
            return validate_support([tuple(int(k == i) * 2 for k in range(dim)) for i in range(dim)], dim)
    return SupportSet(dim, tuple(pts))


def random_corpus(seed=CORPUS_SEED, size=CORPUS_SIZE):
    """Uniform random validated supports: n+1 in {2,3,4}, 2..8 points, exponents 0..6."""
    rng = random.Random(seed)
    out = []
    while len(out) < size:
        dim = rng.choice([2, 3, 4])
        k = rng.randint(2, 8)
        pts = [tuple(rng.randint(0, 6) for _ in range(dim)) for _ in range(k)]
        try:
            out.append(validate_support(pts, dim))
        except SupportError:
            continue
    return out


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in mod.summary_lines():
        terminalreporter.write_line(line)
