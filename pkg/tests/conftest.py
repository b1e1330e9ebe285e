from __future__ import annotations

import random

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from fibercox.complexes import Graph, SimplicialComplex, cycle_graph
from fibercox.cubical import cycle_complex
from fibercox.davis import level2_quotient, racg_from_complex
from fibercox.thickening import build_pair_thickening

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def c5():
    return cycle_complex(5)


@pytest.fixture(scope="session")
def t_c5(c5):
    T, _ = build_pair_thickening(c5)
    return T


@pytest.fixture(scope="session")
def t_c6():
    T, _ = build_pair_thickening(cycle_complex(6))
    return T


@pytest.fixture(scope="session")
def q5():
    return level2_quotient(racg_from_complex(SimplicialComplex.from_graph(cycle_graph(5))))


@pytest.fixture(scope="session")
def q_g2(t_c5):
    return level2_quotient(racg_from_complex(t_c5.complex))


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    verts = [f"v{i}" for i in range(n)]
    edges = [(verts[i], verts[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return Graph(verts, edges)


def random_complex(rng: random.Random, n: int, facets: int, max_dim: int = 3) -> SimplicialComplex:
    verts = [f"v{i}" for i in range(n)]
    fs = [rng.sample(verts, rng.randint(1, min(max_dim + 1, n))) for _ in range(facets)]
    return SimplicialComplex.explicit(verts, fs)


@st.composite
def graphs(draw, min_n: int = 1, max_n: int = 9):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    verts = [f"v{i}" for i in range(n)]
    return Graph(verts, [(verts[i], verts[j]) for i, j in chosen])


@st.composite
def complexes(draw, max_n: int = 8, max_dim: int = 3):
    n = draw(st.integers(1, max_n))
    verts = [f"v{i}" for i in range(n)]
    facet = st.lists(st.sampled_from(verts), min_size=1, max_size=max_dim + 1, unique=True)
    fs = draw(st.lists(facet, min_size=1, max_size=8))
    return SimplicialComplex.explicit(verts, fs)
