"""Shared strategies and brute-force oracles.

The oracles here deliberately avoid the package's mask arithmetic: they
work from an incidence matrix, so a bug in the vectorised cut evaluation
cannot hide behind itself.
"""

from __future__ import annotations

import functools
import itertools

import numpy as np
import pytest
from hypothesis import strategies as st

from hypersketch.hypercore import Hyperedge, Hypergraph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


# ---------------------------------------------------------------- oracles


def incidence(H: Hypergraph) -> np.ndarray:
    B = np.zeros((H.m, H.n), dtype=np.int64)
    for i, e in enumerate(H.edges):
        B[i, list(e.endpoints)] = 1
    return B


@functools.lru_cache(maxsize=32)
def all_sides(n: int) -> np.ndarray:
    """Every nontrivial bipartition as a 0/1 row, vertex 0 fixed on the false side."""
    codes = np.arange(1, 1 << (n - 1), dtype=np.int64)
    rows = np.zeros((len(codes), n), dtype=np.int64)
    rows[:, 1:] = (codes[:, None] >> np.arange(n - 1)) & 1
    rows.setflags(write=False)
    return rows


def oracle_cut_weights(H: Hypergraph, sides: np.ndarray) -> np.ndarray:
    """Weight of each cut given as 0/1 side rows, by counting endpoints per side."""
    if H.m == 0:
        return np.zeros(len(sides))
    B = incidence(H)
    inside = sides @ B.T  # endpoints of edge on the true side
    sizes = B.sum(axis=1)
    crossing = (inside > 0) & (inside < sizes)
    w = np.array([e.weight for e in H.edges])
    return crossing.astype(float) @ w


def brute_min_cut(H: Hypergraph) -> float:
    return float(oracle_cut_weights(H, all_sides(H.n)).min())


def induced(H: Hypergraph, U) -> Hypergraph:
    U = sorted(U)
    pos = {v: i for i, v in enumerate(U)}
    keep = [Hyperedge(frozenset(pos[v] for v in e.endpoints), e.weight) for e in H.edges if e.endpoints <= set(U)]
    return Hypergraph(len(U), tuple(keep))


def definitional_strengths(H: Hypergraph) -> list[float]:
    """k_e = max over vertex sets U containing e (|U| >= 2) of the min cut of H[U]."""
    best = [0.0] * H.m
    for size in range(2, H.n + 1):
        for U in itertools.combinations(range(H.n), size):
            Us = set(U)
            sub = induced(H, U)
            if sub.m == 0:
                continue
            w = brute_min_cut(sub)
            for i, e in enumerate(H.edges):
                if e.endpoints <= Us and w > best[i]:
                    best[i] = w
    return best


def brute_max_cut(n: int, edges) -> int:
    """Integer max cut of a unit-weight multigraph given as (u, v) pairs."""
    if not edges or n < 2:
        return 0
    sides = all_sides(n)
    a = np.array([u for u, _ in edges])
    b = np.array([v for _, v in edges])
    return int((sides[:, a] != sides[:, b]).sum(axis=1).max())


def satisfied_counts(num_vars: int, clauses) -> np.ndarray:
    """Clause counts for all assignments; row i has variable j+1 true iff bit j of i is set."""
    A = ((np.arange(1 << num_vars)[:, None] >> np.arange(num_vars)) & 1).astype(bool)
    total = np.zeros(len(A), dtype=np.int64)
    for clause in clauses:
        lits = np.array(clause)
        vals = A[:, np.abs(lits) - 1]
        total += np.where(lits > 0, vals, ~vals).any(axis=1)
    return total


# ---------------------------------------------------------------- strategies


@st.composite
def hypergraphs(draw, min_n=2, max_n=8, min_m=0, max_m=12, max_r=4, min_card=1, integer_weights=True):
    n = draw(st.integers(min_n, max_n))
    m = draw(st.integers(min_m, max_m))
    weight = st.integers(1, 5).map(float) if integer_weights else st.floats(0.1, 10.0)
    edges = []
    for _ in range(m):
        k = draw(st.integers(min(min_card, n), min(max_r, n)))
        ends = draw(st.sets(st.integers(0, n - 1), min_size=k, max_size=k))
        edges.append(Hyperedge(frozenset(ends), draw(weight)))
    return Hypergraph(n, tuple(edges))


@st.composite
def connected_hypergraphs(draw, min_n=2, max_n=8, max_extra=10, max_r=4):
    """A random spanning chain plus extra edges, so the result is connected."""
    n = draw(st.integers(min_n, max_n))
    perm = draw(st.permutations(range(n)))
    edges = []
    for i in range(1, n):
        anchor = perm[draw(st.integers(0, i - 1))]
        edges.append(Hyperedge(frozenset((anchor, perm[i])), float(draw(st.integers(1, 5)))))
    for _ in range(draw(st.integers(0, max_extra))):
        k = draw(st.integers(2, min(max_r, n)))
        ends = draw(st.sets(st.integers(0, n - 1), min_size=k, max_size=k))
        edges.append(Hyperedge(frozenset(ends), float(draw(st.integers(1, 5)))))
    return Hypergraph(n, tuple(edges))


@pytest.fixture
def triangle() -> Hypergraph:
    return Hypergraph.from_edges(3, [((0, 1), 1.0), ((1, 2), 1.0), ((0, 2), 1.0)])


@pytest.fixture
def two_edge() -> Hypergraph:
    return Hypergraph.from_edges(4, [((0, 1, 2), 1.0), ((2, 3), 2.0)])
