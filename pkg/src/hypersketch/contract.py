"""Randomized hypergraph contraction and near-minimum cut counting.

:func:`contract_algorithm` is the step-by-step procedure: while more than
``alpha * r`` super-vertices remain, pick a surviving hyperedge with
probability proportional to its weight and merge its endpoints; then output
a uniformly random nontrivial bipartition of what is left.

:func:`contraction_trials` produces the same output distribution in bulk.
Giving every hyperedge an exponential clock with rate ``w_e`` and contracting
edges in clock order (skipping those already collapsed to a single
super-vertex) picks each next surviving edge with probability proportional
to its weight, by memorylessness. The per-trial work is then one argsort
row plus a union-find sweep.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._workers import worker_count
from .hypercore import (
    CUT_RTOL,
    Cut,
    Hyperedge,
    Hypergraph,
    InvalidArgumentError,
    cut_weights,
)
from .mincut import min_cut

__all__ = [
    "ContractionState",
    "contract_algorithm",
    "contract_edge",
    "contraction_trials",
    "cut_count_bound",
    "enumerate_near_min_cuts",
    "q_bound",
    "sunflower",
]

TRIAL_CHUNK = 4096


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if alpha < 1 or (2 * alpha) != int(2 * alpha):
        raise InvalidArgumentError(f"alpha must be a half-integer >= 1, got {alpha}")
    return alpha


@dataclass(frozen=True)
class ContractionState:
    """A partially contracted hypergraph.

    ``blocks[i]`` is the set of original vertices merged into super-vertex
    ``i``; blocks stay ordered by their smallest member. ``edges`` holds the
    surviving hyperedges over super-vertex ids, self-loops already dropped.
    """

    blocks: tuple[frozenset[int], ...]
    edges: tuple[tuple[frozenset[int], float], ...]

    @classmethod
    def from_hypergraph(cls, H: Hypergraph) -> ContractionState:
        return cls(
            tuple(frozenset([v]) for v in range(H.n)),
            tuple((e.endpoints, e.weight) for e in H.edges if len(e) > 1),
        )

    @property
    def size(self) -> int:
        return len(self.blocks)

    @property
    def total_weight(self) -> float:
        return math.fsum(w for _, w in self.edges)

    def as_hypergraph(self) -> Hypergraph:
        return Hypergraph(self.size, tuple(Hyperedge(ends, w) for ends, w in self.edges))

    def induced_cut(self, chosen: set[int] | frozenset[int]) -> Cut:
        n = sum(len(b) for b in self.blocks)
        side = [False] * n
        for i in chosen:
            for v in self.blocks[i]:
                side[v] = True
        return Cut(tuple(side))


def contract_edge(state: ContractionState, edge_index: int) -> ContractionState:
    ends = state.edges[edge_index][0]
    if len(ends) < 2:
        raise InvalidArgumentError("cannot contract a self-loop")
    target = min(ends)
    relabel = {}
    blocks = []
    merged = frozenset().union(*(state.blocks[i] for i in ends))
    for i, block in enumerate(state.blocks):
        if i in ends and i != target:
            continue
        relabel[i] = len(blocks)
        blocks.append(merged if i == target else block)
    for i in ends:
        relabel[i] = relabel[target]
    edges = []
    for e_ends, w in state.edges:
        new = frozenset(relabel[i] for i in e_ends)
        if len(new) > 1:
            edges.append((new, w))
    return ContractionState(tuple(blocks), tuple(edges))


def _random_bipartition(k: int, rng: np.random.Generator) -> frozenset[int]:
    # uniform over the 2**(k-1) - 1 nontrivial bipartitions; block 0 stays on the false side
    if k < 2:
        raise InvalidArgumentError("need at least two super-vertices to cut")
    if k - 1 <= 62:
        c = int(rng.integers(1, 1 << (k - 1)))
        return frozenset(j + 1 for j in range(k - 1) if (c >> j) & 1)
    while True:
        bits = rng.integers(0, 2, size=k - 1)
        if bits.any():
            return frozenset(int(j) + 1 for j in np.flatnonzero(bits))


def contract_algorithm(H: Hypergraph, alpha: float, rng: np.random.Generator, *, r: int | None = None) -> Cut:
    """One run of weighted random contraction followed by a random bipartition.

    ``r`` defaults to the largest hyperedge cardinality. If the surviving
    hyperedges run out before the threshold is reached, the remaining
    super-vertices are bipartitioned directly.
    """
    alpha = _check_alpha(alpha)
    r = H.rank if r is None else r
    if H.n < 2:
        raise InvalidArgumentError("need at least two vertices")
    threshold = alpha * r
    state = ContractionState.from_hypergraph(H)
    while state.size > threshold and state.edges:
        cum = np.cumsum([w for _, w in state.edges])
        u = rng.random() * cum[-1]
        idx = min(int(np.searchsorted(cum, u, side="right")), len(cum) - 1)
        state = contract_edge(state, idx)
    return state.induced_cut(_random_bipartition(state.size, rng))


def _trial_chunk(args) -> np.ndarray:
    n, ends_list, weights, threshold, count, seed, chunk_index = args
    rng = np.random.default_rng([seed, chunk_index])
    m = len(ends_list)
    out = np.empty(count, dtype=np.int64)
    if m:
        clocks = rng.exponential(size=(count, m)) / weights
        orders = np.argsort(clocks, axis=1, kind="stable").tolist()
    else:
        orders = [[]] * count
    uniforms = rng.random(count).tolist()
    for t in range(count):
        parent = list(range(n))
        size = n

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for idx in orders[t]:
            if size <= threshold:
                break
            roots = {find(v) for v in ends_list[idx]}
            if len(roots) < 2:
                continue
            keep = min(roots)
            for x in roots:
                parent[x] = keep
            size -= len(roots) - 1
        roots = [find(v) for v in range(n)]
        block_of = {root: j for j, root in enumerate(sorted(set(roots)))}
        k = len(block_of)
        if k < 2:
            raise InvalidArgumentError("need at least two super-vertices to cut")
        if k - 1 <= 52:
            c = 1 + int(uniforms[t] * ((1 << (k - 1)) - 1))
        else:
            c = 0
            while c == 0:
                c = int(rng.integers(0, 1 << 62)) & ((1 << (k - 1)) - 1)
        mask = 0
        for v in range(n):
            j = block_of[roots[v]]
            if j and (c >> (j - 1)) & 1:
                mask |= 1 << v
        out[t] = mask
    return out


def contraction_trials(
    H: Hypergraph,
    alpha: float,
    trials: int,
    seed: int,
    *,
    r: int | None = None,
    workers: int | None = None,
) -> np.ndarray:
    """Output cuts of ``trials`` independent contraction runs as canonical side masks.

    Trials are grouped in fixed-size chunks, chunk ``i`` seeded from
    ``(seed, i)``, so results do not depend on the worker count.
    """
    alpha = _check_alpha(alpha)
    if trials < 1:
        raise InvalidArgumentError("trials must be >= 1")
    if H.n < 2:
        raise InvalidArgumentError("need at least two vertices")
    if H.n > 62:
        raise InvalidArgumentError("bulk trials encode cuts as 64-bit masks; n must be <= 62")
    r = H.rank if r is None else r
    live = [e for e in H.edges if len(e) > 1]
    ends_list = [tuple(sorted(e.endpoints)) for e in live]
    weights = np.array([e.weight for e in live], dtype=float)
    jobs = []
    for i, start in enumerate(range(0, trials, TRIAL_CHUNK)):
        count = min(TRIAL_CHUNK, trials - start)
        jobs.append((H.n, ends_list, weights, alpha * r, count, seed, i))
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_trial_chunk, jobs))
    else:
        parts = [_trial_chunk(job) for job in jobs]
    return np.concatenate(parts)


def q_bound(n: int, r: int, alpha: float) -> float:
    """Lower bound on the probability that one run outputs a fixed cut of weight <= alpha * min cut.

    This is ``Q / (2**(alpha*r - 1) - 1)`` with
    ``Q = (2 alpha + 1) / (r + 1) / binom(n - alpha (r - 2), 2 alpha)``, and
    ``Q = 1`` once ``n <= alpha * r``. The binomial's upper argument may be
    a half-integer; since the lower argument ``2 alpha`` is an integer, the
    falling-factorial form coincides with the Gamma-function extension.
    """
    alpha = _check_alpha(alpha)
    if int(n) != n or n < 2 or int(r) != r or r < 2:
        raise InvalidArgumentError("need integers n >= 2 and r >= 2")
    divisor = 2.0 ** (alpha * r - 1) - 1
    if n <= alpha * r:
        return 1.0 / divisor
    x = n - alpha * (r - 2)
    k = int(2 * alpha)
    binom = 1.0
    for i in range(k):
        binom *= (x - i) / (i + 1)
    q = (2 * alpha + 1) / (r + 1) / binom
    return q / divisor


def cut_count_bound(n: int, r: int, alpha: float, constant: float = 1.0) -> float:
    """``constant * 2**(alpha r) * n**(2 alpha)``, the near-minimum cut count bound."""
    return constant * 2.0 ** (alpha * r) * float(n) ** (2 * alpha)


def enumerate_near_min_cuts(
    H: Hypergraph,
    alpha: float,
    trials: int,
    seed: int,
    *,
    min_weight: float | None = None,
) -> set[Cut]:
    """Distinct cuts of weight <= alpha * min cut found by ``trials`` contraction runs."""
    alpha = _check_alpha(alpha)
    if min_weight is None:
        _, min_weight = min_cut(H)
    masks = np.unique(contraction_trials(H, alpha, trials, seed))
    weights = cut_weights(H, masks)
    limit = alpha * min_weight * (1 + CUT_RTOL) + CUT_RTOL
    return {Cut.from_mask(H.n, int(mk)) for mk, w in zip(masks, weights) if w <= limit}


def sunflower(r: int, m: int, alpha: float) -> Hypergraph:
    """``m`` size-``r`` hyperedges meeting only at vertex 0, each with a 2-clique on its endpoints.

    The large hyperedges weigh 1 and each clique edge ``(alpha - 1) / 2**r``.
    Vertex count is ``r m - m + 1``.
    """
    if int(r) != r or r < 2 or int(m) != m or m < 1:
        raise InvalidArgumentError("need integers r >= 2 and m >= 1")
    if not alpha > 1:
        raise InvalidArgumentError("alpha must exceed 1")
    n = r * m - m + 1
    pair_w = (alpha - 1) / 2**r
    edges = []
    for j in range(m):
        petal = [0] + list(range(1 + j * (r - 1), 1 + (j + 1) * (r - 1)))
        edges.append(Hyperedge(frozenset(petal), 1.0))
        for a in range(r):
            for b in range(a + 1, r):
                edges.append(Hyperedge(frozenset((petal[a], petal[b])), pair_w))
    return Hypergraph(n, tuple(edges))
