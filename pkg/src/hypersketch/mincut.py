"""Deterministic hypergraph minimum cut and strong-connectivity decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .hypercore import (
    CUT_RTOL,
    Cut,
    Hypergraph,
    InvalidArgumentError,
    ResourceLimitError,
    components,
    cut_weights,
    induced_subhypergraph,
)

__all__ = [
    "StrongConnectivityMap",
    "k_strong_check",
    "min_cut",
    "strong_connectivities",
]

K_STRONG_LIMIT = 20


def min_cut(H: Hypergraph, *, method: str = "ordering", seed: int = 0) -> tuple[Cut, float]:
    """Minimum-weight nontrivial cut of ``H``.

    The default method repeatedly builds a maximum-adjacency ordering: each
    unvisited vertex is keyed by the total weight of hyperedges that contain
    it and at least one visited vertex, and the heaviest is visited next.
    The last vertex of each phase, cut off from the rest, is a candidate; the
    last two vertices are then merged. ``method="contraction"`` instead takes
    the best of ``3 n^2 ln n`` random contraction runs, and is only meant for
    cross-checking.

    A disconnected hypergraph yields a weight-0 cut separating the component
    of vertex 0 from the rest.
    """
    if H.n < 2:
        raise InvalidArgumentError("min cut needs at least two vertices")
    comps = components(H)
    if len(comps) > 1:
        return Cut.from_set(H.n, comps[0]), 0.0
    if method == "ordering":
        return _ordering_min_cut(H)
    if method == "contraction":
        return _contraction_min_cut(H, seed)
    raise InvalidArgumentError(f"unknown min-cut method {method!r}")


def _ordering_min_cut(H: Hypergraph) -> tuple[Cut, float]:
    # super-vertex id = smallest original vertex it holds
    groups: dict[int, list[int]] = {v: [v] for v in range(H.n)}
    edges: list[tuple[frozenset[int], float]] = [(e.endpoints, e.weight) for e in H.edges if len(e) > 1]
    best_w, best_side = math.inf, None

    while len(groups) > 1:
        incident: dict[int, list[int]] = {v: [] for v in groups}
        for idx, (ends, _) in enumerate(edges):
            for v in ends:
                incident[v].append(idx)
        key = dict.fromkeys(groups, 0.0)
        touched = [False] * len(edges)
        unvisited = set(groups)
        order = []
        current = min(groups)
        while True:
            unvisited.discard(current)
            order.append(current)
            for idx in incident[current]:
                if touched[idx]:
                    continue
                touched[idx] = True
                ends, w = edges[idx]
                for u in ends:
                    if u in unvisited:
                        key[u] += w
            if not unvisited:
                break
            current = max(sorted(unvisited), key=key.__getitem__)
        s, t = order[-2], order[-1]
        if key[t] < best_w:
            best_w, best_side = key[t], list(groups[t])
        # merge t into s; ids stay the smaller original index
        keep, gone = min(s, t), max(s, t)
        groups[keep].extend(groups.pop(gone))
        merged = []
        for ends, w in edges:
            if gone in ends:
                ends = (ends - {gone}) | {keep}
            if len(ends) > 1:
                merged.append((ends, w))
        edges = merged

    return Cut.from_set(H.n, best_side), float(best_w)


def _contraction_min_cut(H: Hypergraph, seed: int) -> tuple[Cut, float]:
    from .contract import contraction_trials

    n = H.n
    trials = max(1, math.ceil(3 * n * n * math.log(n)))
    masks = np.unique(contraction_trials(H, 1, trials, seed))
    weights = cut_weights(H, masks)
    i = int(np.argmin(weights))
    return Cut.from_mask(n, int(masks[i])), float(weights[i])


@dataclass(frozen=True)
class StrongConnectivityMap:
    """Per-hyperedge strong connectivity ``k_e``, indexed like ``H.edges``."""

    k: tuple[float, ...]

    def __getitem__(self, edge_index: int) -> float:
        return self.k[edge_index]

    def __len__(self) -> int:
        return len(self.k)

    def __iter__(self):
        return iter(self.k)

    def distinct_values(self) -> list[float]:
        return sorted(set(self.k))

    def as_array(self) -> np.ndarray:
        return np.array(self.k, dtype=float)


def strong_connectivities(H: Hypergraph) -> StrongConnectivityMap:
    """Strong connectivity of every hyperedge by recursive min-cut splitting.

    Each piece of the recursion contributes its min-cut weight to every
    hyperedge lying fully inside it; ``k_e`` is the largest contribution.
    Pieces are split along their minimum cut into the two vertex-induced
    sides, down to single vertices. A hyperedge never inside a piece with
    two or more vertices (only possible when n == 1) gets ``inf``.
    """
    if H.m == 0:
        raise InvalidArgumentError("strong connectivity needs at least one hyperedge")
    k = [-math.inf] * H.m
    stack: list[tuple[list[int], list[int]]] = [(list(range(H.n)), list(range(H.m)))]
    while stack:
        verts, edge_ids = stack.pop()
        if len(verts) < 2 or not edge_ids:
            continue
        sub, _ = induced_subhypergraph(H, verts)
        cut, w = min_cut(sub)
        for idx in edge_ids:
            if w > k[idx]:
                k[idx] = w
        left = {verts[i] for i, s in enumerate(cut.side) if not s}
        right = {verts[i] for i, s in enumerate(cut.side) if s}
        for part in (left, right):
            inside = [idx for idx in edge_ids if H.edges[idx].endpoints <= part]
            stack.append((sorted(part), inside))
    return StrongConnectivityMap(tuple(math.inf if v == -math.inf else v for v in k))


def k_strong_check(H: Hypergraph, U: Iterable[int], k: float) -> bool:
    """True iff every nontrivial cut of the subhypergraph induced by ``U`` weighs at least ``k``."""
    U = set(U)
    if len(U) > K_STRONG_LIMIT:
        raise ResourceLimitError(f"k-strong check limited to |U| <= {K_STRONG_LIMIT}")
    sub, _ = induced_subhypergraph(H, U)
    if sub.n < 2:
        return True
    masks = np.arange(1, 1 << (sub.n - 1), dtype=np.int64) << 1
    lightest = float(cut_weights(sub, masks).min())
    return lightest >= k - CUT_RTOL * max(1.0, abs(k))
