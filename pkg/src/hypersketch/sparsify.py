"""Importance-sampling cut sparsifiers for hypergraphs.

Each hyperedge is kept independently with probability inversely proportional
to its strong connectivity and reweighted by ``1/p`` when kept, so every cut
keeps its weight in expectation. For weighted inputs the sampling rate of an
edge uses ``k_e / w_e`` in place of ``k_e`` and a kept edge gets
``w_e / p_e``; with unit weights this is the plain rule.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Iterator

import numpy as np

from .hypercore import (
    Hyperedge,
    Hypergraph,
    InvalidArgumentError,
    ResourceLimitError,
    cut_weights,
)
from .mincut import StrongConnectivityMap, strong_connectivities

__all__ = [
    "SparsifierReport",
    "SparsifyParams",
    "StreamError",
    "edge_probabilities",
    "expected_size_bound",
    "max_relative_error",
    "rho",
    "sampling_probability",
    "sparsify",
    "streaming_sparsify",
    "verify_sparsifier",
]

log = logging.getLogger(__name__)

VERIFY_LIMIT = 20
# log-coefficient offset: (d + 2) ln n in the theorem statement; 3 is the alternative constant
DEFAULT_LOG_OFFSET = 2.0


@dataclass(frozen=True)
class SparsifyParams:
    epsilon: float
    d: float = 1.0
    seed: int = 0
    log_offset: float = DEFAULT_LOG_OFFSET

    def __post_init__(self):
        if not (0 < self.epsilon < 1):
            raise InvalidArgumentError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if not self.d >= 1:
            raise InvalidArgumentError(f"d must be >= 1, got {self.d}")


@dataclass(frozen=True)
class SparsifierReport:
    edge_count: int
    max_relative_cut_error: float | None = None
    expected_edge_count: float | None = None
    epsilon: float | None = None

    @property
    def within_epsilon(self) -> bool | None:
        if self.max_relative_cut_error is None or self.epsilon is None:
            return None
        return self.max_relative_cut_error <= self.epsilon

    def to_dict(self) -> dict:
        err = self.max_relative_cut_error
        return {
            "edge_count": self.edge_count,
            "max_relative_cut_error": err if err is None or math.isfinite(err) else "inf",
            "expected_edge_count": self.expected_edge_count,
            "epsilon": self.epsilon,
        }


def _check(epsilon: float, r: float, d: float, n: float) -> None:
    if not (0 < epsilon <= 1):
        raise InvalidArgumentError("epsilon must lie in (0, 1]")
    if r < 2 or d < 1 or n < 2:
        raise InvalidArgumentError("need r >= 2, d >= 1, n >= 2")


def rho(epsilon: float, r: float, d: float, n: float, *, log_offset: float = DEFAULT_LOG_OFFSET) -> float:
    """Expected-cut-weight threshold ``3 / eps^2 * (r + (d + 2) ln n)``."""
    _check(epsilon, r, d, n)
    return 3.0 / epsilon**2 * (r + (d + log_offset) * math.log(n))


def sampling_probability(
    k_e: float, epsilon: float, d: float, n: float, r: float, *, log_offset: float = DEFAULT_LOG_OFFSET
) -> float:
    """``min(1, 3 ((d + 2) ln n + r) / (k_e eps^2))``."""
    if not k_e > 0:
        raise InvalidArgumentError(f"strong connectivity must be positive, got {k_e}")
    return min(1.0, rho(epsilon, r, d, n, log_offset=log_offset) / k_e)


def expected_size_bound(n: int, r: int, epsilon: float, d: float = 1.0) -> float:
    """``3 (n - 1) (r + (d + 2) ln n) / eps^2``: the size budget checked against observed sparsifiers."""
    return 3.0 * (n - 1) * (r + (d + 2) * math.log(n)) / epsilon**2


def edge_probabilities(H: Hypergraph, strengths: StrongConnectivityMap, params: SparsifyParams) -> np.ndarray:
    """Per-edge inclusion probabilities, using ``k_e / w_e`` as the effective strength."""
    r = max(H.rank, 2)
    n = max(H.n, 2)
    return np.array(
        [
            sampling_probability(k / e.weight, params.epsilon, params.d, n, r, log_offset=params.log_offset)
            for e, k in zip(H.edges, strengths)
        ],
        dtype=float,
    )


def sparsify(
    H: Hypergraph, params: SparsifyParams, *, strengths: StrongConnectivityMap | None = None
) -> tuple[Hypergraph, SparsifierReport]:
    """Sample a reweighted subhypergraph whose cuts approximate those of ``H``.

    Edge ``i`` is kept when the ``i``-th uniform of a Philox stream keyed by
    ``params.seed`` falls below its probability, so the outcome for an edge
    depends only on the seed and its index. Pass precomputed ``strengths`` to
    skip the decomposition when sparsifying the same hypergraph repeatedly.
    """
    if H.m == 0:
        raise InvalidArgumentError("cannot sparsify a hypergraph without edges")
    if strengths is None:
        strengths = strong_connectivities(H)
    elif len(strengths) != H.m:
        raise InvalidArgumentError("strength map does not match the edge list")
    p = edge_probabilities(H, strengths, params)
    u = np.random.Generator(np.random.Philox(key=params.seed)).random(H.m)
    keep = u < p
    edges = tuple(
        Hyperedge(e.endpoints, e.weight / p_e) for e, p_e, k in zip(H.edges, p.tolist(), keep.tolist()) if k
    )
    report = SparsifierReport(edge_count=len(edges), expected_edge_count=float(p.sum()), epsilon=params.epsilon)
    return Hypergraph(H.n, edges), report


def verify_sparsifier(H: Hypergraph, H_eps: Hypergraph, epsilon: float | None = None) -> SparsifierReport:
    """Largest relative cut error of ``H_eps`` against ``H`` over all nontrivial cuts.

    A cut that is empty in ``H`` but not in ``H_eps`` counts as infinite error.
    """
    if H.n != H_eps.n:
        raise InvalidArgumentError("sparsifier must share the vertex set")
    if H.n > VERIFY_LIMIT:
        raise ResourceLimitError(f"exhaustive verification limited to n <= {VERIFY_LIMIT}")
    if H.n < 2:
        return SparsifierReport(H_eps.m, 0.0, epsilon=epsilon)
    masks = np.arange(1, 1 << (H.n - 1), dtype=np.int64) << 1
    return SparsifierReport(H_eps.m, max_relative_error(H, H_eps, masks), epsilon=epsilon)


def max_relative_error(H: Hypergraph, H_eps: Hypergraph, masks: np.ndarray) -> float:
    """Largest ``|w'(C)/w(C) - 1|`` over the cuts given as side masks."""
    w = cut_weights(H, masks)
    w2 = cut_weights(H_eps, masks)
    zero = w == 0
    if np.any(zero & (w2 != 0)):
        return math.inf
    if zero.all():
        return 0.0
    return float(np.max(np.abs(w2[~zero] / w[~zero] - 1.0)))


class StreamError(ValueError):
    pass


def _plan_levels(n: int, r: int, epsilon: float, d: float, expected_edges: int | None) -> int:
    # smallest L with ceil(log2(m / target(eps / 2L))) <= L
    if expected_edges is None:
        return 4
    for levels in range(1, 64):
        eps_level = epsilon / (2 * levels)
        target = 8 * n * (r + (d + 2) * math.log(n)) / eps_level**2
        if expected_edges <= target * 2**levels:
            return levels
    return 64


def streaming_sparsify(
    stream: Iterable[Hyperedge | tuple],
    n: int,
    params: SparsifyParams,
    *,
    r: int | None = None,
    expected_edges: int | None = None,
    levels: int | None = None,
    block_size: int | None = None,
) -> Hypergraph:
    """One-pass merge-and-reduce sparsifier over an insert-only edge stream.

    Edges are buffered into blocks of ``target`` edges. Two blocks at the same
    level are merged and re-sparsified with ``eps' = eps / (2 L)`` into one
    block a level up; blocks at level ``L`` are never sampled again, so every
    edge goes through at most ``L`` rounds and the compounded error stays
    within ``1 +- eps``. ``L`` is planned from ``expected_edges`` (4 when
    unknown). ``r`` bounds the edge cardinality (defaults to ``n``);
    ``block_size`` overrides ``target``.
    """
    if n < 2:
        raise InvalidArgumentError("need n >= 2")
    r = n if r is None else r
    if levels is None:
        levels = _plan_levels(n, max(r, 2), params.epsilon, params.d, expected_edges)
    eps_level = params.epsilon / (2 * levels)
    target = math.ceil(8 * n * (max(r, 2) + (params.d + 2) * math.log(n)) / eps_level**2)
    if block_size is not None:
        target = block_size
    level_params = dict(d=params.d, log_offset=params.log_offset)
    seeds = np.random.SeedSequence(params.seed)
    merges = 0

    stack: list[tuple[int, list[Hyperedge]]] = []
    buffer: list[Hyperedge] = []

    def push(block: list[Hyperedge]) -> None:
        nonlocal merges
        level = 0
        while stack and stack[-1][0] == level and level < levels:
            _, other = stack.pop()
            merged = Hypergraph(n, tuple(other + block))
            seed = int(seeds.spawn(1)[0].generate_state(1)[0])
            sparse, _ = sparsify(merged, SparsifyParams(eps_level, seed=seed, **level_params))
            block = list(sparse.edges)
            level += 1
            merges += 1
        stack.append((level, block))

    for edge in _validated(stream, n, r):
        buffer.append(edge)
        if len(buffer) >= target:
            push(buffer)
            buffer = []
    edges = [e for _, block in stack for e in block] + buffer
    if merges:
        log.info("stream sparsifier: %d merges, %d levels, eps'=%.4g", merges, levels, eps_level)
    return Hypergraph(n, tuple(edges))


def _validated(stream: Iterable, n: int, r: int) -> Iterator[Hyperedge]:
    for pos, item in enumerate(stream):
        try:
            edge = item if isinstance(item, Hyperedge) else Hyperedge(frozenset(item[0]), item[1])
        except (InvalidArgumentError, TypeError, IndexError) as exc:
            raise StreamError(f"stream item {pos}: {exc}") from None
        if any(not (0 <= v < n) for v in edge.endpoints):
            raise StreamError(f"stream item {pos}: endpoint outside [0, {n})")
        if len(edge) > r:
            raise StreamError(f"stream item {pos}: cardinality {len(edge)} exceeds r={r}")
        yield edge
