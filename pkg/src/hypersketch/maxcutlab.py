"""Max-Cut reduction gadgets from Boolean Hidden Hypermatching, and the two-party protocol.

Gadget vertex numbering (0-based) for an instance with ``n`` bits:

* ``u_a`` (a = 1..2n)      -> ``a - 1``
* ``v_a`` (a = 1..2n)      -> ``2n + a - 1``
* ``w_a`` (a = 1..2n/t)    -> ``4n + a - 1``

so bit ``i`` (0-based) owns the pairs ``u[2i], u[2i+1]`` and ``v[2i], v[2i+1]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .hypercore import (
    Hyperedge,
    Hypergraph,
    InvalidArgumentError,
    ResourceLimitError,
    components,
    cut_weights,
    induced_subhypergraph,
)

__all__ = [
    "BhhInstance",
    "GadgetGraph",
    "MAXCUT_BRUTE_LIMIT",
    "build_gadget",
    "cycle_lengths",
    "exact_max_cut",
    "gadget_expected_value",
    "gadget_ratio",
    "gen_bhh",
    "graph_from_edges",
    "threshold_t",
    "two_party_estimate",
    "two_party_values",
]

MAXCUT_BRUTE_LIMIT = 24


@dataclass(frozen=True)
class BhhInstance:
    """Alice holds ``x``; Bob holds the hypermatching ``M`` (0-based bit indices) and ``w``."""

    n: int
    t: int
    x: tuple[int, ...]
    M: tuple[tuple[int, ...], ...]
    w: tuple[int, ...]
    b: int

    def __post_init__(self):
        n, t = self.n, self.t
        if t < 2 or n <= 0 or n % (2 * t):
            raise InvalidArgumentError(f"need t >= 2 and n a positive multiple of 2t, got n={n}, t={t}")
        if len(self.x) != n or len(self.w) != n // t or len(self.M) != n // t:
            raise InvalidArgumentError("x, w, M have inconsistent lengths")
        flat = [i for edge in self.M for i in edge]
        if any(len(edge) != t for edge in self.M) or sorted(flat) != list(range(n)):
            raise InvalidArgumentError("M is not a perfect t-hypermatching on the bit indices")
        if any((self.parity(j) ^ self.w[j]) != self.b for j in range(n // t)):
            raise InvalidArgumentError("instance violates its promise")

    @property
    def k(self) -> int:
        return self.n // (2 * self.t)

    def parity(self, j: int) -> int:
        return int(sum(self.x[i] for i in self.M[j]) % 2)

    def mx(self) -> tuple[int, ...]:
        return tuple(self.parity(j) for j in range(len(self.M)))


def gen_bhh(k: int, t: int, b: int, rng: np.random.Generator) -> BhhInstance:
    """Random instance with promise bit ``b``; each hyperedge lists its bits in ascending order."""
    if k < 1 or t < 2 or b not in (0, 1):
        raise InvalidArgumentError("need k >= 1, t >= 2, b in {0, 1}")
    n = 2 * k * t
    x = tuple(int(v) for v in rng.integers(0, 2, size=n))
    perm = rng.permutation(n)
    M = tuple(tuple(sorted(int(i) for i in perm[j * t:(j + 1) * t])) for j in range(n // t))
    w = tuple((sum(x[i] for i in edge) % 2) ^ b for edge in M)
    return BhhInstance(n, t, x, M, w, b)


@dataclass(frozen=True)
class GadgetGraph:
    graph: Hypergraph
    owner: tuple[str, ...]
    labels: tuple[str, ...]

    def edges_of(self, who: str) -> list[tuple[int, int]]:
        return [tuple(sorted(e.endpoints)) for e, o in zip(self.graph.edges, self.owner) if o == who]

    def to_dict(self) -> dict:
        return {
            "n": self.graph.n,
            "edges": [
                {"u": a, "v": b, "owner": o}
                for (a, b), o in zip((tuple(sorted(e.endpoints)) for e in self.graph.edges), self.owner)
            ],
            "labels": list(self.labels),
        }


def build_gadget(inst: BhhInstance) -> GadgetGraph:
    """The reduction graph: Alice's parallel/cross pairs per bit, Bob's chains and closing edges.

    The chain of hyperedge ``M_j`` ends with ``(u_{2 i_t}, w_{2j})`` and
    ``(u_{2 i_t - 1}, w_{2j - 1})``, which is what makes every vertex have
    degree exactly two.
    """
    if not isinstance(inst, BhhInstance):
        raise InvalidArgumentError("expected a BhhInstance")
    n, t = inst.n, inst.t
    v0, w0 = 2 * n, 4 * n
    edges: list[tuple[int, int]] = []
    owner: list[str] = []

    def add(a: int, b: int, who: str) -> None:
        edges.append((a, b))
        owner.append(who)

    for i, bit in enumerate(inst.x):
        if bit == 0:
            add(2 * i, v0 + 2 * i, "A")
            add(2 * i + 1, v0 + 2 * i + 1, "A")
        else:
            add(2 * i, v0 + 2 * i + 1, "A")
            add(2 * i + 1, v0 + 2 * i, "A")
    for j, edge in enumerate(inst.M):
        for a, b in zip(edge, edge[1:]):
            add(2 * a, v0 + 2 * b, "B")
            add(2 * a + 1, v0 + 2 * b + 1, "B")
        last, first = edge[-1], edge[0]
        add(2 * last + 1, w0 + 2 * j + 1, "B")
        add(2 * last, w0 + 2 * j, "B")
        if inst.w[j] == 0:
            add(w0 + 2 * j + 1, v0 + 2 * first + 1, "B")
            add(w0 + 2 * j, v0 + 2 * first, "B")
        else:
            add(w0 + 2 * j + 1, v0 + 2 * first, "B")
            add(w0 + 2 * j, v0 + 2 * first + 1, "B")
    size = 4 * n + 2 * n // t
    labels = (
        [f"u{a + 1}" for a in range(2 * n)]
        + [f"v{a + 1}" for a in range(2 * n)]
        + [f"w{a + 1}" for a in range(2 * n // t)]
    )
    graph = Hypergraph(size, tuple(Hyperedge(frozenset(e), 1.0) for e in edges))
    return GadgetGraph(graph, tuple(owner), tuple(labels))


def graph_from_edges(n: int, edges: Iterable[Sequence[float]]) -> Hypergraph:
    """2-uniform multigraph from ``(u, v)`` or ``(u, v, weight)`` tuples."""
    out = []
    for e in edges:
        a, b = int(e[0]), int(e[1])
        out.append(Hyperedge(frozenset((a, b)), float(e[2]) if len(e) > 2 else 1.0))
    return Hypergraph(n, tuple(out))


def _degrees(G: Hypergraph) -> list[int]:
    deg = [0] * G.n
    for e in G.edges:
        if len(e) == 2:
            for x in e.endpoints:
                deg[x] += 1
    return deg


def cycle_lengths(G: Hypergraph) -> list[int]:
    """Sorted component sizes of a 2-regular multigraph (each component is a cycle)."""
    if G.rank > 2:
        raise InvalidArgumentError("expected a graph (cardinality <= 2)")
    if any(d != 2 for d in _degrees(G)):
        raise InvalidArgumentError("graph is not 2-regular")
    return sorted(len(c) for c in components(G))


def exact_max_cut(G: Hypergraph) -> float:
    """Exact maximum cut, summed over connected components.

    Cycle components use the closed form (all edges for even length, all
    but the lightest for odd length); other components are brute-forced up
    to ``MAXCUT_BRUTE_LIMIT`` vertices.
    """
    if G.rank > 2:
        raise InvalidArgumentError("exact max cut expects a 2-uniform graph")
    deg = _degrees(G)
    total = 0.0
    for comp in components(G):
        if len(comp) < 2:
            continue
        members = set(comp)
        ws = [e.weight for e in G.edges if len(e) == 2 and e.endpoints <= members]
        if all(deg[x] == 2 for x in comp) and len(ws) == len(comp):
            total += math.fsum(ws) - (min(ws) if len(comp) % 2 else 0.0)
            continue
        if len(comp) > MAXCUT_BRUTE_LIMIT:
            raise ResourceLimitError(f"component of {len(comp)} vertices exceeds brute-force limit")
        total += _brute_max_cut(induced_subhypergraph(G, comp)[0])
    return total


def _brute_max_cut(G: Hypergraph, chunk: int = 1 << 20) -> float:
    best = 0.0
    count = 1 << (G.n - 1)
    for start in range(0, count, chunk):
        masks = np.arange(start, min(count, start + chunk), dtype=np.int64) << 1
        best = max(best, float(cut_weights(G, masks).max()))
    return best


def gadget_expected_value(n: int, t: int, b: int) -> int:
    """``4n`` for a 0-instance, ``4n + 2n/t`` for a 1-instance."""
    if t < 2 or n <= 0 or n % t or n % (2 * t):
        raise InvalidArgumentError(f"need n = 2kt, got n={n}, t={t}")
    if b not in (0, 1):
        raise InvalidArgumentError("b must be 0 or 1")
    return 4 * n + (2 * n // t if b else 0)


def gadget_ratio(t: int) -> Fraction:
    """Max-cut ratio between 0- and 1-instances, ``2t / (2t + 1)``."""
    return Fraction(gadget_expected_value(2 * t, t, 0), gadget_expected_value(2 * t, t, 1))


def threshold_t(epsilon: Fraction | float | str) -> int:
    """``floor(1/(2 eps) - 1/2)``, computed exactly."""
    eps = Fraction(epsilon) if not isinstance(epsilon, float) else Fraction(str(epsilon))
    if not (0 < eps < 1):
        raise InvalidArgumentError("epsilon must lie in (0, 1)")
    return math.floor(1 / (2 * eps) - Fraction(1, 2))


def _as_graph(edges, n: int) -> Hypergraph:
    return edges if isinstance(edges, Hypergraph) else graph_from_edges(n, edges)


def two_party_values(E_A, E_B, n: int) -> dict[str, float]:
    """Alice's and Bob's max cuts, the protocol estimate, and the true max cut of the union."""
    if n > MAXCUT_BRUTE_LIMIT:
        raise ResourceLimitError(f"two-party check limited to n <= {MAXCUT_BRUTE_LIMIT}")
    GA, GB = _as_graph(E_A, n), _as_graph(E_B, n)
    wa, wb = exact_max_cut(GA), exact_max_cut(GB)
    true = exact_max_cut(Hypergraph(n, GA.edges + GB.edges))
    return {"wA": wa, "wB": wb, "estimate": 2 * (wa + wb) / 3, "true_maxcut": true}


def two_party_estimate(E_A, E_B, n: int) -> float:
    """Alice sends her max-cut value; Bob outputs two thirds of the sum with his own."""
    if n > MAXCUT_BRUTE_LIMIT:
        raise ResourceLimitError(f"two-party estimate limited to n <= {MAXCUT_BRUTE_LIMIT}")
    wa = exact_max_cut(_as_graph(E_A, n))
    wb = exact_max_cut(_as_graph(E_B, n))
    return 2 * (wa + wb) / 3
