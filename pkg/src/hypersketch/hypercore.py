"""Weighted hypergraphs, cuts, and the exhaustive cut oracle.

Vertices are the integers ``0..n-1``. A hyperedge is a non-empty vertex set
with a positive weight; a cut is a bipartition of the vertices, and its
weight is the total weight of the hyperedges that have endpoints on both
sides. Hyperedges of cardinality one are kept in the model but never cross a
cut.

Internally vertex sets are encoded as integer bitmasks (bit ``i`` set means
vertex ``i`` is a member), which keeps exhaustive enumeration cheap.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "CUT_RTOL",
    "ENUMERATION_LIMIT",
    "Cut",
    "Hyperedge",
    "Hypergraph",
    "InvalidArgumentError",
    "ParseError",
    "ResourceLimitError",
    "components",
    "cut_weight",
    "cut_weights",
    "enumerate_cuts_below",
    "induced_subhypergraph",
    "parse_hypergraph",
    "random_hypergraph",
    "serialize_hypergraph",
    "weights_close",
]

# relative tolerance for comparing cut weights computed by different routes
CUT_RTOL = 1e-9
# exhaustive enumeration visits 2**(n-1) - 1 bipartitions
ENUMERATION_LIMIT = 26


class InvalidArgumentError(ValueError):
    pass


class ResourceLimitError(RuntimeError):
    """An oracle was asked to enumerate beyond its size guard."""


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def weights_close(a: float, b: float, rtol: float = CUT_RTOL) -> bool:
    return math.isclose(a, b, rel_tol=rtol, abs_tol=rtol)


@dataclass(frozen=True)
class Hyperedge:
    endpoints: frozenset[int]
    weight: float = 1.0

    def __post_init__(self):
        if not isinstance(self.endpoints, frozenset):
            object.__setattr__(self, "endpoints", frozenset(self.endpoints))
        if not self.endpoints:
            raise InvalidArgumentError("hyperedge must have at least one endpoint")
        w = float(self.weight)
        if not (math.isfinite(w) and w > 0):
            raise InvalidArgumentError(f"hyperedge weight must be positive and finite, got {self.weight!r}")
        object.__setattr__(self, "weight", w)

    def __len__(self) -> int:
        return len(self.endpoints)

    @property
    def mask(self) -> int:
        m = 0
        for v in self.endpoints:
            m |= 1 << v
        return m


@dataclass(frozen=True)
class Hypergraph:
    """An immutable weighted hypergraph on vertices ``0..n-1``."""

    n: int
    edges: tuple[Hyperedge, ...] = ()

    def __post_init__(self):
        if self.n < 0:
            raise InvalidArgumentError("vertex count must be nonnegative")
        edges = tuple(e if isinstance(e, Hyperedge) else Hyperedge(*e) for e in self.edges)
        for e in edges:
            for v in e.endpoints:
                if not (0 <= v < self.n):
                    raise InvalidArgumentError(f"endpoint {v} outside [0, {self.n})")
        object.__setattr__(self, "edges", edges)

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[Iterable[int], float] | Iterable[int]]) -> Hypergraph:
        """Build from ``(endpoints, weight)`` pairs or bare endpoint tuples (unit weight)."""
        out = []
        for item in edges:
            if isinstance(item, Hyperedge):
                out.append(item)
            elif len(item) == 2 and not isinstance(item[0], (int, np.integer)):
                out.append(Hyperedge(frozenset(int(v) for v in item[0]), item[1]))
            else:
                out.append(Hyperedge(frozenset(int(v) for v in item), 1.0))
        return cls(n, tuple(out))

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def rank(self) -> int:
        """Largest hyperedge cardinality (the ``r`` of an r-uniform hypergraph)."""
        return max((len(e) for e in self.edges), default=0)

    @property
    def total_weight(self) -> float:
        return math.fsum(e.weight for e in self.edges)

    @cached_property
    def edge_masks(self) -> tuple[int, ...]:
        return tuple(e.mask for e in self.edges)

    @cached_property
    def weight_array(self) -> np.ndarray:
        return np.array([e.weight for e in self.edges], dtype=float)

    def with_edges(self, edges: Iterable[Hyperedge]) -> Hypergraph:
        return Hypergraph(self.n, tuple(edges))


@dataclass(frozen=True, eq=False)
class Cut:
    """A bipartition of the vertex set; ``side[v]`` is True when ``v`` is in S.

    Two cuts compare equal when they describe the same bipartition, so a
    cut and its complement are the same cut.
    """

    side: tuple[bool, ...]
    _mask: int = field(init=False, repr=False)

    def __post_init__(self):
        side = tuple(bool(s) for s in self.side)
        object.__setattr__(self, "side", side)
        mask = 0
        for i, s in enumerate(side):
            if s:
                mask |= 1 << i
        object.__setattr__(self, "_mask", mask)

    @classmethod
    def from_mask(cls, n: int, mask: int) -> Cut:
        return cls(tuple(bool((int(mask) >> i) & 1) for i in range(n)))

    @classmethod
    def from_set(cls, n: int, members: Iterable[int]) -> Cut:
        members = set(members)
        if any(not (0 <= v < n) for v in members):
            raise InvalidArgumentError("cut member outside vertex range")
        return cls(tuple(i in members for i in range(n)))

    @property
    def n(self) -> int:
        return len(self.side)

    @property
    def mask(self) -> int:
        return self._mask

    @property
    def canonical_mask(self) -> int:
        """Mask of the side that does not contain vertex 0."""
        if self._mask & 1:
            return ((1 << self.n) - 1) ^ self._mask
        return self._mask

    def canonical(self) -> Cut:
        return Cut.from_mask(self.n, self.canonical_mask)

    def complement(self) -> Cut:
        return Cut(tuple(not s for s in self.side))

    @property
    def members(self) -> frozenset[int]:
        return frozenset(i for i, s in enumerate(self.side) if s)

    @property
    def is_trivial(self) -> bool:
        return self._mask == 0 or self._mask == (1 << self.n) - 1

    def bitstring(self) -> str:
        return "".join("1" if s else "0" for s in self.side)

    def __eq__(self, other):
        if not isinstance(other, Cut):
            return NotImplemented
        return self.n == other.n and self.canonical_mask == other.canonical_mask

    def __hash__(self):
        return hash((self.n, self.canonical_mask))

    def __repr__(self):
        s = sorted(self.canonical().members)
        t = [i for i in range(self.n) if i not in s]
        return f"Cut({t}|{s})"


def _check_cut(H: Hypergraph, C: Cut) -> None:
    if C.n != H.n:
        raise InvalidArgumentError(f"cut has length {C.n} but hypergraph has {H.n} vertices")


def cut_weight(H: Hypergraph, C: Cut) -> float:
    _check_cut(H, C)
    s = C.mask
    total = 0.0
    for em, e in zip(H.edge_masks, H.edges):
        inter = em & s
        if inter and inter != em:
            total += e.weight
    return total


def _merged_masks(H: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    # parallel edges cross exactly the same cuts, so their weights can be pooled
    pooled: dict[int, float] = {}
    for em, e in zip(H.edge_masks, H.edges):
        if em & (em - 1):  # cardinality >= 2
            pooled[em] = pooled.get(em, 0.0) + e.weight
    masks = np.fromiter(pooled.keys(), dtype=np.int64, count=len(pooled))
    weights = np.fromiter(pooled.values(), dtype=float, count=len(pooled))
    return masks, weights


def cut_weights(H: Hypergraph, masks: np.ndarray | Sequence[int]) -> np.ndarray:
    """Vectorised :func:`cut_weight` over an array of side bitmasks (n <= 62)."""
    if H.n > 62:
        raise ResourceLimitError("vectorised cut evaluation needs n <= 62")
    masks = np.asarray(masks, dtype=np.int64)
    out = np.zeros(masks.shape, dtype=float)
    emasks, ew = _merged_masks(H)
    for em, w in zip(emasks, ew):
        inter = masks & em
        out += w * ((inter != 0) & (inter != em))
    return out


def _lex_key(masks: np.ndarray, n: int) -> np.ndarray:
    # side vectors compared lexicographically: vertex 1 is the most significant position
    key = np.zeros(masks.shape, dtype=np.int64)
    for i in range(n):
        key |= ((masks >> i) & 1) << (n - 1 - i)
    return key


def enumerate_cuts_below(H: Hypergraph, bound: float, *, chunk: int = 1 << 20) -> list[tuple[Cut, float]]:
    """All nontrivial cuts of weight at most ``bound``, lightest first.

    Each bipartition appears once, in canonical form (vertex 0 on the false
    side). Ties are ordered lexicographically by side vector.
    """
    if H.n > ENUMERATION_LIMIT:
        raise ResourceLimitError(f"exhaustive enumeration limited to n <= {ENUMERATION_LIMIT}, got {H.n}")
    if bound < 0:
        raise InvalidArgumentError("bound must be nonnegative")
    if H.n < 2:
        return []
    limit = bound + CUT_RTOL * max(1.0, abs(bound)) if math.isfinite(bound) else math.inf
    total = 1 << (H.n - 1)
    kept_masks, kept_weights = [], []
    for start in range(1, total, chunk):
        stop = min(total, start + chunk)
        masks = np.arange(start, stop, dtype=np.int64) << 1
        w = cut_weights(H, masks)
        sel = w <= limit
        kept_masks.append(masks[sel])
        kept_weights.append(w[sel])
    masks = np.concatenate(kept_masks)
    weights = np.concatenate(kept_weights)
    order = np.lexsort((_lex_key(masks, H.n), weights))
    return [(Cut.from_mask(H.n, int(masks[i])), float(weights[i])) for i in order]


def induced_subhypergraph(H: Hypergraph, U: Iterable[int]) -> tuple[Hypergraph, tuple[int, ...]]:
    """Vertex-induced subhypergraph on ``U``.

    Returns the subhypergraph (vertices renumbered in increasing order) and
    the tuple mapping each new index back to its original vertex.
    """
    verts = tuple(sorted(set(U)))
    for v in verts:
        if not (0 <= v < H.n):
            raise InvalidArgumentError(f"vertex {v} outside [0, {H.n})")
    index = {v: i for i, v in enumerate(verts)}
    edges = tuple(
        Hyperedge(frozenset(index[v] for v in e.endpoints), e.weight)
        for e in H.edges
        if e.endpoints <= index.keys()
    )
    return Hypergraph(len(verts), edges), verts


def components(H: Hypergraph) -> list[list[int]]:
    """Connected components (via edges of cardinality >= 2), each sorted, ordered by smallest vertex."""
    parent = list(range(H.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in H.edges:
        it = iter(e.endpoints)
        root = find(next(it))
        for v in it:
            rv = find(v)
            if rv != root:
                parent[rv] = root
    groups: dict[int, list[int]] = {}
    for v in range(H.n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


def serialize_hypergraph(H: Hypergraph) -> str:
    lines = [f"{H.n} {H.m}"]
    for e in H.edges:
        verts = " ".join(str(v) for v in sorted(e.endpoints))
        lines.append(f"{e.weight!r} {len(e)} {verts}")
    return "\n".join(lines) + "\n"


def parse_hypergraph(text: str) -> Hypergraph:
    """Parse the ``n m`` / ``w k v1 .. vk`` text format."""
    rows = [(i + 1, line.split()) for i, line in enumerate(text.splitlines())]
    rows = [(no, toks) for no, toks in rows if toks]
    if not rows:
        raise ParseError("empty input", 1)
    no, head = rows[0]
    if len(head) != 2:
        raise ParseError("header must be 'n m'", no)
    try:
        n, m = int(head[0]), int(head[1])
    except ValueError:
        raise ParseError("header must contain two integers", no) from None
    if n < 0 or m < 0:
        raise ParseError("negative count in header", no)
    body = rows[1:]
    if len(body) != m:
        raise ParseError(f"expected {m} edge lines, found {len(body)}", body[-1][0] if body else no)
    edges = []
    for no, toks in body:
        try:
            w = float(toks[0])
            k = int(toks[1])
            verts = [int(t) for t in toks[2:]]
        except (ValueError, IndexError):
            raise ParseError("malformed edge line", no) from None
        if not (math.isfinite(w) and w > 0):
            raise ParseError(f"weight must be positive and finite, got {toks[0]}", no)
        if k < 1 or len(verts) != k:
            raise ParseError(f"edge declares {k} endpoints but lists {len(verts)}", no)
        for v in verts:
            if not (0 <= v < n):
                raise ParseError(f"endpoint {v} out of range for n={n}", no)
        edges.append(Hyperedge(frozenset(verts), w))
    return Hypergraph(n, tuple(edges))


def random_hypergraph(
    n: int,
    m: int,
    r: int,
    rng: np.random.Generator,
    *,
    min_size: int | None = None,
    weights: Sequence[float] | None = None,
    connected: bool = False,
) -> Hypergraph:
    """Random hypergraph with ``m`` edges of cardinality in ``[min_size, r]``.

    ``min_size`` defaults to ``r`` (exactly r-uniform). ``weights`` is a pool
    drawn from uniformly; unit weights by default. With ``connected=True`` a
    random spanning chain of edges is laid down first, so ``m`` must be at
    least ``ceil((n-1)/(r-1))``.
    """
    if not (2 <= r <= n):
        raise InvalidArgumentError("need 2 <= r <= n")
    lo = r if min_size is None else min_size
    pool = [1.0] if weights is None else list(weights)
    edges = []
    if connected:
        perm = rng.permutation(n)
        covered = 1
        while covered < n:
            size = min(r, n - covered + 1)
            anchor = int(perm[rng.integers(0, covered)])
            fresh = [int(v) for v in perm[covered:covered + size - 1]]
            edges.append(Hyperedge(frozenset([anchor, *fresh]), pool[rng.integers(0, len(pool))]))
            covered += size - 1
        if len(edges) > m:
            raise InvalidArgumentError(f"m={m} too small for a connected hypergraph")
    while len(edges) < m:
        size = int(rng.integers(lo, r + 1))
        verts = rng.choice(n, size=size, replace=False)
        edges.append(Hyperedge(frozenset(int(v) for v in verts), pool[rng.integers(0, len(pool))]))
    order = rng.permutation(len(edges))
    return Hypergraph(n, tuple(edges[i] for i in order))
