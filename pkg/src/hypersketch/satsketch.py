"""Sketching the value of every assignment of a CNF formula.

A formula on ``n`` variables becomes a hypergraph on ``2n + 1`` vertices:
one vertex per literal plus a special vertex F, and one hyperedge per clause
holding the clause's literal vertices and F. An assignment maps to the cut
with the true literals on one side and F with the false literals on the
other; a clause hyperedge crosses that cut exactly when the clause is
satisfied. Sparsifying the hypergraph therefore sketches every assignment's
value at once.

Vertex layout: ``x_i`` (1-based variable ``i``) is vertex ``2(i-1)``, its
negation ``2(i-1) + 1``, and F is vertex ``2n``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .hypercore import (
    Cut,
    Hyperedge,
    Hypergraph,
    InvalidArgumentError,
    ParseError,
    cut_weight,
    cut_weights,
    parse_hypergraph,
    serialize_hypergraph,
)
from .mincut import StrongConnectivityMap
from .sparsify import SparsifierReport, SparsifyParams, sparsify

__all__ = [
    "CnfFormula",
    "SatSketch",
    "assignment_masks",
    "assignment_to_cut",
    "cnf_to_hypergraph",
    "estimate_value",
    "exact_value",
    "exact_values",
    "literal_vertex",
    "load_sketch",
    "parse_dimacs",
    "random_cnf",
    "sketch_formula",
]


@dataclass(frozen=True)
class CnfFormula:
    """Clauses are tuples of nonzero DIMACS literals (``-3`` is ``not x3``)."""

    num_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        normalized = []
        for i, clause in enumerate(self.clauses):
            lits = tuple(dict.fromkeys(int(l) for l in clause))
            if not lits:
                raise InvalidArgumentError(f"clause {i} is empty")
            for lit in lits:
                if lit == 0 or abs(lit) > self.num_vars:
                    raise InvalidArgumentError(f"clause {i}: literal {lit} outside 1..{self.num_vars}")
                if -lit in lits:
                    raise InvalidArgumentError(f"clause {i} is tautological (contains {abs(lit)} and -{abs(lit)})")
            normalized.append(lits)
        object.__setattr__(self, "clauses", tuple(normalized))

    @property
    def m(self) -> int:
        return len(self.clauses)

    @property
    def r(self) -> int:
        return max((len(c) for c in self.clauses), default=0)


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = num_clauses = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    last_line = 0
    for no, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith("%"):
            break  # SATLIB end-of-file marker
        if not line or line.startswith("c"):
            continue
        last_line = no
        if line.startswith("p"):
            toks = line.split()
            if num_vars is not None:
                raise ParseError("duplicate problem line", no)
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("problem line must be 'p cnf <vars> <clauses>'", no)
            try:
                num_vars, num_clauses = int(toks[2]), int(toks[3])
            except ValueError:
                raise ParseError("problem line counts must be integers", no) from None
            continue
        if num_vars is None:
            raise ParseError("clause before 'p cnf' header", no)
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", no) from None
            if lit == 0:
                if not current:
                    raise ParseError("empty clause", no)
                try:
                    CnfFormula(num_vars, (tuple(current),))
                except InvalidArgumentError as exc:
                    raise ParseError(str(exc).replace("clause 0", "clause"), no) from None
                clauses.append(tuple(current))
                current = []
            elif abs(lit) > num_vars:
                raise ParseError(f"variable {abs(lit)} exceeds declared count {num_vars}", no)
            else:
                current.append(lit)
    if num_vars is None:
        raise ParseError("missing 'p cnf' header", 1)
    if current:
        raise ParseError("unterminated clause (missing 0)", last_line)
    if len(clauses) != num_clauses:
        raise ParseError(f"header declares {num_clauses} clauses, found {len(clauses)}", last_line)
    return CnfFormula(num_vars, tuple(clauses))


def literal_vertex(lit: int) -> int:
    return 2 * (abs(lit) - 1) + (0 if lit > 0 else 1)


def cnf_to_hypergraph(phi: CnfFormula) -> tuple[Hypergraph, dict[int, int], int]:
    """Clause hypergraph, literal -> vertex map, and the index of F."""
    f = 2 * phi.num_vars
    edges = tuple(Hyperedge(frozenset([*(literal_vertex(l) for l in c), f]), 1.0) for c in phi.clauses)
    mapping = {}
    for i in range(1, phi.num_vars + 1):
        mapping[i] = literal_vertex(i)
        mapping[-i] = literal_vertex(-i)
    return Hypergraph(f + 1, edges), mapping, f


def _check_assignment(num_vars: int, assignment: Sequence[bool]) -> None:
    if len(assignment) != num_vars:
        raise InvalidArgumentError(f"assignment has length {len(assignment)}, expected {num_vars}")


def assignment_to_cut(phi: CnfFormula | int, assignment: Sequence[bool]) -> Cut:
    """True literals on one side; F and the false literals on the other."""
    n = phi if isinstance(phi, int) else phi.num_vars
    _check_assignment(n, assignment)
    side = [False] * (2 * n + 1)
    for i, val in enumerate(assignment):
        side[2 * i + (0 if val else 1)] = True
    return Cut(tuple(side))


def assignment_masks(num_vars: int) -> np.ndarray:
    """Side masks of the cuts of all ``2**num_vars`` assignments (bit i of the index is variable i+1)."""
    idx = np.arange(1 << num_vars, dtype=np.int64)
    masks = np.zeros_like(idx)
    for i in range(num_vars):
        bit = (idx >> i) & 1
        masks |= np.where(bit == 1, 1 << (2 * i), 1 << (2 * i + 1))
    return masks


def exact_value(phi: CnfFormula, assignment: Sequence[bool]) -> int:
    """Number of clauses satisfied by ``assignment``."""
    _check_assignment(phi.num_vars, assignment)
    return sum(any(bool(assignment[abs(l) - 1]) == (l > 0) for l in c) for c in phi.clauses)


def exact_values(phi: CnfFormula) -> np.ndarray:
    """Satisfied-clause counts for all assignments, indexed as in :func:`assignment_masks`."""
    idx = np.arange(1 << phi.num_vars, dtype=np.int64)
    counts = np.zeros(idx.shape, dtype=np.int64)
    for clause in phi.clauses:
        sat = np.zeros(idx.shape, dtype=bool)
        for lit in clause:
            bit = ((idx >> (abs(lit) - 1)) & 1).astype(bool)
            sat |= bit if lit > 0 else ~bit
        counts += sat
    return counts


@dataclass(frozen=True)
class SatSketch:
    hypergraph: Hypergraph
    num_vars: int
    f_vertex: int
    epsilon: float
    literal_vertex: dict[int, int] = field(compare=False)
    report: SparsifierReport | None = field(default=None, compare=False)

    def header(self) -> dict:
        return {
            "num_vars": self.num_vars,
            "f_vertex": self.f_vertex,
            "epsilon": self.epsilon,
            "literal_vertex": {str(k): v for k, v in sorted(self.literal_vertex.items())},
        }

    def dumps(self) -> str:
        """Sketch file: one ``# {json header}`` line, then the hypergraph text format."""
        return "# " + json.dumps(self.header(), sort_keys=True) + "\n" + serialize_hypergraph(self.hypergraph)


def load_sketch(text: str) -> SatSketch:
    first, _, rest = text.partition("\n")
    if not first.startswith("#"):
        raise ParseError("sketch file must start with a '# {json}' header", 1)
    try:
        head = json.loads(first[1:])
        num_vars, f_vertex, eps = int(head["num_vars"]), int(head["f_vertex"]), float(head["epsilon"])
        mapping = {int(k): int(v) for k, v in head["literal_vertex"].items()}
    except (ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"bad sketch header: {exc}", 1) from None
    try:
        H = parse_hypergraph(rest)
    except ParseError as exc:
        raise ParseError(str(exc).split(": ", 1)[-1], None if exc.line is None else exc.line + 1) from None
    if H.n != 2 * num_vars + 1:
        raise ParseError("sketch hypergraph must have 2n+1 vertices", 2)
    return SatSketch(H, num_vars, f_vertex, eps, mapping)


def sketch_formula(
    phi: CnfFormula,
    epsilon: float,
    d: float = 1.0,
    seed: int = 0,
    *,
    strengths: StrongConnectivityMap | None = None,
) -> SatSketch:
    H, mapping, f = cnf_to_hypergraph(phi)
    sparse, report = sparsify(H, SparsifyParams(epsilon, d, seed), strengths=strengths)
    return SatSketch(sparse, phi.num_vars, f, epsilon, mapping, report)


def estimate_value(sketch: SatSketch, assignment: Sequence[bool]) -> float:
    return cut_weight(sketch.hypergraph, assignment_to_cut(sketch.num_vars, assignment))


def estimate_values(sketch: SatSketch) -> np.ndarray:
    """Sketched values of all assignments, indexed as in :func:`assignment_masks`."""
    return cut_weights(sketch.hypergraph, assignment_masks(sketch.num_vars))


def random_cnf(num_vars: int, num_clauses: int, r: int, rng: np.random.Generator, *, min_width: int | None = None) -> CnfFormula:
    """Random non-tautological CNF with clause widths in ``[min_width, r]`` (default exactly r)."""
    if not (1 <= r <= num_vars):
        raise InvalidArgumentError("need 1 <= r <= num_vars")
    lo = r if min_width is None else min_width
    clauses = []
    for _ in range(num_clauses):
        width = int(rng.integers(lo, r + 1))
        vars_ = rng.choice(num_vars, size=width, replace=False) + 1
        signs = rng.integers(0, 2, size=width) * 2 - 1
        clauses.append(tuple(int(v * s) for v, s in zip(vars_, signs)))
    return CnfFormula(num_vars, tuple(clauses))
