"""Core types and file format for fundamental graphs of periodic lattices.

A periodic graph is stored through its fundamental graph: a finite
multigraph on vertex classes 0..nu-1 whose oriented edges carry integer
index vectors in Z^d recording how the edge wraps around the period
lattice.  Loops and parallel edges are allowed.  Each stored edge
represents an orientation; the reversed edge carries the negated index.

Classes:
    IndexVector: immutable integer vector with exact arithmetic.
    Edge: oriented edge (tail, head, index).
    FundamentalGraph: the fundamental graph with an optional potential.
    ValidationReport: result of validate().
    PgraphError: domain error raised by every operation in the package.

Functions:
    parse_graph / serialize_graph: PGRAPH v1 text format.
    index_from_positions: recover index vectors from a geometric embedding.
    validate: connectivity, Betti number and flux-lattice checks.
    structurally_equal: equality up to re-orienting stored edges.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Optional, Sequence

import numpy as np


class PgraphError(Exception):
    """Domain error: invalid input data or violated precondition."""


class IndexVector(tuple):
    """Integer vector in Z^d with exact (arbitrary precision) arithmetic.

    Behaves as a tuple of ints; addition and subtraction are componentwise
    (not tuple concatenation).
    """

    def __new__(cls, entries: Iterable[int]) -> "IndexVector":
        values = []
        for x in entries:
            if isinstance(x, bool) or not isinstance(x, (int, np.integer)):
                raise PgraphError(f"index entries must be integers, got {x!r}")
            values.append(int(x))
        return super().__new__(cls, values)

    @classmethod
    def zero(cls, d: int) -> "IndexVector":
        return cls([0] * d)

    def __add__(self, other: "IndexVector") -> "IndexVector":
        return IndexVector(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other: "IndexVector") -> "IndexVector":
        return IndexVector(a - b for a, b in zip(self, other, strict=True))

    def __neg__(self) -> "IndexVector":
        return IndexVector(-a for a in self)

    def dot(self, theta: Sequence[float]) -> float:
        """Euclidean pairing <self, theta> with a real vector."""
        if len(theta) != len(self):
            raise PgraphError("dimension mismatch in index pairing")
        return float(sum(a * t for a, t in zip(self, theta)))

    @property
    def is_zero(self) -> bool:
        return all(a == 0 for a in self)


class Edge(NamedTuple):
    """Oriented edge of a fundamental graph.

    The stored orientation is tail -> head; the implied reverse edge has
    index -index.  A loop has tail == head.
    """

    tail: int
    head: int
    index: IndexVector

    def reversed(self) -> "Edge":
        return Edge(self.head, self.tail, -self.index)


@dataclass(frozen=True)
class FundamentalGraph:
    """Fundamental graph of a periodic graph.

    Attributes:
        d: dimension of the period lattice (>= 1).
        num_vertices: number of vertex classes nu (>= 1).
        edges: stored oriented edges, in canonical order.  The canonical
            order is the file line order and is what every report and
            deterministic algorithm in the package refers to.
        potential: real potential value per vertex class (defaults to 0).
    """

    d: int
    num_vertices: int
    edges: tuple[Edge, ...]
    potential: tuple[float, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.d, int) or self.d < 1:
            raise PgraphError(f"dimension must be a positive integer, got {self.d!r}")
        if not isinstance(self.num_vertices, int) or self.num_vertices < 1:
            raise PgraphError(f"vertex count must be >= 1, got {self.num_vertices!r}")
        object.__setattr__(self, "edges", tuple(self.edges))
        for i, e in enumerate(self.edges):
            if not (0 <= e.tail < self.num_vertices and 0 <= e.head < self.num_vertices):
                raise PgraphError(f"edge {i}: endpoint out of range")
            if not isinstance(e.index, IndexVector):
                object.__setattr__(
                    self,
                    "edges",
                    self.edges[:i] + (Edge(e.tail, e.head, IndexVector(e.index)),) + self.edges[i + 1 :],
                )
            if len(self.edges[i].index) != self.d:
                raise PgraphError(f"edge {i}: index has {len(self.edges[i].index)} entries, expected {self.d}")
        if not self.potential:
            object.__setattr__(self, "potential", (0.0,) * self.num_vertices)
        else:
            q = tuple(float(x) for x in self.potential)
            if len(q) != self.num_vertices:
                raise PgraphError("potential must have one value per vertex")
            if not all(math.isfinite(x) for x in q):
                raise PgraphError("potential values must be finite")
            object.__setattr__(self, "potential", q)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        """Vertex degree; a loop contributes 2."""
        deg = 0
        for e in self.edges:
            if e.tail == v:
                deg += 1
            if e.head == v:
                deg += 1
        return deg

    @property
    def degree_max(self) -> int:
        return max(self.degree(v) for v in range(self.num_vertices))

    def adjacency(self) -> list[list[tuple[int, int]]]:
        """Undirected incidence: for each vertex, (edge id, other endpoint)."""
        adj: list[list[tuple[int, int]]] = [[] for _ in range(self.num_vertices)]
        for i, e in enumerate(self.edges):
            adj[e.tail].append((i, e.head))
            if e.tail != e.head:
                adj[e.head].append((i, e.tail))
        return adj

    def is_connected(self) -> bool:
        adj = self.adjacency()
        seen = [False] * self.num_vertices
        stack = [0]
        seen[0] = True
        while stack:
            v = stack.pop()
            for _, w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        return all(seen)

    def with_potential(self, potential: Sequence[float]) -> "FundamentalGraph":
        return FundamentalGraph(self.d, self.num_vertices, self.edges, tuple(potential))


@dataclass
class ValidationReport:
    """Result of validate(): structural facts about a fundamental graph."""

    connected: bool
    betti: int
    flux_rank: int
    flux_surjective: bool
    degree_max: int
    messages: list[str] = field(default_factory=list)


def _strip_comment(line: str) -> str:
    pos = line.find("#")
    if pos >= 0:
        line = line[:pos]
    return line.strip()


def _parse_int(token: str, what: str, lineno: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise PgraphError(f"line {lineno}: {what} is not an integer: {token!r}") from None


def parse_graph(text: str) -> FundamentalGraph:
    """Parse the PGRAPH v1 text format.

    The format is line oriented: '#' starts a comment, blank lines are
    ignored.  Directives are

        dim <d>
        vertices <nu>
        potential <vertex id> <value>     (optional, at most once per vertex)
        edge <u> <v> <n_1> ... <n_d>

    Vertex ids are 0-based.  Edge lines define the canonical edge order.

    Raises:
        PgraphError: malformed line, unknown keyword, vertex id out of
            range, wrong index arity, or duplicate potential/dim/vertices.
    """
    d: Optional[int] = None
    nu: Optional[int] = None
    potentials: dict[int, float] = {}
    edges: list[Edge] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line:
            continue
        tokens = line.split()
        keyword = tokens[0]
        if keyword == "dim":
            if d is not None:
                raise PgraphError(f"line {lineno}: duplicate dim directive")
            if len(tokens) != 2:
                raise PgraphError(f"line {lineno}: dim takes exactly one argument")
            d = _parse_int(tokens[1], "dimension", lineno)
            if d < 1:
                raise PgraphError(f"line {lineno}: dimension must be >= 1")
        elif keyword == "vertices":
            if nu is not None:
                raise PgraphError(f"line {lineno}: duplicate vertices directive")
            if len(tokens) != 2:
                raise PgraphError(f"line {lineno}: vertices takes exactly one argument")
            nu = _parse_int(tokens[1], "vertex count", lineno)
            if nu < 1:
                raise PgraphError(f"line {lineno}: vertex count must be >= 1")
        elif keyword == "potential":
            if nu is None:
                raise PgraphError(f"line {lineno}: potential before vertices directive")
            if len(tokens) != 3:
                raise PgraphError(f"line {lineno}: potential takes <vertex id> <value>")
            v = _parse_int(tokens[1], "vertex id", lineno)
            if not 0 <= v < nu:
                raise PgraphError(f"line {lineno}: vertex id {v} out of range")
            if v in potentials:
                raise PgraphError(f"line {lineno}: duplicate potential for vertex {v}")
            try:
                q = float(tokens[2])
            except ValueError:
                raise PgraphError(f"line {lineno}: potential value is not a number: {tokens[2]!r}") from None
            if not math.isfinite(q):
                raise PgraphError(f"line {lineno}: potential value must be finite")
            potentials[v] = q
        elif keyword == "edge":
            if d is None or nu is None:
                raise PgraphError(f"line {lineno}: edge before dim/vertices directives")
            if len(tokens) != 3 + d:
                raise PgraphError(f"line {lineno}: edge takes <u> <v> and {d} index entries")
            u = _parse_int(tokens[1], "vertex id", lineno)
            v = _parse_int(tokens[2], "vertex id", lineno)
            if not 0 <= u < nu:
                raise PgraphError(f"line {lineno}: vertex id {u} out of range")
            if not 0 <= v < nu:
                raise PgraphError(f"line {lineno}: vertex id {v} out of range")
            index = IndexVector(_parse_int(t, "index entry", lineno) for t in tokens[3:])
            edges.append(Edge(u, v, index))
        else:
            raise PgraphError(f"line {lineno}: unknown keyword {keyword!r}")

    if d is None:
        raise PgraphError("missing dim directive")
    if nu is None:
        raise PgraphError("missing vertices directive")
    potential = tuple(potentials.get(v, 0.0) for v in range(nu))
    return FundamentalGraph(d, nu, tuple(edges), potential)


def serialize_graph(g: FundamentalGraph) -> str:
    """Serialize to PGRAPH v1 text.

    parse_graph(serialize_graph(g)) reproduces g exactly; more generally a
    round trip is structurally equal up to re-orienting stored edges (see
    structurally_equal).
    """
    lines = ["# PGRAPH v1", f"dim {g.d}", f"vertices {g.num_vertices}"]
    for v, q in enumerate(g.potential):
        if q != 0.0:
            lines.append(f"potential {v} {q!r}")
    for e in g.edges:
        lines.append(f"edge {e.tail} {e.head} " + " ".join(str(n) for n in e.index))
    return "\n".join(lines) + "\n"


def structurally_equal(a: FundamentalGraph, b: FundamentalGraph) -> bool:
    """Equality up to simultaneously reversing stored edges.

    Two graphs are structurally equal when d, nu and the potentials agree
    and the edge multisets agree after normalizing each edge's orientation
    (an edge may be stored as (u, v, n) or (v, u, -n)).
    """
    if a.d != b.d or a.num_vertices != b.num_vertices:
        return False
    if a.potential != b.potential:
        return False

    def canonical(e: Edge) -> tuple:
        fwd = (e.tail, e.head, tuple(e.index))
        rev = (e.head, e.tail, tuple(-e.index))
        return min(fwd, rev)

    return sorted(canonical(e) for e in a.edges) == sorted(canonical(e) for e in b.edges)


def index_from_positions(
    basis: Sequence[Sequence[float]],
    vertex_positions: Sequence[Sequence[float]],
    segments: Sequence[tuple[Sequence[float], Sequence[float]]],
    tol: float = 1e-9,
) -> FundamentalGraph:
    """Build a fundamental graph from a geometric embedding.

    Each vertex class is given by one representative position in R^d; each
    edge by a segment between two points of the periodic realization.  An
    endpoint p is resolved to the unique class j and integer translate n
    with p = vertex_positions[j] + basis @ n (within tol in lattice
    coordinates).  The edge index is n_head - n_tail, which is invariant
    under translating the whole segment by a lattice vector.

    Args:
        basis: d period vectors, each of length d.
        vertex_positions: nu representatives, each of length d.
        segments: (p, q) endpoint pairs; the edge is oriented p -> q.
        tol: matching tolerance in lattice coordinates.

    Returns:
        FundamentalGraph with zero potential.

    Raises:
        PgraphError: singular basis, or an endpoint that matches no vertex
            class (or more than one) within tol of an integer translate.
    """
    A = np.array(basis, dtype=float).T
    d = A.shape[0]
    if A.shape != (d, d):
        raise PgraphError("basis must consist of d vectors of length d")
    if abs(np.linalg.det(A)) < 1e-12:
        raise PgraphError("basis vectors are linearly dependent")
    ainv = np.linalg.inv(A)
    reps = [np.asarray(p, dtype=float) for p in vertex_positions]
    if any(p.shape != (d,) for p in reps):
        raise PgraphError("vertex positions must have length d")

    def resolve(point: Sequence[float]) -> tuple[int, np.ndarray]:
        p = np.asarray(point, dtype=float)
        if p.shape != (d,):
            raise PgraphError("segment endpoints must have length d")
        matches = []
        for j, rep in enumerate(reps):
            c = ainv @ (p - rep)
            n = np.rint(c)
            if np.max(np.abs(c - n)) <= tol:
                matches.append((j, n.astype(int)))
        if not matches:
            raise PgraphError(f"point {list(p)} matches no vertex class up to a lattice translate")
        if len(matches) > 1:
            raise PgraphError(f"point {list(p)} matches more than one vertex class; representatives overlap")
        return matches[0]

    edges = []
    for p, q in segments:
        jt, nt = resolve(p)
        jh, nh = resolve(q)
        edges.append(Edge(jt, jh, IndexVector(nh - nt)))
    return FundamentalGraph(d, len(reps), tuple(edges))


def validate(g: FundamentalGraph) -> ValidationReport:
    """Check connectivity and the flux lattice of the index form.

    Computes the Betti number beta = #edges - #vertices + 1, the rank of
    the subgroup of Z^d generated by the fluxes of the index form over the
    basic cycles, and whether those fluxes generate all of Z^d.  Failures
    are reported through the flags and messages, not raised.
    """
    from pgraph import forms

    messages: list[str] = []
    connected = g.is_connected()
    betti = g.num_edges - g.num_vertices + 1
    degree_max = g.degree_max

    flux_rank = 0
    flux_surjective = False
    if not connected:
        messages.append("graph is not connected")
    else:
        tree = forms.spanning_tree(g)
        cycles = forms.basic_cycles(g, tree)
        tau = forms.index_form(g)
        rows = []
        for cycle in cycles:
            flux = IndexVector.zero(g.d)
            for edge_id, sign in cycle:
                value = tau.values[edge_id]
                flux = flux + (value if sign > 0 else -value)
            rows.append(list(flux))
        flux_rank, flux_surjective = _lattice_rank_surjective(rows, g.d)
        if not flux_surjective:
            messages.append("cycle fluxes of the index form do not generate Z^d")
    return ValidationReport(connected, betti, flux_rank, flux_surjective, degree_max, messages)


def _lattice_rank_surjective(rows: list[list[int]], d: int) -> tuple[int, bool]:
    """Rank of the row lattice and whether it is all of Z^d."""
    import sympy
    from sympy.matrices.normalforms import invariant_factors

    if not rows:
        return 0, False
    m = sympy.Matrix(rows)
    factors = invariant_factors(m)
    rank = sum(1 for f in factors if f != 0)
    surjective = sum(1 for f in factors if abs(f) == 1) == d
    return rank, surjective
