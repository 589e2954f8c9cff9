"""Standard periodic lattices and constructions on fundamental graphs.

Every builder returns a FundamentalGraph that validates with surjective
cycle fluxes.  Vertex and edge numbering below fixes the canonical edge
order that reports refer to.

Functions:
    make_lattice: Z^d (one vertex, d loops).
    make_triangular: triangular lattice (one vertex, loops (1,0), (0,1),
        (1,1)), maximal degree 6.
    make_hexagonal: honeycomb (two vertices, three edges 0 -> 1 with
        indices (0,0), (1,0), (0,1)).
    make_kagome: kagome lattice (three vertices, doubled triangle),
        maximal degree 4, invariant 3.
    make_decorated: connected finite graph with d loops attached at one
        vertex; the invariant equals d.
    realize_periodic: periodic graph realizing a prescribed minimal form
        with surjective fluxes.
"""

from __future__ import annotations

from pgraph.graphs import Edge, FundamentalGraph, IndexVector, PgraphError
from pgraph.forms import OneForm, index_form, minimal_form
from pgraph.graphs import _lattice_rank_surjective
from pgraph import forms


def make_lattice(d: int) -> FundamentalGraph:
    """Z^d: one vertex class with one loop per lattice direction."""
    if d < 1:
        raise PgraphError("lattice dimension must be >= 1")
    edges = []
    for s in range(d):
        index = [0] * d
        index[s] = 1
        edges.append(Edge(0, 0, IndexVector(index)))
    return FundamentalGraph(d, 1, tuple(edges))


def make_triangular() -> FundamentalGraph:
    """Triangular lattice: one vertex, loops (1,0), (0,1), (1,1)."""
    return FundamentalGraph(
        2,
        1,
        (
            Edge(0, 0, IndexVector((1, 0))),
            Edge(0, 0, IndexVector((0, 1))),
            Edge(0, 0, IndexVector((1, 1))),
        ),
    )


def make_hexagonal() -> FundamentalGraph:
    """Honeycomb lattice: two vertices joined by three edges."""
    return FundamentalGraph(
        2,
        2,
        (
            Edge(0, 1, IndexVector((0, 0))),
            Edge(0, 1, IndexVector((1, 0))),
            Edge(0, 1, IndexVector((0, 1))),
        ),
    )


def make_kagome() -> FundamentalGraph:
    """Kagome lattice: a doubled triangle on three vertex classes.

    The triangle 0 -> 1 -> 2 -> 0 appears once with zero indices and once
    with indices (0,1), (1,-1), (-1,0).  Every vertex has degree 4.
    """
    return FundamentalGraph(
        2,
        3,
        (
            Edge(0, 1, IndexVector((0, 0))),
            Edge(1, 2, IndexVector((0, 0))),
            Edge(2, 0, IndexVector((0, 0))),
            Edge(0, 1, IndexVector((0, 1))),
            Edge(1, 2, IndexVector((1, -1))),
            Edge(2, 0, IndexVector((-1, 0))),
        ),
    )


def make_decorated(d: int, g1: FundamentalGraph, glue: int) -> FundamentalGraph:
    """Attach d lattice loops to one vertex of a finite graph.

    g1 must be connected with all-zero index vectors (a finite graph given
    in PGRAPH form); its edges keep zero indices in dimension d and the
    glue vertex receives loops indexed e_1, ..., e_d.  The resulting
    periodic graph has Betti number beta(g1) + d and invariant d.

    Raises:
        PgraphError: d < 1, g1 not connected, g1 has a nonzero index, or
            glue out of range.
    """
    if d < 1:
        raise PgraphError("decorated dimension must be >= 1")
    if not g1.is_connected():
        raise PgraphError("decoration graph must be connected")
    if any(not e.index.is_zero for e in g1.edges):
        raise PgraphError("decoration graph must have zero index vectors")
    if not 0 <= glue < g1.num_vertices:
        raise PgraphError(f"glue vertex {glue} out of range")
    edges = [Edge(e.tail, e.head, IndexVector.zero(d)) for e in g1.edges]
    for s in range(d):
        index = [0] * d
        index[s] = 1
        edges.append(Edge(glue, glue, IndexVector(index)))
    return FundamentalGraph(d, g1.num_vertices, tuple(edges), g1.potential)


def realize_periodic(g: FundamentalGraph, m: OneForm) -> FundamentalGraph:
    """Periodic graph whose index form is the given minimal form.

    The finite structure (vertices, edge endpoints, potential) is taken
    from g; the index vectors are m's values.  Preconditions: g connected,
    the cycle fluxes of m generate Z^d, and m is minimal in its own flux
    class (no member has smaller support).

    Raises:
        PgraphError: g not connected, fluxes not surjective (in
            particular for the zero form), or m not minimal.
    """
    if len(m.values) != g.num_edges:
        raise PgraphError("form does not match the graph (edge count)")
    realized = FundamentalGraph(
        m.d,
        g.num_vertices,
        tuple(Edge(e.tail, e.head, m.values[i]) for i, e in enumerate(g.edges)),
        g.potential,
    )
    tree = forms.spanning_tree(realized)  # raises when not connected
    cycles = forms.basic_cycles(realized, tree)
    tau = index_form(realized)
    rows = [list(forms.cycle_flux(realized, tau, c)) for c in cycles]
    _, surjective = _lattice_rank_surjective(rows, m.d)
    if not surjective:
        raise PgraphError("cycle fluxes of the form do not generate Z^d; cannot realize")
    mf = minimal_form(realized)
    if mf.invariant < m.support_size:
        raise PgraphError(
            f"form is not minimal: support {m.support_size} but a member "
            f"with support {mf.invariant} exists"
        )
    return realized
