"""Builder graphs and the periodic realization round trip."""

from __future__ import annotations

import pytest

from pgraph.builders import (
    make_decorated,
    make_hexagonal,
    make_kagome,
    make_lattice,
    make_triangular,
    realize_periodic,
)
from pgraph.forms import OneForm, index_form, minimal_form
from pgraph.graphs import (
    Edge,
    FundamentalGraph,
    IndexVector,
    PgraphError,
    structurally_equal,
    validate,
)


def _triangle() -> FundamentalGraph:
    z = IndexVector.zero(1)
    return FundamentalGraph(1, 3, (Edge(0, 1, z), Edge(1, 2, z), Edge(2, 0, z)))


def test_builders_validate_with_surjective_fluxes():
    graphs = [
        make_lattice(1),
        make_lattice(2),
        make_lattice(3),
        make_triangular(),
        make_hexagonal(),
        make_kagome(),
        make_decorated(2, _triangle(), 0),
    ]
    for g in graphs:
        rep = validate(g)
        assert rep.connected
        assert rep.flux_surjective
        assert rep.messages == []


def test_make_lattice():
    g = make_lattice(3)
    assert g.num_vertices == 1
    assert [tuple(e.index) for e in g.edges] == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    assert g.degree(0) == 6
    with pytest.raises(PgraphError):
        make_lattice(0)


def test_make_triangular():
    g = make_triangular()
    assert g.num_vertices == 1
    assert g.degree_max == 6
    assert [tuple(e.index) for e in g.edges] == [(1, 0), (0, 1), (1, 1)]


def test_make_hexagonal():
    g = make_hexagonal()
    assert g.num_vertices == 2
    assert g.degree_max == 3
    assert all(e.tail == 0 and e.head == 1 for e in g.edges)
    assert [tuple(e.index) for e in g.edges] == [(0, 0), (1, 0), (0, 1)]


def test_make_kagome():
    g = make_kagome()
    assert g.num_vertices == 3
    assert g.num_edges == 6
    assert g.degree_max == 4
    assert minimal_form(g).invariant == 3


def test_make_decorated_structure():
    g1 = _triangle().with_potential([0.5, 0.0, -1.0])
    g = make_decorated(2, g1, 1)
    assert g.d == 2
    assert g.num_vertices == 3
    assert g.num_edges == 5
    assert g.potential == (0.5, 0.0, -1.0)
    # glue vertex picks up one loop per direction
    assert g.edges[3] == Edge(1, 1, IndexVector((1, 0)))
    assert g.edges[4] == Edge(1, 1, IndexVector((0, 1)))
    assert g.degree(1) == g1.degree(1) + 4
    assert minimal_form(g).invariant == 2


def test_make_decorated_errors():
    tri = _triangle()
    with pytest.raises(PgraphError):
        make_decorated(0, tri, 0)
    with pytest.raises(PgraphError):
        make_decorated(1, tri, 3)
    disconnected = FundamentalGraph(1, 2, ())
    with pytest.raises(PgraphError):
        make_decorated(1, disconnected, 0)
    indexed = FundamentalGraph(1, 1, (Edge(0, 0, IndexVector((1,))),))
    with pytest.raises(PgraphError) as err:
        make_decorated(1, indexed, 0)
    assert "zero index" in str(err.value)


def test_realize_kagome_round_trip():
    g = make_kagome()
    realized = realize_periodic(g, minimal_form(g).form)
    assert structurally_equal(realized, g)
    assert validate(realized).flux_surjective


def test_realize_requires_connectivity():
    g = FundamentalGraph(1, 2, (Edge(0, 0, IndexVector((1,))),))
    with pytest.raises(PgraphError) as err:
        realize_periodic(g, index_form(g))
    assert "not connected" in str(err.value)


def test_realize_rejects_zero_form():
    g = make_kagome()
    with pytest.raises(PgraphError) as err:
        realize_periodic(g, OneForm.zero(g))
    assert "do not generate" in str(err.value)


def test_realize_rejects_non_surjective_form():
    g = make_lattice(2)
    doubled = OneForm(2, (IndexVector((2, 0)), IndexVector((0, 1))))
    with pytest.raises(PgraphError) as err:
        realize_periodic(g, doubled)
    assert "do not generate" in str(err.value)


def test_realize_rejects_non_minimal_form():
    g = make_hexagonal()
    tau = index_form(g)
    w = [IndexVector((0, 0)), IndexVector((1, -2))]
    bloated = OneForm(
        2, tuple(tau.values[i] - (w[e.head] - w[e.tail]) for i, e in enumerate(g.edges))
    )
    assert bloated.support_size == 3
    with pytest.raises(PgraphError) as err:
        realize_periodic(g, bloated)
    assert "not minimal: support 3" in str(err.value)
