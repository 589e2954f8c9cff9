"""Cycle structure, spanning-tree enumeration, and the minimal-form search.

The tree enumerator is checked against the matrix-tree determinant, and
the minimal-form results against hand-derived values for the standard
lattices and the doubled-triangle example (three vertex classes joined by
parallel straight/curved edge pairs carrying values (0,1), (-1,0) and
(1,-1)).
"""

from __future__ import annotations

import numpy as np
import pytest

from pgraph.builders import make_hexagonal, make_kagome, make_lattice, make_triangular
from pgraph.forms import (
    OneForm,
    basic_cycles,
    beta_T,
    count_spanning_trees,
    cycle_flux,
    enumerate_spanning_trees,
    flux_kernel_dim,
    gauge_potential,
    index_form,
    is_in_F_kappa,
    minimal_form,
    normalize_basis,
    spanning_tree,
)
from pgraph.graphs import Edge, FundamentalGraph, IndexVector, PgraphError


def _doubled_triangle() -> FundamentalGraph:
    """Three classes, each pair joined by a curved and a straight edge.

    Edge order follows the usual figure numbering e1..e6; values are the
    half-integer form of the figure doubled to integers, which preserves
    which cycle fluxes vanish.
    """
    return FundamentalGraph(
        2,
        3,
        (
            Edge(2, 0, IndexVector((0, 1))),   # e1 curved
            Edge(0, 1, IndexVector((-1, 0))),  # e2 curved
            Edge(1, 2, IndexVector((1, -1))),  # e3 curved
            Edge(2, 1, IndexVector((1, -1))),  # e4 straight
            Edge(1, 0, IndexVector((-1, 0))),  # e5 straight
            Edge(0, 2, IndexVector((0, 1))),   # e6 straight
        ),
    )


def _gauge_shift(g: FundamentalGraph, w: list[IndexVector]) -> OneForm:
    """Member of the flux class of tau differing by the gradient of w."""
    tau = index_form(g)
    return OneForm(
        g.d,
        tuple(tau.values[i] - (w[e.head] - w[e.tail]) for i, e in enumerate(g.edges)),
    )


def _k4() -> FundamentalGraph:
    edges = tuple(
        Edge(u, v, IndexVector((0,))) for u in range(4) for v in range(u + 1, 4)
    )
    return FundamentalGraph(1, 4, edges)


def _is_spanning_tree(g: FundamentalGraph, tree: tuple[int, ...]) -> bool:
    if len(tree) != g.num_vertices - 1:
        return False
    comp = list(range(g.num_vertices))
    for t in tree:
        e = g.edges[t]
        a, b = comp[e.tail], comp[e.head]
        if a == b:
            return False
        comp = [a if c == b else c for c in comp]
    return len(set(comp)) == 1


def test_one_form_basics():
    g = make_kagome()
    tau = index_form(g)
    assert tau.values[3] == IndexVector((0, 1))
    assert tau.value(3, -1) == IndexVector((0, -1))
    assert tau.support() == (3, 4, 5)
    assert tau.support_size == 3
    assert tau.oriented_support_size == 6
    assert OneForm.zero(g).support() == ()


def test_one_form_dimension_check():
    with pytest.raises(PgraphError):
        OneForm(2, (IndexVector((1,)),))


def test_spanning_tree_is_deterministic():
    # vertex 0 is explored first, and both edge 0 (0-1) and edge 2 (2-0)
    # are incident to it, so they enter the tree before edge 1
    g = make_kagome()
    assert spanning_tree(g) == (0, 2)
    assert spanning_tree(g) == spanning_tree(g)


def test_spanning_tree_requires_connectivity():
    g = FundamentalGraph(1, 2, (Edge(0, 0, IndexVector((1,))),))
    with pytest.raises(PgraphError) as err:
        spanning_tree(g)
    assert "not connected" in str(err.value)


def test_basic_cycles_kagome():
    g = make_kagome()
    cycles = basic_cycles(g, (0, 1))
    assert [c[0][0] for c in cycles] == [2, 3, 4, 5]
    # the zero-index triangle closes up with no flux
    assert cycles[0] == [(2, 1), (0, 1), (1, 1)]
    tau = index_form(g)
    assert cycle_flux(g, tau, cycles[0]) == IndexVector((0, 0))
    fluxes = [tuple(cycle_flux(g, tau, c)) for c in cycles[1:]]
    assert fluxes == [(0, 1), (1, -1), (-1, 0)]


def test_basic_cycles_rejects_non_tree():
    g = make_kagome()
    with pytest.raises(PgraphError):
        basic_cycles(g, (0,))


def test_cycle_flux_sign_convention():
    g = make_hexagonal()
    tau = index_form(g)
    cycles = basic_cycles(g, spanning_tree(g))
    forward = cycle_flux(g, tau, cycles[0])
    backward = cycle_flux(g, tau, [(e, -s) for e, s in reversed(cycles[0])])
    assert backward == -forward


def test_kirchhoff_counts():
    assert count_spanning_trees(make_lattice(1)) == 1
    assert count_spanning_trees(make_lattice(3)) == 1
    assert count_spanning_trees(make_triangular()) == 1
    assert count_spanning_trees(make_hexagonal()) == 3
    assert count_spanning_trees(make_kagome()) == 12
    assert count_spanning_trees(_doubled_triangle()) == 12
    assert count_spanning_trees(_k4()) == 16


def test_enumeration_matches_kirchhoff():
    for g in [
        make_lattice(2),
        make_hexagonal(),
        make_kagome(),
        make_triangular(),
        _doubled_triangle(),
        _k4(),
    ]:
        trees = enumerate_spanning_trees(g)
        assert len(trees) == count_spanning_trees(g)
        assert len(set(trees)) == len(trees)
        assert all(_is_spanning_tree(g, t) for t in trees)


def test_enumeration_cap():
    with pytest.raises(PgraphError) as err:
        enumerate_spanning_trees(_k4(), cap=3)
    assert "spanning tree cap exceeded: 16 trees > cap 3" in str(err.value)


def test_beta_T_doubled_triangle():
    g = _doubled_triangle()
    x = index_form(g)
    assert beta_T(g, x, (0, 2)) == 3  # tree {e1, e3}
    assert beta_T(g, x, (2, 4)) == 4  # tree {e3, e5}


def test_minimal_form_kagome():
    g = make_kagome()
    mf = minimal_form(g)
    assert mf.invariant == 3
    assert mf.beta_t == 3
    assert mf.form.values == index_form(g).values
    assert mf.tree_edges == (0, 1)
    assert mf.tree_total == 12
    assert 0 < mf.trees_examined <= mf.tree_total
    assert is_in_F_kappa(g, mf.form)


def test_minimal_form_standard_lattices():
    hx = make_hexagonal()
    mf = minimal_form(hx)
    assert mf.invariant == 2
    assert [tuple(v) for v in mf.form.values] == [(0, 0), (1, 0), (0, 1)]

    tr = make_triangular()
    assert minimal_form(tr).invariant == 3

    for d in (1, 2, 3):
        z = make_lattice(d)
        mf = minimal_form(z)
        assert mf.invariant == d
        assert mf.form.values == index_form(z).values


def test_minimal_form_doubled_triangle():
    g = _doubled_triangle()
    mf = minimal_form(g)
    assert mf.invariant == 3
    assert mf.tree_total == 12


def test_minimal_form_zero_on_tree():
    for g in [make_kagome(), _doubled_triangle(), make_hexagonal()]:
        mf = minimal_form(g)
        assert _is_spanning_tree(g, tuple(sorted(mf.tree_edges)))
        assert all(mf.form.values[t].is_zero for t in mf.tree_edges)
        assert mf.form.support_size == mf.invariant


def test_minimal_form_invariant_under_edge_order_reversal():
    for g in [make_kagome(), make_hexagonal(), _doubled_triangle()]:
        reordered = FundamentalGraph(g.d, g.num_vertices, tuple(reversed(g.edges)))
        assert minimal_form(reordered).invariant == minimal_form(g).invariant


def test_minimal_form_invariant_under_orientation_flips():
    rng = np.random.default_rng(7)
    g = _doubled_triangle()
    base = minimal_form(g).invariant
    for _ in range(5):
        flips = rng.integers(0, 2, size=g.num_edges)
        edges = tuple(
            e.reversed() if f else e for e, f in zip(g.edges, flips)
        )
        assert minimal_form(FundamentalGraph(g.d, g.num_vertices, edges)).invariant == base


def test_minimal_form_same_for_gauge_shifted_input():
    g = make_hexagonal()
    b = _gauge_shift(g, [IndexVector((0, 0)), IndexVector((1, -2))])
    assert minimal_form(g, b).invariant == minimal_form(g).invariant


def test_minimal_form_cap():
    with pytest.raises(PgraphError) as err:
        minimal_form(make_kagome(), cap=5)
    assert "cap exceeded" in str(err.value)


def test_is_in_F_kappa():
    g = make_kagome()
    assert is_in_F_kappa(g, index_form(g))
    assert not is_in_F_kappa(g, OneForm.zero(g))
    shifted = _gauge_shift(g, [IndexVector((1, 0)), IndexVector((0, 0)), IndexVector((0, -1))])
    assert shifted.values != index_form(g).values
    assert is_in_F_kappa(g, shifted)


def test_flux_kernel_dim():
    assert flux_kernel_dim(make_lattice(2)) == 0
    assert flux_kernel_dim(make_hexagonal()) == 0
    assert flux_kernel_dim(make_triangular()) == 1
    assert flux_kernel_dim(make_kagome()) == 2


def test_normalize_basis_kagome():
    g = make_kagome()
    mf = minimal_form(g)
    nb = normalize_basis(g, mf.form)
    assert nb.u == ((1, 1), (1, 0))
    u = np.array(nb.u)
    assert abs(round(float(np.linalg.det(u)))) == 1
    # the first unimodular support pair lands on the standard basis
    assert tuple(nb.form.values[3]) == (1, 0)
    assert tuple(nb.form.values[4]) == (0, 1)
    assert is_in_F_kappa(nb.graph, nb.form)


def test_normalize_basis_requires_generating_support():
    g = FundamentalGraph(
        2, 1, (Edge(0, 0, IndexVector((2, 0))), Edge(0, 0, IndexVector((0, 2))))
    )
    with pytest.raises(PgraphError) as err:
        normalize_basis(g, index_form(g))
    assert "do not generate" in str(err.value)


def test_gauge_potential_of_tau_is_zero():
    g = make_kagome()
    w = gauge_potential(g, index_form(g))
    assert all(v.is_zero for v in w)


def test_gauge_potential_recovers_shift():
    g = make_kagome()
    shift = [IndexVector((0, 0)), IndexVector((2, -1)), IndexVector((-1, 1))]
    b = _gauge_shift(g, shift)
    w = gauge_potential(g, b)
    assert list(w) == shift  # normalized by w(0) = 0


def test_gauge_potential_rejects_foreign_form():
    g = make_kagome()
    with pytest.raises(PgraphError) as err:
        gauge_potential(g, OneForm.zero(g))
    assert "not in F_kappa" in str(err.value)
