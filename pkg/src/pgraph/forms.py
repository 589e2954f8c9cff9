"""Integer 1-forms on fundamental graphs and the minimal-form search.

A 1-form assigns an index vector in Z^d to every oriented edge,
antisymmetrically: the reversed edge carries the negated value.  The index
form tau (the edge indices themselves) is one such form.  The flux of a
form over a cycle is the signed sum of its values along the cycle; forms
whose basic-cycle fluxes agree with those of tau make up the class
F_kappa, and all of them produce unitarily equivalent fiber matrices.

The central computation is the minimal form: a member of F_kappa with the
fewest nonzero values.  For any spanning tree T, setting the form to zero
on T and to the basic-cycle flux on each cotree edge gives a member whose
support size is beta_T, the number of basic cycles of T with nonzero
flux, and minimizing beta_T over all spanning trees is exact.  The search
enumerates spanning trees recursively (include/exclude over the canonical
edge order) with incumbent pruning.

Functions:
    index_form, spanning_tree, basic_cycles, count_spanning_trees,
    enumerate_spanning_trees, beta_T, minimal_form, is_in_F_kappa,
    flux_kernel_dim, normalize_basis, gauge_potential.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

import sympy
from sympy.matrices.normalforms import invariant_factors

from pgraph.graphs import Edge, FundamentalGraph, IndexVector, PgraphError

TREE_CAP_DEFAULT = 10**6


@dataclass(frozen=True)
class OneForm:
    """Z^d-valued antisymmetric function on the oriented edges.

    Only the value on each stored orientation is kept; the reversed edge
    implicitly carries the negated value.  values[i] belongs to edge i in
    the canonical order of the owning graph.
    """

    d: int
    values: tuple[IndexVector, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(IndexVector(v) for v in self.values))
        for v in self.values:
            if len(v) != self.d:
                raise PgraphError(f"form value {tuple(v)} does not have dimension {self.d}")

    @classmethod
    def zero(cls, g: FundamentalGraph) -> "OneForm":
        return cls(g.d, tuple(IndexVector.zero(g.d) for _ in g.edges))

    def value(self, edge_id: int, sign: int = 1) -> IndexVector:
        v = self.values[edge_id]
        return v if sign > 0 else -v

    def support(self) -> tuple[int, ...]:
        """Ids of stored edges with nonzero value, in canonical order."""
        return tuple(i for i, v in enumerate(self.values) if not v.is_zero)

    @property
    def support_size(self) -> int:
        return len(self.support())

    @property
    def oriented_support_size(self) -> int:
        """Support size counting both orientations of every edge."""
        return 2 * self.support_size


@dataclass(frozen=True)
class MinimalForm:
    """Result of minimal_form().

    Attributes:
        form: a minimal member of F_kappa (zero on tree_edges).
        invariant: half the oriented support size of form (the invariant I).
        tree_edges: edge ids of the minimizing spanning tree.
        beta_t: number of basic cycles of that tree with nonzero flux
            (equals invariant).
        trees_examined: spanning trees fully evaluated by the pruned search.
        tree_total: total number of spanning trees (matrix-tree count).
    """

    form: OneForm
    invariant: int
    tree_edges: tuple[int, ...]
    beta_t: int
    trees_examined: int
    tree_total: int


@dataclass(frozen=True)
class NormalizedBasis:
    """Result of normalize_basis(): a unimodular change of lattice basis.

    u is a d x d integer matrix with det +-1, applied covariantly to every
    index vector (new = u @ old).  It maps the first unimodular subset of
    the form's support values to the standard basis of Z^d.  Quasimomenta
    transform contragradiently (theta' = u^{-T} theta), which the grid used
    by band sweeps is invariant under.
    """

    u: tuple[tuple[int, ...], ...]
    graph: FundamentalGraph
    form: OneForm


def index_form(g: FundamentalGraph) -> OneForm:
    """The index form tau: each edge's own index vector."""
    return OneForm(g.d, tuple(e.index for e in g.edges))


def _check_form(g: FundamentalGraph, b: OneForm) -> None:
    if b.d != g.d or len(b.values) != g.num_edges:
        raise PgraphError("form does not match the graph (dimension or edge count)")


def spanning_tree(g: FundamentalGraph) -> tuple[int, ...]:
    """Edge ids of the breadth-first spanning tree rooted at vertex 0.

    Deterministic: vertices leave the queue in discovery order and their
    incident edges are scanned in canonical edge order.

    Raises:
        PgraphError: the graph is not connected.
    """
    adj = g.adjacency()
    parent_edge: list[Optional[int]] = [None] * g.num_vertices
    seen = [False] * g.num_vertices
    seen[0] = True
    queue = [0]
    tree: list[int] = []
    while queue:
        v = queue.pop(0)
        for edge_id, w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent_edge[w] = edge_id
                tree.append(edge_id)
                queue.append(w)
    if not all(seen):
        raise PgraphError("graph is not connected")
    return tuple(sorted(tree))


def _tree_paths(g: FundamentalGraph, tree: Sequence[int]) -> tuple[list[int], list[Optional[int]]]:
    """Root the tree at 0; return (parent vertex, parent edge id) arrays."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
    for t in tree:
        e = g.edges[t]
        adj[e.tail].append((t, e.head))
        adj[e.head].append((t, e.tail))
    parent = [-1] * g.num_vertices
    parent_edge: list[Optional[int]] = [None] * g.num_vertices
    seen = [False] * g.num_vertices
    seen[0] = True
    queue = [0]
    while queue:
        v = queue.pop(0)
        for edge_id, w in adj[v]:
            if not seen[w]:
                seen[w] = True
                parent[w] = v
                parent_edge[w] = edge_id
                queue.append(w)
    if not all(seen):
        raise PgraphError("edge set is not a spanning tree")
    return parent, parent_edge


def _path_to_root(v: int, parent: list[int]) -> list[int]:
    path = [v]
    while parent[path[-1]] != -1:
        path.append(parent[path[-1]])
    return path


def basic_cycles(g: FundamentalGraph, tree: Sequence[int]) -> list[list[tuple[int, int]]]:
    """Basic cycles of a spanning tree, one per cotree edge.

    The cycle of cotree edge e = (u, v) traverses e forward and then the
    tree path from v back to u.  Each cycle is a list of (edge id, sign)
    with sign +1 when the edge is traversed tail -> head.  The list is
    ordered by cotree edge id.
    """
    tree_set = set(tree)
    if len(tree_set) != g.num_vertices - 1:
        raise PgraphError("edge set is not a spanning tree")
    parent, parent_edge = _tree_paths(g, tree)

    cycles: list[list[tuple[int, int]]] = []
    for i, e in enumerate(g.edges):
        if i in tree_set:
            continue
        cycle: list[tuple[int, int]] = [(i, 1)]
        if e.tail != e.head:
            pu = _path_to_root(e.tail, parent)
            pv = _path_to_root(e.head, parent)
            anc_u = set(pu)
            lca = next(x for x in pv if x in anc_u)
            down = pv[: pv.index(lca) + 1]
            up = pu[: pu.index(lca) + 1]
            walk = down + list(reversed(up[:-1]))
            for a, b in zip(walk, walk[1:]):
                t = parent_edge[a] if parent[a] == b else parent_edge[b]
                te = g.edges[t]
                sign = 1 if (te.tail, te.head) == (a, b) else -1
                cycle.append((t, sign))
        cycles.append(cycle)
    return cycles


def cycle_flux(g: FundamentalGraph, b: OneForm, cycle: Sequence[tuple[int, int]]) -> IndexVector:
    """Signed sum of the form's values along a cycle."""
    flux = IndexVector.zero(g.d)
    for edge_id, sign in cycle:
        flux = flux + b.value(edge_id, sign)
    return flux


def count_spanning_trees(g: FundamentalGraph) -> int:
    """Exact number of spanning trees (matrix-tree determinant).

    Loops never occur in trees and are excluded from the Laplacian.

    Raises:
        PgraphError: the graph is not connected.
    """
    if not g.is_connected():
        raise PgraphError("graph is not connected")
    n = g.num_vertices
    if n == 1:
        return 1
    lap = sympy.zeros(n, n)
    for e in g.edges:
        if e.tail == e.head:
            continue
        lap[e.tail, e.tail] += 1
        lap[e.head, e.head] += 1
        lap[e.tail, e.head] -= 1
        lap[e.head, e.tail] -= 1
    minor = lap[1:, 1:]
    return int(minor.det())


def _components_connectable(comp: list[int], edges: tuple[Edge, ...], start: int) -> bool:
    """Can the undecided edges (ids >= start) merge all current components?"""
    root = {c: c for c in set(comp)}

    def find(c: int) -> int:
        while root[c] != c:
            root[c] = root[root[c]]
            c = root[c]
        return c

    for e in edges[start:]:
        a, b = find(comp[e.tail]), find(comp[e.head])
        if a != b:
            root[a] = b
    return len({find(c) for c in root}) == 1


def enumerate_spanning_trees(g: FundamentalGraph, cap: int = TREE_CAP_DEFAULT) -> list[tuple[int, ...]]:
    """All spanning trees as sorted edge-id tuples, in enumeration order.

    The enumeration is the recursive include/exclude scheme over the
    canonical edge order (include branch first); minimal_form visits trees
    in the same order.

    Raises:
        PgraphError: graph not connected, or tree count exceeds cap.
    """
    total = count_spanning_trees(g)
    if total > cap:
        raise PgraphError(f"spanning tree cap exceeded: {total} trees > cap {cap}")
    n = g.num_vertices
    edges = g.edges
    trees: list[tuple[int, ...]] = []

    def rec(i: int, comp: list[int], included: list[int]) -> None:
        if len(included) == n - 1:
            trees.append(tuple(included))
            return
        if i == len(edges):
            return
        e = edges[i]
        if comp[e.tail] != comp[e.head]:
            merged = [comp[e.tail] if c == comp[e.head] else c for c in comp]
            rec(i + 1, merged, included + [i])
            if _components_connectable(comp, edges, i + 1):
                rec(i + 1, comp, included)
        else:
            rec(i + 1, comp, included)

    rec(0, list(range(n)), [])
    return trees


def beta_T(g: FundamentalGraph, x: OneForm, tree: Sequence[int]) -> int:
    """Number of basic cycles of the tree with nonzero x-flux."""
    _check_form(g, x)
    return sum(1 for c in basic_cycles(g, tree) if not cycle_flux(g, x, c).is_zero)


def minimal_form(
    g: FundamentalGraph,
    x: Optional[OneForm] = None,
    cap: int = TREE_CAP_DEFAULT,
) -> MinimalForm:
    """Minimal member of the flux class of x (default: the index form).

    Enumerates spanning trees by recursive include/exclude over the
    canonical edge order, maintaining per-component potentials so that a
    cotree edge's cycle flux is known the moment both endpoints lie in the
    same component.  A branch is abandoned as soon as its count of nonzero
    fluxes reaches the incumbent minimum, so ties are resolved in favor of
    the first minimal tree in enumeration order.  The returned form is
    zero on the winning tree and equals the basic-cycle flux on each
    cotree edge.

    Raises:
        PgraphError: graph not connected, or tree count exceeds cap.
    """
    if x is None:
        x = index_form(g)
    _check_form(g, x)
    total = count_spanning_trees(g)
    if total > cap:
        raise PgraphError(f"spanning tree cap exceeded: {total} trees > cap {cap}")

    n = g.num_vertices
    edges = g.edges
    zero = IndexVector.zero(g.d)

    best_count = g.num_edges + 1
    best_tree: tuple[int, ...] = ()
    best_fluxes: dict[int, IndexVector] = {}
    examined = 0

    def flux_of(i: int, pot: list[IndexVector]) -> IndexVector:
        e = edges[i]
        return x.values[i] + pot[e.tail] - pot[e.head]

    def rec(
        i: int,
        comp: list[int],
        pot: list[IndexVector],
        included: list[int],
        nz: int,
        pending: list[int],
        fluxes: dict[int, IndexVector],
    ) -> None:
        nonlocal best_count, best_tree, best_fluxes, examined
        if nz >= best_count:
            return
        if len(included) == n - 1:
            # Tree complete: every remaining or pending edge is cotree and
            # all vertices share one component, so fluxes are determined.
            final = dict(fluxes)
            count = nz
            for j in list(pending) + list(range(i, len(edges))):
                f = flux_of(j, pot)
                final[j] = f
                if not f.is_zero:
                    count += 1
            examined += 1
            if count < best_count:
                best_count = count
                best_tree = tuple(included)
                best_fluxes = final
            return
        if i == len(edges):
            return
        e = edges[i]
        if comp[e.tail] == comp[e.head]:
            f = flux_of(i, pot)
            fluxes2 = dict(fluxes)
            fluxes2[i] = f
            rec(i + 1, comp, pot, included, nz + (0 if f.is_zero else 1), pending, fluxes2)
            return
        # Include branch first (fixes the tie-breaking order).
        shift = pot[e.tail] + x.values[i] - pot[e.head]
        old = comp[e.head]
        comp2 = list(comp)
        pot2 = list(pot)
        for v in range(n):
            if comp[v] == old:
                comp2[v] = comp[e.tail]
                pot2[v] = pot2[v] + shift
        nz2 = nz
        pending2 = []
        fluxes2 = dict(fluxes)
        for j in pending:
            ej = edges[j]
            if comp2[ej.tail] == comp2[ej.head]:
                f = flux_of(j, pot2)
                fluxes2[j] = f
                if not f.is_zero:
                    nz2 += 1
            else:
                pending2.append(j)
        rec(i + 1, comp2, pot2, included + [i], nz2, pending2, fluxes2)
        if _components_connectable(comp, edges, i + 1):
            rec(i + 1, comp, pot, included, nz, pending + [i], fluxes)

    rec(0, list(range(n)), [zero] * n, [], 0, [], {})

    values = tuple(best_fluxes.get(i, zero) for i in range(g.num_edges))
    form = OneForm(g.d, values)
    assert form.support_size == best_count
    return MinimalForm(
        form=form,
        invariant=best_count,
        tree_edges=best_tree,
        beta_t=best_count,
        trees_examined=examined,
        tree_total=total,
    )


def is_in_F_kappa(g: FundamentalGraph, b: OneForm) -> bool:
    """Whether b has the same cycle fluxes as the index form.

    Checked on the basic cycles of one fixed spanning tree, which span the
    cycle space, so agreement there is agreement on every cycle.
    """
    _check_form(g, b)
    tau = index_form(g)
    tree = spanning_tree(g)
    for cycle in basic_cycles(g, tree):
        if cycle_flux(g, b, cycle) != cycle_flux(g, tau, cycle):
            return False
    return True


def flux_kernel_dim(g: FundamentalGraph) -> int:
    """Dimension of the kernel of the flux map on the cycle space.

    Equals beta minus the rational rank of the matrix of index-form fluxes
    over the basic cycles.
    """
    tree = spanning_tree(g)
    cycles = basic_cycles(g, tree)
    tau = index_form(g)
    beta = len(cycles)
    if beta == 0:
        return 0
    m = sympy.Matrix([list(cycle_flux(g, tau, c)) for c in cycles])
    return beta - m.rank()


def normalize_basis(g: FundamentalGraph, m: OneForm) -> NormalizedBasis:
    """Change the lattice basis so d support values become the standard basis.

    Scans size-d subsets of the form's nonzero values in canonical edge
    order and takes the first whose matrix (values as columns) has
    determinant +-1; u is its inverse.  All index vectors of the graph and
    the form are replaced by u @ index.

    Raises:
        PgraphError: the support values do not generate Z^d (or no
            unimodular subset exists).
    """
    _check_form(g, m)
    support = m.support()
    values = [m.values[i] for i in support]
    if values:
        gen = sympy.Matrix([list(v) for v in values])
        factors = invariant_factors(gen)
        generates = sum(1 for f in factors if abs(f) == 1) == g.d
    else:
        generates = False
    if not generates:
        raise PgraphError("support values do not generate Z^d")

    u_mat: Optional[sympy.Matrix] = None
    for subset in itertools.combinations(range(len(values)), g.d):
        b = sympy.Matrix([list(values[k]) for k in subset]).T
        if abs(b.det()) == 1:
            u_mat = b.inv()
            break
    if u_mat is None:
        raise PgraphError("support values do not generate Z^d (no unimodular subset)")

    u = tuple(tuple(int(u_mat[i, j]) for j in range(g.d)) for i in range(g.d))

    def apply(v: IndexVector) -> IndexVector:
        return IndexVector(sum(u[i][j] * v[j] for j in range(g.d)) for i in range(g.d))

    new_edges = tuple(Edge(e.tail, e.head, apply(e.index)) for e in g.edges)
    new_graph = FundamentalGraph(g.d, g.num_vertices, new_edges, g.potential)
    new_form = OneForm(g.d, tuple(apply(v) for v in m.values))
    return NormalizedBasis(u=u, graph=new_graph, form=new_form)


def gauge_potential(g: FundamentalGraph, b: OneForm) -> tuple[IndexVector, ...]:
    """Vertex potential w with w(head) - w(tail) = tau(e) - b(e) on every edge.

    w is built by summing tau - b along the BFS tree paths from vertex 0
    (w(0) = 0) and then checked on every edge, including cotree edges.

    Raises:
        PgraphError: b is not in F_kappa, or the consistency check fails.
    """
    _check_form(g, b)
    if not is_in_F_kappa(g, b):
        raise PgraphError("form is not in F_kappa: cycle fluxes differ from the index form")
    tree = spanning_tree(g)
    tau = index_form(g)
    diff = [tau.values[i] - b.values[i] for i in range(g.num_edges)]

    w: list[Optional[IndexVector]] = [None] * g.num_vertices
    w[0] = IndexVector.zero(g.d)
    tree_adj: list[list[tuple[int, int]]] = [[] for _ in range(g.num_vertices)]
    for t in tree:
        e = g.edges[t]
        tree_adj[e.tail].append((t, e.head))
        tree_adj[e.head].append((t, e.tail))
    queue = [0]
    while queue:
        v = queue.pop(0)
        for edge_id, nxt in tree_adj[v]:
            if w[nxt] is None:
                e = g.edges[edge_id]
                if e.tail == v:
                    w[nxt] = w[v] + diff[edge_id]
                else:
                    w[nxt] = w[v] - diff[edge_id]
                queue.append(nxt)
    assert all(x is not None for x in w)
    result = tuple(w)  # type: ignore[arg-type]
    for i, e in enumerate(g.edges):
        if result[e.head] - result[e.tail] != diff[i]:
            raise PgraphError(f"gauge potential inconsistency on edge {i}")
    return result
