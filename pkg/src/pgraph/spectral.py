"""Fiber matrices and band structure of periodic graph operators.

For a fundamental graph with potential Q and a 1-form b from the flux
class of the index form, the fiber of the Schroedinger operator at
quasimomentum theta in [-pi, pi]^d is the nu x nu Hermitian matrix

    H(theta)[v][v] = deg(v) + Q(v) - sum over stored loops e at v of
                     2 cos <b(e), theta>
    H(theta)[u][v] = - sum over stored edges e = (u, v) of
                     e^{-i <b(e), theta>}   (u != v, plus the conjugate
                     contribution for edges stored as (v, u))

Loops contribute 2 to the degree.  All members of the flux class give
unitarily equivalent fibers (verify_gauge_equivalence checks this with an
explicit diagonal phase conjugation), so band functions do not depend on
the choice of form; minimal forms simply make the fewest entries theta
dependent.

Functions:
    fiber_matrix, hermitian_eigenvalues, band_sweep, dispersion_table,
    verify_gauge_equivalence, theta_dependent_count.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from pgraph.graphs import FundamentalGraph, PgraphError
from pgraph.forms import OneForm, gauge_potential

HERMITICITY_TOL = 1e-12
FLAT_TOL_DEFAULT = 1e-9
GAUGE_TOL = 1e-10


@dataclass(frozen=True)
class FiberMatrix:
    """Fiber of the operator at one quasimomentum.

    entries is Hermitian within 1e-12 entrywise; the constructor checks
    this.  At theta = 0 with zero potential the rows sum to 0 (the fiber
    is the combinatorial Laplacian there).
    """

    entries: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise PgraphError("fiber matrix must be square")
        if np.max(np.abs(m - m.conj().T)) > HERMITICITY_TOL:
            raise PgraphError("fiber matrix is not Hermitian within tolerance")
        object.__setattr__(self, "entries", m)

    @property
    def size(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class BandRecord:
    """One band over the grid: extent, extremizing points, flatness."""

    lambda_min: float
    lambda_max: float
    argmin: tuple[float, ...]
    argmax: tuple[float, ...]
    flat: bool


@dataclass(frozen=True)
class BandStructure:
    """Result of band_sweep(): per-band extents and the spectrum's measure.

    measure is the total length of the union of the non-flat band
    intervals (flat bands contribute nothing).
    """

    bands: tuple[BandRecord, ...]
    measure: float
    grid_n: int
    flat_tol: float


def _resolve_potential(g: FundamentalGraph, potential: Optional[Sequence[float]]) -> np.ndarray:
    if potential is None:
        return np.array(g.potential, dtype=float)
    q = np.asarray(potential, dtype=float)
    if q.shape != (g.num_vertices,):
        raise PgraphError("potential must have one value per vertex")
    return q


def fiber_matrix(
    g: FundamentalGraph,
    b: OneForm,
    theta: Sequence[float],
    potential: Optional[Sequence[float]] = None,
) -> FiberMatrix:
    """Assemble the fiber matrix H(theta) for the form b.

    Args:
        g: fundamental graph.
        b: 1-form giving the phase of each edge (use index_form(g) for the
            raw fiber, or a minimal form for the sparsest phases).
        theta: quasimomentum, length d.
        potential: per-vertex potential overriding g.potential.

    Returns:
        FiberMatrix (Hermitian by construction).
    """
    if len(b.values) != g.num_edges or b.d != g.d:
        raise PgraphError("form does not match the graph (dimension or edge count)")
    th = np.asarray(theta, dtype=float)
    if th.shape != (g.d,):
        raise PgraphError(f"theta must have length {g.d}")
    q = _resolve_potential(g, potential)
    n = g.num_vertices
    h = np.zeros((n, n), dtype=complex)
    for v in range(n):
        h[v, v] = g.degree(v) + q[v]
    for i, e in enumerate(g.edges):
        phase = b.values[i].dot(th)
        if e.tail == e.head:
            h[e.tail, e.tail] -= 2.0 * np.cos(phase)
        else:
            h[e.tail, e.head] -= np.exp(-1j * phase)
            h[e.head, e.tail] -= np.exp(1j * phase)
    return FiberMatrix(h)


def hermitian_eigenvalues(m: Union[FiberMatrix, np.ndarray]) -> np.ndarray:
    """Eigenvalues of a Hermitian matrix, ascending.

    Raises:
        PgraphError: input is not Hermitian within 1e-12 entrywise.
    """
    a = m.entries if isinstance(m, FiberMatrix) else np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise PgraphError("matrix must be square")
    if np.max(np.abs(a - a.conj().T)) > HERMITICITY_TOL:
        raise PgraphError("matrix is not Hermitian within tolerance")
    return np.linalg.eigvalsh(a)


def _grid_axis(grid_n: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(grid_n) / grid_n - np.pi


def grid_points(d: int, grid_n: int) -> np.ndarray:
    """Quasimomentum grid {2 pi k / N - pi : k = 0..N-1}^d.

    Rows are in lexicographic order of (k_1, ..., k_d) with k_1 most
    significant; the first row is (-pi, ..., -pi) and the row with all
    k = N/2 is the origin.  The grid for 2N contains the grid for N.
    """
    axis = _grid_axis(grid_n)
    mesh = np.meshgrid(*([axis] * d), indexing="ij")
    return np.stack(mesh, axis=-1).reshape(-1, d)


def dispersion_table(
    g: FundamentalGraph,
    b: OneForm,
    grid_n: int,
    potential: Optional[Sequence[float]] = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues of the fiber at every grid point.

    Returns:
        (thetas, lambdas): arrays of shape (N^d, d) and (N^d, nu); row
        order is the lexicographic grid order, eigenvalues ascending
        within each row.

    Raises:
        PgraphError: grid_n is odd or < 2 (the grid must contain both the
            origin and (-pi, ..., -pi)).
    """
    if grid_n < 2 or grid_n % 2 != 0:
        raise PgraphError(f"grid size must be an even integer >= 2, got {grid_n}")
    if len(b.values) != g.num_edges or b.d != g.d:
        raise PgraphError("form does not match the graph (dimension or edge count)")
    q = _resolve_potential(g, potential)
    thetas = grid_points(g.d, grid_n)
    npts = thetas.shape[0]
    n = g.num_vertices
    h = np.zeros((npts, n, n), dtype=complex)
    for v in range(n):
        h[:, v, v] = g.degree(v) + q[v]
    for i, e in enumerate(g.edges):
        phase = thetas @ np.array(b.values[i], dtype=float)
        if e.tail == e.head:
            h[:, e.tail, e.tail] -= 2.0 * np.cos(phase)
        else:
            w = np.exp(-1j * phase)
            h[:, e.tail, e.head] -= w
            h[:, e.head, e.tail] -= w.conj()
    lam = np.linalg.eigvalsh(h)
    return thetas, lam


def band_sweep(
    g: FundamentalGraph,
    b: OneForm,
    grid_n: int = 64,
    flat_tol: float = FLAT_TOL_DEFAULT,
    potential: Optional[Sequence[float]] = None,
) -> BandStructure:
    """Sweep the quasimomentum grid and summarize each band.

    Bands are the sorted eigenvalue branches lambda_1 <= ... <= lambda_nu.
    A band is flat when its extent over the grid is below flat_tol.
    argmin/argmax are the first grid points (in lexicographic scan order)
    attaining the extent.

    Raises:
        PgraphError: grid_n odd or < 2.
    """
    thetas, lam = dispersion_table(g, b, grid_n, potential)
    bands = []
    intervals = []
    for n in range(g.num_vertices):
        col = lam[:, n]
        imin = int(np.argmin(col))
        imax = int(np.argmax(col))
        lo = float(col[imin])
        hi = float(col[imax])
        flat = (hi - lo) < flat_tol
        bands.append(
            BandRecord(
                lambda_min=lo,
                lambda_max=hi,
                argmin=tuple(thetas[imin]),
                argmax=tuple(thetas[imax]),
                flat=flat,
            )
        )
        if not flat:
            intervals.append((lo, hi))
    return BandStructure(
        bands=tuple(bands),
        measure=_union_length(intervals),
        grid_n=grid_n,
        flat_tol=flat_tol,
    )


def _union_length(intervals: list[tuple[float, float]]) -> float:
    if not intervals:
        return 0.0
    intervals = sorted(intervals)
    total = 0.0
    cur_lo, cur_hi = intervals[0]
    for lo, hi in intervals[1:]:
        if lo > cur_hi:
            total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    total += cur_hi - cur_lo
    return total


def theta_dependent_count(b: OneForm) -> int:
    """Number of oriented edges with theta-dependent phase factor.

    The factor e^{-i <b(e), theta>} of an oriented edge is identically 1
    exactly when b(e) = 0 (the value is an integer vector), so the count
    is the oriented support size.  For a minimal form this equals twice
    the invariant I and is minimal over the flux class.
    """
    return b.oriented_support_size


def verify_gauge_equivalence(
    g: FundamentalGraph,
    b1: OneForm,
    b2: OneForm,
    thetas: Optional[Sequence[Sequence[float]]] = None,
    count: int = 50,
    seed: int = 0,
    tol: float = GAUGE_TOL,
    potential: Optional[Sequence[float]] = None,
) -> bool:
    """Check that two flux-class members give unitarily equivalent fibers.

    For each theta the spectra of the two fiber matrices must agree within
    tol, and the explicit conjugation must hold entrywise within tol:

        H_2(theta) = E(theta) H_1(theta) E(theta)^{-1},
        E(theta) = diag(e^{i <w_1(v) - w_2(v), theta>})

    where w_j is the gauge potential of b_j (vertex sums of tau - b_j).

    Args:
        thetas: points to check; when omitted, count points uniform in
            [-pi, pi]^d drawn with the given seed.

    Returns:
        True when every check passes, False otherwise.

    Raises:
        PgraphError: b1 or b2 is not in the flux class of the index form.
    """
    w1 = gauge_potential(g, b1)
    w2 = gauge_potential(g, b2)
    diff = np.array([[float(a - b) for a, b in zip(w1[v], w2[v])] for v in range(g.num_vertices)])
    if thetas is None:
        rng = np.random.default_rng(seed)
        pts = rng.uniform(-np.pi, np.pi, size=(count, g.d))
    else:
        pts = np.asarray(thetas, dtype=float)
    for th in pts:
        h1 = fiber_matrix(g, b1, th, potential).entries
        h2 = fiber_matrix(g, b2, th, potential).entries
        s1 = np.linalg.eigvalsh(h1)
        s2 = np.linalg.eigvalsh(h2)
        if np.max(np.abs(s1 - s2)) > tol:
            return False
        phases = np.exp(1j * (diff @ th))
        conjugated = (phases[:, None] * h1) * phases.conj()[None, :]
        if np.max(np.abs(conjugated - h2)) > tol:
            return False
    return True
