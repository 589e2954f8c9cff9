"""Spectral estimates driven by a minimal 1-form.

A form m with small support splits the operator into a theta-independent
part (the Laplacian of the subgraph G0 of non-support edges, plus the
potential) and a magnetic part supported on the few support edges.  This
yields:

  * localization: band n lies in [mu_n, mu_n + 2 kappa_m_plus] where mu_n
    are the eigenvalues of the G0 part and kappa_m_plus is the maximal
    degree of the support subgraph;
  * a total-bandwidth bound: the Lebesgue measure of the spectrum is at
    most the sum of band lengths, which is at most 4I (I the invariant);
  * Dirichlet bracketing (zero potential): removing a vertex cover of the
    support edges gives upper bounds mu^D_n for the lower bands;
  * the effective-mass tensor at the bottom of the spectrum (zero
    potential), from second-order perturbation of the fiber at theta = 0,
    cross-checked against finite differences of the lowest band.

Functions:
    support_subgraphs, localization_intervals, measure_bound_check,
    dirichlet_localization, effective_form, effective_mu, effective_mass,
    mu_bounds_check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from pgraph.graphs import Edge, FundamentalGraph, IndexVector, PgraphError
from pgraph.forms import OneForm, index_form, minimal_form
from pgraph.spectral import (
    BandStructure,
    band_sweep,
    fiber_matrix,
    hermitian_eigenvalues,
)

CONTAINMENT_SLACK = 1e-9
FD_STEP_DEFAULT = 1e-4
FD_TOL_DEFAULT = 1e-6


@dataclass(frozen=True)
class SupportSubgraphs:
    """Split of a graph along a form's support.

    Both parts keep all vertices.  zero_part holds the non-support edges
    (zero index, so its fiber is theta independent) and the original
    potential; support_part holds the support edges carrying the form's
    values as indices, with zero potential.  The two fibers sum to the
    fiber of the original graph with that form.
    """

    zero_part: FundamentalGraph
    support_part: FundamentalGraph
    degrees_zero: tuple[int, ...]
    degrees_support: tuple[int, ...]


@dataclass(frozen=True)
class LocalizationResult:
    """Per-band enclosing intervals [mu_n, mu_n + 2 kappa_m_plus]."""

    mu: tuple[float, ...]
    kappa_m_plus: int
    intervals: tuple[tuple[float, float], ...]
    bands: BandStructure
    contained: tuple[bool, ...]


@dataclass(frozen=True)
class MeasureBound:
    """Measure <= sum of band lengths <= 4I chain."""

    sum_bands: float
    measure: float
    bound_4i: int
    ok: bool


@dataclass(frozen=True)
class DirichletResult:
    """Dirichlet bracketing of the lower bands (zero potential).

    cover is a vertex cover of the support edges of the index form;
    mu_dirichlet are the eigenvalues of the fiber at theta = 0 with the
    cover's rows and columns removed.  Band n is bracketed by
    [mu_n, mu_dirichlet_n] for n <= nu - r and by [mu_n, 2 kappa_plus]
    for the remaining r bands.
    """

    mu: tuple[float, ...]
    mu_dirichlet: tuple[float, ...]
    cover: tuple[int, ...]
    kappa_plus: int
    intervals: tuple[tuple[float, float], ...]
    bands: BandStructure
    contained: tuple[bool, ...]


@dataclass(frozen=True)
class EffectiveMass:
    """Hessian of the lowest band at theta = 0 and the inverse mass tensor.

    bounds_ok records whether the eigenvalues of mass lie in
    [nu / c_m, nu^2 d / 2] (and above nu / (2d) when the form's support
    size equals d), with 1e-9 slack.
    """

    hessian: np.ndarray
    mass: np.ndarray
    c_m: float
    bounds_ok: bool


def support_subgraphs(g: FundamentalGraph, m: OneForm) -> SupportSubgraphs:
    """Split g into the non-support and support parts of the form m."""
    if m.d != g.d or len(m.values) != g.num_edges:
        raise PgraphError("form does not match the graph (dimension or edge count)")
    support = set(m.support())
    zero_edges = []
    supp_edges = []
    for i, e in enumerate(g.edges):
        if i in support:
            supp_edges.append(Edge(e.tail, e.head, m.values[i]))
        else:
            zero_edges.append(Edge(e.tail, e.head, IndexVector.zero(g.d)))
    zero_part = FundamentalGraph(g.d, g.num_vertices, tuple(zero_edges), g.potential)
    support_part = FundamentalGraph(g.d, g.num_vertices, tuple(supp_edges))
    return SupportSubgraphs(
        zero_part=zero_part,
        support_part=support_part,
        degrees_zero=tuple(zero_part.degree(v) for v in range(g.num_vertices)),
        degrees_support=tuple(support_part.degree(v) for v in range(g.num_vertices)),
    )


def _contained(
    intervals: Sequence[tuple[float, float]],
    bands: BandStructure,
    slack: float = CONTAINMENT_SLACK,
) -> tuple[bool, ...]:
    flags = []
    for (lo, hi), band in zip(intervals, bands.bands):
        flags.append(lo - slack <= band.lambda_min and band.lambda_max <= hi + slack)
    return tuple(flags)


def localization_intervals(
    g: FundamentalGraph,
    m: OneForm,
    potential: Optional[Sequence[float]] = None,
    grid_n: int = 64,
    flat_tol: float = 1e-9,
) -> LocalizationResult:
    """Enclose each band in an interval of width 2 kappa_m_plus.

    mu are the eigenvalues of the theta-independent part (Laplacian of the
    non-support subgraph plus potential); kappa_m_plus is the maximal
    degree of the support subgraph.  The contained flags compare against a
    band sweep on the given grid.
    """
    parts = support_subgraphs(g, m)
    h0 = fiber_matrix(parts.zero_part, index_form(parts.zero_part), [0.0] * g.d, potential)
    mu = hermitian_eigenvalues(h0)
    kappa = max(parts.degrees_support)
    intervals = tuple((float(x), float(x) + 2.0 * kappa) for x in mu)
    bands = band_sweep(g, m, grid_n, flat_tol, potential)
    return LocalizationResult(
        mu=tuple(float(x) for x in mu),
        kappa_m_plus=kappa,
        intervals=intervals,
        bands=bands,
        contained=_contained(intervals, bands),
    )


def measure_bound_check(bands: BandStructure, invariant: int) -> MeasureBound:
    """Check measure <= sum of band lengths <= 4 * invariant."""
    sum_bands = sum(0.0 if b.flat else b.lambda_max - b.lambda_min for b in bands.bands)
    bound = 4 * invariant
    ok = bands.measure <= sum_bands + CONTAINMENT_SLACK and sum_bands <= bound + CONTAINMENT_SLACK
    return MeasureBound(sum_bands=float(sum_bands), measure=bands.measure, bound_4i=bound, ok=ok)


def _greedy_cover(g: FundamentalGraph, support: Sequence[int]) -> tuple[int, ...]:
    """Vertex cover of the support edges.

    Uncovered support edges are processed smallest edge id first; for each,
    the endpoint covering the most currently uncovered support edges is
    taken, ties broken by smaller vertex id.
    """
    uncovered = set(support)
    cover: list[int] = []
    while uncovered:
        first = min(uncovered)
        e = g.edges[first]
        candidates = sorted({e.tail, e.head})
        best_v = candidates[0]
        best_n = -1
        for v in candidates:
            n = sum(1 for j in uncovered if v in (g.edges[j].tail, g.edges[j].head))
            if n > best_n:
                best_v, best_n = v, n
        cover.append(best_v)
        uncovered = {j for j in uncovered if best_v not in (g.edges[j].tail, g.edges[j].head)}
    return tuple(sorted(cover))


def dirichlet_localization(
    g: FundamentalGraph,
    potential: Optional[Sequence[float]] = None,
    grid_n: int = 64,
    flat_tol: float = 1e-9,
) -> DirichletResult:
    """Bracket the lower bands between Neumann-type and Dirichlet values.

    Uses the index form tau: mu are the eigenvalues of the non-support
    part, mu_dirichlet those of the theta = 0 fiber with a vertex cover of
    the support edges removed (those rows and columns are theta
    independent because every support edge meets the cover).  The
    bracketing guarantee applies to zero potential.

    Raises:
        PgraphError: the index form has empty support.
    """
    tau = index_form(g)
    support = tau.support()
    if not support:
        raise PgraphError("index form has empty support: nothing to remove")
    cover = _greedy_cover(g, support)
    r = len(cover)
    nu = g.num_vertices

    parts = support_subgraphs(g, tau)
    h0 = fiber_matrix(parts.zero_part, index_form(parts.zero_part), [0.0] * g.d, potential)
    mu = hermitian_eigenvalues(h0)

    full = fiber_matrix(g, tau, [0.0] * g.d, potential).entries
    keep = [v for v in range(nu) if v not in set(cover)]
    if keep:
        sub = full[np.ix_(keep, keep)]
        mu_d = hermitian_eigenvalues(sub)
    else:
        mu_d = np.zeros(0)

    kappa_plus = g.degree_max
    intervals = []
    for n in range(nu):
        lo = float(mu[n])
        if n < nu - r:
            intervals.append((lo, float(mu_d[n])))
        else:
            intervals.append((lo, 2.0 * kappa_plus))
    bands = band_sweep(g, tau, grid_n, flat_tol, potential)
    return DirichletResult(
        mu=tuple(float(x) for x in mu),
        mu_dirichlet=tuple(float(x) for x in mu_d),
        cover=cover,
        kappa_plus=kappa_plus,
        intervals=tuple(intervals),
        bands=bands,
        contained=_contained(tuple(intervals), bands),
    )


def _require_zero_potential(g: FundamentalGraph) -> None:
    if any(q != 0.0 for q in g.potential):
        raise PgraphError("effective mass requires zero potential")


def _edge_operators(g: FundamentalGraph, m: OneForm, omega: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Incidence matrix D0 and first theta-derivative G1 of the gradient.

    Rows live on stored edges.  The gradient row of edge e at theta is
    (e^{+i<m(e),theta>/2}, -e^{-i<m(e),theta>/2}) on (tail, head), which
    factors the fiber matrix as grad^H grad; differentiating along omega
    at theta = 0 puts (i/2) <m(e), omega> on both endpoints.
    """
    ne, nv = g.num_edges, g.num_vertices
    d0 = np.zeros((ne, nv))
    g1 = np.zeros((ne, nv), dtype=complex)
    for i, e in enumerate(g.edges):
        d0[i, e.tail] += 1.0
        d0[i, e.head] -= 1.0
        phi = m.values[i].dot(omega)
        g1[i, e.tail] += 0.5j * phi
        g1[i, e.head] += 0.5j * phi
    return d0, g1


def effective_form(g: FundamentalGraph, m: OneForm, omega: Sequence[float]) -> np.ndarray:
    """First-order corrector psi_1 of the ground state along omega.

    Solves Laplacian(0) psi_1 = -Delta_1(omega) 1 where Delta_1 is the
    first derivative of the fiber matrix along omega at theta = 0.  The
    right-hand side is checked to be orthogonal to constants and the
    solution is the minimum-norm one (orthogonal to the kernel).

    Raises:
        PgraphError: nonzero potential, right-hand side not orthogonal to
            constants, or the Laplacian is singular beyond the
            one-dimensional constant kernel.
    """
    _require_zero_potential(g)
    if m.d != g.d or len(m.values) != g.num_edges:
        raise PgraphError("form does not match the graph (dimension or edge count)")
    w = np.asarray(omega, dtype=float)
    if w.shape != (g.d,):
        raise PgraphError(f"omega must have length {g.d}")
    d0, g1 = _edge_operators(g, m, w)
    lap = d0.T @ d0
    delta1 = d0.T @ g1 + g1.conj().T @ d0
    ones = np.ones(g.num_vertices)
    rhs = -delta1 @ ones
    scale = max(1.0, float(np.linalg.norm(rhs)))
    if abs(np.vdot(ones, rhs)) > 1e-10 * scale:
        raise PgraphError("perturbation right-hand side is not orthogonal to constants")
    evals = np.linalg.eigvalsh(lap)
    if g.num_vertices > 1 and evals[1] <= 1e-9 * max(1.0, float(evals[-1])):
        raise PgraphError("Laplacian is singular beyond the constant kernel")
    psi1, *_ = np.linalg.lstsq(lap.astype(complex), rhs, rcond=None)
    if np.linalg.norm(lap @ psi1 - rhs) > 1e-8 * scale:
        raise PgraphError("no corrector solves the perturbation equation")
    return psi1


def effective_mu(g: FundamentalGraph, m: OneForm, omega: Sequence[float]) -> float:
    """Half the second derivative of the lowest band along omega at 0.

    mu(omega) = || grad_1(omega) 1 + grad_0 psi_1 ||^2 / nu, a quadratic
    form in omega (homogeneous of degree 2).
    """
    w = np.asarray(omega, dtype=float)
    psi1 = effective_form(g, m, w)
    d0, g1 = _edge_operators(g, m, w)
    vec = g1 @ np.ones(g.num_vertices) + d0 @ psi1
    return float(np.real(np.vdot(vec, vec))) / g.num_vertices


def _fd_second_derivative(g: FundamentalGraph, m: OneForm, v: np.ndarray, h: float) -> float:
    """Five-point finite difference of the lowest band along v at 0."""

    def lam1(t: float) -> float:
        return float(hermitian_eigenvalues(fiber_matrix(g, m, t * v))[0])

    return (-lam1(2 * h) + 16 * lam1(h) - 30 * lam1(0.0) + 16 * lam1(-h) - lam1(2 * -h)) / (12 * h * h)


def c_m_constant(m: OneForm) -> float:
    """Sum of squared norms of the form over oriented edges."""
    return float(2 * sum(sum(x * x for x in v) for v in m.values))


def effective_mass(
    g: FundamentalGraph,
    m: Optional[OneForm] = None,
    fd_step: float = FD_STEP_DEFAULT,
    fd_tol: float = FD_TOL_DEFAULT,
) -> EffectiveMass:
    """Hessian M of the lowest band at theta = 0 and mass tensor M^{-1}.

    M is assembled by polarization from mu(omega) (M_ii = 2 mu(e_i),
    M_ij = mu(e_i + e_j) - mu(e_i) - mu(e_j)) and every entry is
    cross-checked against a five-point finite difference of the lowest
    band; disagreement beyond fd_tol is an error, as is a Hessian that is
    not positive definite.

    Args:
        g: fundamental graph with zero potential.
        m: form whose support drives the computation; defaults to a
            minimal form of g.

    Raises:
        PgraphError: nonzero potential, finite-difference disagreement, or
            non-positive-definite Hessian.
    """
    _require_zero_potential(g)
    if m is None:
        m = minimal_form(g).form
    d = g.d
    mu_basis = [effective_mu(g, m, np.eye(d)[i]) for i in range(d)]
    hess = np.zeros((d, d))
    for i in range(d):
        hess[i, i] = 2.0 * mu_basis[i]
    for i in range(d):
        for j in range(i + 1, d):
            v = np.eye(d)[i] + np.eye(d)[j]
            hess[i, j] = hess[j, i] = effective_mu(g, m, v) - mu_basis[i] - mu_basis[j]

    directions = [np.eye(d)[i] for i in range(d)]
    directions += [np.eye(d)[i] + np.eye(d)[j] for i in range(d) for j in range(i + 1, d)]
    for v in directions:
        fd = _fd_second_derivative(g, m, v, fd_step)
        pert = float(v @ hess @ v)
        if abs(fd - pert) > fd_tol:
            raise PgraphError(
                f"effective-mass cross-check failed along {v.tolist()}: "
                f"perturbation {pert!r} vs finite difference {fd!r}"
            )

    heig = np.linalg.eigvalsh(hess)
    if heig[0] <= 1e-12:
        raise PgraphError("Hessian of the lowest band is not positive definite")
    mass = np.linalg.inv(hess)

    c_m = c_m_constant(m)
    nu = g.num_vertices
    meig = np.linalg.eigvalsh(mass)
    lower = nu / c_m
    upper = nu * nu * d / 2.0
    ok = bool(meig[0] >= lower - 1e-9 and meig[-1] <= upper + 1e-9)
    if m.support_size == d:
        ok = ok and bool(meig[0] >= nu / (2.0 * d) - 1e-9)
    return EffectiveMass(hessian=hess, mass=mass, c_m=c_m, bounds_ok=ok)


def mu_bounds_check(g: FundamentalGraph, m: OneForm, omegas: Sequence[Sequence[float]]) -> bool:
    """Check 1/(nu^2 d) <= mu(omega) <= sum over oriented support edges of
    <m(e), omega>^2 / (2 nu) for unit vectors omega (1e-9 slack)."""
    nu = g.num_vertices
    for omega in omegas:
        w = np.asarray(omega, dtype=float)
        w = w / np.linalg.norm(w)
        mu = effective_mu(g, m, w)
        upper = float(2 * sum(v.dot(w) ** 2 for v in m.values)) / (2.0 * nu)
        if mu < 1.0 / (nu * nu * g.d) - 1e-9 or mu > upper + 1e-9:
            return False
    return True
