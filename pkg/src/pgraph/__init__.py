"""Tools for periodic discrete graphs: minimal 1-forms, fiber matrices,
band structure and spectral estimates.

The package is organized around the fundamental graph of a periodic graph
(a finite multigraph whose edges carry integer index vectors recording how
they wrap around the period lattice):

    graphs      core types, PGRAPH file format, validation
    forms       spanning trees, cycle fluxes, minimal 1-forms, gauge data
    spectral    fiber matrices, band sweeps, gauge equivalence checks
    estimates   localization intervals, Dirichlet bracketing, effective mass
    builders    standard lattices and decorated graphs
    cli         command line front end
    service     HTTP facade (FastAPI)
"""

from pgraph.graphs import (
    Edge,
    FundamentalGraph,
    IndexVector,
    PgraphError,
    index_from_positions,
    parse_graph,
    serialize_graph,
    validate,
)
from pgraph.forms import (
    MinimalForm,
    OneForm,
    basic_cycles,
    beta_T,
    count_spanning_trees,
    enumerate_spanning_trees,
    flux_kernel_dim,
    gauge_potential,
    index_form,
    is_in_F_kappa,
    minimal_form,
    normalize_basis,
    spanning_tree,
)
from pgraph.spectral import (
    BandStructure,
    FiberMatrix,
    band_sweep,
    fiber_matrix,
    hermitian_eigenvalues,
    theta_dependent_count,
    verify_gauge_equivalence,
)
from pgraph.estimates import (
    DirichletResult,
    EffectiveMass,
    LocalizationResult,
    dirichlet_localization,
    effective_form,
    effective_mass,
    localization_intervals,
    measure_bound_check,
    support_subgraphs,
)
from pgraph.builders import (
    make_decorated,
    make_hexagonal,
    make_kagome,
    make_lattice,
    make_triangular,
    realize_periodic,
)

__version__ = "0.1.0"

__all__ = [
    "Edge",
    "FundamentalGraph",
    "IndexVector",
    "PgraphError",
    "index_from_positions",
    "parse_graph",
    "serialize_graph",
    "validate",
    "MinimalForm",
    "OneForm",
    "basic_cycles",
    "beta_T",
    "count_spanning_trees",
    "enumerate_spanning_trees",
    "flux_kernel_dim",
    "gauge_potential",
    "index_form",
    "is_in_F_kappa",
    "minimal_form",
    "normalize_basis",
    "spanning_tree",
    "BandStructure",
    "FiberMatrix",
    "band_sweep",
    "fiber_matrix",
    "hermitian_eigenvalues",
    "theta_dependent_count",
    "verify_gauge_equivalence",
    "DirichletResult",
    "EffectiveMass",
    "LocalizationResult",
    "dirichlet_localization",
    "effective_form",
    "effective_mass",
    "localization_intervals",
    "measure_bound_check",
    "support_subgraphs",
    "make_decorated",
    "make_hexagonal",
    "make_kagome",
    "make_lattice",
    "make_triangular",
    "realize_periodic",
]
