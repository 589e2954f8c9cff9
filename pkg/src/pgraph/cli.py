"""Command line interface.

    pgraph validate <graph.pg>
    pgraph invariant <graph.pg> [--cap N]
    pgraph bands <graph.pg> [--grid N] [--out file.csv]
    pgraph spectrum <graph.pg> [--grid N] [--flat-tol T]
    pgraph localize <graph.pg> [--grid N] [--flat-tol T]
    pgraph dirichlet <graph.pg> [--grid N] [--flat-tol T]
    pgraph effmass <graph.pg> [--seed S]
    pgraph construct <graph.pg> [--cap N]
    pgraph make lattice <d> | triangular | hexagonal | kagome |
                decorated <d> <g1.pg> <glue>   [--out file.pg]

Exit codes: 0 success, 1 domain error (bad graph or infeasible
computation), 2 usage error.  Output is deterministic: identical inputs
produce byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional

import numpy as np

from pgraph import builders, estimates, forms, reports, spectral
from pgraph.graphs import PgraphError, parse_graph, serialize_graph, validate

GRID_DEFAULT = 64
FLAT_TOL_DEFAULT = 1e-9


def _even_int(token: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {token!r}") from None
    if value < 2 or value % 2 != 0:
        raise argparse.ArgumentTypeError(f"grid size must be an even integer >= 2, got {value}")
    return value


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pgraph", description="Periodic graph spectra via minimal 1-forms")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p: argparse.ArgumentParser, graph: bool = True) -> None:
        if graph:
            p.add_argument("graph", help="PGRAPH v1 input file")
        p.add_argument("--out", help="write output to this file instead of stdout")

    p = sub.add_parser("validate", help="structural and flux checks")
    add_common(p)

    p = sub.add_parser("invariant", help="minimal form and invariant I")
    add_common(p)
    p.add_argument("--cap", type=int, default=forms.TREE_CAP_DEFAULT, help="spanning tree cap")

    p = sub.add_parser("bands", help="dispersion table as CSV")
    add_common(p)
    p.add_argument("--grid", type=_even_int, default=GRID_DEFAULT, help="grid points per axis (even)")

    p = sub.add_parser("spectrum", help="band summary and measure bound")
    add_common(p)
    p.add_argument("--grid", type=_even_int, default=GRID_DEFAULT)
    p.add_argument("--flat-tol", type=float, default=FLAT_TOL_DEFAULT)
    p.add_argument("--cap", type=int, default=forms.TREE_CAP_DEFAULT)

    p = sub.add_parser("localize", help="band localization intervals")
    add_common(p)
    p.add_argument("--grid", type=_even_int, default=GRID_DEFAULT)
    p.add_argument("--flat-tol", type=float, default=FLAT_TOL_DEFAULT)
    p.add_argument("--cap", type=int, default=forms.TREE_CAP_DEFAULT)

    p = sub.add_parser("dirichlet", help="Dirichlet bracketing intervals")
    add_common(p)
    p.add_argument("--grid", type=_even_int, default=GRID_DEFAULT)
    p.add_argument("--flat-tol", type=float, default=FLAT_TOL_DEFAULT)

    p = sub.add_parser("effmass", help="effective mass at the spectral bottom")
    add_common(p)
    p.add_argument("--seed", type=int, default=0, help="seed for the random direction sweep")
    p.add_argument("--cap", type=int, default=forms.TREE_CAP_DEFAULT)

    p = sub.add_parser("construct", help="realize a periodic graph from a graph file's indices")
    add_common(p)
    p.add_argument("--cap", type=int, default=forms.TREE_CAP_DEFAULT)

    p = sub.add_parser("make", help="emit a standard lattice as PGRAPH text")
    p.add_argument("target", nargs="+", help="lattice <d> | triangular | hexagonal | kagome | decorated <d> <g1.pg> <glue>")
    p.add_argument("--out", help="write output to this file instead of stdout")

    return parser


def _read_graph(path: str):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_graph(fh.read())
    except OSError as e:
        raise PgraphError(f"cannot read {path}: {e.strerror}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)


def _cmd_validate(args) -> int:
    g = _read_graph(args.graph)
    _emit(reports.validation_report(g, validate(g)), args.out)
    return 0


def _cmd_invariant(args) -> int:
    g = _read_graph(args.graph)
    mf = forms.minimal_form(g, cap=args.cap)
    _emit(reports.minimal_form_report(g, mf), args.out)
    return 0


def _cmd_bands(args) -> int:
    g = _read_graph(args.graph)
    mf = forms.minimal_form(g)
    thetas, lam = spectral.dispersion_table(g, mf.form, args.grid)
    _emit(reports.bands_csv(thetas, lam), args.out)
    return 0


def _cmd_spectrum(args) -> int:
    g = _read_graph(args.graph)
    mf = forms.minimal_form(g, cap=args.cap)
    bands = spectral.band_sweep(g, mf.form, args.grid, args.flat_tol)
    mb = estimates.measure_bound_check(bands, mf.invariant)
    _emit(reports.spectrum_report(bands, mb), args.out)
    return 0


def _cmd_localize(args) -> int:
    g = _read_graph(args.graph)
    mf = forms.minimal_form(g, cap=args.cap)
    loc = estimates.localization_intervals(g, mf.form, grid_n=args.grid, flat_tol=args.flat_tol)
    mb = estimates.measure_bound_check(loc.bands, mf.invariant)
    _emit(reports.localization_report(loc, mb), args.out)
    return 0


def _cmd_dirichlet(args) -> int:
    g = _read_graph(args.graph)
    dr = estimates.dirichlet_localization(g, grid_n=args.grid, flat_tol=args.flat_tol)
    _emit(reports.dirichlet_report(dr), args.out)
    return 0


def _cmd_effmass(args) -> int:
    g = _read_graph(args.graph)
    mf = forms.minimal_form(g, cap=args.cap)
    em = estimates.effective_mass(g, mf.form)
    rng = np.random.default_rng(args.seed)
    omegas = rng.normal(size=(50, g.d))
    omega_ok = estimates.mu_bounds_check(g, mf.form, omegas)
    _emit(reports.effective_mass_report(g, em, omega_ok), args.out)
    return 0


def _cmd_construct(args) -> int:
    g = _read_graph(args.graph)
    realized = builders.realize_periodic(g, forms.index_form(g))
    _emit(serialize_graph(realized), args.out)
    return 0


def _cmd_make(args) -> int:
    target = args.target
    kind = target[0]
    if kind == "lattice":
        if len(target) != 2:
            _usage_error("make lattice takes exactly one argument: <d>")
        g = builders.make_lattice(_usage_int(target[1], "d"))
    elif kind == "triangular":
        if len(target) != 1:
            _usage_error("make triangular takes no arguments")
        g = builders.make_triangular()
    elif kind == "hexagonal":
        if len(target) != 1:
            _usage_error("make hexagonal takes no arguments")
        g = builders.make_hexagonal()
    elif kind == "kagome":
        if len(target) != 1:
            _usage_error("make kagome takes no arguments")
        g = builders.make_kagome()
    elif kind == "decorated":
        if len(target) != 4:
            _usage_error("make decorated takes <d> <g1.pg> <glue>")
        d = _usage_int(target[1], "d")
        g1 = _read_graph(target[2])
        glue = _usage_int(target[3], "glue")
        g = builders.make_decorated(d, g1, glue)
    else:
        _usage_error(f"unknown make target {kind!r}")
    _emit(serialize_graph(g), args.out)
    return 0


class _UsageError(Exception):
    pass


def _usage_error(msg: str) -> None:
    raise _UsageError(msg)


def _usage_int(token: str, what: str) -> int:
    try:
        return int(token)
    except ValueError:
        raise _UsageError(f"{what} must be an integer, got {token!r}") from None


_COMMANDS = {
    "validate": _cmd_validate,
    "invariant": _cmd_invariant,
    "bands": _cmd_bands,
    "spectrum": _cmd_spectrum,
    "localize": _cmd_localize,
    "dirichlet": _cmd_dirichlet,
    "effmass": _cmd_effmass,
    "construct": _cmd_construct,
    "make": _cmd_make,
}


def run(argv: list[str]) -> int:
    """Run the CLI; returns the exit code instead of exiting."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except _UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return 2
    except PgraphError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
