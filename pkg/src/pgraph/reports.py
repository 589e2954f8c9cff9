"""Plain-text reports and CSV output.

All numbers are printed with 17 significant digits (enough to round-trip
a double); booleans print as lowercase true/false.  Edge references use
the 0-based canonical edge order (the edge line order of the PGRAPH file)
plus an orientation sign.
"""

from __future__ import annotations

import numpy as np

from pgraph.graphs import FundamentalGraph, ValidationReport
from pgraph.forms import MinimalForm
from pgraph.spectral import BandStructure
from pgraph.estimates import DirichletResult, EffectiveMass, LocalizationResult, MeasureBound


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def fmt_bool(b: bool) -> str:
    return "true" if b else "false"


def validation_report(g: FundamentalGraph, rep: ValidationReport) -> str:
    lines = [
        f"d={g.d}",
        f"vertices={g.num_vertices}",
        f"edges={g.num_edges}",
        f"connected={fmt_bool(rep.connected)}",
        f"betti={rep.betti}",
        f"flux_rank={rep.flux_rank}",
        f"flux_surjective={fmt_bool(rep.flux_surjective)}",
        f"degree_max={rep.degree_max}",
    ]
    lines += [f"message: {m}" for m in rep.messages]
    return "\n".join(lines) + "\n"


def minimal_form_report(g: FundamentalGraph, mf: MinimalForm) -> str:
    beta = g.num_edges - g.num_vertices + 1
    lines = [
        f"d={g.d}",
        f"beta={beta}",
        f"I={mf.invariant}",
        "tree_edges=" + ",".join(str(t) for t in mf.tree_edges),
    ]
    for i in mf.form.support():
        value = " ".join(str(n) for n in mf.form.values[i])
        lines.append(f"edge {i} + value {value}")
    return "\n".join(lines) + "\n"


def bands_csv(thetas: np.ndarray, lambdas: np.ndarray) -> str:
    d = thetas.shape[1]
    nu = lambdas.shape[1]
    header = ",".join([f"theta_{s + 1}" for s in range(d)] + [f"lambda_{n + 1}" for n in range(nu)])
    lines = [header]
    for row_t, row_l in zip(thetas, lambdas):
        lines.append(",".join(fmt(x) for x in list(row_t) + list(row_l)))
    return "\n".join(lines) + "\n"


def band_lines(bands: BandStructure) -> list[str]:
    lines = []
    for n, b in enumerate(bands.bands, start=1):
        lines.append(f"{n} {fmt(b.lambda_min)} {fmt(b.lambda_max)} {fmt_bool(b.flat)}")
    return lines


def spectrum_report(bands: BandStructure, mb: MeasureBound) -> str:
    lines = band_lines(bands)
    lines.append(f"measure={fmt(bands.measure)}")
    lines.append(
        f"sum_bands={fmt(mb.sum_bands)} measure={fmt(mb.measure)} "
        f"bound_4I={mb.bound_4i} ok={fmt_bool(mb.ok)}"
    )
    return "\n".join(lines) + "\n"


def _interval_table(
    mu: tuple[float, ...],
    intervals: tuple[tuple[float, float], ...],
    bands: BandStructure,
    contained: tuple[bool, ...],
) -> list[str]:
    lines = ["n mu interval_lo interval_hi band_lo band_hi contained"]
    for n in range(len(mu)):
        lo, hi = intervals[n]
        band = bands.bands[n]
        lines.append(
            f"{n + 1} {fmt(mu[n])} {fmt(lo)} {fmt(hi)} "
            f"{fmt(band.lambda_min)} {fmt(band.lambda_max)} {fmt_bool(contained[n])}"
        )
    return lines


def localization_report(loc: LocalizationResult, mb: MeasureBound) -> str:
    lines = _interval_table(loc.mu, loc.intervals, loc.bands, loc.contained)
    lines.append(
        f"sum_bands={fmt(mb.sum_bands)} measure={fmt(mb.measure)} "
        f"bound_4I={mb.bound_4i} ok={fmt_bool(mb.ok)}"
    )
    return "\n".join(lines) + "\n"


def dirichlet_report(dr: DirichletResult) -> str:
    lines = ["cover=" + ",".join(str(v) for v in dr.cover)]
    lines += _interval_table(dr.mu, dr.intervals, dr.bands, dr.contained)
    return "\n".join(lines) + "\n"


def _matrix_str(m: np.ndarray) -> str:
    rows = ["[" + ",".join(fmt(x) for x in row) + "]" for row in m]
    return "[" + ",".join(rows) + "]"


def effective_mass_report(
    g: FundamentalGraph,
    em: EffectiveMass,
    omega_bounds_ok: bool | None = None,
) -> str:
    nu = g.num_vertices
    lower = nu / em.c_m
    upper = nu * nu * g.d / 2.0
    line = (
        f"M={_matrix_str(em.hessian)} m={_matrix_str(em.mass)} "
        f"bounds=[{fmt(lower)},{fmt(upper)}] ok={fmt_bool(em.bounds_ok)}"
    )
    lines = [line]
    if omega_bounds_ok is not None:
        lines.append(f"omega_bounds_ok={fmt_bool(omega_bounds_ok)}")
    return "\n".join(lines) + "\n"
