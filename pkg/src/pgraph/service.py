"""HTTP facade over the core operations.

A small JSON API for callers that do not want the CLI: each endpoint
accepts the PGRAPH text inline and returns the same quantities the
corresponding report prints.  Run with

    uvicorn pgraph.service:app
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

import numpy as np

from pgraph import __version__, builders, estimates, forms, spectral
from pgraph.graphs import PgraphError, parse_graph, serialize_graph, validate

app = FastAPI(title="pgraph", version=__version__)


class GraphRequest(BaseModel):
    text: str = Field(description="PGRAPH v1 text")


class ValidateResponse(BaseModel):
    connected: bool
    betti: int
    flux_rank: int
    flux_surjective: bool
    degree_max: int
    messages: list[str]


class InvariantRequest(GraphRequest):
    cap: int = forms.TREE_CAP_DEFAULT


class SupportEdge(BaseModel):
    edge: int
    orient: str
    value: list[int]


class InvariantResponse(BaseModel):
    d: int
    beta: int
    invariant: int
    tree_edges: list[int]
    support: list[SupportEdge]
    trees_examined: int
    tree_total: int


class SpectrumRequest(GraphRequest):
    grid: int = 64
    flat_tol: float = 1e-9


class BandModel(BaseModel):
    n: int
    lambda_min: float
    lambda_max: float
    flat: bool


class SpectrumResponse(BaseModel):
    bands: list[BandModel]
    measure: float
    sum_bands: float
    bound_4i: int
    ok: bool


class EffmassRequest(GraphRequest):
    seed: int = 0


class EffmassResponse(BaseModel):
    hessian: list[list[float]]
    mass: list[list[float]]
    c_m: float
    bounds_ok: bool
    omega_bounds_ok: bool


class ConstructResponse(BaseModel):
    text: str


def _graph(text: str):
    try:
        return parse_graph(text)
    except PgraphError as e:
        raise HTTPException(status_code=400, detail=str(e)) from None


def _domain(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except PgraphError as e:
        raise HTTPException(status_code=400, detail=str(e)) from None


@app.post("/validate", response_model=ValidateResponse)
def validate_endpoint(req: GraphRequest) -> ValidateResponse:
    g = _graph(req.text)
    rep = _domain(validate, g)
    return ValidateResponse(
        connected=rep.connected,
        betti=rep.betti,
        flux_rank=rep.flux_rank,
        flux_surjective=rep.flux_surjective,
        degree_max=rep.degree_max,
        messages=rep.messages,
    )


@app.post("/invariant", response_model=InvariantResponse)
def invariant_endpoint(req: InvariantRequest) -> InvariantResponse:
    g = _graph(req.text)
    mf = _domain(forms.minimal_form, g, cap=req.cap)
    support = [
        SupportEdge(edge=i, orient="+", value=list(mf.form.values[i]))
        for i in mf.form.support()
    ]
    return InvariantResponse(
        d=g.d,
        beta=g.num_edges - g.num_vertices + 1,
        invariant=mf.invariant,
        tree_edges=list(mf.tree_edges),
        support=support,
        trees_examined=mf.trees_examined,
        tree_total=mf.tree_total,
    )


@app.post("/spectrum", response_model=SpectrumResponse)
def spectrum_endpoint(req: SpectrumRequest) -> SpectrumResponse:
    g = _graph(req.text)
    mf = _domain(forms.minimal_form, g)
    bands = _domain(spectral.band_sweep, g, mf.form, req.grid, req.flat_tol)
    mb = estimates.measure_bound_check(bands, mf.invariant)
    return SpectrumResponse(
        bands=[
            BandModel(n=n + 1, lambda_min=b.lambda_min, lambda_max=b.lambda_max, flat=b.flat)
            for n, b in enumerate(bands.bands)
        ],
        measure=bands.measure,
        sum_bands=mb.sum_bands,
        bound_4i=mb.bound_4i,
        ok=mb.ok,
    )


@app.post("/effmass", response_model=EffmassResponse)
def effmass_endpoint(req: EffmassRequest) -> EffmassResponse:
    g = _graph(req.text)
    mf = _domain(forms.minimal_form, g)
    em = _domain(estimates.effective_mass, g, mf.form)
    rng = np.random.default_rng(req.seed)
    omegas = rng.normal(size=(50, g.d))
    omega_ok = _domain(estimates.mu_bounds_check, g, mf.form, omegas)
    return EffmassResponse(
        hessian=em.hessian.tolist(),
        mass=em.mass.tolist(),
        c_m=em.c_m,
        bounds_ok=em.bounds_ok,
        omega_bounds_ok=omega_ok,
    )


@app.post("/construct", response_model=ConstructResponse)
def construct_endpoint(req: GraphRequest) -> ConstructResponse:
    g = _graph(req.text)
    realized = _domain(builders.realize_periodic, g, forms.index_form(g))
    return ConstructResponse(text=serialize_graph(realized))
