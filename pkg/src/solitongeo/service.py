"""HTTP service wrapping the verification runner.

Endpoints: GET /health, GET /surfaces, GET /surfaces/{name} (catalog
expectations), POST /run (execute a verification batch and return the
canonical report text plus a pass/fail summary).  The CLI drives these
endpoints, in-process by default.
"""

from __future__ import annotations

import math

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__
from .catalog import CATALOG, SurfaceSpec, expected, make_surface
from .errors import ConfigError
from .runner import ALL_CHECKS, RunConfig, run

__all__ = ["app", "RunRequest", "RunResponse", "SurfaceEntry", "SurfaceInfo", "ExplainResponse"]

app = FastAPI(
    title="solitongeo",
    version=__version__,
    description="Extrinsic-geometry verification service for position-field soliton criteria",
)


class SurfaceEntry(BaseModel):
    """One surface to run: a catalog name, or a kind with parameters."""

    name: str
    kind: str | None = None
    n: int = 2
    params: dict[str, float | list[float] | str] = Field(default_factory=dict)
    box: list[list[float]] | None = None


class RunRequest(BaseModel):
    surfaces: list[SurfaceEntry] = Field(default_factory=list)
    all_catalog: bool = False
    grid: int = 5
    random_count: int = 20
    seed: int = 0
    checks: list[str] = Field(default_factory=lambda: list(ALL_CHECKS))
    tol_ad: float = 1e-7
    tol_fd: float = 1e-4


class RunResponse(BaseModel):
    passed: bool
    failures: list[str]
    report_text: str


class SurfaceInfo(BaseModel):
    name: str
    kind: str
    n: int
    m: int
    params: dict[str, float | list[float] | str]


class ExplainResponse(BaseModel):
    name: str
    kind: str
    n: int
    m: int
    params: dict[str, float | list[float] | str]
    box: list[list[float]]
    expectation: dict[str, object]


def _params_out(spec: SurfaceSpec) -> dict:
    out = {}
    for k in sorted(spec.params):
        v = spec.params[k]
        out[k] = list(v) if isinstance(v, (tuple, list)) else v
    return out


def _expectation_doc(spec: SurfaceSpec, imm) -> dict[str, object]:
    exp = expected(spec)
    doc: dict[str, object] = {}
    for field_name in (
        "position_type",
        "yamabe_verdict",
        "yamabe_lambda",
        "soliton_sign",
        "quasi_verdict",
        "quasi_lambda",
        "hypersurface_class",
        "torse_verdict",
        "normal_section",
        "conformally_flat",
    ):
        value = getattr(exp, field_name)
        if value is not None:
            doc[field_name] = value
    if exp.scalar_curvature is not None:
        mid = imm.box.mean(axis=1)
        r_mid = exp.scalar_curvature(mid)
        lo = exp.scalar_curvature(imm.box[:, 0] + 1e-3)
        if math.isclose(r_mid, lo, rel_tol=1e-12, abs_tol=1e-12):
            doc["scalar_curvature"] = r_mid
        else:
            doc["scalar_curvature"] = "point-dependent closed form"
    if exp.mu_formula is not None:
        doc["mu"] = "per-point closed form"
    return doc


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.get("/surfaces", response_model=list[SurfaceInfo])
def list_surfaces() -> list[SurfaceInfo]:
    out = []
    for name, spec in CATALOG.items():
        imm = make_surface(spec, name=name)
        out.append(
            SurfaceInfo(name=name, kind=spec.kind, n=imm.n, m=imm.m, params=_params_out(spec))
        )
    return out


@app.get("/surfaces/{name}", response_model=ExplainResponse)
def explain_surface(name: str) -> ExplainResponse:
    if name not in CATALOG:
        raise HTTPException(status_code=404, detail=f"unknown catalog surface {name!r}")
    spec = CATALOG[name]
    imm = make_surface(spec, name=name)
    return ExplainResponse(
        name=name,
        kind=spec.kind,
        n=imm.n,
        m=imm.m,
        params=_params_out(spec),
        box=imm.box.tolist(),
        expectation=_expectation_doc(spec, imm),
    )


def _resolve_entry(entry: SurfaceEntry) -> tuple[str, SurfaceSpec]:
    if entry.kind is None:
        if entry.name not in CATALOG:
            raise ConfigError(f"unknown catalog surface {entry.name!r} and no kind given")
        return entry.name, CATALOG[entry.name]
    params = {
        k: (tuple(v) if isinstance(v, list) else v) for k, v in entry.params.items()
    }
    spec = SurfaceSpec(kind=entry.kind, n=entry.n, params=params, box=entry.box)
    make_surface(spec, name=entry.name)  # eager validation
    return entry.name, spec


@app.post("/run", response_model=RunResponse)
def run_batch(request: RunRequest) -> RunResponse:
    surfaces: list[tuple[str, SurfaceSpec]] = []
    if request.all_catalog:
        surfaces.extend(CATALOG.items())
    try:
        for entry in request.surfaces:
            surfaces.append(_resolve_entry(entry))
        config = RunConfig(
            surfaces=surfaces,
            grid=request.grid,
            random_count=request.random_count,
            seed=request.seed,
            checks=tuple(request.checks),
            tol_ad=request.tol_ad,
            tol_fd=request.tol_fd,
        )
        config.validate()
    except (ConfigError, ValueError) as exc:
        raise HTTPException(status_code=422, detail=str(exc)) from exc
    report = run(config)
    return RunResponse(passed=report.passed, failures=report.failures, report_text=report.text)
