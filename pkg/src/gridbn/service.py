"""Stateless HTTP API over one loaded network.

Evidence travels in every request, so identical requests always produce
identical responses regardless of ordering or interleaving. All endpoints
are read-only; the model is loaded once at startup and never mutated.

Error responses carry a machine-readable code plus human-readable text:
``{"error": {"code": ..., "message": ...}}``.
"""

from __future__ import annotations

from typing import Any, Mapping

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .cli import data_path
from .errors import EvidenceError, ImpossibleEvidenceError, ModelError, SurveyError
from .model import Network
from .optimize import CostTable, load_costs
from .payloads import (
    availability_payload,
    network_listing,
    optimize_payload,
    posterior_payload,
)
from .reports import load_profile


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status, content={"error": {"code": code, "message": message}}
    )


def create_app(network: Network, default_costs: CostTable | None = None) -> FastAPI:
    app = FastAPI(title="gridbn", docs_url=None, redoc_url=None)
    # read-only computations; let the explorer run from any origin
    app.add_middleware(
        CORSMiddleware, allow_origins=["*"], allow_methods=["*"], allow_headers=["*"]
    )

    @app.exception_handler(ImpossibleEvidenceError)
    async def _impossible(request: Request, exc: ImpossibleEvidenceError):
        return _error(409, "impossible_evidence", str(exc))

    @app.exception_handler(EvidenceError)
    async def _evidence(request: Request, exc: EvidenceError):
        return _error(400, "invalid_evidence", str(exc))

    @app.exception_handler(SurveyError)
    async def _survey(request: Request, exc: SurveyError):
        return _error(400, "invalid_survey", str(exc))

    @app.exception_handler(ModelError)
    async def _model(request: Request, exc: ModelError):
        return _error(400, "model_error", str(exc))

    @app.get("/api/network")
    def get_network() -> dict:
        return network_listing(network)

    @app.post("/api/posteriors")
    def post_posteriors(body: dict) -> dict:
        evidence = _evidence_from(body)
        query = body.get("query")
        if query is not None and not isinstance(query, list):
            raise EvidenceError("'query' must be a list of node ids")
        return posterior_payload(network, evidence, query)

    @app.post("/api/optimize")
    def post_optimize(body: dict) -> dict:
        target = body.get("target")
        if not isinstance(target, Mapping) or "node" not in target or "state" not in target:
            raise ModelError("'target' must be an object with 'node' and 'state'")
        weights = _weights_from(body.get("weights"))
        costs = _costs_from(body.get("costs"))
        candidates = body.get("candidates") or sorted(costs.costs)
        return optimize_payload(
            network, (target["node"], target["state"]), costs, weights, candidates
        )

    @app.get("/api/report/availability")
    def get_availability(
        profile: str = Query("default"),
        include_import: bool = Query(False),
    ) -> dict:
        if profile != "default":
            raise ModelError(f"unknown availability profile {profile!r}")
        prof = load_profile(data_path("availability_default.json"))
        return availability_payload(network, {}, prof, include_import=include_import)

    def _evidence_from(body: Mapping) -> dict[str, str]:
        evidence = body.get("evidence", {})
        if not isinstance(evidence, Mapping):
            raise EvidenceError("'evidence' must be an object of node -> state")
        return {str(k): str(v) for k, v in evidence.items()}

    def _weights_from(raw: Any) -> tuple[float, float, float]:
        if raw is None:
            return (1.0, 1.0, 1.0)
        if isinstance(raw, Mapping):
            weights = (raw.get("w1", 1.0), raw.get("w2", 1.0), raw.get("w3", 1.0))
        elif isinstance(raw, (list, tuple)) and len(raw) == 3:
            weights = tuple(raw)
        else:
            raise ModelError("'weights' must be [w1, w2, w3] or {w1, w2, w3}")
        weights = tuple(float(w) for w in weights)
        if any(w <= 0 for w in weights):
            raise ModelError("weights must all be positive")
        return weights

    def _costs_from(raw: Any) -> CostTable:
        if raw is None:
            if default_costs is not None:
                return default_costs
            return load_costs(data_path("construction_costs.json"))
        if not isinstance(raw, Mapping):
            raise ModelError("'costs' must be an object of component -> cost per GW")
        return CostTable({str(k): float(v) for k, v in raw.items()})

    return app
