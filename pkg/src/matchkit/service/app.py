"""FastAPI wrapper: one POST endpoint per command under /v1.

Domain errors come back as exit_code 2 with an error report in the body,
not as HTTP errors, so remote runs behave exactly like local ones."""

from __future__ import annotations

from fastapi import FastAPI
from pydantic import BaseModel

from .. import __version__
from ..reports import SCHEMA
from .handlers import dispatch
from .models import (
    ChowlaMaxRequest,
    CommandResponse,
    ConditionsRequest,
    Conjecture1Request,
    Conjecture2Request,
    InstanceRequest,
    LinearMatchRequest,
    ScanPropertyRequest,
    SearchUnmatchableRequest,
    WitnessRequest,
)


def _run(command: str, req: BaseModel) -> CommandResponse:
    report, code = dispatch(command, req.model_dump())
    return CommandResponse(exit_code=code, report=report)


def create_app() -> FastAPI:
    app = FastAPI(title="matchkit", version=__version__)

    @app.get("/v1/health")
    def health() -> dict:
        return {"status": "ok", "schema": SCHEMA, "version": __version__}

    @app.post("/v1/match", response_model=CommandResponse)
    def match(req: InstanceRequest):
        return _run("match", req)

    @app.post("/v1/certify", response_model=CommandResponse)
    def certify(req: InstanceRequest):
        return _run("certify", req)

    @app.post("/v1/conditions", response_model=CommandResponse)
    def conditions(req: ConditionsRequest):
        return _run("conditions", req)

    @app.post("/v1/witness", response_model=CommandResponse)
    def witness(req: WitnessRequest):
        return _run("witness", req)

    @app.post("/v1/scan-property", response_model=CommandResponse)
    def scan_property(req: ScanPropertyRequest):
        return _run("scan-property", req)

    @app.post("/v1/linear-match", response_model=CommandResponse)
    def linear_match(req: LinearMatchRequest):
        return _run("linear-match", req)

    @app.post("/v1/linear-conditions", response_model=CommandResponse)
    def linear_conditions(req: ConditionsRequest):
        return _run("linear-conditions", req)

    @app.post("/v1/atom", response_model=CommandResponse)
    def atom(req: InstanceRequest):
        return _run("atom", req)

    @app.post("/v1/conjecture1", response_model=CommandResponse)
    def conjecture1(req: Conjecture1Request):
        return _run("conjecture1", req)

    @app.post("/v1/conjecture2", response_model=CommandResponse)
    def conjecture2(req: Conjecture2Request):
        return _run("conjecture2", req)

    @app.post("/v1/chowla-max", response_model=CommandResponse)
    def chowla_max(req: ChowlaMaxRequest):
        return _run("chowla-max", req)

    @app.post("/v1/search-unmatchable", response_model=CommandResponse)
    def search_unmatchable(req: SearchUnmatchableRequest):
        return _run("search-unmatchable", req)

    return app


app = create_app()
