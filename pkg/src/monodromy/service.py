"""HTTP service: scenario listing, trace computation, and frame streaming.

Stateless per request: a POST computes the full trace up front (desk
scale keeps this fast) and stores the immutable document under an opaque
id; the stream endpoint replays frames in t-order followed by a terminal
verdict event, so streamed content always matches a later fetch.
"""

from __future__ import annotations

import json
import threading
from pathlib import Path
from typing import Iterator, Optional

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, StreamingResponse

from .expressions import BranchTrackingError, EvaluationError, ExpressionSyntaxError
from .polynomials import MatchError, RootSolveError, TrackingError
from .runner import RequestError, RunRequest, run_request
from .scenarios import SCENARIO_IDS, ScenarioError
from .trace import TraceDocument

_SCENARIO_INFO = {
    "quadratic-swap": (2, "exchange the two roots; coefficients close, "
                          "radical-free formulas close, roots permute"),
    "cubic-commutator": (3, "commutator of two transposition loops at degree 3; "
                            "depth-1 formulas close while a 3-cycle acts"),
    "quartic-nested": (4, "iterated commutator at degree 4; depth-2 witness "
                          "exists, depth 3 reports no witness"),
    "quintic-commutator": (5, "commutator of two 3-cycle loops at degree 5; "
                              "depth-1 radicals close while roots permute"),
    "quintic-arnold": (5, "branch-point survey of x^5 + a x + 1; "
                          "loop permutations generate all 120"),
    "eq1-monodromy": (5, "branch-point survey of 3w^5 - 25w^3 + 60w = z "
                         "around z in {16, -16, 38, -38}"),
}

_COMPUTE_ERRORS = (RequestError, ExpressionSyntaxError, EvaluationError,
                   BranchTrackingError, ScenarioError, TrackingError,
                   RootSolveError, MatchError)


def create_app(frontend_dir: Optional[str] = None) -> FastAPI:
    app = FastAPI(title="monodromy", docs_url=None, redoc_url=None)
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])
    store: dict = {}
    lock = threading.Lock()
    counter = {"next": 1}

    @app.exception_handler(RequestValidationError)
    async def _validation_handler(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": str(exc)})

    @app.get("/api/scenarios")
    def scenarios():
        return [{"id": sid, "degree": _SCENARIO_INFO[sid][0],
                 "description": _SCENARIO_INFO[sid][1]}
                for sid in SCENARIO_IDS]

    @app.post("/api/traces")
    async def submit(request: Request):
        try:
            body = await request.json()
        except json.JSONDecodeError as exc:
            return JSONResponse(status_code=400,
                                content={"detail": f"invalid JSON body: {exc}"})
        try:
            req = RunRequest.from_dict(body)
            doc = run_request(req)
        except _COMPUTE_ERRORS as exc:
            return JSONResponse(status_code=400, content={"detail": str(exc)})
        with lock:
            trace_id = f"t-{counter['next']:06d}"
            counter["next"] += 1
            store[trace_id] = doc
        return {"id": trace_id}

    def _lookup(trace_id: str) -> TraceDocument:
        with lock:
            return store.get(trace_id)

    @app.get("/api/traces/{trace_id}")
    def fetch(trace_id: str):
        doc = _lookup(trace_id)
        if doc is None:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown trace id {trace_id!r}"})
        return JSONResponse(content=doc.to_json_dict())

    @app.get("/api/traces/{trace_id}/stream")
    def stream(trace_id: str):
        doc = _lookup(trace_id)
        if doc is None:
            return JSONResponse(status_code=404,
                                content={"detail": f"unknown trace id {trace_id!r}"})

        def events() -> Iterator[str]:
            for index, frame in enumerate(doc.frames):
                payload = {"index": index, "t": doc.t_grid[index]}
                payload.update(frame.to_json())
                yield f"event: frame\ndata: {json.dumps(payload)}\n\n"
            terminal = {
                "final_permutation": doc.final_permutation,
                "verdict": doc.verdict,
                "closure_residuals": doc.closure_residuals,
                "survey": doc.survey.to_json() if doc.survey is not None else None,
            }
            yield f"event: verdict\ndata: {json.dumps(terminal)}\n\n"

        return StreamingResponse(events(), media_type="text/event-stream")

    if frontend_dir is None:
        candidate = Path(__file__).resolve().parents[2] / "frontend"
        if (candidate / "index.html").is_file() and (candidate / "dist").is_dir():
            frontend_dir = str(candidate)
    if frontend_dir:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="ui")
    return app


app = create_app()
