"""HTTP front end over the shared command layer.

Responses are the exact envelope bytes the CLI would print (the envelope
serializer runs here too -- FastAPI's own JSON encoding would reformat
floats and lose the rational strings), so a given request body always
yields a byte-identical response.  Error statuses follow the CLI exit
codes: bad input 400, numeric failure 422, resource limit 413.
"""

from __future__ import annotations

from fastapi import FastAPI, Request, Response

from .. import commands, __version__
from ..envelope import error_envelope, to_json
from ..errors import InputError, SinklabError
from ..matrix import PositiveMatrix
from ..rational import RationalMatrix, parse_rational
from .schemas import (
    LimitRequest,
    MbnRequest,
    RationalRequest,
    ScaleRequest,
    SweepRequest,
    TargetRequest,
)

_STATUS_BY_EXIT = {1: 400, 2: 422, 3: 413}


def _json_response(envelope, status=200) -> Response:
    return Response(
        content=to_json(envelope), media_type="application/json", status_code=status
    )


def _rational_matrix(rows) -> RationalMatrix:
    return RationalMatrix(
        [
            [parse_rational(cell) if isinstance(cell, str) else cell for cell in row]
            for row in rows
        ]
    )


def create_app() -> FastAPI:
    app = FastAPI(title="sinklab", version=__version__)

    @app.exception_handler(SinklabError)
    async def _on_sinklab_error(request: Request, exc: SinklabError):
        command = request.url.path.strip("/") or "?"
        env = error_envelope(command, None, type(exc).__name__, str(exc))
        return _json_response(env, status=_STATUS_BY_EXIT.get(exc.exit_code, 422))

    @app.get("/health")
    async def health():
        return _json_response({"status": "ok", "version": __version__})

    @app.post("/scale")
    async def scale(req: ScaleRequest):
        env = commands.run_scale(
            PositiveMatrix(req.matrix),
            tol=req.tol,
            max_iters=req.max_iters,
            order=req.order,
            trace=req.trace,
        )
        return _json_response(env)

    @app.post("/limit")
    async def limit(req: LimitRequest):
        env = commands.run_limit(PositiveMatrix(req.matrix), tol=req.tol)
        return _json_response(env)

    @app.post("/mbn")
    async def mbn(req: MbnRequest):
        env = commands.run_mbn(req.M, req.B, req.N, req.k, req.ell)
        return _json_response(env)

    @app.post("/sweep")
    async def sweep(req: SweepRequest):
        csv_text = commands.run_sweep(req.label, req.k_min, req.k_max, req.points)
        return Response(content=csv_text, media_type="text/csv")

    @app.post("/rational")
    async def rational(req: RationalRequest):
        if req.mode == "probe":
            if req.K is None:
                raise InputError("probe mode needs K")
            env = commands.run_rational_probe(
                req.K, steps=req.steps, bit_bound=req.bit_bound
            )
        elif req.mode == "cube_root":
            env = commands.run_rational_cube_root(req.steps, bit_bound=req.bit_bound)
        else:
            if req.matrix is None:
                raise InputError("trace mode needs a matrix")
            env = commands.run_rational_trace(
                _rational_matrix(req.matrix), req.steps, bit_bound=req.bit_bound
            )
        return _json_response(env)

    @app.post("/target")
    async def target(req: TargetRequest):
        env = commands.run_target(
            PositiveMatrix(req.matrix),
            req.row_sums,
            req.col_sums,
            tol=req.tol,
            max_iters=req.max_iters,
        )
        return _json_response(env)

    return app


app = create_app()
