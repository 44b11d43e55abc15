"""
HTTP front end.  Every route takes the manifold text in the request body
and answers with the same JSON the command line prints.

    uvicorn gmlspace.service:app
"""
import logging
from typing import List, Optional

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import __version__, commands
from .certs import CertificateFormatError
from .dsl import DslError
from .loopmodel import LoopWordError

log = logging.getLogger(__name__)

app = FastAPI(title="gmlspace", version=__version__)


class ManifoldRequest(BaseModel):
    manifold: str = Field(..., description="tree of Seifert pieces in the text format")
    max_denominator: int = Field(4096, ge=1)
    jobs: int = Field(1, ge=1)


class IntervalRequest(ManifoldRequest):
    boundary: str = Field(..., description="open boundary as NAME.INDEX")


class VerifyRequest(ManifoldRequest):
    certificate: str = Field(..., description="certificate JSON text")


class H1Request(BaseModel):
    manifold: str


class LoopCountRequest(BaseModel):
    presentation: List[List[int]] = []
    alpha: List[int]
    beta: List[int]
    word: Optional[str] = None


def _bad_request(exc):
    detail = {"message": str(exc), "code": getattr(exc, "code", type(exc).__name__)}
    if isinstance(exc, DslError):
        detail.update(message=exc.message, line=exc.line, column=exc.column)
    log.info("rejected request: %s", detail["message"])
    return HTTPException(status_code=400, detail=detail)


_USER_ERRORS = (DslError, CertificateFormatError, commands.CommandError, LoopWordError)


def _run(fn, *args):
    try:
        return fn(*args)
    except _USER_ERRORS as exc:
        raise _bad_request(exc) from None


@app.get("/health")
def health():
    return {"status": "ok", "version": __version__}


@app.post("/decide")
def decide(req: ManifoldRequest):
    return _run(commands.decide, req.manifold, req.max_denominator, req.jobs)


@app.post("/interval")
def interval(req: IntervalRequest):
    return _run(commands.interval, req.manifold, req.boundary, req.max_denominator, req.jobs)


@app.post("/certify")
def certify(req: ManifoldRequest):
    return _run(commands.certify, req.manifold, req.max_denominator, req.jobs)


@app.post("/verify")
def verify(req: VerifyRequest):
    return _run(commands.verify, req.manifold, req.certificate, req.max_denominator, req.jobs)


@app.post("/h1")
def h1(req: H1Request):
    return _run(commands.h1, req.manifold)


@app.post("/loop-count")
def loop_count(req: LoopCountRequest):
    return _run(commands.loop_count, req.presentation, req.alpha, req.beta, req.word)
