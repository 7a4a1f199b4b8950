"""Session-scoped HTTP/JSON facade over the authoring pipeline.

Sessions live in memory; committed sentences are exactly those that
parsed unambiguously and reified without error, and the reifier state
reflects only committed sentences.  Errors leave the session untouched.
An unsatisfiable result does not roll a sentence back: the author sees
the status and may retract explicitly.
"""

from __future__ import annotations

import os
import threading
import uuid
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from pydantic import BaseModel

from .grammar import render_tree
from .lookahead import LookaheadResult, NoContinuation
from .meta import MetaResult, evaluate
from .reifier import ReifiedRule, ReifierError, ReifierState, render_kb
from .terms import render_term
from .tokenizer import UnknownToken
from .workbench import NoParse, Workbench


class LookaheadRequest(BaseModel):
    prefix: str


class SentenceRequest(BaseModel):
    text: str


@dataclass
class Session:
    id: str
    committed_text: list[str] = field(default_factory=list)
    state: ReifierState = field(default_factory=ReifierState)
    last_result: Optional[MetaResult] = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


def rule_json(rule: ReifiedRule) -> dict:
    return {
        "id": rule.id,
        "head": render_term(rule.head) if rule.head is not None else None,
        "pbl": [render_term(t) for t in rule.pbl],
        "nbl": [render_term(t) for t in rule.nbl],
        "is_constraint": rule.is_constraint,
    }


def model_json(result: MetaResult) -> dict:
    return {
        "status": result.status,
        "model": [render_term(t) for t in result.model],
        "violated": list(result.violated),
    }


def lookahead_json(result: LookaheadResult) -> dict:
    return {
        "depth_used": result.depth_used,
        "fragments": [render_tree(t) for t in result.fragments],
        "suggestions": [
            {
                "category": s.category,
                "agreement": s.agreement,
                "surfaces": list(s.surfaces),
            }
            for s in result.suggestions
        ],
    }


def create_app(workbench: Optional[Workbench] = None) -> FastAPI:
    bench = workbench or Workbench()
    try:
        bench.suggest("")  # warm the sentence-initial chart before serving
    except Exception:
        pass
    sessions: dict[str, Session] = {}

    app = FastAPI(title="cnlasp", version="0.1.0")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=[os.environ.get("CNLASP_UI_ORIGIN", "*")],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    def get_session(session_id: str) -> Session:
        session = sessions.get(session_id)
        if session is None:
            raise HTTPException(status_code=404, detail="unknown session")
        return session

    @app.post("/sessions")
    def create_session():
        session = Session(id=uuid.uuid4().hex)
        sessions[session.id] = session
        return {"session_id": session.id}

    @app.post("/sessions/{session_id}/lookahead")
    def lookahead(session_id: str, request: LookaheadRequest):
        get_session(session_id)
        bench.maybe_reload_lexicon()
        try:
            result = bench.suggest(request.prefix)
        except UnknownToken as err:
            raise HTTPException(
                status_code=422,
                detail={
                    "error": "unknown_token",
                    "surface": err.surface,
                    "position": err.position,
                },
            ) from None
        except NoContinuation:
            raise HTTPException(
                status_code=422, detail={"error": "no_continuation"}
            ) from None
        return lookahead_json(result)

    @app.post("/sessions/{session_id}/sentences")
    def commit_sentence(session_id: str, request: SentenceRequest):
        session = get_session(session_id)
        bench.maybe_reload_lexicon()
        with session.lock:
            try:
                outcome = bench.commit_sentence(
                    request.text, session.state, sentence_no=len(session.committed_text) + 1
                )
            except (UnknownToken, NoParse, ReifierError, ValueError) as err:
                raise HTTPException(
                    status_code=422, detail={"error": type(err).__name__, "message": str(err)}
                ) from None
            session.state = outcome.state
            session.committed_text.append(request.text)
            session.last_result = outcome.model
            return {
                "trees": 1,
                "rules": [rule_json(r) for r in outcome.rules],
                "model": model_json(outcome.model),
            }

    @app.get("/sessions/{session_id}/model")
    def get_model(session_id: str):
        session = get_session(session_id)
        with session.lock:
            result = session.last_result or evaluate(list(session.state.committed))
            return model_json(result)

    @app.get("/sessions/{session_id}/kb")
    def get_kb(session_id: str):
        session = get_session(session_id)
        with session.lock:
            return {"kb": render_kb(list(session.state.committed))}

    @app.delete("/sessions/{session_id}/sentences/last")
    def retract_last(session_id: str):
        session = get_session(session_id)
        with session.lock:
            if not session.committed_text:
                raise HTTPException(status_code=422, detail={"error": "nothing_to_retract"})
            remaining = session.committed_text[:-1]
            state = ReifierState()
            for number, text in enumerate(remaining, start=1):
                state = bench.commit_sentence(text, state, sentence_no=number).state
            session.committed_text = remaining
            session.state = state
            session.last_result = evaluate(list(state.committed))
            return model_json(session.last_result)

    return app


app = create_app()


def main() -> None:
    import uvicorn

    uvicorn.run(
        "cnlasp.service:app",
        host=os.environ.get("CNLASP_HOST", "127.0.0.1"),
        port=int(os.environ.get("CNLASP_PORT", "8000")),
    )


if __name__ == "__main__":
    main()
