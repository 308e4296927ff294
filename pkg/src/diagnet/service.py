"""HTTP API: questionnaire sessions, reports, self-tests, and weight editing.

Field names and status codes are documented in docs/api.md.
"""

from __future__ import annotations

from fractions import Fraction
from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from . import __version__
from .engine import chart_data
from .kb import KBValidationError, InvalidReferenceError, UnknownDiseaseError
from .selftest import optimal_likelihood_profile, self_test
from .sessions import (
    AnswerError,
    KBManager,
    NotFoundError,
    SessionService,
    SessionStateError,
    VersionConflictError,
    VersionUnavailableError,
)


class CreateSessionBody(BaseModel):
    patient_label: str = ""


class AnswerBody(BaseModel):
    indicator_index: int | None = None
    skip: bool = False


class WeightPatchBody(BaseModel):
    d: int
    s: int
    i: int
    w: int | str
    expected_version: int


def kb_payload(kb) -> dict:
    return {
        "version": kb.version,
        "diseases": [{"index": d, "name": kb.diseases[d]} for d in sorted(kb.diseases)],
        "symptoms": [{"index": s, "name": kb.symptoms[s]} for s in sorted(kb.symptoms)],
        "indicators": {str(s): list(kb.indicators[s]) for s in sorted(kb.indicators)},
        "weights": [
            {"d": d, "s": s, "i": i, "w": str(kb.weights[(d, s, i)])}
            for (d, s, i) in sorted(kb.weights)
        ],
    }


def create_app(manager: KBManager, store_root, ui_dir=None) -> FastAPI:
    app = FastAPI(title="diagnet", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    service = SessionService(manager, store_root)
    app.state.service = service
    app.state.manager = manager

    @app.get("/healthz")
    def healthz():
        return {"status": "ok", "kb_version": manager.current.version}

    @app.get("/")
    def index():
        return {
            "service": "diagnet",
            "version": __version__,
            "endpoints": [
                "POST /sessions", "GET /sessions/{id}/question",
                "POST /sessions/{id}/answer", "POST /sessions/{id}/finalize",
                "GET /reports", "GET /reports/{id}",
                "GET /kb", "PATCH /kb/weights",
                "GET /selftest", "GET /selftest/{d}",
                "GET /healthz",
            ],
        }

    @app.post("/sessions", status_code=201)
    def create_session(body: CreateSessionBody):
        session = service.create_session(body.patient_label)
        return {"session": service.session_payload(session)}

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        session = _or_404(lambda: service.get_session(session_id))
        return {"session": service.session_payload(session)}

    @app.get("/sessions/{session_id}/question")
    def next_question(session_id: str):
        return _map_errors(lambda: service.next_question(session_id))

    @app.post("/sessions/{session_id}/answer")
    def record_answer(session_id: str, body: AnswerBody):
        session = _map_errors(lambda: service.record_answer(
            session_id, indicator_index=body.indicator_index, skip=body.skip))
        return {"session": service.session_payload(session)}

    @app.post("/sessions/{session_id}/finalize")
    def finalize(session_id: str):
        report = _map_errors(lambda: service.finalize(session_id))
        return {"report": report}

    @app.get("/reports")
    def list_reports():
        return {"reports": [
            {
                "report_id": doc["report_id"],
                "created_at": doc["created_at"],
                "patient_label": doc["patient_label"],
                "status": doc["status"],
                "selected": None if doc["result"] is None else doc["result"]["selected"],
                "selected_name": None if doc["result"] is None
                else doc["result"]["selected_name"],
            }
            for doc in service.list_reports()
        ]}

    @app.get("/reports/{report_id}")
    def get_report(report_id: str):
        return {"report": _or_404(lambda: service.get_report(report_id))}

    @app.get("/kb")
    def get_kb():
        return {"kb": kb_payload(manager.current)}

    @app.patch("/kb/weights")
    def patch_weight(body: WeightPatchBody):
        try:
            w = Fraction(str(body.w))
        except (ValueError, ZeroDivisionError):
            raise HTTPException(400, f"bad weight value {body.w!r}")
        try:
            edited = manager.edit_weight(body.d, body.s, body.i, w,
                                         expected_version=body.expected_version)
        except VersionConflictError as exc:
            raise HTTPException(409, {
                "error": "version conflict",
                "current_version": exc.current_version,
            })
        except InvalidReferenceError as exc:
            raise HTTPException(400, str(exc))
        except KBValidationError as exc:
            raise HTTPException(400, {
                "error": "edit rejected",
                "violations": [v.message for v in exc.violations],
            })
        return {"version": edited.version}

    @app.get("/selftest")
    def selftest_profile():
        kb = manager.current
        profile = optimal_likelihood_profile(kb)
        payload = profile.to_payload()
        names = kb.diseases
        for entry in payload["entries"]:
            entry["name"] = names[entry["d"]]
        return {"profile": payload}

    @app.get("/selftest/{d}")
    def selftest_disease(d: int):
        try:
            result = self_test(manager.current, d)
        except UnknownDiseaseError as exc:
            raise HTTPException(404, str(exc))
        return {
            "result": result.to_payload(),
            "chart": chart_data(result).to_payload(),
        }

    if ui_dir and Path(ui_dir).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def _or_404(fn):
    try:
        return fn()
    except NotFoundError as exc:
        raise HTTPException(404, str(exc))


def _map_errors(fn):
    try:
        return fn()
    except NotFoundError as exc:
        raise HTTPException(404, str(exc))
    except SessionStateError as exc:
        raise HTTPException(409, str(exc))
    except AnswerError as exc:
        raise HTTPException(400, str(exc))
    except VersionUnavailableError as exc:
        raise HTTPException(409, str(exc))
