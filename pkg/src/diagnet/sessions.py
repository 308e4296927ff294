"""Questionnaire sessions, diagnosis reports, and their file-backed store.

Sessions walk the symptom catalog one question at a time; answers are pinned
to the knowledge-base version the session was created with, so weight edits
never change an in-flight or past diagnosis. Reports are immutable JSON
documents, one file per report, and survive process restarts.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path

from . import render
from .engine import NoSignalError, ResponseMatrix, chart_data, diagnose
from .kb import KnowledgeBase, export_knowledge_base, set_weight

ANONYMOUS_LABEL = "anonymous"


class NotFoundError(Exception):
    pass


class SessionStateError(Exception):
    """The session is in the wrong state for the requested operation."""


class AnswerError(Exception):
    """The submitted answer does not reference a defined indicator slot."""


class VersionConflictError(Exception):
    def __init__(self, expected: int, current: int):
        super().__init__(f"expected knowledge-base version {expected}, "
                         f"current is {current}")
        self.current_version = current


class VersionUnavailableError(Exception):
    def __init__(self, version: int):
        super().__init__(f"knowledge-base version {version} is not available "
                         f"in this process")
        self.version = version


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="microseconds")


def write_text_atomic(path, text: str) -> None:
    """Write via a temp file in the same directory plus rename."""
    path = Path(path)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class KBManager:
    """Holds the current knowledge base and serializes weight edits.

    Edits use compare-and-swap on the snapshot version; when a file path is
    configured, every accepted edit is persisted to it atomically. Past
    snapshots stay available so pinned sessions keep scoring against the
    version they were created with.
    """

    def __init__(self, kb: KnowledgeBase, path=None):
        self._lock = threading.Lock()
        self._snapshots = {kb.version: kb}
        self._current = kb
        self._path = str(path) if path else None

    @property
    def current(self) -> KnowledgeBase:
        return self._current

    @property
    def path(self) -> str | None:
        return self._path

    def snapshot(self, version: int) -> KnowledgeBase:
        try:
            return self._snapshots[version]
        except KeyError:
            raise VersionUnavailableError(version) from None

    def edit_weight(self, d: int, s: int, i: int, w,
                    expected_version: int) -> KnowledgeBase:
        with self._lock:
            if expected_version != self._current.version:
                raise VersionConflictError(expected_version, self._current.version)
            edited = set_weight(self._current, d, s, i, w)
            if self._path:
                write_text_atomic(self._path, export_knowledge_base(edited))
            self._snapshots[edited.version] = edited
            self._current = edited
            return edited


class DocumentStore:
    """One JSON document per id in a single directory; writes are atomic."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _path(self, doc_id: str) -> Path:
        return self.root / f"{doc_id}.json"

    def save(self, doc_id: str, doc: dict) -> None:
        write_text_atomic(self._path(doc_id),
                          json.dumps(doc, ensure_ascii=False, indent=2))

    def load(self, doc_id: str) -> dict:
        path = self._path(doc_id)
        if not path.exists():
            raise NotFoundError(f"no document {doc_id} under {self.root}")
        return json.loads(path.read_text("utf-8"))

    def list_all(self) -> list[dict]:
        """All documents, newest first by their created_at field."""
        docs = [json.loads(p.read_text("utf-8")) for p in self.root.glob("*.json")]
        docs.sort(key=lambda d: (d.get("created_at", ""), d.get("report_id", "")),
                  reverse=True)
        return docs


@dataclass
class Session:
    session_id: str
    patient_label: str
    kb_version: int
    created_at: str
    answers: list[int | None] = field(default_factory=list)  # None = skipped
    finalized_at: str | None = None

    @property
    def cursor(self) -> int:
        return len(self.answers) + 1

    @property
    def is_finalized(self) -> bool:
        return self.finalized_at is not None

    def to_doc(self) -> dict:
        return {
            "session_id": self.session_id,
            "patient_label": self.patient_label,
            "kb_version": self.kb_version,
            "created_at": self.created_at,
            "answers": self.answers,
            "finalized_at": self.finalized_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Session":
        return cls(
            session_id=doc["session_id"],
            patient_label=doc["patient_label"],
            kb_version=doc["kb_version"],
            created_at=doc["created_at"],
            answers=list(doc.get("answers", [])),
            finalized_at=doc.get("finalized_at"),
        )


class SessionService:
    """Drives questionnaire sessions and produces persistent reports."""

    def __init__(self, manager: KBManager, store_root):
        self.manager = manager
        root = Path(store_root)
        self.sessions = DocumentStore(root / "sessions")
        self.reports = DocumentStore(root / "reports")
        self._locks: dict[str, threading.Lock] = {}
        self._locks_guard = threading.Lock()

    def _lock_for(self, session_id: str) -> threading.Lock:
        with self._locks_guard:
            return self._locks.setdefault(session_id, threading.Lock())

    def _kb_for(self, session: Session) -> KnowledgeBase:
        return self.manager.snapshot(session.kb_version)

    def create_session(self, patient_label: str = "") -> Session:
        session = Session(
            session_id=uuid.uuid4().hex,
            patient_label=patient_label.strip() or ANONYMOUS_LABEL,
            kb_version=self.manager.current.version,
            created_at=_now(),
        )
        self.sessions.save(session.session_id, session.to_doc())
        return session

    def get_session(self, session_id: str) -> Session:
        return Session.from_doc(self.sessions.load(session_id))

    def session_payload(self, session: Session) -> dict:
        kb = self._kb_for(session)
        return {
            "session_id": session.session_id,
            "patient_label": session.patient_label,
            "kb_version": session.kb_version,
            "cursor": session.cursor,
            "answered": len(session.answers),
            "total_symptoms": len(kb.symptoms),
            "finalized": session.is_finalized,
            "created_at": session.created_at,
            "finalized_at": session.finalized_at,
        }

    def next_question(self, session_id: str) -> dict:
        session = self.get_session(session_id)
        if session.is_finalized:
            raise SessionStateError("session is finalized")
        kb = self._kb_for(session)
        s = session.cursor
        if s > len(kb.symptoms):
            return {"done": True}
        return {
            "done": False,
            "symptom_index": s,
            "symptom": kb.symptoms[s],
            "indicators": list(kb.indicators[s]),
        }

    def record_answer(self, session_id: str, indicator_index: int | None = None,
                      skip: bool = False) -> Session:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            if session.is_finalized:
                raise SessionStateError("session is finalized")
            kb = self._kb_for(session)
            s = session.cursor
            if s > len(kb.symptoms):
                raise SessionStateError("questionnaire already complete; finalize it")
            if skip:
                session.answers.append(None)
            else:
                if indicator_index is None:
                    raise AnswerError("either indicator_index or skip is required")
                if not kb.has_indicator(s, indicator_index):
                    raise AnswerError(
                        f"indicator {indicator_index} is out of range for symptom {s} "
                        f"({len(kb.indicators[s])} defined)")
                session.answers.append(int(indicator_index))
            self.sessions.save(session.session_id, session.to_doc())
            return session

    def finalize(self, session_id: str) -> dict:
        with self._lock_for(session_id):
            session = self.get_session(session_id)
            if session.is_finalized:
                raise SessionStateError("session is already finalized")
            kb = self._kb_for(session)
            if session.cursor <= len(kb.symptoms):
                raise SessionStateError(
                    f"incomplete session: at question {session.cursor} "
                    f"of {len(kb.symptoms)}")
            responses = ResponseMatrix.from_answers({
                s: i for s, i in enumerate(session.answers, start=1) if i is not None
            })
            try:
                result = diagnose(kb, responses)
                status = "ok"
            except NoSignalError:
                result = None
                status = "no_signal"
            session.finalized_at = _now()
            report = build_report(session, status, result)
            self.reports.save(report["report_id"], report)
            self.sessions.save(session.session_id, session.to_doc())
            return report

    def list_reports(self) -> list[dict]:
        return self.reports.list_all()

    def get_report(self, report_id: str) -> dict:
        return self.reports.load(report_id)


def build_report(session: Session, status: str, result) -> dict:
    """Assemble the immutable report document for a finalized session."""
    chart = None if result is None else chart_data(result).to_payload()
    return {
        "report_id": session.session_id,
        "created_at": session.finalized_at,
        "patient_label": session.patient_label,
        "kb_version": session.kb_version,
        "status": status,
        "result": None if result is None else result.to_payload(),
        "chart": chart,
        "summary": render.report_summary(session, status, result),
        "session": session.to_doc(),
    }
