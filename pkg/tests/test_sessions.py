import json

import pytest

from diagnet.kb import default_kb
from diagnet.sessions import (
    AnswerError,
    KBManager,
    NotFoundError,
    SessionService,
    SessionStateError,
    VersionConflictError,
    VersionUnavailableError,
    write_text_atomic,
)

# single-choice answer set matching the positive indicators of hypertension
HYPERTENSION_ANSWERS = {2: 2, 3: 3, 5: 1, 6: 4, 9: 1, 21: 1, 41: 3}


@pytest.fixture
def service(tmp_path):
    return SessionService(KBManager(default_kb()), tmp_path / "store")


def answer_all(service, session_id, choices):
    for s in range(1, 47):
        if s in choices:
            service.record_answer(session_id, indicator_index=choices[s])
        else:
            service.record_answer(session_id, skip=True)


def test_create_session_defaults(service):
    session = service.create_session("test")
    assert session.patient_label == "test"
    assert session.cursor == 1
    assert not session.is_finalized
    assert session.kb_version == 1


def test_empty_label_becomes_anonymous(service):
    assert service.create_session("").patient_label == "anonymous"
    assert service.create_session("   ").patient_label == "anonymous"


def test_session_ids_are_unique(service):
    ids = {service.create_session("x").session_id for _ in range(5)}
    assert len(ids) == 5


def test_next_question_walks_catalog(service):
    session = service.create_session("q")
    q = service.next_question(session.session_id)
    assert q == {"done": False, "symptom_index": 1, "symptom": "no symptoms",
                 "indicators": ["yes", "no"]}
    # read twice: no state change
    assert service.next_question(session.session_id) == q
    for _ in range(39):
        service.record_answer(session.session_id, skip=True)
    q40 = service.next_question(session.session_id)
    assert q40["symptom"] == "heart rate"
    assert q40["indicators"] == ["<50", "51-70", "71-90", ">90"]


def test_next_question_done_after_last_symptom(service):
    session = service.create_session("q")
    for _ in range(46):
        service.record_answer(session.session_id, skip=True)
    assert service.next_question(session.session_id) == {"done": True}


def test_record_answer_validates_indicator(service):
    session = service.create_session("x")
    for _ in range(41):
        service.record_answer(session.session_id, skip=True)
    # cursor is now symptom 42 which has 2 indicators
    with pytest.raises(AnswerError):
        service.record_answer(session.session_id, indicator_index=7)
    with pytest.raises(AnswerError):
        service.record_answer(session.session_id)


def test_answer_advances_cursor(service):
    session = service.create_session("x")
    updated = service.record_answer(session.session_id, indicator_index=1)
    assert updated.cursor == 2
    assert updated.answers == [1]
    updated = service.record_answer(session.session_id, skip=True)
    assert updated.answers == [1, None]


def test_finalize_requires_completion(service):
    session = service.create_session("x")
    with pytest.raises(SessionStateError):
        service.finalize(session.session_id)


def test_finalize_hypertension_flow(service):
    session = service.create_session("flow")
    answer_all(service, session.session_id, HYPERTENSION_ANSWERS)
    report = service.finalize(session.session_id)
    assert report["status"] == "ok"
    assert report["result"]["selected"] == 13
    assert report["result"]["selected_name"] == "Hypertension"
    assert report["chart"]["reference"] is not None
    assert "Hypertension" in report["summary"]
    assert report["session"]["answers"][40] == 3  # symptom 41 answer
    stored = service.get_session(session.session_id)
    assert stored.is_finalized


def test_finalize_all_skip_reports_no_signal(service):
    session = service.create_session("empty")
    answer_all(service, session.session_id, {})
    report = service.finalize(session.session_id)
    assert report["status"] == "no_signal"
    assert report["result"] is None
    assert report["chart"] is None
    assert "no signal" in report["summary"]


def test_double_finalize_rejected(service):
    session = service.create_session("x")
    answer_all(service, session.session_id, HYPERTENSION_ANSWERS)
    service.finalize(session.session_id)
    with pytest.raises(SessionStateError):
        service.finalize(session.session_id)
    with pytest.raises(SessionStateError):
        service.record_answer(session.session_id, skip=True)
    with pytest.raises(SessionStateError):
        service.next_question(session.session_id)


def test_reports_survive_restart(tmp_path):
    store = tmp_path / "store"
    service = SessionService(KBManager(default_kb()), store)
    session = service.create_session("durable")
    answer_all(service, session.session_id, HYPERTENSION_ANSWERS)
    report = service.finalize(session.session_id)

    reborn = SessionService(KBManager(default_kb()), store)
    assert reborn.get_report(report["report_id"]) == report
    assert reborn.get_session(session.session_id).is_finalized


def test_reports_list_newest_first(service):
    ids = []
    for k in range(3):
        session = service.create_session(f"p{k}")
        answer_all(service, session.session_id, HYPERTENSION_ANSWERS)
        ids.append(service.finalize(session.session_id)["report_id"])
    listed = [doc["report_id"] for doc in service.list_reports()]
    assert listed == list(reversed(ids))


def test_unknown_ids_raise_not_found(service):
    with pytest.raises(NotFoundError):
        service.get_session("nope")
    with pytest.raises(NotFoundError):
        service.get_report("nope")


def test_kb_edit_does_not_disturb_pinned_session(tmp_path):
    manager = KBManager(default_kb())
    service = SessionService(manager, tmp_path / "store")
    session = service.create_session("pinned")
    answer_all(service, session.session_id, HYPERTENSION_ANSWERS)
    manager.edit_weight(13, 41, 3, 0, expected_version=1)

    report = service.finalize(session.session_id)
    assert report["kb_version"] == 1
    # scored against the snapshot without the edit
    row13 = next(r for r in report["result"]["diseases"] if r["d"] == 13)
    assert row13["agreement"] == pytest.approx(1.0)
    assert row13["likelihood"] == pytest.approx(0.35426, abs=5e-5)

    fresh = service.create_session("after-edit")
    assert fresh.kb_version == 2


def test_manager_cas_and_snapshots(tmp_path):
    manager = KBManager(default_kb())
    edited = manager.edit_weight(13, 41, 3, 0, expected_version=1)
    assert edited.version == 2
    with pytest.raises(VersionConflictError) as exc:
        manager.edit_weight(13, 41, 3, 6, expected_version=1)
    assert exc.value.current_version == 2
    assert manager.snapshot(1).weights[(13, 41, 3)] == 6
    with pytest.raises(VersionUnavailableError):
        manager.snapshot(9)


def test_manager_persists_edits_to_file(tmp_path):
    from diagnet.kb import export_knowledge_base, load_kb_file

    path = tmp_path / "kb.kbtxt"
    path.write_text(export_knowledge_base(default_kb()), "utf-8")
    manager = KBManager(load_kb_file(path), path=path)
    manager.edit_weight(13, 41, 3, 0, expected_version=1)
    reloaded = load_kb_file(path)
    assert (13, 41, 3) not in reloaded.weights


def test_replaying_answers_is_deterministic(tmp_path):
    manager = KBManager(default_kb())
    service = SessionService(manager, tmp_path / "store")
    payloads = []
    for _ in range(2):
        session = service.create_session("replay")
        answer_all(service, session.session_id, HYPERTENSION_ANSWERS)
        report = service.finalize(session.session_id)
        payloads.append(json.dumps(report["result"], sort_keys=True))
    assert payloads[0] == payloads[1]


def test_write_text_atomic_leaves_no_droppings(tmp_path):
    target = tmp_path / "doc.txt"
    write_text_atomic(target, "one")
    write_text_atomic(target, "two")
    assert target.read_text() == "two"
    assert [p.name for p in tmp_path.iterdir()] == ["doc.txt"]
