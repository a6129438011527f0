"""JSON-over-HTTP session service consumed by the web frontend.

Endpoints (all JSON unless noted; every response is CORS-enabled):

* ``GET  /api/engines``                    - engine catalog
* ``POST /api/sessions``                   - create a session from a .dpi text
* ``GET  /api/sessions/<id>``              - session state
* ``GET  /api/sessions/<id>/query``        - pending / newly proposed query
* ``POST /api/sessions/<id>/answer``       - answer (true/false) or skip (null)
* ``GET  /api/sessions/<id>/transcript``   - replayable JSON-lines text
* ``POST /api/run``                        - one-shot diagnosis run
* ``POST /api/conformance``                - run the conformance harness

State transitions are validated server-side: 400 for invalid transitions or
bad documents, 404 for unknown sessions, 409 for answers to superseded
queries. Sessions live in memory only; transcripts are the sole export.
"""

from __future__ import annotations

import json
import re
import threading
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from . import taxonomy
from .dpi_format import parse_dpi
from .engines import ENGINE_IDS, run_engine
from .errors import (DiagkitError, NoDiscriminatingMeasurementError,
                     SessionStateError, StaleQueryError)
from .formula import to_text
from .model import DiagnosisQuery
from .reasoner import SatOracle
from .sequential import (DEFAULT_LEADING_K, DEFAULT_PROBABILITY_THRESHOLD,
                         Session, create_session, ingest_answer, next_query,
                         skip_query)

__all__ = ["SessionService", "serve_sessions", "FORMAT_VERSION"]

FORMAT_VERSION = 1

_ENGINE_NOTES = {
    "hs_tree": "breadth-first hitting-set tree; diagnoses in cardinality order",
    "ucs_hs_tree": "uniform-cost hitting-set tree; diagnoses in probability order",
    "inv_hs_tree": "direct duality-based engine; no output order guarantee",
    "greedy_heuristic": "randomized greedy descent; sound but incomplete",
    "brute_force": "exhaustive oracle; small instances only",
}


@dataclass
class _SessionBox:
    session: Session
    oracle: SatOracle
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionService:
    """In-memory session registry; one lock per session serializes operations."""

    def __init__(self):
        self._sessions: dict[str, _SessionBox] = {}
        self._registry_lock = threading.Lock()
        self._counter = 0

    # -- session operations, transport-agnostic -------------------------------

    def create(self, payload: dict) -> dict:
        dpi_text = payload.get("dpi_text")
        if not isinstance(dpi_text, str) or not dpi_text.strip():
            raise _BadRequest("dpi_text (the .dpi document) is required")
        engine = payload.get("engine", "hs_tree")
        if engine not in ENGINE_IDS:
            raise _BadRequest(f"unknown engine {engine!r}")
        oracle = SatOracle()
        dpi = parse_dpi(dpi_text, oracle)
        session = create_session(
            dpi, engine=engine,
            leading_k=int(payload.get("leading_k", DEFAULT_LEADING_K)),
            mode=payload.get("mode", "stateless"),
            threshold=float(payload.get("threshold", DEFAULT_PROBABILITY_THRESHOLD)),
            oracle=oracle)
        with self._registry_lock:
            self._counter += 1
            sid = f"s{self._counter}"
            self._sessions[sid] = _SessionBox(session, oracle)
        return self.state(sid)

    def _box(self, sid: str) -> _SessionBox:
        box = self._sessions.get(sid)
        if box is None:
            raise _NotFound(f"unknown session {sid!r}")
        return box

    def state(self, sid: str) -> dict:
        box = self._box(sid)
        with box.lock:
            return self._state_payload(sid, box.session)

    def _state_payload(self, sid: str, session: Session) -> dict:
        dpi = session.dpi
        return {
            "format_version": FORMAT_VERSION,
            "session_id": sid,
            "instance": dpi.name,
            "engine": session.engine,
            "mode": session.mode,
            "status": session.status,
            "leading": [
                {"components": [dpi.comps[i].name for i in d],
                 "probability": round(p, 6)}
                for d, p in zip(session.leading, session.probabilities)
            ],
            "final": [dpi.comps[i].name for i in session.final]
            if session.final is not None else None,
            "measurement_count": session.measurement_count,
            "history": [{"atom": atom, "answer": answer}
                        for atom, answer in session.history],
            "skipped": sorted(session.skipped),
        }

    def query(self, sid: str) -> dict:
        box = self._box(sid)
        with box.lock:
            if box.session.status != "active":
                raise _BadRequest("session is done; no further queries")
            try:
                box.session, query = next_query(box.session, box.oracle)
            except NoDiscriminatingMeasurementError as exc:
                raise _BadRequest(str(exc)) from None
            state = self._state_payload(sid, box.session)
            return {
                "format_version": FORMAT_VERSION,
                "session_id": sid,
                "query_id": query.query_id,
                "proposition": to_text(query.proposition),
                "partition": {"yes": len(query.d_yes), "no": len(query.d_no),
                              "undecided": len(query.d_undecided)},
                "leading": state["leading"],
                "status": state["status"],
            }

    def answer(self, sid: str, payload: dict) -> dict:
        box = self._box(sid)
        query_id = payload.get("query_id")
        if not isinstance(query_id, int):
            raise _BadRequest("query_id (integer) is required")
        answer = payload.get("answer", None)
        if answer not in (True, False, None):
            raise _BadRequest("answer must be true, false or null (skip)")
        with box.lock:
            session = box.session
            pending = session.pending
            if pending is None or pending.query_id != query_id:
                raise _Conflict(f"query {query_id} has been superseded")
            try:
                if answer is None:
                    box.session = skip_query(session, pending)
                else:
                    box.session = ingest_answer(session, pending, answer, box.oracle)
            except StaleQueryError as exc:
                raise _Conflict(str(exc)) from None
            except SessionStateError as exc:
                raise _BadRequest(str(exc)) from None
            return self._state_payload(sid, box.session)

    def transcript(self, sid: str) -> str:
        box = self._box(sid)
        with box.lock:
            return "\n".join(box.session.transcript) + "\n"

    def engines(self) -> dict:
        return {
            "format_version": FORMAT_VERSION,
            "engines": [
                {"id": engine, "description": _ENGINE_NOTES[engine],
                 "claimed_features": taxonomy.claimed_vector(engine).__dict__}
                for engine in ENGINE_IDS
            ],
        }

    def run_oneshot(self, payload: dict) -> dict:
        dpi_text = payload.get("dpi_text")
        if not isinstance(dpi_text, str) or not dpi_text.strip():
            raise _BadRequest("dpi_text (the .dpi document) is required")
        engine = payload.get("engine", "hs_tree")
        k = payload.get("k", "all")
        if k != "all":
            k = int(k)
        order = payload.get("order")
        if order is None:
            order = "probability" if engine == "ucs_hs_tree" else (
                "cardinality" if engine in ("hs_tree", "brute_force") else "none")
        oracle = SatOracle()
        dpi = parse_dpi(dpi_text, oracle)
        query = DiagnosisQuery(k=k, property_=payload.get("property", "none"),
                               order=order)
        result = run_engine(engine, dpi, query, oracle,
                            seed=int(payload.get("seed", 0)))
        return {
            "format_version": FORMAT_VERSION,
            "engine": result.engine,
            "instance": dpi.name,
            "diagnoses": [[dpi.comps[i].name for i in d] for d in result.diagnoses],
            "probabilities": [round(p, 9) for p in result.probabilities]
            if result.probabilities is not None else None,
            "stats": result.stats.__dict__,
        }

    def run_conformance(self, payload: dict) -> dict:
        report = taxonomy.run_conformance(
            seed=int(payload.get("seed", 42)),
            count=int(payload.get("count", 12)),
            n_components=int(payload.get("n_components", 5)))
        return json.loads(taxonomy.emit_table(report, "json"))


class _BadRequest(DiagkitError):
    status = 400


class _NotFound(DiagkitError):
    status = 404


class _Conflict(DiagkitError):
    status = 409


_ROUTES = (
    ("GET", re.compile(r"^/api/engines$"), "engines"),
    ("POST", re.compile(r"^/api/sessions$"), "create"),
    ("GET", re.compile(r"^/api/sessions/(?P<sid>[^/]+)$"), "state"),
    ("GET", re.compile(r"^/api/sessions/(?P<sid>[^/]+)/query$"), "query"),
    ("POST", re.compile(r"^/api/sessions/(?P<sid>[^/]+)/answer$"), "answer"),
    ("GET", re.compile(r"^/api/sessions/(?P<sid>[^/]+)/transcript$"), "transcript"),
    ("POST", re.compile(r"^/api/run$"), "run_oneshot"),
    ("POST", re.compile(r"^/api/conformance$"), "run_conformance"),
)


def _make_handler(service: SessionService):
    class Handler(BaseHTTPRequestHandler):
        protocol_version = "HTTP/1.1"

        def log_message(self, *args):  # tests and CLI stay quiet
            pass

        def _cors(self):
            self.send_header("Access-Control-Allow-Origin", "*")
            self.send_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS")
            self.send_header("Access-Control-Allow-Headers", "Content-Type")

        def _respond(self, status: int, body: bytes, content_type: str):
            self.send_response(status)
            self._cors()
            self.send_header("Content-Type", content_type)
            self.send_header("Content-Length", str(len(body)))
            self.end_headers()
            self.wfile.write(body)

        def _respond_json(self, status: int, payload: dict):
            self._respond(status, json.dumps(payload).encode(),
                          "application/json; charset=utf-8")

        def _payload(self) -> dict:
            length = int(self.headers.get("Content-Length") or 0)
            if length == 0:
                return {}
            try:
                return json.loads(self.rfile.read(length))
            except json.JSONDecodeError as exc:
                raise _BadRequest(f"invalid JSON body: {exc}") from None

        def do_OPTIONS(self):
            self._respond(204, b"", "text/plain")

        def _dispatch(self, method: str):
            for verb, pattern, name in _ROUTES:
                match = pattern.match(self.path)
                if match and verb == method:
                    try:
                        kwargs = match.groupdict()
                        if method == "POST":
                            result = getattr(service, name)(**kwargs,
                                                            payload=self._payload())
                        else:
                            result = getattr(service, name)(**kwargs)
                    except (_BadRequest, _NotFound, _Conflict) as exc:
                        self._respond_json(exc.status, {"error": {
                            "code": exc.status, "message": str(exc)}})
                        return
                    except DiagkitError as exc:
                        self._respond_json(400, {"error": {
                            "code": 400, "message": str(exc)}})
                        return
                    if isinstance(result, str):
                        self._respond(200, result.encode(),
                                      "text/plain; charset=utf-8")
                    else:
                        self._respond_json(201 if name == "create" else 200, result)
                    return
            self._respond_json(404, {"error": {"code": 404,
                                               "message": f"no route for {self.path}"}})

        def do_GET(self):
            self._dispatch("GET")

        def do_POST(self):
            self._dispatch("POST")

    return Handler


def serve_sessions(port: int, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Bind the service; caller runs ``serve_forever`` (CLI) or a thread (tests)."""
    service = SessionService()
    server = ThreadingHTTPServer((host, port), _make_handler(service))
    server.service = service  # type: ignore[attr-defined]
    return server
