"""HTTP gateway: every store operation behind a JSON API.

Domain errors map to structured error bodies with the status carried by
the error class. When the config defines an author token table, mutating
session/pathway endpoints require a bearer token; with an empty table
the service runs open and takes author names from request bodies, which
is how the CLI parity tests drive both faces against one store.
"""

from __future__ import annotations

from fastapi import Body, FastAPI, Request, Response
from fastapi.responses import JSONResponse

from . import __version__
from .credibility import EvidenceAssessment, NarrativeAnalysis
from .errors import CanvasError, Forbidden, InvalidPayload
from .intervals import parse_window
from .scopes import DimensionalConstraint
from .store import CanvasStore


def _author_from(request: Request, store: CanvasStore, fallback: str | None = None) -> str | None:
    """Resolve the acting author: bearer token when auth is on, else fallback."""
    if store.config.authors:
        header = request.headers.get("authorization", "")
        if not header.lower().startswith("bearer "):
            raise Forbidden("missing bearer token")
        author = store.config.author_for_token(header[7:].strip())
        if author is None:
            raise Forbidden("unknown bearer token")
        return author
    return fallback


def _require_session_owner(request: Request, store: CanvasStore, session_id: str):
    session = store.pathways.session(session_id)
    author = _author_from(request, store, fallback=session.author)
    if author != session.author:
        raise Forbidden(f"session {session_id} belongs to {session.author}")
    return session


def _entry_doc(store: CanvasStore, entry_id: str) -> dict:
    entry = store.graph.get(entry_id)
    doc = entry.to_doc()
    doc["children"] = store.graph.children(entry_id)
    doc["references"] = store.graph.references(entry_id)
    edge = store.graph.derivation_edge(entry_id)
    doc["derived_from"] = edge.a if edge else None
    return doc


def create_app(store: CanvasStore) -> FastAPI:
    app = FastAPI(title="canvas", version=__version__)

    @app.exception_handler(CanvasError)
    async def canvas_error_handler(request: Request, exc: CanvasError):
        return JSONResponse(status_code=exc.http_status, content={"error": exc.to_doc()})

    # -- meta ------------------------------------------------------------

    @app.get("/meta")
    def meta():
        return {
            "api_version": __version__,
            "schema_version": 1,
            "regions": [
                {"code": code, "name": store.regions.name(code),
                 "members": list(store.regions.members(code))}
                for code in store.regions.codes()
            ],
            "curated_questions": [
                {"id": q["id"], "text": q["text"]}
                for q in sorted(store.questions.values(), key=lambda q: q["id"])
            ],
            "auth_required": bool(store.config.authors),
        }

    @app.get("/questions")
    def questions():
        return sorted(store.questions.values(), key=lambda q: q["id"])

    # -- query and entries -------------------------------------------------

    @app.post("/query")
    def query(body: dict = Body(...)):
        resolution, parsed = store.resolve_query(body.get("text", ""))
        return {
            "resolution": resolution.to_doc(),
            "parsed": parsed.to_doc() if parsed else None,
        }

    @app.get("/entries/{entry_id}")
    def get_entry(entry_id: str):
        return _entry_doc(store, entry_id)

    @app.get("/entries/{entry_id}/zoom/{dimension}")
    def zoom(entry_id: str, dimension: str, window: str | None = None,
             session: str | None = None):
        interval = parse_window(window) if window else None
        result = store.zoom(entry_id, dimension, interval, session)
        return {"entry_id": entry_id, "dimension": dimension, "result": result}

    @app.post("/entries/{entry_id}/derive")
    def derive(entry_id: str, body: dict = Body(...)):
        constraint = DimensionalConstraint.from_doc(body)
        entry, created = store.derive_constrained(entry_id, constraint)
        return {"entry": _entry_doc(store, entry.id), "created": created}

    @app.patch("/entries/{entry_id}")
    def update_entry(entry_id: str, body: dict = Body(...)):
        edits = body.get("edits")
        if not isinstance(edits, list):
            raise InvalidPayload("body needs an 'edits' list")
        touched = store.update_entry(entry_id, edits)
        return {"entry": _entry_doc(store, entry_id), "touched": [e.id for e in touched]}

    @app.get("/entries/{entry_id}/blocks/{block_id}/badge")
    def badge(entry_id: str, block_id: str):
        return store.credibility_badge(entry_id, block_id)

    # -- sources and reports --------------------------------------------------

    @app.get("/sources")
    def sources():
        return [
            {"source": s.to_doc(), "profile": store.credibility.profile(s.id).to_doc()}
            for s in store.credibility.sources()
        ]

    @app.post("/sources")
    def create_source(body: dict = Body(...)):
        source = store.create_source(
            body.get("name", ""), body.get("kind", ""),
            body.get("affiliations") or (), body.get("id"),
        )
        return {"source": source.to_doc(),
                "profile": store.credibility.profile(source.id).to_doc()}

    @app.get("/sources/{source_id}")
    def get_source(source_id: str):
        source = store.credibility.source(source_id)
        return {"source": source.to_doc(),
                "profile": store.credibility.profile(source_id).to_doc()}

    @app.get("/sources/{source_id}/reports")
    def source_reports(source_id: str):
        store.credibility.source(source_id)
        return [r.to_doc() for r in store.credibility.reports()
                if r.source_id == source_id]

    @app.post("/sources/{source_id}/reports")
    def add_report(source_id: str, body: dict = Body(...)):
        report = store.ingest_report(
            source_id,
            body.get("entry_id", ""),
            body.get("block_id", ""),
            EvidenceAssessment.from_doc(body.get("evidence") or {}),
            NarrativeAnalysis.from_doc(body.get("narrative") or {}),
            body.get("report_id"),
        )
        return report.to_doc()

    # -- sessions ---------------------------------------------------------

    @app.post("/sessions")
    def create_session(request: Request, body: dict = Body(default={})):
        author = _author_from(request, store, fallback=body.get("author") or "operator")
        return store.create_session(author).to_doc()

    @app.get("/sessions/{session_id}")
    def get_session(request: Request, session_id: str):
        return _require_session_owner(request, store, session_id).to_doc()

    @app.post("/sessions/{session_id}/events")
    def record_event(request: Request, session_id: str, body: dict = Body(...)):
        _require_session_owner(request, store, session_id)
        session, node = store.record_event(
            session_id, body.get("kind", ""), body.get("payload") or {},
            body.get("timestamp"), body.get("relation", "followed_by"),
        )
        return {"session_id": session.id, "node": node.to_doc(),
                "current_node": session.current_node}

    @app.post("/sessions/{session_id}/exclusions")
    def add_exclusion(request: Request, session_id: str, body: dict = Body(...)):
        _require_session_owner(request, store, session_id)
        session, node = store.add_exclusion(
            session_id, body.get("source_id", ""), body.get("note", ""),
        )
        return {
            "session_id": session.id,
            "node": node.to_doc(),
            "exclusions": session.to_doc()["exclusions"],
        }

    @app.post("/sessions/{session_id}/archive")
    def archive(request: Request, session_id: str):
        _require_session_owner(request, store, session_id)
        return store.archive_session(session_id).to_doc()

    # -- pathways -----------------------------------------------------------

    @app.get("/pathways")
    def pathways(request: Request, author: str | None = None):
        caller = _author_from(request, store, fallback=author)
        return [
            {
                "id": p.id, "version": p.version, "author": p.author,
                "parent_version": list(p.parent_version) if p.parent_version else None,
                "node_count": len(p.nodes), "created_at": p.created_at,
            }
            for p in store.visible_pathways(caller)
        ]

    @app.get("/pathways/{pathway_id}/{version}")
    def get_pathway(request: Request, pathway_id: str, version: int,
                    author: str | None = None):
        caller = _author_from(request, store, fallback=author)
        store.require_pathway_access(pathway_id, version, caller)
        return store.pathways.pathway(pathway_id, version).to_doc()

    @app.post("/pathways/{pathway_id}/{version}/branch")
    def branch(request: Request, pathway_id: str, version: int,
               body: dict = Body(default={})):
        caller = _author_from(request, store, fallback=body.get("author") or "operator")
        store.require_pathway_access(pathway_id, version, caller)
        session = store.branch_pathway(pathway_id, version, caller, body.get("node_id"))
        return session.to_doc()

    @app.post("/pathways/{pathway_id}/{version}/share")
    def share(request: Request, pathway_id: str, version: int, body: dict = Body(...)):
        pathway = store.pathways.pathway(pathway_id, version)
        caller = _author_from(request, store, fallback=pathway.author)
        if caller != pathway.author:
            raise Forbidden("only the author may share a pathway")
        recipient = body.get("recipient", "")
        if not recipient:
            raise InvalidPayload("share needs a recipient (author id or '*')")
        token = store.share_pathway(pathway_id, version, recipient)
        return {"pathway_id": pathway_id, "version": version,
                "recipient": recipient, "token": token}

    @app.get("/pathways/{pathway_id}/{version}/report")
    def pathway_report(request: Request, pathway_id: str, version: int,
                       author: str | None = None):
        caller = _author_from(request, store, fallback=author)
        store.require_pathway_access(pathway_id, version, caller)
        return Response(content=store.pathway_report(pathway_id, version),
                        media_type="application/json")

    # -- suggestion -----------------------------------------------------------

    @app.get("/suggest")
    def suggest(signature: str):
        return store.suggest_next(signature)

    return app
