"""Persistent store: canonical NDJSON snapshot plus a write-ahead log.

Every record is one line: {"body": ..., "id": ..., "kind": ...,
"schema_version": 1} with sorted keys, compact separators, ASCII escapes
and LF endings. The canonical snapshot sorts records by (kind, id), so
export -> load -> export is byte-identical. Mutations append one
transaction per line to store.wal ({"tx": [record, ...]}); a transaction
is the complete record-set touched by one atomic operation, so replaying
any prefix of the log yields a store that satisfies every invariant. A
torn trailing line (no newline) is discarded on load, the classic
write-ahead contract.

This module is also the orchestration facade: the HTTP service and the
CLI both drive the same CanvasStore methods, which is what makes their
store digests comparable.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from pathlib import Path
from typing import Callable, Iterable

from . import report as report_mod
from .credibility import (
    CredibilityReport,
    CredibilityStore,
    EvidenceAssessment,
    NarrativeAnalysis,
    ScoringConfig,
    Source,
    SourceProfile,
)
from .errors import (
    DuplicateId,
    InvalidPayload,
    InvariantViolation,
    IoError,
    NoMatch,
    ParseError,
    StoreLocked,
    UnknownEntry,
    UnknownPathway,
    UnknownSource,
    UnsupportedSchema,
)
from .graph import GraphStore, utc_now
from .intervals import DateInterval
from .model import ContentBlock, KnowledgeEntry, Relationship
from .pathways import InteractionNode, Pathway, PathwayStore, Session, node_signature
from .query import ParsedQuery, Resolution, parse_query, pick_target, seed_title, suggested_zooms
from .regions import RegionTable
from .scopes import DimensionalConstraint, Scope
from .taxonomy import Taxonomy, TaxonomyNode

SCHEMA_VERSION = 1
SNAPSHOT_FILE = "store.ndjson"
WAL_FILE = "store.wal"
LOCK_FILE = "store.lock"
CONFIG_FILE = "config.json"

RECORD_KINDS = (
    "curated_question",
    "entry",
    "pathway",
    "profile",
    "region",
    "relationship",
    "report",
    "session",
    "share",
    "source",
    "taxonomy_node",
)


def canonical_line(kind: str, record_id: str, body: dict) -> str:
    return json.dumps(
        {"body": body, "id": record_id, "kind": kind, "schema_version": SCHEMA_VERSION},
        sort_keys=True, separators=(",", ":"), ensure_ascii=True,
    )


def canonical_json(doc) -> bytes:
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode()


def default_clock() -> str:
    frozen = os.environ.get("CANVAS_FROZEN_NOW")
    if frozen:
        return frozen
    return utc_now()


class StoreConfig:
    """Operator configuration living in config.json, outside the record store."""

    def __init__(self, doc: dict | None = None):
        doc = doc or {}
        self.authors: dict[str, str] = dict(doc.get("authors") or {})
        self.seeding_enabled: bool = bool(doc.get("seeding_enabled", True))
        scoring = doc.get("scoring") or {}
        base = ScoringConfig()
        self.scoring = ScoringConfig(
            weights={**base.weights, **(scoring.get("weights") or {})},
            alpha=float(scoring.get("alpha", base.alpha)),
            beta=float(scoring.get("beta", base.beta)),
        )

    def author_for_token(self, token: str) -> str | None:
        for author, expected in self.authors.items():
            if expected == token:
                return author
        return None

    @classmethod
    def load(cls, path: Path) -> "StoreConfig":
        if not path.exists():
            return cls()
        try:
            return cls(json.loads(path.read_text(encoding="utf-8")))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad config file {path}: {exc}")


class CanvasStore:
    """All module stores behind one single-writer mutation facade."""

    def __init__(self, data_dir: str | Path | None = None,
                 clock: Callable[[], str] = default_clock,
                 config: StoreConfig | None = None):
        self.clock = clock
        self.config = config or StoreConfig()
        self.regions = RegionTable()
        self.graph = GraphStore(self.regions, clock)
        self.credibility = CredibilityStore(self.config.scoring)
        self.taxonomy = Taxonomy()
        self.pathways = PathwayStore()
        self.questions: dict[str, dict] = {}  # id -> {text, resolution}
        self._mutex = threading.RLock()
        self._wal_handle = None
        self._lock_path: Path | None = None
        self.data_dir = Path(data_dir) if data_dir is not None else None
        if self.data_dir is not None:
            self._attach(self.data_dir)

    # ------------------------------------------------------------------
    # attachment, locking, loading
    # ------------------------------------------------------------------

    def _attach(self, data_dir: Path):
        data_dir.mkdir(parents=True, exist_ok=True)
        self.config = StoreConfig.load(data_dir / CONFIG_FILE)
        self.credibility.config = self.config.scoring
        self._acquire_lock(data_dir / LOCK_FILE)
        try:
            snapshot = data_dir / SNAPSHOT_FILE
            if snapshot.exists():
                self._load_snapshot(snapshot)
            wal = data_dir / WAL_FILE
            if wal.exists():
                self._replay_wal(wal)
            self.validate_all()
            self._wal_handle = open(wal, "a", encoding="utf-8")
        except BaseException:
            self._release_lock()
            raise

    def _acquire_lock(self, path: Path):
        try:
            fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            pid_text = path.read_text(encoding="utf-8").strip() or "0"
            try:
                os.kill(int(pid_text), 0)
            except (ProcessLookupError, ValueError):
                path.unlink()  # stale lock from a dead process
                return self._acquire_lock(path)
            except PermissionError:
                pass
            raise StoreLocked(f"data dir locked by pid {pid_text} ({path})")
        with os.fdopen(fd, "w") as handle:
            handle.write(str(os.getpid()))
        self._lock_path = path

    def _release_lock(self):
        if self._lock_path is not None and self._lock_path.exists():
            self._lock_path.unlink()
        self._lock_path = None

    def close(self):
        with self._mutex:
            if self._wal_handle is not None:
                self._wal_handle.close()
                self._wal_handle = None
            self._release_lock()

    def __enter__(self):
        return self

    def __exit__(self, *exc):
        self.close()

    def _load_snapshot(self, path: Path):
        seen: set[tuple[str, str]] = set()
        for line_no, raw in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
            if not raw.strip():
                continue
            record = self._parse_record(raw, line_no)
            key = (record["kind"], record["id"])
            if key in seen:
                raise ParseError(f"duplicate record {key}", line_no)
            seen.add(key)
            self._apply_record(record, line_no)

    def _replay_wal(self, path: Path):
        data = path.read_text(encoding="utf-8")
        if not data:
            return
        lines = data.split("\n")
        if lines and lines[-1] == "":
            lines.pop()
        elif lines:
            lines.pop()  # torn trailing line without newline: discard
        for line_no, raw in enumerate(lines, 1):
            if not raw.strip():
                continue
            try:
                tx = json.loads(raw)
            except json.JSONDecodeError as exc:
                raise ParseError(f"bad WAL transaction: {exc}", line_no)
            if not isinstance(tx, dict) or not isinstance(tx.get("tx"), list):
                raise ParseError("WAL line is not a transaction", line_no)
            for record in tx["tx"]:
                self._apply_record(self._check_record(record, line_no), line_no)

    def _parse_record(self, raw: str, line_no: int) -> dict:
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(str(exc), line_no)
        return self._check_record(record, line_no)

    def _check_record(self, record, line_no: int) -> dict:
        if not isinstance(record, dict):
            raise ParseError("record is not an object", line_no)
        kind = record.get("kind")
        if kind not in RECORD_KINDS:
            raise ParseError(f"unknown record kind {kind!r}", line_no)
        version = record.get("schema_version")
        if version != SCHEMA_VERSION:
            raise UnsupportedSchema(
                f"line {line_no}: schema_version {version!r}, supported: {SCHEMA_VERSION}"
            )
        if "id" not in record or not isinstance(record.get("body"), dict):
            raise ParseError("record needs id and body", line_no)
        return record

    def _apply_record(self, record: dict, line_no: int):
        kind, body = record["kind"], record["body"]
        try:
            if kind == "entry":
                self.graph._entries[body["id"]] = KnowledgeEntry.from_doc(body)
            elif kind == "relationship":
                self.graph.insert_relationship_record(Relationship.from_doc(body))
            elif kind == "source":
                self.credibility.insert_source_record(Source.from_doc(body))
            elif kind == "profile":
                self.credibility.insert_profile_record(SourceProfile.from_doc(body))
            elif kind == "report":
                self.credibility.insert_report_record(CredibilityReport.from_doc(body))
            elif kind == "taxonomy_node":
                self.taxonomy.insert_node_record(TaxonomyNode.from_doc(body))
            elif kind == "pathway":
                self.pathways.insert_pathway_record(Pathway.from_doc(body))
            elif kind == "session":
                self.pathways.insert_session_record(Session.from_doc(body))
            elif kind == "share":
                self.pathways.insert_share_record(body)
            elif kind == "region":
                self.regions.add(body["code"], body["name"], body.get("members") or ())
            elif kind == "curated_question":
                self.questions[body["id"]] = {
                    "id": body["id"],
                    "text": body["text"],
                    "resolution": body["resolution"],
                }
        except KeyError as exc:
            raise ParseError(f"{kind} record missing field {exc}", line_no)

    def validate_all(self):
        self.graph.validate_invariants()
        self.taxonomy.validate_invariants(entry_exists=lambda eid: eid in self.graph)
        self.credibility.validate_invariants(
            entry_lookup=lambda eid: self.graph._entries.get(eid)
        )
        self.pathways.validate_invariants()
        for entry in self.graph.entries():
            for block in entry.blocks:
                for cited in block.citations:
                    if cited not in self.credibility:
                        raise InvariantViolation(
                            f"entry {entry.id} block {block.block_id} cites unknown "
                            f"source {cited!r}"
                        )
        for question in self.questions.values():
            target = question["resolution"].get("target_entry_id")
            if target not in self.graph:
                raise InvariantViolation(
                    f"curated question {question['id']} targets missing entry {target!r}"
                )
        self._validate_event_refs()

    def _validate_event_refs(self):
        def check_nodes(label: str, nodes: Iterable[InteractionNode]):
            for node in nodes:
                payload = node.payload
                if node.kind in ("content_view", "zoom"):
                    if payload["entry_id"] not in self.graph:
                        raise InvariantViolation(
                            f"{label}: node {node.id} references missing entry "
                            f"{payload['entry_id']!r}"
                        )
                elif node.kind == "source_evaluation":
                    try:
                        self.credibility.report(payload["report_id"])
                    except Exception:
                        raise InvariantViolation(
                            f"{label}: node {node.id} references missing report "
                            f"{payload['report_id']!r}"
                        )
                elif node.kind == "source_exclusion":
                    if payload["source_id"] not in self.credibility:
                        raise InvariantViolation(
                            f"{label}: node {node.id} references missing source "
                            f"{payload['source_id']!r}"
                        )

        for session in self.pathways.sessions():
            check_nodes(f"session {session.id}", session.nodes)
        for pathway in self.pathways.pathways():
            check_nodes(f"pathway {pathway.id} v{pathway.version}", pathway.nodes)

    # ------------------------------------------------------------------
    # serialization
    # ------------------------------------------------------------------

    def iter_records(self) -> list[tuple[str, str, dict]]:
        records: list[tuple[str, str, dict]] = []
        for qid in sorted(self.questions):
            records.append(("curated_question", qid, self.questions[qid]))
        for entry in self.graph.entries():
            records.append(("entry", entry.id, entry.to_doc()))
        for pathway in self.pathways.pathways():
            records.append(("pathway", f"{pathway.id}:{pathway.version:06d}", pathway.to_doc()))
        for profile in self.credibility.profiles():
            records.append(("profile", profile.source_id, profile.to_doc()))
        for region in self.regions.to_records():
            records.append(("region", region["code"], region))
        for rel in self.graph.relationships():
            records.append(("relationship", rel.record_id, rel.to_doc()))
        for report in self.credibility.reports():
            records.append(("report", report.id, report.to_doc()))
        for session in self.pathways.sessions():
            records.append(("session", session.id, session.to_doc()))
        for share in self.pathways.shares():
            records.append(("share", share["id"], share))
        for source in self.credibility.sources():
            records.append(("source", source.id, source.to_doc()))
        for node in self.taxonomy.nodes():
            records.append(("taxonomy_node", node.id, node.to_doc()))
        records.sort(key=lambda r: (r[0], r[1]))
        return records

    def export_canonical(self, path: str | Path | None = None) -> bytes:
        lines = [canonical_line(kind, rid, body) for kind, rid, body in self.iter_records()]
        payload = ("\n".join(lines) + "\n").encode("utf-8") if lines else b""
        if path is not None:
            try:
                Path(path).write_bytes(payload)
            except OSError as exc:
                raise IoError(f"cannot write {path}: {exc}")
        return payload

    def digest(self) -> str:
        return hashlib.sha256(self.export_canonical()).hexdigest()

    def compact(self):
        """Rewrite the canonical snapshot and truncate the log."""
        if self.data_dir is None:
            return
        with self._mutex:
            self.export_canonical(self.data_dir / SNAPSHOT_FILE)
            if self._wal_handle is not None:
                self._wal_handle.close()
            self._wal_handle = open(self.data_dir / WAL_FILE, "w", encoding="utf-8")

    def _commit(self, touched: list[tuple[str, str, dict]]):
        if self._wal_handle is None or not touched:
            return
        tx = [
            {"body": body, "id": rid, "kind": kind, "schema_version": SCHEMA_VERSION}
            for kind, rid, body in touched
        ]
        self._wal_handle.write(
            json.dumps({"tx": tx}, sort_keys=True, separators=(",", ":"), ensure_ascii=True)
            + "\n"
        )
        self._wal_handle.flush()
        os.fsync(self._wal_handle.fileno())

    @staticmethod
    def _entry_rec(entry: KnowledgeEntry) -> tuple[str, str, dict]:
        return ("entry", entry.id, entry.to_doc())

    @staticmethod
    def _rel_rec(rel: Relationship) -> tuple[str, str, dict]:
        return ("relationship", rel.record_id, rel.to_doc())

    @staticmethod
    def _session_rec(session: Session) -> tuple[str, str, dict]:
        return ("session", session.id, session.to_doc())

    # ------------------------------------------------------------------
    # graph operations
    # ------------------------------------------------------------------

    def create_entry(self, title: str, summary: str, scope: Scope,
                     blocks: Iterable[ContentBlock], status: str = "curated",
                     entry_id: str | None = None) -> KnowledgeEntry:
        with self._mutex:
            for block in blocks:
                for cited in block.citations:
                    if cited not in self.credibility:
                        raise UnknownSource(f"block cites unknown source {cited!r}")
            entry = self.graph.create_entry(title, summary, scope, blocks, status, entry_id)
            self._commit([self._entry_rec(entry)])
            return entry

    def add_containment(self, parent_id: str, child_id: str) -> Relationship:
        with self._mutex:
            rel = self.graph.add_containment(parent_id, child_id)
            self._commit([self._rel_rec(rel)])
            return rel

    def add_cross_reference(self, a: str, b: str) -> Relationship:
        with self._mutex:
            rel = self.graph.add_cross_reference(a, b)
            self._commit([self._rel_rec(rel)])
            return rel

    def derive_constrained(self, base_id: str, constraint: DimensionalConstraint
                           ) -> tuple[KnowledgeEntry, bool]:
        with self._mutex:
            entry, edge, created = self.graph.derive_constrained(base_id, constraint)
            if created:
                self._commit([self._entry_rec(entry), self._rel_rec(edge)])
            return entry, created

    def update_entry(self, entry_id: str, edits: list[dict]) -> list[KnowledgeEntry]:
        with self._mutex:
            for edit in edits:
                block = edit.get("block") if isinstance(edit, dict) else None
                if isinstance(block, dict):
                    for cited in block.get("citations") or ():
                        if cited not in self.credibility:
                            raise UnknownSource(f"block cites unknown source {cited!r}")
            touched = self.graph.update_entry(entry_id, edits)
            self._commit([self._entry_rec(e) for e in touched])
            return touched

    def session_exclusions(self, session_id: str) -> frozenset[str]:
        return frozenset(self.pathways.session(session_id).exclusions)

    def zoom(self, entry_id: str, dimension: str, window: DateInterval | None = None,
             session_id: str | None = None):
        excluded = self.session_exclusions(session_id) if session_id else frozenset()
        if dimension == "logical":
            return self.graph.zoom_logical(entry_id, excluded)
        if dimension == "temporal":
            if window is None:
                raise InvalidPayload("temporal zoom needs a window")
            return self.graph.zoom_temporal(entry_id, window, excluded)
        if dimension == "geographical":
            return self.graph.zoom_geographical(entry_id, excluded)
        raise InvalidPayload(f"unknown zoom dimension {dimension!r}")

    # ------------------------------------------------------------------
    # query resolution
    # ------------------------------------------------------------------

    def resolve_query(self, text: str) -> tuple[Resolution, ParsedQuery | None]:
        """Curated questions answer verbatim; everything else is parsed."""
        with self._mutex:
            trimmed = (text or "").strip()
            for question in self.questions.values():
                if question["text"] == trimmed:
                    return Resolution.from_doc(question["resolution"]), None
            parsed = parse_query(text, self.taxonomy, self.regions)
            node = pick_target(parsed, self.taxonomy)
            if node is not None:
                zooms = suggested_zooms(parsed, self.graph, node.entry_id)
                return Resolution(node.entry_id, node.label, zooms, False), parsed
            if not self.config.seeding_enabled:
                raise NoMatch(f"no entry resolvable from {text!r}")
            entry, label = self._seed_entry(parsed)
            zooms = suggested_zooms(parsed, self.graph, entry.id)
            return Resolution(entry.id, label, zooms, True), parsed

    def _seed_entry(self, parsed: ParsedQuery) -> tuple[KnowledgeEntry, str]:
        title = seed_title(parsed)
        scope = Scope.build(
            facets=[label for label, _, _ in parsed.object_terms],
            temporal=parsed.temporal_hint,
            regions=parsed.region_hints,
        )
        entry = self.graph.create_entry(title, "", scope, (), status="seed")
        touched: list[tuple[str, str, dict]] = [self._entry_rec(entry)]
        # link the most specific matched node, or grow the taxonomy
        node = None
        for label, _, _ in parsed.object_terms:
            candidate = self.taxonomy.find_by_label(label)
            if candidate is not None:
                if node is None or self.taxonomy.depth(candidate.id) > self.taxonomy.depth(node.id):
                    node = candidate
        if node is None:
            node = self.taxonomy.add_node(title, entry_id=entry.id)
        else:
            node = self.taxonomy.link_entry(node.id, entry.id)
        touched.append(("taxonomy_node", node.id, node.to_doc()))
        self._commit(touched)
        return entry, node.label

    # ------------------------------------------------------------------
    # credibility operations
    # ------------------------------------------------------------------

    def create_source(self, name: str, kind: str, affiliations=(),
                      source_id: str | None = None) -> Source:
        with self._mutex:
            now = self.clock()
            source, profile = self.credibility.create_source(
                name, kind, affiliations, source_id, now
            )
            self._commit([
                ("source", source.id, source.to_doc()),
                ("profile", profile.source_id, profile.to_doc()),
            ])
            return source

    def ingest_report(self, source_id: str, entry_id: str, block_id: str,
                      evidence: EvidenceAssessment, narrative: NarrativeAnalysis,
                      report_id: str | None = None) -> CredibilityReport:
        with self._mutex:
            entry = self.graph.get(entry_id)
            if entry.block(block_id) is None:
                raise UnknownEntry(f"entry {entry_id} has no block {block_id!r}")
            report, profile = self.credibility.ingest_report(
                source_id, (entry_id, block_id), evidence, narrative,
                self.clock(), report_id,
            )
            self._commit([
                ("report", report.id, report.to_doc()),
                ("profile", profile.source_id, profile.to_doc()),
            ])
            return report

    def credibility_badge(self, entry_id: str, block_id: str) -> dict:
        entry = self.graph.get(entry_id)
        block = entry.block(block_id)
        if block is None:
            raise UnknownEntry(f"entry {entry_id} has no block {block_id!r}")
        return self.credibility.credibility_badge(entry_id, block_id, list(block.citations))

    # ------------------------------------------------------------------
    # sessions and pathways
    # ------------------------------------------------------------------

    def create_session(self, author: str) -> Session:
        with self._mutex:
            if not author or not author.strip():
                raise InvalidPayload("session author must be non-empty")
            session = self.pathways.create_session(author, self.clock())
            self._commit([self._session_rec(session)])
            return session

    def record_event(self, session_id: str, kind: str, payload: dict,
                     timestamp: str | None = None,
                     relation: str = "followed_by") -> tuple[Session, InteractionNode]:
        with self._mutex:
            self._check_payload_refs(kind, payload)
            session, node = self.pathways.record_event(
                session_id, kind, payload, timestamp or self.clock(), relation
            )
            self._commit([self._session_rec(session)])
            return session, node

    def _check_payload_refs(self, kind: str, payload):
        if not isinstance(payload, dict):
            return  # shape errors raised downstream by validate_payload
        if kind in ("content_view", "zoom") and "entry_id" in payload:
            self.graph.get(payload["entry_id"])
        elif kind == "source_evaluation" and "report_id" in payload:
            self.credibility.report(payload["report_id"])
        elif kind == "source_exclusion" and "source_id" in payload:
            self.credibility.source(payload["source_id"])

    def add_exclusion(self, session_id: str, source_id: str, note: str
                      ) -> tuple[Session, InteractionNode]:
        with self._mutex:
            self.credibility.source(source_id)
            session, node = self.pathways.add_exclusion(
                session_id, source_id, note, self.clock()
            )
            self._commit([self._session_rec(session)])
            return session, node

    def archive_session(self, session_id: str) -> Pathway:
        with self._mutex:
            session, pathway = self.pathways.archive_session(session_id, self.clock())
            self._commit([
                self._session_rec(session),
                ("pathway", f"{pathway.id}:{pathway.version:06d}", pathway.to_doc()),
            ])
            return pathway

    def branch_pathway(self, pathway_id: str, version: int, author: str,
                       node_id: str | None = None) -> Session:
        """Branch at a node, or resume (branch at the terminal node)."""
        with self._mutex:
            if node_id is None:
                session = self.pathways.resume(pathway_id, version, author, self.clock())
            else:
                session = self.pathways.branch(
                    pathway_id, version, node_id, author, self.clock()
                )
            self._commit([self._session_rec(session)])
            return session

    def share_pathway(self, pathway_id: str, version: int, recipient: str) -> str:
        with self._mutex:
            token, created = self.pathways.share(pathway_id, version, recipient)
            if created:
                share = [s for s in self.pathways.shares()
                         if s["token"] == token][0]
                self._commit([("share", share["id"], share)])
            return token

    def pathway_hash(self, pathway_id: str, version: int) -> str:
        pathway = self.pathways.pathway(pathway_id, version)
        return hashlib.sha256(canonical_json(pathway.to_doc())).hexdigest()

    def suggest_next(self, signature: str) -> list[dict]:
        return self.pathways.suggest_next(signature)

    def suggest_after(self, kind: str, payload: dict) -> list[dict]:
        return self.suggest_next(node_signature(kind, payload))

    def pathway_report(self, pathway_id: str, version: int) -> bytes:
        return report_mod.render_pathway_report(self, pathway_id, version)

    # ------------------------------------------------------------------
    # access control
    # ------------------------------------------------------------------

    def require_pathway_access(self, pathway_id: str, version: int, author: str | None):
        if not self.pathways.can_read(pathway_id, version, author):
            raise UnknownPathway(f"no archived pathway {pathway_id!r} v{version}")

    def visible_pathways(self, author: str | None) -> list[Pathway]:
        return [
            p for p in self.pathways.pathways()
            if self.pathways.can_read(p.id, p.version, author)
        ]

    # ------------------------------------------------------------------
    # bulk import/export
    # ------------------------------------------------------------------

    def add_region(self, code: str, name: str, members=()):
        with self._mutex:
            for member in members:
                if member not in self.regions:
                    raise UnknownRegionMember(member)
            self.regions.add(code, name, members)
            self._commit([
                ("region", code, {"code": code, "name": name, "members": sorted(members)})
            ])

    def add_curated_question(self, text: str, resolution: Resolution,
                             question_id: str | None = None) -> dict:
        with self._mutex:
            if question_id is None:
                best = 0
                for qid in self.questions:
                    if qid.startswith("q-") and qid[2:].isdigit():
                        best = max(best, int(qid[2:]))
                question_id = f"q-{best + 1:04d}"
            if question_id in self.questions:
                raise DuplicateId(f"question id {question_id!r} already exists")
            doc = {"id": question_id, "text": text, "resolution": resolution.to_doc()}
            self.questions[question_id] = doc
            self._commit([("curated_question", question_id, doc)])
            return doc

    def import_records(self, path: str | Path):
        """Load a canonical corpus file into this (empty) store and persist."""
        with self._mutex:
            if self.iter_records():
                raise DuplicateId("import target store is not empty")
            source = Path(path)
            if not source.exists():
                raise IoError(f"no such file: {path}")
            self._load_snapshot(source)
            self.validate_all()
            if self.data_dir is not None:
                self.export_canonical(self.data_dir / SNAPSHOT_FILE)
                if self._wal_handle is not None:
                    self._wal_handle.close()
                self._wal_handle = open(self.data_dir / WAL_FILE, "w", encoding="utf-8")


class UnknownRegionMember(InvalidPayload):
    """Macro-region member missing from the region table."""
    code = "unknown_region_member"

    def __init__(self, member: str):
        super().__init__(f"macro-region member {member!r} not in region table")
