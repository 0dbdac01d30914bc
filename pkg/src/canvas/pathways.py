"""Exploration pathways: live sessions, archived versions, branches.

A session appends interaction nodes to a live pathway (chain of
followed_by edges from a single root query node). Archiving freezes the
pathway as an immutable numbered version inside its family; branching
copies the ancestor prefix of any node into a fresh session whose first
new event attaches with a branch_of edge, and resuming is exactly a
branch at the terminal node. parent_version links across versions form a
tree per family, and every descendant records its ancestor authors.

Next-step suggestion is deterministic frequency counting over the whole
archived corpus: nodes are keyed by a signature (kind + payload, no
timestamps) and successors ranked by how often they follow that
signature.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from datetime import datetime

from .errors import (
    EmptyNote,
    EmptySession,
    InactiveSession,
    InvalidPayload,
    InvariantViolation,
    UnknownNode,
    UnknownPathway,
    UnknownSession,
)

NODE_KINDS = (
    "query",
    "content_view",
    "zoom",
    "source_evaluation",
    "source_exclusion",
    "annotation",
)
EDGE_RELATIONS = ("followed_by", "branch_of", "refines")

_PAYLOAD_RULES = {
    "query": ("text",),
    "content_view": ("entry_id",),
    "zoom": ("entry_id", "dimension"),
    "source_evaluation": ("report_id",),
    "source_exclusion": ("source_id", "note"),
    "annotation": ("text",),
}


def parse_ts(value: str) -> datetime:
    try:
        return datetime.fromisoformat(value.replace("Z", "+00:00"))
    except (TypeError, ValueError):
        raise InvalidPayload(f"bad timestamp {value!r}")


def node_signature(kind: str, payload: dict) -> str:
    """Canonical matching key: kind plus payload with timestamps stripped."""
    cleaned = {k: v for k, v in payload.items() if k not in ("timestamp", "ts")}
    return json.dumps({"kind": kind, "payload": cleaned},
                      sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def validate_payload(kind: str, payload) -> dict:
    if kind not in NODE_KINDS:
        raise InvalidPayload(f"unknown node kind {kind!r}")
    if not isinstance(payload, dict):
        raise InvalidPayload(f"{kind} payload must be an object")
    for key in _PAYLOAD_RULES[kind]:
        value = payload.get(key)
        if not isinstance(value, str) or not value.strip():
            raise InvalidPayload(f"{kind} payload needs non-empty {key!r}")
    if kind == "zoom" and payload["dimension"] not in ("logical", "temporal", "geographical"):
        raise InvalidPayload(f"bad zoom dimension {payload['dimension']!r}")
    if kind == "source_exclusion" and not payload["note"].strip():
        raise EmptyNote("exclusion note must be non-empty")
    return payload


@dataclass(frozen=True, slots=True)
class InteractionNode:
    id: str
    kind: str
    timestamp: str
    payload: dict

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "kind": self.kind,
            "timestamp": self.timestamp,
            "payload": self.payload,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "InteractionNode":
        return cls(doc["id"], doc["kind"], doc["timestamp"], doc.get("payload") or {})


@dataclass(frozen=True, slots=True)
class Pathway:
    """An archived, immutable version within a pathway family."""

    id: str
    version: int
    parent_version: tuple[str, int] | None
    author: str
    nodes: tuple[InteractionNode, ...]
    edges: tuple[tuple[str, str, str], ...]
    exclusions: tuple[dict, ...]
    lineage_authors: tuple[str, ...]
    created_at: str

    @property
    def status(self) -> str:
        return "archived"

    def node(self, node_id: str) -> InteractionNode | None:
        for n in self.nodes:
            if n.id == node_id:
                return n
        return None

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "version": self.version,
            "parent_version": list(self.parent_version) if self.parent_version else None,
            "author": self.author,
            "status": "archived",
            "nodes": [n.to_doc() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "exclusions": [dict(e) for e in self.exclusions],
            "lineage_authors": list(self.lineage_authors),
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Pathway":
        parent = doc.get("parent_version")
        return cls(
            id=doc["id"],
            version=int(doc["version"]),
            parent_version=(parent[0], int(parent[1])) if parent else None,
            author=doc["author"],
            nodes=tuple(InteractionNode.from_doc(n) for n in doc.get("nodes") or ()),
            edges=tuple(tuple(e) for e in doc.get("edges") or ()),
            exclusions=tuple(dict(e) for e in doc.get("exclusions") or ()),
            lineage_authors=tuple(doc.get("lineage_authors") or ()),
            created_at=doc.get("created_at", ""),
        )


@dataclass
class Session:
    """Live, single-writer interaction record; archives into a Pathway."""

    id: str
    author: str
    family_id: str
    status: str = "live"
    parent_version: tuple[str, int] | None = None
    branch_base: str | None = None  # next event attaches with branch_of
    nodes: list[InteractionNode] = field(default_factory=list)
    edges: list[tuple[str, str, str]] = field(default_factory=list)
    current_node: str | None = None
    exclusions: dict[str, str] = field(default_factory=dict)  # source id -> note
    created_at: str = ""

    def next_node_id(self) -> str:
        best = 0
        for node in self.nodes:
            if node.id.startswith("n-") and node.id[2:].isdigit():
                best = max(best, int(node.id[2:]))
        return f"n-{best + 1:04d}"

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "author": self.author,
            "family_id": self.family_id,
            "status": self.status,
            "parent_version": list(self.parent_version) if self.parent_version else None,
            "branch_base": self.branch_base,
            "nodes": [n.to_doc() for n in self.nodes],
            "edges": [list(e) for e in self.edges],
            "current_node": self.current_node,
            "exclusions": [
                {"source_id": sid, "note": self.exclusions[sid]}
                for sid in sorted(self.exclusions)
            ],
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Session":
        parent = doc.get("parent_version")
        return cls(
            id=doc["id"],
            author=doc["author"],
            family_id=doc["family_id"],
            status=doc.get("status", "live"),
            parent_version=(parent[0], int(parent[1])) if parent else None,
            branch_base=doc.get("branch_base"),
            nodes=[InteractionNode.from_doc(n) for n in doc.get("nodes") or ()],
            edges=[tuple(e) for e in doc.get("edges") or ()],
            current_node=doc.get("current_node"),
            exclusions={
                e["source_id"]: e["note"] for e in doc.get("exclusions") or ()
            },
            created_at=doc.get("created_at", ""),
        )


class PathwayStore:
    def __init__(self):
        self._sessions: dict[str, Session] = {}
        self._archived: dict[tuple[str, int], Pathway] = {}
        self._shares: dict[tuple[str, int, str], str] = {}  # (id, v, recipient) -> token

    # -- access ----------------------------------------------------------

    def session(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise UnknownSession(f"no session {session_id!r}")

    def live_session(self, session_id: str) -> Session:
        session = self.session(session_id)
        if session.status != "live":
            raise InactiveSession(f"session {session_id} is {session.status}")
        return session

    def sessions(self) -> list[Session]:
        return [self._sessions[k] for k in sorted(self._sessions)]

    def pathway(self, pathway_id: str, version: int) -> Pathway:
        try:
            return self._archived[(pathway_id, int(version))]
        except KeyError:
            raise UnknownPathway(f"no archived pathway {pathway_id!r} v{version}")

    def pathways(self) -> list[Pathway]:
        return [self._archived[k] for k in sorted(self._archived)]

    def shares(self) -> list[dict]:
        return [
            {
                "id": f"{pid}:{version:06d}:{recipient}",
                "pathway_id": pid,
                "version": version,
                "recipient": recipient,
                "token": token,
            }
            for (pid, version, recipient), token in sorted(self._shares.items())
        ]

    def can_read(self, pathway_id: str, version: int, author: str | None) -> bool:
        pathway = self.pathway(pathway_id, version)
        if author is not None and pathway.author == author:
            return True
        if (pathway_id, version, "*") in self._shares:
            return author is not None
        return author is not None and (pathway_id, version, author) in self._shares

    # -- session lifecycle -------------------------------------------------

    def next_session_id(self) -> str:
        best = 0
        for sid in self._sessions:
            if sid.startswith("ses-") and sid[4:].isdigit():
                best = max(best, int(sid[4:]))
        return f"ses-{best + 1:04d}"

    def next_family_id(self) -> str:
        families = {s.family_id for s in self._sessions.values()}
        families |= {pid for pid, _ in self._archived}
        best = 0
        for fid in families:
            if fid.startswith("pwy-") and fid[4:].isdigit():
                best = max(best, int(fid[4:]))
        return f"pwy-{best + 1:04d}"

    def create_session(self, author: str, now: str) -> Session:
        session = Session(
            id=self.next_session_id(),
            author=author,
            family_id=self.next_family_id(),
            created_at=now,
        )
        self._sessions[session.id] = session
        return session

    def record_event(self, session_id: str, kind: str, payload: dict,
                     timestamp: str, relation: str = "followed_by") -> tuple[Session, InteractionNode]:
        session = self.live_session(session_id)
        validate_payload(kind, payload)
        parse_ts(timestamp)
        if relation not in ("followed_by", "refines"):
            raise InvalidPayload(f"relation must be followed_by|refines, got {relation!r}")
        if session.current_node is None:
            if kind != "query":
                raise InvalidPayload("the first recorded event must be a query")
        else:
            previous = next(n for n in session.nodes if n.id == session.current_node)
            if parse_ts(timestamp) < parse_ts(previous.timestamp):
                raise InvalidPayload(
                    f"timestamp {timestamp} precedes current node at {previous.timestamp}"
                )
        node = InteractionNode(session.next_node_id(), kind, timestamp, dict(payload))
        if session.current_node is not None:
            label = "branch_of" if session.branch_base == session.current_node else relation
            session.edges.append((session.current_node, node.id, label))
        session.nodes.append(node)
        session.current_node = node.id
        if kind == "source_exclusion":
            session.exclusions[payload["source_id"]] = payload["note"]
        return session, node

    def add_exclusion(self, session_id: str, source_id: str, note: str,
                      timestamp: str) -> tuple[Session, InteractionNode]:
        if not note or not note.strip():
            raise EmptyNote("exclusion note must be non-empty")
        return self.record_event(
            session_id, "source_exclusion",
            {"source_id": source_id, "note": note}, timestamp,
        )

    def archive_session(self, session_id: str, now: str) -> tuple[Session, Pathway]:
        session = self.live_session(session_id)
        if not session.nodes:
            raise EmptySession(f"session {session_id} has no recorded events")
        version = 1 + max(
            (v for pid, v in self._archived if pid == session.family_id), default=0
        )
        lineage: tuple[str, ...] = ()
        if session.parent_version is not None:
            parent = self.pathway(*session.parent_version)
            lineage = parent.lineage_authors + (parent.author,)
        pathway = Pathway(
            id=session.family_id,
            version=version,
            parent_version=session.parent_version,
            author=session.author,
            nodes=tuple(session.nodes),
            edges=tuple(session.edges),
            exclusions=tuple(
                {"source_id": sid, "note": session.exclusions[sid]}
                for sid in sorted(session.exclusions)
            ),
            lineage_authors=lineage,
            created_at=now,
        )
        session.status = "closed"
        self._archived[(pathway.id, pathway.version)] = pathway
        return session, pathway

    # -- branching ---------------------------------------------------------

    def _prefix(self, pathway: Pathway, node_id: str
                ) -> tuple[list[InteractionNode], list[tuple[str, str, str]]]:
        if pathway.node(node_id) is None:
            raise UnknownNode(f"no node {node_id!r} in {pathway.id} v{pathway.version}")
        incoming: dict[str, list[tuple[str, str, str]]] = {}
        for edge in pathway.edges:
            incoming.setdefault(edge[1], []).append(edge)
        keep: set[str] = set()
        stack = [node_id]
        while stack:
            nid = stack.pop()
            if nid in keep:
                continue
            keep.add(nid)
            for src, _, _ in incoming.get(nid, ()):
                stack.append(src)
        nodes = [n for n in pathway.nodes if n.id in keep]
        edges = [e for e in pathway.edges if e[0] in keep and e[1] in keep]
        return nodes, edges

    def branch(self, pathway_id: str, version: int, node_id: str,
               author: str, now: str) -> Session:
        pathway = self.pathway(pathway_id, version)
        nodes, edges = self._prefix(pathway, node_id)
        exclusions = {
            n.payload["source_id"]: n.payload["note"]
            for n in nodes if n.kind == "source_exclusion"
        }
        session = Session(
            id=self.next_session_id(),
            author=author,
            family_id=pathway_id,
            parent_version=(pathway_id, pathway.version),
            branch_base=node_id,
            nodes=nodes,
            edges=edges,
            current_node=node_id,
            exclusions=exclusions,
            created_at=now,
        )
        self._sessions[session.id] = session
        return session

    def terminal_node(self, pathway: Pathway) -> InteractionNode:
        return sorted(
            pathway.nodes, key=lambda n: (parse_ts(n.timestamp), n.id)
        )[-1]

    def resume(self, pathway_id: str, version: int, author: str, now: str) -> Session:
        pathway = self.pathway(pathway_id, version)
        return self.branch(pathway_id, version, self.terminal_node(pathway).id, author, now)

    def share(self, pathway_id: str, version: int, recipient: str) -> tuple[str, bool]:
        """Grant read/branch access; idempotent per recipient."""
        import uuid

        self.pathway(pathway_id, version)
        key = (pathway_id, int(version), recipient)
        if key in self._shares:
            return self._shares[key], False
        token = str(uuid.uuid5(uuid.NAMESPACE_URL,
                               f"canvas-share:{pathway_id}:{version}:{recipient}"))
        self._shares[key] = token
        return token, True

    # -- suggestion ----------------------------------------------------------

    def suggest_next(self, signature: str) -> list[dict]:
        counts: dict[str, int] = {}
        samples: dict[str, InteractionNode] = {}
        for pathway in self.pathways():
            by_id = {n.id: n for n in pathway.nodes}
            for src, dst, label in pathway.edges:
                if label != "followed_by":
                    continue
                src_node, dst_node = by_id[src], by_id[dst]
                if node_signature(src_node.kind, src_node.payload) != signature:
                    continue
                dst_sig = node_signature(dst_node.kind, dst_node.payload)
                counts[dst_sig] = counts.get(dst_sig, 0) + 1
                samples.setdefault(dst_sig, dst_node)
        ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
        return [
            {
                "signature": sig,
                "kind": samples[sig].kind,
                "payload": samples[sig].payload,
                "count": count,
            }
            for sig, count in ranked
        ]

    # -- load path -------------------------------------------------------

    def insert_session_record(self, session: Session):
        self._sessions[session.id] = session

    def insert_pathway_record(self, pathway: Pathway):
        self._archived[(pathway.id, pathway.version)] = pathway

    def insert_share_record(self, doc: dict):
        key = (doc["pathway_id"], int(doc["version"]), doc["recipient"])
        self._shares[key] = doc["token"]

    def validate_invariants(self):
        for pathway in self.pathways():
            self._validate_graph(
                f"pathway {pathway.id} v{pathway.version}", pathway.nodes, pathway.edges
            )
            if pathway.parent_version is not None:
                pid, version = pathway.parent_version
                if pid != pathway.id:
                    raise InvariantViolation(
                        f"pathway {pathway.id} v{pathway.version}: parent in foreign "
                        f"family {pid!r}"
                    )
                if (pid, version) not in self._archived:
                    raise InvariantViolation(
                        f"pathway {pathway.id} v{pathway.version}: missing parent v{version}"
                    )
        self._validate_lineage_trees()
        for session in self.sessions():
            if session.nodes:
                self._validate_graph(f"session {session.id}", session.nodes, session.edges)
                if session.status == "live" and session.current_node is not None:
                    if all(n.id != session.current_node for n in session.nodes):
                        raise InvariantViolation(
                            f"session {session.id}: current node missing"
                        )

    def _validate_lineage_trees(self):
        for (pid, version), pathway in self._archived.items():
            seen = {(pid, version)}
            cursor = pathway
            while cursor.parent_version is not None:
                key = cursor.parent_version
                if key in seen:
                    raise InvariantViolation(
                        f"pathway {pid}: version lineage cycle at v{key[1]}"
                    )
                seen.add(key)
                cursor = self._archived.get(key)
                if cursor is None:
                    raise InvariantViolation(
                        f"pathway {pid}: lineage parent v{key[1]} missing"
                    )

    @staticmethod
    def _validate_graph(label: str, nodes, edges):
        ids = {n.id for n in nodes}
        if len(ids) != len(list(nodes)):
            raise InvariantViolation(f"{label}: duplicate node ids")
        by_id = {n.id: n for n in nodes}
        targets = set()
        adjacency: dict[str, list[str]] = {}
        for src, dst, relation in edges:
            if src not in ids or dst not in ids:
                raise InvariantViolation(f"{label}: edge {src}->{dst} leaves the node set")
            if relation not in EDGE_RELATIONS:
                raise InvariantViolation(f"{label}: bad edge relation {relation!r}")
            if parse_ts(by_id[dst].timestamp) < parse_ts(by_id[src].timestamp):
                raise InvariantViolation(
                    f"{label}: timestamps decrease along edge {src}->{dst}"
                )
            targets.add(dst)
            adjacency.setdefault(src, []).append(dst)
        roots = [n for n in nodes if n.id not in targets]
        if len(roots) != 1:
            raise InvariantViolation(f"{label}: expected a single root, found {len(roots)}")
        if roots[0].kind != "query":
            raise InvariantViolation(f"{label}: root node must be a query")
        for node in nodes:
            validate_payload(node.kind, node.payload)
        # acyclicity by iterative DFS with colors
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {nid: WHITE for nid in ids}
        for start in sorted(ids):
            if color[start] != WHITE:
                continue
            stack: list[tuple[str, int]] = [(start, 0)]
            color[start] = GRAY
            while stack:
                nid, idx = stack[-1]
                succs = sorted(adjacency.get(nid, ()))
                if idx < len(succs):
                    stack[-1] = (nid, idx + 1)
                    child = succs[idx]
                    if color[child] == GRAY:
                        raise InvariantViolation(f"{label}: cycle via edge {nid}->{child}")
                    if color[child] == WHITE:
                        color[child] = GRAY
                        stack.append((child, 0))
                else:
                    color[nid] = BLACK
                    stack.pop()
