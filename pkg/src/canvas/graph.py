"""In-memory knowledge graph: entries, typed relationships and zooms.

Containment edges form a DAG (checked on every insertion), cross
references are symmetric, and constraint-derived entries are materialized
copies that re-sync whenever their base entry is edited. Zooms project an
entry (and, for the temporal/geographical dimensions, its containment
descendants) onto one dimension, deterministically ordered.

Per-session source exclusions are applied here as a filter: a block is
suppressed when it has citations and every one of them is excluded.
"""

from __future__ import annotations

from dataclasses import replace
from datetime import datetime, timezone
from typing import Callable, Iterable

from .errors import (
    CycleDetected,
    DuplicateId,
    EmptyIntersection,
    DerivedEntryReadOnly,
    InvalidEntry,
    InvalidPayload,
    InvariantViolation,
    SelfReference,
    UnknownEntry,
)
from .intervals import DateInterval
from .model import (
    ContentBlock,
    ENTRY_STATUSES,
    KnowledgeEntry,
    Relationship,
    block_passes_constraint,
    clip_block_to_constraint,
    validate_block_in_scope,
)
from .regions import RegionTable
from .scopes import DimensionalConstraint, Scope, intersect_scope


def utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


def _visible(block: ContentBlock, excluded: frozenset[str]) -> bool:
    return not (block.citations and set(block.citations) <= excluded)


class GraphStore:
    def __init__(self, regions: RegionTable, clock: Callable[[], str] = utc_now):
        self.regions = regions
        self.clock = clock
        self._entries: dict[str, KnowledgeEntry] = {}
        self._children: dict[str, set[str]] = {}
        self._parents: dict[str, set[str]] = {}
        self._crossrefs: set[tuple[str, str]] = set()
        self._derivations: dict[tuple[str, tuple], str] = {}
        self._derived_edges: dict[str, Relationship] = {}  # derived id -> edge

    # -- access --------------------------------------------------------

    def __contains__(self, entry_id: str) -> bool:
        return entry_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def get(self, entry_id: str) -> KnowledgeEntry:
        try:
            return self._entries[entry_id]
        except KeyError:
            raise UnknownEntry(f"no entry {entry_id!r}")

    def entries(self) -> list[KnowledgeEntry]:
        return [self._entries[k] for k in sorted(self._entries)]

    def relationships(self) -> list[Relationship]:
        rels = []
        for parent in self._children:
            for child in self._children[parent]:
                rels.append(Relationship("contains", parent, child))
        for a, b in self._crossrefs:
            rels.append(Relationship("cross_reference", a, b))
        rels.extend(self._derived_edges.values())
        return sorted(rels, key=lambda r: (r.kind, r.a, r.b))

    def references(self, entry_id: str) -> list[str]:
        self.get(entry_id)
        out = set()
        for a, b in self._crossrefs:
            if a == entry_id:
                out.add(b)
            elif b == entry_id:
                out.add(a)
        return sorted(out)

    def children(self, entry_id: str) -> list[str]:
        self.get(entry_id)
        return sorted(self._children.get(entry_id, ()))

    def is_derived(self, entry_id: str) -> bool:
        return entry_id in self._derived_edges

    def derivation_edge(self, entry_id: str) -> Relationship | None:
        return self._derived_edges.get(entry_id)

    def next_id(self) -> str:
        best = 0
        for entry_id in self._entries:
            if entry_id.startswith("ke-"):
                tail = entry_id[3:]
                if tail.isdigit():
                    best = max(best, int(tail))
        return f"ke-{best + 1:04d}"

    # -- mutations -------------------------------------------------------

    def create_entry(self, title: str, summary: str, scope: Scope,
                     blocks: Iterable[ContentBlock], status: str = "curated",
                     entry_id: str | None = None) -> KnowledgeEntry:
        if not title or not title.strip():
            raise InvalidEntry("entry title must be non-empty")
        if status not in ENTRY_STATUSES:
            raise InvalidEntry(f"unknown status {status!r}")
        if entry_id is None:
            entry_id = self.next_id()
        elif entry_id in self._entries:
            raise DuplicateId(f"entry id {entry_id!r} already exists")
        scope.validate_regions(self.regions)
        blocks = tuple(blocks)
        seen = set()
        for block in blocks:
            if block.block_id in seen:
                raise InvalidEntry(f"duplicate block id {block.block_id!r}")
            seen.add(block.block_id)
            validate_block_in_scope(block, scope, self.regions)
        now = self.clock()
        entry = KnowledgeEntry(entry_id, title, summary, scope, blocks, status, now, now)
        self._entries[entry_id] = entry
        return entry

    def add_containment(self, parent_id: str, child_id: str) -> Relationship:
        self.get(parent_id)
        self.get(child_id)
        if child_id in self._children.get(parent_id, ()):
            raise DuplicateId(f"containment {parent_id} -> {child_id} already present")
        if parent_id == child_id or self._reaches(child_id, parent_id):
            raise CycleDetected(
                f"containment edge {parent_id} -> {child_id} would close a cycle"
            )
        self._children.setdefault(parent_id, set()).add(child_id)
        self._parents.setdefault(child_id, set()).add(parent_id)
        return Relationship("contains", parent_id, child_id)

    def add_cross_reference(self, a: str, b: str) -> Relationship:
        if a == b:
            raise SelfReference(f"cross-reference endpoints must differ, got {a!r} twice")
        self.get(a)
        self.get(b)
        pair = (min(a, b), max(a, b))
        self._crossrefs.add(pair)
        return Relationship("cross_reference", *pair)

    def derive_constrained(self, base_id: str, constraint: DimensionalConstraint
                           ) -> tuple[KnowledgeEntry, Relationship | None, bool]:
        """Materialize base ∩ constraint; idempotent per canonical constraint.

        Returns (entry, new edge or None, created flag).
        """
        base = self.get(base_id)
        for code in constraint.regions:
            if code not in self.regions:
                raise EmptyIntersection(f"region code {code!r} not in region table")
        key = (base_id, constraint.canonical_key())
        if key in self._derivations:
            return self._entries[self._derivations[key]], None, False
        scope = intersect_scope(base.scope, constraint, self.regions)
        if scope is None:
            raise EmptyIntersection(
                f"constraint {constraint.to_doc()} does not intersect scope of {base_id}"
            )
        blocks = tuple(
            clip_block_to_constraint(b, constraint, self.regions)
            for b in base.blocks
            if block_passes_constraint(b, constraint, self.regions)
        )
        title = f"{base.title} {constraint.title_suffix()}".strip()
        now = self.clock()
        entry = KnowledgeEntry(self.next_id(), title, base.summary, scope, blocks,
                               base.status, now, now)
        edge = Relationship("derived_by_constraint", base_id, entry.id, constraint)
        self._entries[entry.id] = entry
        self._derivations[key] = entry.id
        self._derived_edges[entry.id] = edge
        return entry, edge, True

    def update_entry(self, entry_id: str, edits: list[dict]) -> list[KnowledgeEntry]:
        """Apply block edits, then re-sync every derived descendant.

        Returns all entries whose stored state changed (base first).
        Edits: {"op": "upsert", "block": doc} or {"op": "remove", "block_id": id}.
        """
        entry = self.get(entry_id)
        if self.is_derived(entry_id):
            raise DerivedEntryReadOnly(
                f"{entry_id} is derived; edit its base entry instead"
            )
        blocks = list(entry.blocks)
        index = {b.block_id: i for i, b in enumerate(blocks)}
        for edit in edits:
            op = edit.get("op") if isinstance(edit, dict) else None
            if op == "upsert":
                try:
                    block = ContentBlock.from_doc(edit["block"])
                except (KeyError, TypeError):
                    raise InvalidPayload(f"bad upsert edit: {edit!r}")
                if block.block_id in index:
                    blocks[index[block.block_id]] = block
                else:
                    index[block.block_id] = len(blocks)
                    blocks.append(block)
            elif op == "remove":
                block_id = edit.get("block_id")
                if block_id not in index:
                    raise InvalidPayload(f"no block {block_id!r} to remove")
                removed = index.pop(block_id)
                blocks.pop(removed)
                index = {b.block_id: i for i, b in enumerate(blocks)}
            else:
                raise InvalidPayload(f"unknown edit op: {edit!r}")
        for block in blocks:
            validate_block_in_scope(block, entry.scope, self.regions)
        now = self.clock()
        status = "curated" if entry.status == "seed" else entry.status
        updated = replace(entry, blocks=tuple(blocks), status=status, updated_at=now)
        self._entries[entry_id] = updated
        touched = [updated]
        self._resync_derived(entry_id, now, touched)
        return touched

    def _resync_derived(self, base_id: str, now: str, touched: list[KnowledgeEntry]):
        base = self._entries[base_id]
        for derived_id, edge in sorted(self._derived_edges.items()):
            if edge.a != base_id:
                continue
            derived = self._entries[derived_id]
            blocks = tuple(
                clip_block_to_constraint(b, edge.constraint, self.regions)
                for b in base.blocks
                if block_passes_constraint(b, edge.constraint, self.regions)
            )
            if blocks == derived.blocks:
                continue
            refreshed = replace(derived, blocks=blocks, updated_at=now)
            self._entries[derived_id] = refreshed
            touched.append(refreshed)
            self._resync_derived(derived_id, now, touched)

    # -- zooms -----------------------------------------------------------

    def zoom_logical(self, entry_id: str,
                     excluded: frozenset[str] = frozenset()) -> list[dict]:
        """Direct contains-children plus the entry's concept blocks.

        A child and a concept block sharing a title merge into one item
        carrying both references; items are ordered by title.
        """
        entry = self.get(entry_id)
        items: dict[str, dict] = {}
        for child_id in self.children(entry_id):
            child = self._entries[child_id]
            items[child.title] = {
                "title": child.title,
                "entry_id": child_id,
                "block_id": None,
                "summary": child.summary,
                "citations": [],
            }
        for block in entry.blocks:
            if block.kind != "concept" or not _visible(block, excluded):
                continue
            item = items.get(block.title)
            if item is None:
                items[block.title] = {
                    "title": block.title,
                    "entry_id": None,
                    "block_id": block.block_id,
                    "summary": block.text,
                    "citations": list(block.citations),
                }
            else:
                item["block_id"] = block.block_id
                item["citations"] = list(block.citations)
        return [items[title] for title in sorted(items)]

    def zoom_temporal(self, entry_id: str, window: DateInterval,
                      excluded: frozenset[str] = frozenset()) -> list[dict]:
        """Milestones of the entry and its descendants inside the window."""
        self.get(entry_id)
        scope_ids = [entry_id, *sorted(self.closure(entry_id, "descendants"))]
        hits = []
        for eid in scope_ids:
            for block in self._entries[eid].blocks:
                if block.kind != "milestone" or not _visible(block, excluded):
                    continue
                if window.contains_date(block.milestone_date):
                    hits.append((block.milestone_date, block.title, eid, block))
        hits.sort(key=lambda h: (h[0], h[1], h[2], h[3].block_id))
        return [
            {
                "date": d.isoformat(),
                "text": block.text,
                "entry_id": eid,
                "block_id": block.block_id,
                "citations": list(block.citations),
            }
            for d, _, eid, block in hits
        ]

    def zoom_geographical(self, entry_id: str,
                          excluded: frozenset[str] = frozenset()) -> dict[str, list[dict]]:
        """Regional views of the entry and descendants, grouped by region."""
        self.get(entry_id)
        scope_ids = [entry_id, *sorted(self.closure(entry_id, "descendants"))]
        grouped: dict[str, list] = {}
        for eid in scope_ids:
            for block in self._entries[eid].blocks:
                if block.kind != "regional_view" or not _visible(block, excluded):
                    continue
                grouped.setdefault(block.region, []).append(
                    {
                        "region": block.region,
                        "text": block.text,
                        "entry_id": eid,
                        "block_id": block.block_id,
                        "citations": list(block.citations),
                    }
                )
        return {
            region: sorted(grouped[region], key=lambda i: (i["text"], i["entry_id"], i["block_id"]))
            for region in sorted(grouped)
        }

    def closure(self, entry_id: str, direction: str) -> set[str]:
        """Transitive contains-closure, excluding the start entry."""
        self.get(entry_id)
        if direction not in ("ancestors", "descendants"):
            raise InvalidPayload(f"direction must be ancestors|descendants, got {direction!r}")
        adjacency = self._parents if direction == "ancestors" else self._children
        seen: set[str] = set()
        stack = [entry_id]
        while stack:
            for nxt in adjacency.get(stack.pop(), ()):
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return seen

    def _reaches(self, start: str, target: str) -> bool:
        stack = [start]
        seen = {start}
        while stack:
            for nxt in self._children.get(stack.pop(), ()):
                if nxt == target:
                    return True
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append(nxt)
        return False

    # -- load path -------------------------------------------------------

    def insert_entry_record(self, entry: KnowledgeEntry):
        if entry.id in self._entries:
            raise DuplicateId(f"entry id {entry.id!r} already exists")
        self._entries[entry.id] = entry

    def insert_relationship_record(self, rel: Relationship):
        if rel.kind == "contains":
            self._children.setdefault(rel.a, set()).add(rel.b)
            self._parents.setdefault(rel.b, set()).add(rel.a)
        elif rel.kind == "cross_reference":
            self._crossrefs.add((min(rel.a, rel.b), max(rel.a, rel.b)))
        else:
            self._derived_edges[rel.b] = rel
            self._derivations[(rel.a, rel.constraint.canonical_key())] = rel.b

    def validate_invariants(self):
        """Full re-check used after loading records from disk."""
        for entry in self._entries.values():
            if not entry.title or not entry.title.strip():
                raise InvariantViolation(f"entry {entry.id}: empty title")
            if entry.status not in ENTRY_STATUSES:
                raise InvariantViolation(f"entry {entry.id}: bad status {entry.status!r}")
            try:
                entry.scope.validate_regions(self.regions)
            except Exception as exc:
                raise InvariantViolation(f"entry {entry.id}: {exc}")
            seen = set()
            for block in entry.blocks:
                if block.block_id in seen:
                    raise InvariantViolation(
                        f"entry {entry.id}: duplicate block id {block.block_id!r}"
                    )
                seen.add(block.block_id)
                try:
                    validate_block_in_scope(block, entry.scope, self.regions)
                except Exception as exc:
                    raise InvariantViolation(f"entry {entry.id}: {exc}")
        for rel in self.relationships():
            for end in (rel.a, rel.b):
                if end not in self._entries:
                    raise InvariantViolation(
                        f"relationship {rel.record_id} references missing entry {end!r}"
                    )
        cycle_edge = self._find_cycle_edge()
        if cycle_edge is not None:
            raise InvariantViolation(
                f"containment cycle via edge {cycle_edge[0]} -> {cycle_edge[1]}"
            )
        for derived_id, edge in self._derived_edges.items():
            base = self._entries[edge.a]
            derived = self._entries[derived_id]
            expected = intersect_scope(base.scope, edge.constraint, self.regions)
            if expected != derived.scope:
                raise InvariantViolation(
                    f"derived entry {derived_id}: scope differs from "
                    f"{edge.a} ∩ constraint"
                )
            for block in derived.blocks:
                if not block_passes_constraint(block, edge.constraint, self.regions):
                    raise InvariantViolation(
                        f"derived entry {derived_id}: block {block.block_id} "
                        f"fails its derivation constraint"
                    )

    def _find_cycle_edge(self) -> tuple[str, str] | None:
        WHITE, GRAY, BLACK = 0, 1, 2
        color = {eid: WHITE for eid in self._entries}

        def visit(node: str) -> tuple[str, str] | None:
            color[node] = GRAY
            for child in sorted(self._children.get(node, ())):
                if color.get(child, WHITE) == GRAY:
                    return (node, child)
                if color.get(child, WHITE) == WHITE:
                    found = visit(child)
                    if found:
                        return found
            color[node] = BLACK
            return None

        for eid in sorted(self._entries):
            if color[eid] == WHITE:
                found = visit(eid)
                if found:
                    return found
        return None
