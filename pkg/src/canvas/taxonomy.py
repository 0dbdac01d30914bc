"""Concept taxonomy: the focus mechanism behind query resolution.

A forest of labeled nodes; each node carries a canonical label, a synonym
set and optionally a link to the knowledge entry it names. Labels and
synonyms are unique case-insensitively across the whole taxonomy so a
token sequence identifies at most one node.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import DuplicateId, InvariantViolation


def label_tokens(label: str) -> tuple[str, ...]:
    return tuple(label.lower().split())


@dataclass(frozen=True, slots=True)
class TaxonomyNode:
    id: str
    label: str
    synonyms: tuple[str, ...] = ()
    parent_id: str | None = None
    entry_id: str | None = None

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "synonyms": list(self.synonyms),
            "parent_id": self.parent_id,
            "entry_id": self.entry_id,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "TaxonomyNode":
        return cls(
            id=doc["id"],
            label=doc["label"],
            synonyms=tuple(doc.get("synonyms") or ()),
            parent_id=doc.get("parent_id"),
            entry_id=doc.get("entry_id"),
        )


class Taxonomy:
    def __init__(self):
        self._nodes: dict[str, TaxonomyNode] = {}
        self._by_phrase: dict[tuple[str, ...], str] = {}  # token tuple -> node id

    def __contains__(self, node_id: str) -> bool:
        return node_id in self._nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def node(self, node_id: str) -> TaxonomyNode:
        return self._nodes[node_id]

    def nodes(self) -> list[TaxonomyNode]:
        return [self._nodes[k] for k in sorted(self._nodes)]

    def next_id(self) -> str:
        best = 0
        for nid in self._nodes:
            if nid.startswith("tax-") and nid[4:].isdigit():
                best = max(best, int(nid[4:]))
        return f"tax-{best + 1:04d}"

    def add_node(self, label: str, synonyms=(), parent_id: str | None = None,
                 entry_id: str | None = None, node_id: str | None = None) -> TaxonomyNode:
        if node_id is None:
            node_id = self.next_id()
        if node_id in self._nodes:
            raise DuplicateId(f"taxonomy node id {node_id!r} already exists")
        if parent_id is not None and parent_id not in self._nodes:
            raise DuplicateId(f"taxonomy parent {parent_id!r} does not exist")
        node = TaxonomyNode(node_id, label, tuple(synonyms), parent_id, entry_id)
        for phrase in self._phrases(node):
            if phrase in self._by_phrase:
                raise DuplicateId(
                    f"taxonomy label {' '.join(phrase)!r} already used by "
                    f"{self._by_phrase[phrase]}"
                )
        self._nodes[node_id] = node
        for phrase in self._phrases(node):
            self._by_phrase[phrase] = node_id
        return node

    def link_entry(self, node_id: str, entry_id: str) -> TaxonomyNode:
        node = replace(self._nodes[node_id], entry_id=entry_id)
        self._nodes[node_id] = node
        return node

    @staticmethod
    def _phrases(node: TaxonomyNode):
        yield label_tokens(node.label)
        for synonym in node.synonyms:
            yield label_tokens(synonym)

    def lookup_phrase(self, tokens: tuple[str, ...]) -> TaxonomyNode | None:
        node_id = self._by_phrase.get(tokens)
        return self._nodes[node_id] if node_id else None

    def find_by_label(self, label: str) -> TaxonomyNode | None:
        return self.lookup_phrase(label_tokens(label))

    def max_phrase_len(self) -> int:
        return max((len(p) for p in self._by_phrase), default=0)

    def depth(self, node_id: str) -> int:
        depth = 0
        seen = {node_id}
        node = self._nodes[node_id]
        while node.parent_id is not None:
            if node.parent_id in seen:
                raise InvariantViolation(f"taxonomy parent cycle at {node.parent_id}")
            seen.add(node.parent_id)
            node = self._nodes[node.parent_id]
            depth += 1
        return depth

    # load path

    def insert_node_record(self, node: TaxonomyNode):
        self._nodes[node.id] = node
        for phrase in self._phrases(node):
            self._by_phrase[phrase] = node.id

    def validate_invariants(self, entry_exists=None):
        phrases: dict[tuple[str, ...], str] = {}
        for node in self._nodes.values():
            if node.parent_id is not None and node.parent_id not in self._nodes:
                raise InvariantViolation(
                    f"taxonomy node {node.id} has missing parent {node.parent_id!r}"
                )
            for phrase in self._phrases(node):
                if phrase in phrases and phrases[phrase] != node.id:
                    raise InvariantViolation(
                        f"taxonomy label {' '.join(phrase)!r} duplicated across "
                        f"{phrases[phrase]} and {node.id}"
                    )
                phrases[phrase] = node.id
            if entry_exists is not None and node.entry_id is not None:
                if not entry_exists(node.entry_id):
                    raise InvariantViolation(
                        f"taxonomy node {node.id} links missing entry {node.entry_id!r}"
                    )
        for node in self._nodes.values():
            self.depth(node.id)  # raises on parent cycles
