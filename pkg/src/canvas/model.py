"""Knowledge entries, content blocks and typed relationships."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date

from .errors import InvalidScope
from .intervals import parse_date
from .regions import RegionTable
from .scopes import DimensionalConstraint, Scope

BLOCK_KINDS = ("concept", "milestone", "regional_view", "narrative")
ENTRY_STATUSES = ("seed", "curated")
RELATION_KINDS = ("contains", "cross_reference", "derived_by_constraint")


@dataclass(frozen=True, slots=True)
class ContentBlock:
    block_id: str
    kind: str
    text: str
    dimension_tags: Scope = field(default_factory=Scope)
    citations: tuple[str, ...] = ()
    milestone_date: date | None = None
    region: str | None = None

    def __post_init__(self):
        if self.kind not in BLOCK_KINDS:
            raise InvalidScope(f"unknown block kind {self.kind!r}")
        if self.kind == "milestone" and self.milestone_date is None:
            raise InvalidScope(f"milestone block {self.block_id} needs milestone_date")
        if self.kind == "regional_view" and not self.region:
            raise InvalidScope(f"regional_view block {self.block_id} needs region")

    @property
    def title(self) -> str:
        """Blocks have no separate title field; the text serves as one."""
        return self.text

    def to_doc(self) -> dict:
        return {
            "block_id": self.block_id,
            "kind": self.kind,
            "text": self.text,
            "dimension_tags": self.dimension_tags.to_doc(),
            "citations": list(self.citations),
            "milestone_date": self.milestone_date.isoformat() if self.milestone_date else None,
            "region": self.region,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "ContentBlock":
        milestone = doc.get("milestone_date")
        return cls(
            block_id=doc["block_id"],
            kind=doc["kind"],
            text=doc.get("text", ""),
            dimension_tags=Scope.from_doc(doc.get("dimension_tags") or {}),
            citations=tuple(doc.get("citations") or ()),
            milestone_date=parse_date(milestone) if milestone else None,
            region=doc.get("region"),
        )


@dataclass(frozen=True, slots=True)
class KnowledgeEntry:
    id: str
    title: str
    summary: str
    scope: Scope
    blocks: tuple[ContentBlock, ...]
    status: str
    created_at: str
    updated_at: str

    def block(self, block_id: str) -> ContentBlock | None:
        for b in self.blocks:
            if b.block_id == block_id:
                return b
        return None

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "summary": self.summary,
            "scope": self.scope.to_doc(),
            "blocks": [b.to_doc() for b in self.blocks],
            "status": self.status,
            "created_at": self.created_at,
            "updated_at": self.updated_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "KnowledgeEntry":
        return cls(
            id=doc["id"],
            title=doc["title"],
            summary=doc.get("summary", ""),
            scope=Scope.from_doc(doc.get("scope") or {}),
            blocks=tuple(ContentBlock.from_doc(b) for b in doc.get("blocks") or ()),
            status=doc.get("status", "curated"),
            created_at=doc["created_at"],
            updated_at=doc["updated_at"],
        )


@dataclass(frozen=True, slots=True)
class Relationship:
    kind: str
    a: str
    b: str
    constraint: DimensionalConstraint | None = None

    def __post_init__(self):
        if self.kind not in RELATION_KINDS:
            raise InvalidScope(f"unknown relationship kind {self.kind!r}")
        if (self.kind == "derived_by_constraint") != (self.constraint is not None):
            raise InvalidScope("constraint present iff kind=derived_by_constraint")

    @property
    def record_id(self) -> str:
        return f"{self.kind}:{self.a}:{self.b}"

    def to_doc(self) -> dict:
        return {
            "kind": self.kind,
            "a": self.a,
            "b": self.b,
            "constraint": self.constraint.to_doc() if self.constraint else None,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Relationship":
        constraint = doc.get("constraint")
        return cls(
            kind=doc["kind"],
            a=doc["a"],
            b=doc["b"],
            constraint=DimensionalConstraint.from_doc(constraint) if constraint else None,
        )


def validate_block_in_scope(block: ContentBlock, scope: Scope, table: RegionTable):
    """Check a block against its owning entry's scope.

    Tags, where present, must be contained dimension-wise; milestone dates
    must fall inside the temporal scope and regional views inside the
    region scope (a global entry scope admits anything).
    """
    block.dimension_tags.validate_regions(table)
    if block.dimension_tags.facets and scope.facets:
        if not block.dimension_tags.facets <= scope.facets:
            raise InvalidScope(
                f"block {block.block_id}: facets {sorted(block.dimension_tags.facets)} "
                f"outside entry facets {sorted(scope.facets)}"
            )
    if block.dimension_tags.temporal is not None and scope.temporal is not None:
        if not scope.temporal.contains(block.dimension_tags.temporal):
            raise InvalidScope(
                f"block {block.block_id}: tagged interval {block.dimension_tags.temporal} "
                f"outside entry interval {scope.temporal}"
            )
    if block.dimension_tags.regions and scope.regions:
        if not table.contains_set(scope.regions, block.dimension_tags.regions):
            raise InvalidScope(
                f"block {block.block_id}: tagged regions outside entry regions"
            )
    if block.kind == "milestone" and scope.temporal is not None:
        if not scope.temporal.contains_date(block.milestone_date):
            raise InvalidScope(
                f"block {block.block_id}: milestone {block.milestone_date.isoformat()} "
                f"outside entry interval {scope.temporal}"
            )
    if block.kind == "regional_view":
        if block.region not in table:
            raise InvalidScope(f"block {block.block_id}: unknown region {block.region!r}")
        if scope.regions and not table.contains_set(scope.regions, [block.region]):
            raise InvalidScope(
                f"block {block.block_id}: region {block.region} outside entry regions "
                f"{sorted(scope.regions)}"
            )


def block_passes_constraint(block: ContentBlock, constraint: DimensionalConstraint,
                            table: RegionTable) -> bool:
    """Does a block survive a dimensional derivation filter?

    Untagged blocks pass every dimension (unscoped content applies
    everywhere). Milestones must date inside a temporal constraint;
    regional views must sit inside a region constraint; tagged blocks
    must overlap each constrained dimension.
    """
    if constraint.temporal is not None:
        if block.kind == "milestone":
            if not constraint.temporal.contains_date(block.milestone_date):
                return False
        elif block.dimension_tags.temporal is not None:
            if not constraint.temporal.overlaps(block.dimension_tags.temporal):
                return False
    if constraint.regions:
        if block.kind == "regional_view":
            if not table.contains_set(constraint.regions, [block.region]):
                return False
        elif block.dimension_tags.regions:
            if not table.intersect_sets(block.dimension_tags.regions, constraint.regions):
                return False
    if constraint.facets and block.dimension_tags.facets:
        if not block.dimension_tags.facets & constraint.facets:
            return False
    return True


def clip_block_to_constraint(block: ContentBlock, constraint: DimensionalConstraint,
                             table: RegionTable) -> ContentBlock:
    """Clip a surviving block's tags so they fit the derived entry's scope."""
    tags = block.dimension_tags
    facets = tags.facets & constraint.facets if (tags.facets and constraint.facets) else tags.facets
    temporal = tags.temporal
    if temporal is not None and constraint.temporal is not None:
        temporal = temporal.intersect(constraint.temporal)
    regions = tags.regions
    if regions and constraint.regions:
        regions = frozenset(table.intersect_sets(regions, constraint.regions))
    clipped = Scope(frozenset(facets), temporal, frozenset(regions))
    if clipped == tags:
        return block
    return replace(block, dimension_tags=clipped)
