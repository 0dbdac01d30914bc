"""Scopes and dimensional constraints over the three knowledge dimensions.

A Scope locates content along logical facets, a temporal interval and a
region set. An empty facet set, absent interval or empty region set each
mean "unconstrained" in that dimension (global). A DimensionalConstraint
is the same triple used as a filter; it must constrain at least one
dimension and is kept in canonical form so equal constraints compare
(and serialize) identically.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidScope, UnknownRegion
from .intervals import DateInterval
from .regions import RegionTable


@dataclass(frozen=True, slots=True)
class Scope:
    facets: frozenset[str] = frozenset()
    temporal: DateInterval | None = None
    regions: frozenset[str] = frozenset()

    @classmethod
    def build(cls, facets=(), temporal=None, regions=()) -> "Scope":
        return cls(frozenset(facets), temporal, frozenset(regions))

    @property
    def is_global(self) -> bool:
        return not self.facets and self.temporal is None and not self.regions

    def validate_regions(self, table: RegionTable):
        for code in self.regions:
            if code not in table:
                raise UnknownRegion(f"region code {code!r} not in region table")

    def contains(self, other: "Scope", table: RegionTable) -> bool:
        """Dimension-wise subset test; empty dimensions contain everything."""
        if self.facets and not (other.facets and other.facets <= self.facets):
            return False
        if self.temporal is not None:
            if other.temporal is None or not self.temporal.contains(other.temporal):
                return False
        if self.regions and not (
            other.regions and table.contains_set(self.regions, other.regions)
        ):
            return False
        return True

    def to_doc(self) -> dict:
        return {
            "facets": sorted(self.facets),
            "temporal": self.temporal.to_doc() if self.temporal else None,
            "regions": sorted(self.regions),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Scope":
        if not isinstance(doc, dict):
            raise InvalidScope(f"bad scope document: {doc!r}")
        temporal = doc.get("temporal")
        return cls(
            facets=frozenset(doc.get("facets") or ()),
            temporal=DateInterval.from_doc(temporal) if temporal else None,
            regions=frozenset(doc.get("regions") or ()),
        )


@dataclass(frozen=True, slots=True)
class DimensionalConstraint:
    """Canonical filter over scope dimensions; at least one dimension set."""

    facets: frozenset[str] = frozenset()
    temporal: DateInterval | None = None
    regions: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.facets and self.temporal is None and not self.regions:
            raise InvalidScope("constraint must restrict at least one dimension")

    @classmethod
    def build(cls, facets=(), temporal=None, regions=()) -> "DimensionalConstraint":
        return cls(frozenset(facets), temporal, frozenset(regions))

    def canonical_key(self) -> tuple:
        temporal = None
        if self.temporal is not None:
            end = self.temporal.end if self.temporal.ongoing else self.temporal.end.isoformat()
            temporal = (self.temporal.start.isoformat(), end)
        return (tuple(sorted(self.facets)), temporal, tuple(sorted(self.regions)))

    def to_doc(self) -> dict:
        return {
            "facets": sorted(self.facets),
            "temporal": self.temporal.to_doc() if self.temporal else None,
            "regions": sorted(self.regions),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "DimensionalConstraint":
        if not isinstance(doc, dict):
            raise InvalidScope(f"bad constraint document: {doc!r}")
        temporal = doc.get("temporal")
        return cls(
            facets=frozenset(doc.get("facets") or ()),
            temporal=DateInterval.from_doc(temporal) if temporal else None,
            regions=frozenset(doc.get("regions") or ()),
        )

    def title_suffix(self) -> str:
        """Fixed-format rendering appended to derived-entry titles."""
        parts = []
        if self.regions:
            parts.append("in the " + "+".join(sorted(self.regions)))
        if self.temporal is not None:
            parts.append(self.temporal.render())
        if self.facets:
            parts.append("on " + "+".join(sorted(self.facets)))
        return " ".join(parts)


def intersect_scope(scope: Scope, constraint: DimensionalConstraint,
                    table: RegionTable) -> Scope | None:
    """scope ∩ constraint, or None when any constrained dimension empties.

    Unconstrained dimensions pass through unchanged on either side.
    """
    facets = scope.facets
    if constraint.facets:
        facets = scope.facets & constraint.facets if scope.facets else constraint.facets
        if not facets:
            return None

    temporal = scope.temporal
    if constraint.temporal is not None:
        if scope.temporal is None:
            temporal = constraint.temporal
        else:
            temporal = scope.temporal.intersect(constraint.temporal)
            if temporal is None:
                return None

    regions = scope.regions
    if constraint.regions:
        if not scope.regions:
            regions = frozenset(constraint.regions)
        else:
            joint = table.intersect_sets(scope.regions, constraint.regions)
            if not joint:
                return None
            regions = frozenset(joint)

    return Scope(frozenset(facets), temporal, frozenset(regions))
