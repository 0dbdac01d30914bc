"""Error hierarchy shared by every layer.

Each error carries the HTTP status used by the service and the process
exit code used by the CLI (1 = user error, 2 = invariant violation).
"""

from __future__ import annotations


class CanvasError(Exception):
    """Base for all domain errors."""

    code = "error"
    http_status = 400
    exit_code = 1

    def __init__(self, message: str = ""):
        super().__init__(message or self.__doc__ or self.code)
        self.message = message or self.__doc__ or self.code

    def to_doc(self) -> dict:
        return {"code": self.code, "message": self.message}


# -- graph ------------------------------------------------------------------

class UnknownEntry(CanvasError):
    """Entry id does not exist."""
    code = "unknown_entry"
    http_status = 404


class DuplicateId(CanvasError):
    """Explicit id collides with an existing record."""
    code = "duplicate_id"
    http_status = 409


class InvalidScope(CanvasError):
    """Scope or block placement violates a dimensional invariant."""
    code = "invalid_scope"


class InvalidEntry(CanvasError):
    """Entry fields violate a structural invariant."""
    code = "invalid_entry"


class InvalidInterval(CanvasError):
    """Malformed or empty date interval."""
    code = "invalid_interval"


class UnknownRegion(CanvasError):
    """Region code absent from the store's region table."""
    code = "unknown_region"


class CycleDetected(CanvasError):
    """Containment edge would close a directed cycle."""
    code = "cycle_detected"
    http_status = 409


class SelfReference(CanvasError):
    """Cross-reference endpoints must differ."""
    code = "self_reference"


class EmptyIntersection(CanvasError):
    """Constraint does not intersect the base entry's scope."""
    code = "empty_intersection"
    http_status = 409


class DerivedEntryReadOnly(CanvasError):
    """Constraint-derived entries are edited through their base entry."""
    code = "derived_entry_read_only"
    http_status = 409


# -- credibility ------------------------------------------------------------

class OutOfRange(CanvasError):
    """Score component outside [0, 1]."""
    code = "out_of_range"


class UnknownSource(CanvasError):
    """Source id does not exist."""
    code = "unknown_source"
    http_status = 404


class SourceMismatch(CanvasError):
    """Report does not reference the profile's source."""
    code = "source_mismatch"


class NoReport(CanvasError):
    """Block has no cited source with a credibility report."""
    code = "no_report"
    http_status = 404


class EmptyNote(CanvasError):
    """Source exclusions require a non-empty note."""
    code = "empty_note"


# -- query ------------------------------------------------------------------

class EmptyQuery(CanvasError):
    """Query text is empty after trimming."""
    code = "empty_query"


class NoMatch(CanvasError):
    """No taxonomy label matched and seeding is disabled."""
    code = "no_match"
    http_status = 404


class SeedingDisabled(CanvasError):
    """Store configuration forbids seeding new entries."""
    code = "seeding_disabled"
    http_status = 403


# -- pathways ---------------------------------------------------------------

class UnknownSession(CanvasError):
    """Session id does not exist."""
    code = "unknown_session"
    http_status = 404


class InactiveSession(CanvasError):
    """Session is closed or archived."""
    code = "inactive_session"
    http_status = 409


class InvalidPayload(CanvasError):
    """Payload does not fit its declared kind."""
    code = "invalid_payload"


class EmptySession(CanvasError):
    """Cannot archive a session with no recorded events."""
    code = "empty_session"


class UnknownPathway(CanvasError):
    """Pathway id/version does not exist or is not readable."""
    code = "unknown_pathway"
    http_status = 404


class UnknownNode(CanvasError):
    """Node id absent from the pathway."""
    code = "unknown_node"
    http_status = 404


class ImmutablePathway(CanvasError):
    """Archived pathways cannot be mutated."""
    code = "immutable_pathway"
    http_status = 409


class Forbidden(CanvasError):
    """Caller lacks access to this resource."""
    code = "forbidden"
    http_status = 403


# -- persistence ------------------------------------------------------------

class ParseError(CanvasError):
    """Store file line failed to parse."""
    code = "parse_error"

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class UnsupportedSchema(CanvasError):
    """Store file schema_version not supported."""
    code = "unsupported_schema"


class InvariantViolation(CanvasError):
    """Loaded store breaches a declared invariant."""
    code = "invariant_violation"
    http_status = 500
    exit_code = 2


class StoreLocked(CanvasError):
    """Another process owns the data directory."""
    code = "store_locked"
    http_status = 423


class IoError(CanvasError):
    """Filesystem operation failed."""
    code = "io_error"
    http_status = 500
