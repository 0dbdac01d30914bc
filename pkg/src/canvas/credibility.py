"""Source credibility: content evaluation, source profiles, combined scores.

Content is scored along ten normalized components (five evidence, five
narrative), all stored with "higher = more credible" polarity; raw
negative-polarity inputs (sensationalism, emotional language, framing
bias) are inverted at ingestion. Each source carries a five-coordinate
profile that drifts toward every new report by exponential smoothing.
A report's combined score blends its content score with the profile as
it stood before that report was applied, which keeps stored reports
recomputable for audit.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import NoReport, OutOfRange, SourceMismatch, UnknownSource

SOURCE_KINDS = ("institution", "individual", "publication")

EVIDENCE_COMPONENTS = (
    "consensus",
    "verification",
    "cross_reference",
    "correction_hygiene",
    "methodology_transparency",
)
NARRATIVE_COMPONENTS = (
    "fact_balance",
    "objectivity",
    "emotional_neutrality",
    "contextual_completeness",
    "framing_neutrality",
)
# raw negative-polarity aliases accepted at ingestion: value v stores 1 - v
NARRATIVE_INVERSES = {
    "sensationalism": "objectivity",
    "emotional_language": "emotional_neutrality",
    "framing_bias": "framing_neutrality",
}
PROFILE_COORDINATES = (
    "track_record",
    "expertise",
    "publication_pattern",
    "affiliation_neutrality",
    "correction_responsiveness",
)

DEFAULT_ALPHA = 0.3
DEFAULT_BETA = 0.6
INITIAL_COORDINATE = 0.5


def _check_unit(name: str, value) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise OutOfRange(f"{name} must be a number in [0, 1], got {value!r}")
    if not 0.0 <= value <= 1.0:
        raise OutOfRange(f"{name} = {value} outside [0, 1]")
    return float(value)


@dataclass(frozen=True, slots=True)
class Source:
    id: str
    name: str
    kind: str
    affiliations: tuple[str, ...] = ()

    def __post_init__(self):
        if self.kind not in SOURCE_KINDS:
            raise OutOfRange(f"unknown source kind {self.kind!r}")

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "name": self.name,
            "kind": self.kind,
            "affiliations": list(self.affiliations),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Source":
        return cls(doc["id"], doc["name"], doc["kind"], tuple(doc.get("affiliations") or ()))


@dataclass(frozen=True, slots=True)
class EvidenceAssessment:
    consensus: float
    verification: float
    cross_reference: float
    correction_hygiene: float
    methodology_transparency: float

    def __post_init__(self):
        for name in EVIDENCE_COMPONENTS:
            _check_unit(f"evidence.{name}", getattr(self, name))

    def to_doc(self) -> dict:
        return {name: getattr(self, name) for name in EVIDENCE_COMPONENTS}

    @classmethod
    def from_doc(cls, doc: dict) -> "EvidenceAssessment":
        missing = [n for n in EVIDENCE_COMPONENTS if n not in doc]
        if missing:
            raise OutOfRange(f"evidence assessment missing {missing}")
        return cls(**{n: doc[n] for n in EVIDENCE_COMPONENTS})


@dataclass(frozen=True, slots=True)
class NarrativeAnalysis:
    fact_balance: float
    objectivity: float
    emotional_neutrality: float
    contextual_completeness: float
    framing_neutrality: float

    def __post_init__(self):
        for name in NARRATIVE_COMPONENTS:
            _check_unit(f"narrative.{name}", getattr(self, name))

    def to_doc(self) -> dict:
        return {name: getattr(self, name) for name in NARRATIVE_COMPONENTS}

    @classmethod
    def from_doc(cls, doc: dict) -> "NarrativeAnalysis":
        """Build from a document, inverting raw negative-polarity keys."""
        values = {}
        for raw, positive in NARRATIVE_INVERSES.items():
            if raw in doc:
                values[positive] = 1.0 - _check_unit(f"narrative.{raw}", doc[raw])
        for name in NARRATIVE_COMPONENTS:
            if name in doc:
                values[name] = doc[name]
        missing = [n for n in NARRATIVE_COMPONENTS if n not in values]
        if missing:
            raise OutOfRange(f"narrative analysis missing {missing}")
        return cls(**{n: values[n] for n in NARRATIVE_COMPONENTS})


@dataclass(frozen=True, slots=True)
class SourceProfile:
    source_id: str
    coordinates: dict[str, float]
    report_count: int
    last_updated: str

    def mean(self) -> float:
        return sum(self.coordinates[c] for c in PROFILE_COORDINATES) / len(PROFILE_COORDINATES)

    def to_doc(self) -> dict:
        return {
            "source_id": self.source_id,
            "coordinates": {c: self.coordinates[c] for c in PROFILE_COORDINATES},
            "report_count": self.report_count,
            "last_updated": self.last_updated,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "SourceProfile":
        return cls(
            source_id=doc["source_id"],
            coordinates={c: doc["coordinates"][c] for c in PROFILE_COORDINATES},
            report_count=int(doc.get("report_count", 0)),
            last_updated=doc.get("last_updated", ""),
        )

    @classmethod
    def initial(cls, source_id: str, now: str) -> "SourceProfile":
        return cls(source_id, {c: INITIAL_COORDINATE for c in PROFILE_COORDINATES}, 0, now)


@dataclass(frozen=True, slots=True)
class CredibilityReport:
    id: str
    source_id: str
    content_ref: tuple[str, str]  # (entry id, block id)
    evidence: EvidenceAssessment
    narrative: NarrativeAnalysis
    profile_before: dict[str, float]
    content_score: float
    combined_score: float
    created_at: str

    def to_doc(self) -> dict:
        return {
            "id": self.id,
            "source_id": self.source_id,
            "content_ref": {"entry_id": self.content_ref[0], "block_id": self.content_ref[1]},
            "evidence": self.evidence.to_doc(),
            "narrative": self.narrative.to_doc(),
            "profile_before": {c: self.profile_before[c] for c in PROFILE_COORDINATES},
            "content_score": self.content_score,
            "combined_score": self.combined_score,
            "created_at": self.created_at,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "CredibilityReport":
        ref = doc["content_ref"]
        return cls(
            id=doc["id"],
            source_id=doc["source_id"],
            content_ref=(ref["entry_id"], ref["block_id"]),
            evidence=EvidenceAssessment.from_doc(doc["evidence"]),
            narrative=NarrativeAnalysis.from_doc(doc["narrative"]),
            profile_before={c: doc["profile_before"][c] for c in PROFILE_COORDINATES},
            content_score=doc["content_score"],
            combined_score=doc["combined_score"],
            created_at=doc["created_at"],
        )


# -- scoring ------------------------------------------------------------

@dataclass(frozen=True)
class ScoringConfig:
    """Store-configurable weights and smoothing/blending factors."""

    weights: dict[str, float] = field(
        default_factory=lambda: {
            f"evidence.{n}": 1.0 for n in EVIDENCE_COMPONENTS
        } | {f"narrative.{n}": 1.0 for n in NARRATIVE_COMPONENTS}
    )
    alpha: float = DEFAULT_ALPHA
    beta: float = DEFAULT_BETA


def evaluate_content(evidence: EvidenceAssessment, narrative: NarrativeAnalysis,
                     config: ScoringConfig | None = None) -> float:
    """Weighted mean of the ten components (equal weights by default)."""
    config = config or ScoringConfig()
    total = 0.0
    weight_sum = 0.0
    for name in EVIDENCE_COMPONENTS:
        w = config.weights.get(f"evidence.{name}", 1.0)
        total += w * getattr(evidence, name)
        weight_sum += w
    for name in NARRATIVE_COMPONENTS:
        w = config.weights.get(f"narrative.{name}", 1.0)
        total += w * getattr(narrative, name)
        weight_sum += w
    return total / weight_sum


def report_signals(evidence: EvidenceAssessment, narrative: NarrativeAnalysis,
                   content_score: float) -> dict[str, float]:
    """Map one report onto the five profile coordinates."""
    narrative_mean = sum(getattr(narrative, n) for n in NARRATIVE_COMPONENTS) / len(
        NARRATIVE_COMPONENTS
    )
    return {
        "track_record": content_score,
        "expertise": evidence.methodology_transparency,
        "publication_pattern": narrative_mean,
        "affiliation_neutrality": narrative.framing_neutrality,
        "correction_responsiveness": evidence.correction_hygiene,
    }


def update_source_profile(profile: SourceProfile, signals: dict[str, float],
                          alpha: float, now: str) -> SourceProfile:
    """Exponential smoothing: new = old + alpha * (signal - old)."""
    coords = {}
    for name in PROFILE_COORDINATES:
        old = profile.coordinates[name]
        signal = _check_unit(f"signal.{name}", signals[name])
        coords[name] = old + alpha * (signal - old)
    return SourceProfile(profile.source_id, coords, profile.report_count + 1, now)


def apply_report(profile: SourceProfile, report: CredibilityReport,
                 alpha: float, now: str) -> SourceProfile:
    """Move a profile toward one report's mapped signals."""
    if report.source_id != profile.source_id:
        raise SourceMismatch(
            f"report {report.id} is about {report.source_id!r}, "
            f"not {profile.source_id!r}"
        )
    signals = report_signals(report.evidence, report.narrative, report.content_score)
    return update_source_profile(profile, signals, alpha, now)


def combined_credibility(content_score: float, profile_mean: float,
                         beta: float = DEFAULT_BETA) -> float:
    _check_unit("content_score", content_score)
    _check_unit("profile_mean", profile_mean)
    return beta * content_score + (1.0 - beta) * profile_mean


# -- store ----------------------------------------------------------------

class CredibilityStore:
    """Sources, profiles and reports, keyed for the gateway's record store."""

    def __init__(self, config: ScoringConfig | None = None):
        self.config = config or ScoringConfig()
        self._sources: dict[str, Source] = {}
        self._profiles: dict[str, SourceProfile] = {}
        self._reports: dict[str, CredibilityReport] = {}

    # access

    def __contains__(self, source_id: str) -> bool:
        return source_id in self._sources

    def source(self, source_id: str) -> Source:
        try:
            return self._sources[source_id]
        except KeyError:
            raise UnknownSource(f"no source {source_id!r}")

    def profile(self, source_id: str) -> SourceProfile:
        self.source(source_id)
        return self._profiles[source_id]

    def report(self, report_id: str) -> CredibilityReport:
        try:
            return self._reports[report_id]
        except KeyError:
            raise NoReport(f"no report {report_id!r}")

    def sources(self) -> list[Source]:
        return [self._sources[k] for k in sorted(self._sources)]

    def profiles(self) -> list[SourceProfile]:
        return [self._profiles[k] for k in sorted(self._profiles)]

    def reports(self) -> list[CredibilityReport]:
        return [self._reports[k] for k in sorted(self._reports)]

    def next_report_id(self) -> str:
        best = 0
        for rid in self._reports:
            if rid.startswith("rpt-") and rid[4:].isdigit():
                best = max(best, int(rid[4:]))
        return f"rpt-{best + 1:04d}"

    # mutations

    def create_source(self, name: str, kind: str, affiliations=(),
                      source_id: str | None = None, now: str = "") -> tuple[Source, SourceProfile]:
        if source_id is None:
            best = 0
            for sid in self._sources:
                if sid.startswith("src-") and sid[4:].isdigit():
                    best = max(best, int(sid[4:]))
            source_id = f"src-{best + 1:04d}"
        if source_id in self._sources:
            from .errors import DuplicateId
            raise DuplicateId(f"source id {source_id!r} already exists")
        source = Source(source_id, name, kind, tuple(affiliations))
        profile = SourceProfile.initial(source_id, now)
        self._sources[source_id] = source
        self._profiles[source_id] = profile
        return source, profile

    def ingest_report(self, source_id: str, content_ref: tuple[str, str],
                      evidence: EvidenceAssessment, narrative: NarrativeAnalysis,
                      now: str, report_id: str | None = None
                      ) -> tuple[CredibilityReport, SourceProfile]:
        """Score content, blend with the pre-update profile, then smooth it."""
        profile = self.profile(source_id)
        if report_id is None:
            report_id = self.next_report_id()
        elif report_id in self._reports:
            from .errors import DuplicateId
            raise DuplicateId(f"report id {report_id!r} already exists")
        content = evaluate_content(evidence, narrative, self.config)
        combined = combined_credibility(content, profile.mean(), self.config.beta)
        report = CredibilityReport(
            id=report_id,
            source_id=source_id,
            content_ref=content_ref,
            evidence=evidence,
            narrative=narrative,
            profile_before=dict(profile.coordinates),
            content_score=content,
            combined_score=combined,
            created_at=now,
        )
        updated = apply_report(profile, report, self.config.alpha, now)
        self._reports[report_id] = report
        self._profiles[source_id] = updated
        return report, updated

    # queries

    def reports_for_content(self, entry_id: str, block_id: str) -> list[CredibilityReport]:
        return [
            r for r in self.reports()
            if r.content_ref == (entry_id, block_id)
        ]

    def credibility_badge(self, entry_id: str, block_id: str,
                          citations: list[str]) -> dict:
        """Best combined score among the block's cited sources' reports.

        Ties resolve to the lexicographically smallest report id.
        """
        cited = set(citations)
        candidates = [
            r for r in self.reports_for_content(entry_id, block_id)
            if r.source_id in cited
        ]
        if not candidates:
            raise NoReport(f"no credibility report for block {block_id!r} of {entry_id!r}")
        winner = sorted(candidates, key=lambda r: (-r.combined_score, r.id))[0]
        return {
            "combined_score": winner.combined_score,
            "content_score": winner.content_score,
            "report_id": winner.id,
            "source_id": winner.source_id,
            "evidence": winner.evidence.to_doc(),
            "narrative": winner.narrative.to_doc(),
            "profile_before": dict(winner.profile_before),
        }

    # load path

    def insert_source_record(self, source: Source):
        self._sources[source.id] = source

    def insert_profile_record(self, profile: SourceProfile):
        self._profiles[profile.source_id] = profile

    def insert_report_record(self, report: CredibilityReport):
        self._reports[report.id] = report

    def validate_invariants(self, entry_lookup=None):
        from .errors import InvariantViolation

        for source_id in self._sources:
            if source_id not in self._profiles:
                raise InvariantViolation(f"source {source_id} has no profile")
        for source_id, profile in self._profiles.items():
            if source_id not in self._sources:
                raise InvariantViolation(f"profile for unknown source {source_id}")
            for name in PROFILE_COORDINATES:
                value = profile.coordinates[name]
                if not 0.0 <= value <= 1.0:
                    raise InvariantViolation(
                        f"profile {source_id}: coordinate {name}={value} outside [0, 1]"
                    )
        counts: dict[str, int] = {}
        for report in self._reports.values():
            if report.source_id not in self._sources:
                raise InvariantViolation(
                    f"report {report.id} references unknown source {report.source_id}"
                )
            counts[report.source_id] = counts.get(report.source_id, 0) + 1
            recomputed = evaluate_content(report.evidence, report.narrative, self.config)
            if recomputed != report.content_score:
                raise InvariantViolation(
                    f"report {report.id}: stored content_score not recomputable"
                )
            before_mean = sum(
                report.profile_before[c] for c in PROFILE_COORDINATES
            ) / len(PROFILE_COORDINATES)
            if combined_credibility(recomputed, before_mean, self.config.beta) != report.combined_score:
                raise InvariantViolation(
                    f"report {report.id}: stored combined_score not recomputable"
                )
            if entry_lookup is not None:
                entry_id, block_id = report.content_ref
                entry = entry_lookup(entry_id)
                if entry is None or entry.block(block_id) is None:
                    raise InvariantViolation(
                        f"report {report.id} references missing content "
                        f"{entry_id}/{block_id}"
                    )
        for source_id, n in counts.items():
            if self._profiles[source_id].report_count != n:
                raise InvariantViolation(
                    f"profile {source_id}: report_count {self._profiles[source_id].report_count} "
                    f"!= {n} stored reports"
                )
