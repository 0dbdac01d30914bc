"""Free-text query parsing and resolution against the taxonomy.

Parsing is deterministic: lowercase tokenization, longest-match taxonomy
label scan, then temporal trigger phrases ("21st century", "post-2020",
"since 2015", bare years) and region names/codes from the region table.
No embeddings, no ranking models; identical text over an unchanged
taxonomy always parses and resolves identically.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from datetime import date

from .errors import EmptyQuery, NoMatch
from .graph import GraphStore
from .intervals import ONGOING, DateInterval
from .regions import RegionTable
from .taxonomy import Taxonomy, TaxonomyNode

ZOOM_DIMENSIONS = ("logical", "temporal", "geographical")

# dropped from residual terms and seeded titles, never from matching
STOPWORDS = frozenset(
    "a an the and or of in on at for to with by is are was were be been "
    "what which who whom whose when where why how do does did can could "
    "should would will shall may might must associated related regarding "
    "about between".split()
)

# codes that collide with common English words need to appear uppercase
AMBIGUOUS_CODES = frozenset({"US", "IN", "IT", "AT", "BE", "NO", "SO", "TO", "DE", "ES"})

REGION_ALIASES = {
    ("europe",): "EU",
    ("european", "union"): "EU",
    ("united", "states"): "US",
    ("america",): "US",
    ("usa",): "US",
    ("united", "kingdom"): "GB",
    ("britain",): "GB",
    ("uk",): "GB",
    ("china",): "CN",
    ("japan",): "JP",
    ("india",): "IN",
    ("canada",): "CA",
    ("australia",): "AU",
    ("brazil",): "BR",
    ("switzerland",): "CH",
    ("south", "korea"): "KR",
    ("germany",): "DE",
    ("france",): "FR",
    ("spain",): "ES",
    ("italy",): "IT",
}

_TOKEN_KEEP = re.compile(r"[^0-9a-zA-Z-]+")
_ORDINAL_RE = re.compile(r"^(\d{1,2})(st|nd|rd|th)$")
_POST_RE = re.compile(r"^post-(\d{4})$")
_YEAR_RE = re.compile(r"^([12]\d{3})$")


def tokenize(text: str) -> list[tuple[str, str]]:
    """(lowercase token, raw-cased token) pairs; punctuation stripped,
    internal hyphens kept so triggers like post-2020 survive."""
    out = []
    for raw in text.split():
        kept = _TOKEN_KEEP.sub("", raw).strip("-")
        if kept:
            out.append((kept.lower(), kept))
    return out


@dataclass(frozen=True, slots=True)
class ParsedQuery:
    raw: str
    normalized: str
    object_terms: tuple[tuple[str, int, int], ...]  # (label, start, end) token spans
    temporal_hint: DateInterval | None
    region_hints: frozenset[str]
    residual_terms: tuple[str, ...]

    def to_doc(self) -> dict:
        return {
            "raw": self.raw,
            "normalized": self.normalized,
            "object_terms": [
                {"label": label, "span": [start, end]}
                for label, start, end in self.object_terms
            ],
            "temporal_hint": self.temporal_hint.to_doc() if self.temporal_hint else None,
            "region_hints": sorted(self.region_hints),
            "residual_terms": list(self.residual_terms),
        }


@dataclass(frozen=True, slots=True)
class Resolution:
    target_entry_id: str
    matched_label: str
    suggested_zooms: tuple[str, ...]
    seeded: bool

    def to_doc(self) -> dict:
        return {
            "target_entry_id": self.target_entry_id,
            "matched_label": self.matched_label,
            "suggested_zooms": list(self.suggested_zooms),
            "seeded": self.seeded,
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "Resolution":
        return cls(
            target_entry_id=doc["target_entry_id"],
            matched_label=doc["matched_label"],
            suggested_zooms=tuple(doc["suggested_zooms"]),
            seeded=bool(doc.get("seeded", False)),
        )


def _century_interval(n: int) -> DateInterval:
    start = date((n - 1) * 100 + 1, 1, 1)
    if n >= 21:
        return DateInterval(start, ONGOING)
    return DateInterval(start, date(n * 100 + 1, 1, 1))


def parse_query(text: str, taxonomy: Taxonomy, regions: RegionTable) -> ParsedQuery:
    if not text or not text.strip():
        raise EmptyQuery("query text is empty")
    pairs = tokenize(text)
    tokens = [low for low, _ in pairs]
    raws = [raw for _, raw in pairs]
    n = len(tokens)
    consumed = [False] * n

    # 1. longest-match taxonomy labels
    object_terms: list[tuple[str, int, int]] = []
    max_len = max(taxonomy.max_phrase_len(), 1)
    i = 0
    while i < n:
        hit = None
        for length in range(min(max_len, n - i), 0, -1):
            node = taxonomy.lookup_phrase(tuple(tokens[i:i + length]))
            if node is not None:
                hit = (node, length)
                break
        if hit is not None:
            node, length = hit
            object_terms.append((node.label, i, i + length))
            for j in range(i, i + length):
                consumed[j] = True
            i += length
        else:
            i += 1

    # 2. temporal triggers
    temporal_hint: DateInterval | None = None

    def claim(start: int, end: int, interval: DateInterval):
        nonlocal temporal_hint
        for j in range(start, end):
            consumed[j] = True
        if temporal_hint is None:
            temporal_hint = interval

    i = 0
    while i < n:
        if consumed[i]:
            i += 1
            continue
        token = tokens[i]
        ordinal = _ORDINAL_RE.match(token)
        if (ordinal and i + 1 < n and not consumed[i + 1] and tokens[i + 1] == "century"):
            claim(i, i + 2, _century_interval(int(ordinal.group(1))))
            i += 2
            continue
        post = _POST_RE.match(token)
        if post:
            claim(i, i + 1, DateInterval(date(int(post.group(1)) + 1, 1, 1), ONGOING))
            i += 1
            continue
        if token == "since" and i + 1 < n and not consumed[i + 1] and _YEAR_RE.match(tokens[i + 1]):
            year = int(tokens[i + 1])
            claim(i, i + 2, DateInterval(date(year, 1, 1), ONGOING))
            i += 2
            continue
        year_match = _YEAR_RE.match(token)
        if year_match:
            year = int(year_match.group(1))
            claim(i, i + 1, DateInterval(date(year, 1, 1), date(year + 1, 1, 1)))
            i += 1
            continue
        i += 1

    # 3. regions: aliases and table names first (longest match), then codes
    region_hints: set[str] = set()
    name_phrases: dict[tuple[str, ...], str] = {}
    for phrase, code in REGION_ALIASES.items():
        if code in regions:
            name_phrases[phrase] = code
    for code in regions.codes():
        name_phrases.setdefault(tuple(regions.name(code).lower().split()), code)
    max_phrase = max((len(p) for p in name_phrases), default=1)
    i = 0
    while i < n:
        if consumed[i]:
            i += 1
            continue
        hit = None
        for length in range(min(max_phrase, n - i), 0, -1):
            if any(consumed[j] for j in range(i, i + length)):
                continue
            code = name_phrases.get(tuple(tokens[i:i + length]))
            if code is not None:
                hit = (code, length)
                break
        if hit is None:
            code = tokens[i].upper()
            if code in regions and (code not in AMBIGUOUS_CODES or raws[i] == code):
                hit = (code, 1)
        if hit is not None:
            code, length = hit
            region_hints.add(code)
            for j in range(i, i + length):
                consumed[j] = True
            i += length
        else:
            i += 1

    residual = tuple(
        tokens[j] for j in range(n) if not consumed[j] and tokens[j] not in STOPWORDS
    )
    return ParsedQuery(
        raw=text,
        normalized=" ".join(tokens),
        object_terms=tuple(object_terms),
        temporal_hint=temporal_hint,
        region_hints=frozenset(region_hints),
        residual_terms=residual,
    )


def pick_target(parsed: ParsedQuery, taxonomy: Taxonomy) -> TaxonomyNode | None:
    """Most specific matched label with a linked entry (deepest node,
    ties broken lexicographically on canonical label)."""
    linked = []
    for label, _, _ in parsed.object_terms:
        node = taxonomy.find_by_label(label)
        if node is not None and node.entry_id is not None:
            linked.append(node)
    if not linked:
        return None
    return sorted(linked, key=lambda nd: (-taxonomy.depth(nd.id), nd.label))[0]


def suggested_zooms(parsed: ParsedQuery, graph: GraphStore, entry_id: str) -> tuple[str, ...]:
    entry = graph.get(entry_id)
    zooms = ["logical"]
    if parsed.temporal_hint is not None or any(b.kind == "milestone" for b in entry.blocks):
        zooms.append("temporal")
    if parsed.region_hints or any(b.kind == "regional_view" for b in entry.blocks):
        zooms.append("geographical")
    return tuple(zooms)


def seed_title(parsed: ParsedQuery) -> str:
    """Matched labels verbatim, then title-cased residual tokens."""
    words: list[str] = []
    for label, _, _ in parsed.object_terms:
        words.extend(label.split())
    words.extend(w.title() for w in parsed.residual_terms)
    if not words:
        raise NoMatch("nothing to name a seed entry from")
    return " ".join(words)
