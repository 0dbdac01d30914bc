"""Builds the AI-safety seed corpus shipped with the package.

Everything is constructed through the normal store operations under a
frozen clock, so the exported file is deterministic and internally
consistent (profiles really are the smoothing replay of the seed
reports, derived records really pass validation, and so on).
"""

from __future__ import annotations

from datetime import date
from pathlib import Path

from .credibility import EvidenceAssessment, NarrativeAnalysis
from .model import ContentBlock
from .query import Resolution
from .regions import default_table
from .scopes import Scope
from .store import CanvasStore

SEED_CLOCK = "2026-01-15T00:00:00Z"

DATA_FILE = Path(__file__).parent / "data" / "seed_corpus.ndjson"

PRIMARY_QUESTION = (
    "What are the global risks and governance challenges associated with "
    "AI safety in the 21st century?"
)

# (block id, date, text, citations)
MILESTONES = [
    ("m-2013-superintelligence", date(2013, 7, 3),
     "Nick Bostrom's 'Superintelligence' published", ["src-russell"]),
    ("m-2015-open-letter", date(2015, 1, 11),
     "Open Letter on AI Safety signed by prominent researchers", ["src-fli", "src-russell"]),
    ("m-2015-openai-founded", date(2015, 12, 11),
     "OpenAI founded with explicit focus on beneficial AI", ["src-fli"]),
    ("m-2016-alphago", date(2016, 3, 15),
     "AlphaGo beats Lee Sedol", ["src-deepmind"]),
    ("m-2017-asilomar", date(2017, 1, 6),
     "Asilomar AI Principles established", ["src-fli"]),
    ("m-2018-google-principles", date(2018, 6, 7),
     "Google's AI Principles published", ["src-deepmind"]),
    ("m-2019-gpt2", date(2019, 2, 14),
     "GPT-2 release delayed due to misuse concerns", ["src-journal"]),
    ("m-2022-chatgpt", date(2022, 11, 30),
     "ChatGPT release sparks widespread AI safety discussions", ["src-tabloid"]),
    ("m-2023-pause-letter", date(2023, 3, 22),
     "'AI Pause Letter' signed by tech leaders", ["src-fli", "src-tabloid"]),
    ("m-2023-constitutional-ai", date(2023, 5, 9),
     "Anthropic's Constitutional AI approach", ["src-amodei"]),
    ("m-2023-bletchley", date(2023, 11, 1),
     "AI Safety Summit at Bletchley Park", ["src-journal", "src-fli"]),
]

CONCEPTS = [
    ("b-concept-value-alignment", "Value Alignment", ["src-russell"]),
    ("b-concept-robustness", "Robustness", ["src-deepmind"]),
    ("b-concept-ethics-governance", "Ethics and Governance", ["src-fli"]),
]

REGIONAL_VIEWS = [
    ("b-region-us", "US", "Corporate-led initiatives", ["src-journal"]),
    ("b-region-eu", "EU", "Regulation-first strategies", ["src-journal"]),
    ("b-region-cn", "CN", "State-aligned frameworks", ["src-journal"]),
]

SOURCES = [
    ("src-fli", "Future of Life Institute", "institution", ["AI safety advocacy"]),
    ("src-deepmind", "DeepMind", "institution", ["Alphabet"]),
    ("src-russell", "Stuart Russell", "individual", ["UC Berkeley"]),
    ("src-amodei", "Dario Amodei", "individual", ["Anthropic"]),
    ("src-journal", "Peer-Reviewed AI Journals", "publication", []),
    ("src-tabloid", "TechBuzz Daily", "publication", []),
]

# credible sources: strong evidence handling, restrained narrative
_STRONG = dict(consensus=0.9, verification=0.95, cross_reference=0.85,
               correction_hygiene=0.9, methodology_transparency=0.9)
_SOBER = dict(fact_balance=0.9, objectivity=0.85, emotional_neutrality=0.9,
              contextual_completeness=0.8, framing_neutrality=0.85)
# the tabloid: weak verification, sensational framing
_WEAK = dict(consensus=0.35, verification=0.2, cross_reference=0.3,
             correction_hygiene=0.15, methodology_transparency=0.1)
_LOUD = dict(fact_balance=0.25, objectivity=0.1, emotional_neutrality=0.15,
             contextual_completeness=0.3, framing_neutrality=0.2)

REPORTS = [
    ("rpt-0001", "src-fli", "ai-safety", "m-2015-open-letter", _STRONG, _SOBER),
    ("rpt-0002", "src-deepmind", "ai-safety", "m-2016-alphago", _STRONG, _SOBER),
    ("rpt-0003", "src-russell", "ai-safety", "b-concept-value-alignment", _STRONG, _SOBER),
    ("rpt-0004", "src-amodei", "ai-safety", "m-2023-constitutional-ai", _STRONG, _SOBER),
    ("rpt-0005", "src-journal", "ai-safety", "b-region-eu", _STRONG, _SOBER),
    ("rpt-0006", "src-tabloid", "ai-safety", "m-2022-chatgpt", _WEAK, _LOUD),
]


def build_seed_store(data_dir=None) -> CanvasStore:
    store = CanvasStore(data_dir, clock=lambda: SEED_CLOCK)
    for record in default_table().to_records():
        store.regions.add(record["code"], record["name"], record["members"])
        store._commit([("region", record["code"], record)])

    for source_id, name, kind, affiliations in SOURCES:
        store.create_source(name, kind, affiliations, source_id=source_id)

    blocks = [
        ContentBlock(block_id, "milestone", text, citations=tuple(cites),
                     milestone_date=when)
        for block_id, when, text, cites in MILESTONES
    ]
    blocks += [
        ContentBlock(block_id, "concept", text, citations=tuple(cites))
        for block_id, text, cites in CONCEPTS
    ]
    blocks += [
        ContentBlock(block_id, "regional_view", text, citations=tuple(cites),
                     region=region,
                     dimension_tags=Scope.build(regions=[region]))
        for block_id, region, text, cites in REGIONAL_VIEWS
    ]
    store.create_entry(
        "AI Safety",
        "Approaches, institutions and debates around keeping advanced AI "
        "systems safe and beneficial.",
        Scope.build(facets=["AI Safety"]),
        blocks,
        entry_id="ai-safety",
    )

    children = [
        ("value-alignment", "Value Alignment",
         "Making AI objectives track human values and intent.",
         ["Value Alignment"]),
        ("robustness", "Robustness",
         "Keeping AI systems reliable under distribution shift and adversarial pressure.",
         ["Robustness"]),
        ("ethics-governance", "Ethics and Governance",
         "Norms, institutions and policy shaping how AI safety is practiced.",
         ["Ethics and Governance"]),
    ]
    for entry_id, title, summary, facets in children:
        store.create_entry(
            title, summary,
            Scope.build(facets=facets),
            [ContentBlock(f"b-{entry_id}-overview", "narrative",
                          f"{title} within the broader AI safety landscape.",
                          citations=("src-fli",))],
            entry_id=entry_id,
        )
        store.add_containment("ai-safety", entry_id)

    for report_id, source_id, entry_id, block_id, evidence, narrative in REPORTS:
        store.ingest_report(
            source_id, entry_id, block_id,
            EvidenceAssessment(**evidence), NarrativeAnalysis(**narrative),
            report_id=report_id,
        )

    tax_root = store.taxonomy.add_node(
        "AI Safety", synonyms=("safe AI", "safety of AI"), entry_id="ai-safety",
        node_id="tax-0001",
    )
    store._commit([("taxonomy_node", tax_root.id, tax_root.to_doc())])
    tax_children = [
        ("tax-0002", "Value Alignment", ("alignment",), "value-alignment"),
        ("tax-0003", "Robustness", (), "robustness"),
        ("tax-0004", "Ethics and Governance", ("AI ethics", "AI governance"),
         "ethics-governance"),
    ]
    for node_id, label, synonyms, entry_id in tax_children:
        node = store.taxonomy.add_node(
            label, synonyms=synonyms, parent_id="tax-0001", entry_id=entry_id,
            node_id=node_id,
        )
        store._commit([("taxonomy_node", node.id, node.to_doc())])

    store.add_curated_question(
        PRIMARY_QUESTION,
        Resolution("ai-safety", "AI Safety",
                   ("logical", "temporal", "geographical"), False),
        question_id="q-0001",
    )
    store.add_curated_question(
        "How do regional strategies for governing AI safety compare?",
        Resolution("ai-safety", "AI Safety", ("logical", "geographical"), False),
        question_id="q-0002",
    )
    return store


def write_seed_corpus(path: Path = DATA_FILE) -> bytes:
    store = build_seed_store()
    path.parent.mkdir(parents=True, exist_ok=True)
    return store.export_canonical(path)


if __name__ == "__main__":
    payload = write_seed_corpus()
    print(f"wrote {DATA_FILE} ({len(payload)} bytes)")
