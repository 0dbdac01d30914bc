"""Shareable pathway report: the self-contained exploration summary.

The report replays an archived pathway's interactions in order
(timestamp, then node id), regenerating each zoom against the current
store under the exclusion set accumulated up to that point, and gathers
the evaluated credibility reports, exclusion notes and lineage
attribution. Serialization is canonical JSON, so regenerating the report
for an unchanged pathway and store is byte-identical.
"""

from __future__ import annotations

import json

from .errors import InvalidPayload
from .intervals import parse_window
from .pathways import parse_ts


def ordered_nodes(pathway) -> list:
    return sorted(pathway.nodes, key=lambda n: (parse_ts(n.timestamp), n.id))


def render_pathway_report(store, pathway_id: str, version: int) -> bytes:
    pathway = store.pathways.pathway(pathway_id, version)
    nodes = ordered_nodes(pathway)

    interactions = []
    evaluations = []
    exclusion_notes = []
    excluded: set[str] = set()
    latest_timeline: list = []
    latest_regional: dict = {}
    query_section = None

    for node in nodes:
        item = {
            "node_id": node.id,
            "kind": node.kind,
            "timestamp": node.timestamp,
            "payload": node.payload,
        }
        if node.kind == "query" and query_section is None:
            query_section = {"text": node.payload["text"]}
        elif node.kind == "zoom":
            snapshot = _zoom_snapshot(store, node.payload, frozenset(excluded))
            item["snapshot"] = snapshot
            if node.payload["dimension"] == "temporal":
                latest_timeline = snapshot
            elif node.payload["dimension"] == "geographical":
                latest_regional = snapshot
        elif node.kind == "source_evaluation":
            evaluations.append(store.credibility.report(node.payload["report_id"]).to_doc())
        elif node.kind == "source_exclusion":
            excluded.add(node.payload["source_id"])
            exclusion_notes.append(
                {"source_id": node.payload["source_id"], "note": node.payload["note"]}
            )
        interactions.append(item)

    doc = {
        "pathway": {
            "id": pathway.id,
            "version": pathway.version,
            "parent_version": list(pathway.parent_version) if pathway.parent_version else None,
            "author": pathway.author,
            "created_at": pathway.created_at,
        },
        "query": query_section,
        "interactions": interactions,
        "timeline": latest_timeline,
        "regional_views": latest_regional,
        "credibility": evaluations,
        "exclusions": exclusion_notes,
        "attribution": {
            "author": pathway.author,
            "lineage_authors": list(pathway.lineage_authors),
        },
    }
    return json.dumps(doc, sort_keys=True, separators=(",", ":"), ensure_ascii=True).encode()


def _zoom_snapshot(store, payload: dict, excluded: frozenset):
    entry_id = payload["entry_id"]
    dimension = payload["dimension"]
    params = payload.get("params") or {}
    if dimension == "temporal":
        window = parse_window(params.get("window", ".."))
        return store.graph.zoom_temporal(entry_id, window, excluded)
    if dimension == "logical":
        return store.graph.zoom_logical(entry_id, excluded)
    if dimension == "geographical":
        return store.graph.zoom_geographical(entry_id, excluded)
    raise InvalidPayload(f"unknown zoom dimension {dimension!r}")
