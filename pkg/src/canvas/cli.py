"""Command-line face of the store; mirrors the HTTP API.

Commands open the data directory directly (same single-writer store the
service uses), so a mutation issued here leaves the exact same records
as the equivalent HTTP call. Exit codes: 0 success, 1 user error,
2 invariant violation.

    canvas --data-dir ./data import seed_corpus.ndjson
    canvas --data-dir ./data query "ai safety since 2015"
    canvas --data-dir ./data zoom ai-safety temporal --window 2013-01-01..2024-01-01
    canvas --data-dir ./data serve --port 8000
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .credibility import EvidenceAssessment, NarrativeAnalysis
from .errors import CanvasError, InvalidPayload
from .intervals import parse_window
from .scopes import DimensionalConstraint
from .store import CanvasStore, SNAPSHOT_FILE


def _emit(ctx, doc):
    fmt = ctx.obj["format"]
    if fmt == "table":
        _emit_table(doc)
    else:
        click.echo(json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False))


def _emit_table(doc, indent=0):
    pad = "  " * indent
    if isinstance(doc, dict):
        for key in doc:
            value = doc[key]
            if isinstance(value, (dict, list)):
                click.echo(f"{pad}{key}:")
                _emit_table(value, indent + 1)
            else:
                click.echo(f"{pad}{key}: {value}")
    elif isinstance(doc, list):
        for item in doc:
            if isinstance(item, (dict, list)):
                _emit_table(item, indent)
                click.echo(f"{pad}-")
            else:
                click.echo(f"{pad}{item}")
    else:
        click.echo(f"{pad}{doc}")


def _open_store(ctx) -> CanvasStore:
    return CanvasStore(ctx.obj["data_dir"])


def _load_json_arg(raw: str, what: str):
    """Accept inline JSON or @path syntax."""
    if raw.startswith("@"):
        return json.loads(Path(raw[1:]).read_text(encoding="utf-8"))
    try:
        return json.loads(raw)
    except json.JSONDecodeError as exc:
        raise InvalidPayload(f"bad {what} JSON: {exc}")


def _handle(func):
    """Translate domain errors into exit codes."""
    import functools

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except CanvasError as exc:
            click.echo(json.dumps({"error": exc.to_doc()}, sort_keys=True), err=True)
            sys.exit(exc.exit_code)

    return wrapper


@click.group()
@click.option("--data-dir", envvar="CANVAS_DATA_DIR", default="./canvas_data",
              show_default=True, help="store directory (env: CANVAS_DATA_DIR)")
@click.option("--format", "fmt", type=click.Choice(["json", "table"]), default="json",
              show_default=True)
@click.pass_context
def main(ctx, data_dir, fmt):
    """Dimensional knowledge exploration engine."""
    ctx.ensure_object(dict)
    ctx.obj["data_dir"] = data_dir
    ctx.obj["format"] = fmt


# -- service ------------------------------------------------------------

@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True, type=int)
@click.pass_context
@_handle
def serve(ctx, host, port):
    """Run the HTTP API over the data directory."""
    import uvicorn

    from .service import create_app

    store = CanvasStore(ctx.obj["data_dir"])
    app = create_app(store)

    @app.on_event("shutdown")
    def _shutdown():
        store.compact()
        store.close()

    uvicorn.run(app, host=host, port=port, log_level="info")


# -- query / zoom / derive ------------------------------------------------

@main.command()
@click.argument("text")
@click.pass_context
@_handle
def query(ctx, text):
    """Resolve free text to a knowledge entry."""
    with _open_store(ctx) as store:
        resolution, parsed = store.resolve_query(text)
        _emit(ctx, {"resolution": resolution.to_doc(),
                    "parsed": parsed.to_doc() if parsed else None})


@main.command()
@click.argument("entry_id")
@click.argument("dimension", type=click.Choice(["logical", "temporal", "geographical"]))
@click.option("--window", help="temporal window START..END (END may be 'ongoing')")
@click.option("--session", "session_id", help="apply this session's source exclusions")
@click.pass_context
@_handle
def zoom(ctx, entry_id, dimension, window, session_id):
    """Project an entry onto one dimension."""
    with _open_store(ctx) as store:
        interval = parse_window(window) if window else None
        result = store.zoom(entry_id, dimension, interval, session_id)
        _emit(ctx, {"entry_id": entry_id, "dimension": dimension, "result": result})


@main.command()
@click.argument("entry_id")
@click.option("--regions", help="comma-separated region codes")
@click.option("--facets", help="comma-separated facet labels")
@click.option("--temporal", help="interval START..END")
@click.pass_context
@_handle
def derive(ctx, entry_id, regions, facets, temporal):
    """Create (or fetch) the entry narrowed by a dimensional constraint."""
    with _open_store(ctx) as store:
        constraint = DimensionalConstraint.build(
            facets=[f.strip() for f in facets.split(",")] if facets else (),
            temporal=parse_window(temporal) if temporal else None,
            regions=[r.strip() for r in regions.split(",")] if regions else (),
        )
        entry, created = store.derive_constrained(entry_id, constraint)
        _emit(ctx, {"entry": entry.to_doc(), "created": created})


# -- entries ---------------------------------------------------------------

@main.group()
def entry():
    """Inspect and edit knowledge entries."""


@entry.command("show")
@click.argument("entry_id")
@click.pass_context
@_handle
def entry_show(ctx, entry_id):
    with _open_store(ctx) as store:
        doc = store.graph.get(entry_id).to_doc()
        doc["children"] = store.graph.children(entry_id)
        doc["references"] = store.graph.references(entry_id)
        _emit(ctx, doc)


@entry.command("update")
@click.argument("entry_id")
@click.option("--edits", required=True,
              help="JSON list of edits, or @file.json")
@click.pass_context
@_handle
def entry_update(ctx, entry_id, edits):
    """Apply block edits: {"op":"upsert","block":{...}} / {"op":"remove","block_id":...}."""
    with _open_store(ctx) as store:
        touched = store.update_entry(entry_id, _load_json_arg(edits, "edits"))
        _emit(ctx, {"entry": store.graph.get(entry_id).to_doc(),
                    "touched": [e.id for e in touched]})


@entry.command("badge")
@click.argument("entry_id")
@click.argument("block_id")
@click.pass_context
@_handle
def entry_badge(ctx, entry_id, block_id):
    with _open_store(ctx) as store:
        _emit(ctx, store.credibility_badge(entry_id, block_id))


# -- sources -----------------------------------------------------------------

@main.group()
def source():
    """Sources, profiles and credibility reports."""


@source.command("list")
@click.pass_context
@_handle
def source_list(ctx):
    with _open_store(ctx) as store:
        _emit(ctx, [
            {"source": s.to_doc(), "profile": store.credibility.profile(s.id).to_doc()}
            for s in store.credibility.sources()
        ])


@source.command("create")
@click.argument("name")
@click.option("--kind", type=click.Choice(["institution", "individual", "publication"]),
              required=True)
@click.option("--affiliation", "affiliations", multiple=True)
@click.option("--id", "source_id", help="explicit source id")
@click.pass_context
@_handle
def source_create(ctx, name, kind, affiliations, source_id):
    with _open_store(ctx) as store:
        created = store.create_source(name, kind, affiliations, source_id)
        _emit(ctx, {"source": created.to_doc(),
                    "profile": store.credibility.profile(created.id).to_doc()})


@source.command("show")
@click.argument("source_id")
@click.pass_context
@_handle
def source_show(ctx, source_id):
    with _open_store(ctx) as store:
        _emit(ctx, {
            "source": store.credibility.source(source_id).to_doc(),
            "profile": store.credibility.profile(source_id).to_doc(),
            "reports": [r.to_doc() for r in store.credibility.reports()
                        if r.source_id == source_id],
        })


@source.command("report")
@click.argument("source_id")
@click.option("--entry", "entry_id", required=True)
@click.option("--block", "block_id", required=True)
@click.option("--evidence", required=True, help="JSON object or @file.json")
@click.option("--narrative", required=True, help="JSON object or @file.json")
@click.option("--id", "report_id", help="explicit report id")
@click.pass_context
@_handle
def source_report(ctx, source_id, entry_id, block_id, evidence, narrative, report_id):
    """Evaluate one content block as seen through this source."""
    with _open_store(ctx) as store:
        report = store.ingest_report(
            source_id, entry_id, block_id,
            EvidenceAssessment.from_doc(_load_json_arg(evidence, "evidence")),
            NarrativeAnalysis.from_doc(_load_json_arg(narrative, "narrative")),
            report_id,
        )
        _emit(ctx, report.to_doc())


# -- sessions ------------------------------------------------------------------

@main.group()
def session():
    """Live exploration sessions."""


@session.command("start")
@click.option("--author", default="operator", show_default=True)
@click.pass_context
@_handle
def session_start(ctx, author):
    with _open_store(ctx) as store:
        _emit(ctx, store.create_session(author).to_doc())


@session.command("show")
@click.argument("session_id")
@click.pass_context
@_handle
def session_show(ctx, session_id):
    with _open_store(ctx) as store:
        _emit(ctx, store.pathways.session(session_id).to_doc())


@session.command("event")
@click.argument("session_id")
@click.option("--kind", required=True,
              type=click.Choice(["query", "content_view", "zoom", "source_evaluation",
                                 "source_exclusion", "annotation"]))
@click.option("--payload", required=True, help="JSON object or @file.json")
@click.option("--timestamp", help="ISO timestamp (defaults to now)")
@click.option("--relation", default="followed_by",
              type=click.Choice(["followed_by", "refines"]), show_default=True)
@click.pass_context
@_handle
def session_event(ctx, session_id, kind, payload, timestamp, relation):
    with _open_store(ctx) as store:
        sess, node = store.record_event(
            session_id, kind, _load_json_arg(payload, "payload"), timestamp, relation
        )
        _emit(ctx, {"session_id": sess.id, "node": node.to_doc(),
                    "current_node": sess.current_node})


@session.command("exclude")
@click.argument("session_id")
@click.argument("source_id")
@click.option("--note", required=True)
@click.pass_context
@_handle
def session_exclude(ctx, session_id, source_id, note):
    """Exclude a source from this session's zoom results, with a note."""
    with _open_store(ctx) as store:
        sess, node = store.add_exclusion(session_id, source_id, note)
        _emit(ctx, {"session_id": sess.id, "node": node.to_doc(),
                    "exclusions": sess.to_doc()["exclusions"]})


@session.command("archive")
@click.argument("session_id")
@click.pass_context
@_handle
def session_archive(ctx, session_id):
    with _open_store(ctx) as store:
        _emit(ctx, store.archive_session(session_id).to_doc())


# -- pathways ----------------------------------------------------------------

@main.group()
def pathway():
    """Archived pathways: inspect, branch, resume, share, report."""


@pathway.command("list")
@click.option("--author", default="operator", show_default=True)
@click.pass_context
@_handle
def pathway_list(ctx, author):
    with _open_store(ctx) as store:
        _emit(ctx, [
            {"id": p.id, "version": p.version, "author": p.author,
             "parent_version": list(p.parent_version) if p.parent_version else None,
             "node_count": len(p.nodes), "created_at": p.created_at}
            for p in store.visible_pathways(author)
        ])


@pathway.command("show")
@click.argument("pathway_id")
@click.argument("version", type=int)
@click.option("--author", default="operator", show_default=True)
@click.pass_context
@_handle
def pathway_show(ctx, pathway_id, version, author):
    with _open_store(ctx) as store:
        store.require_pathway_access(pathway_id, version, author)
        _emit(ctx, store.pathways.pathway(pathway_id, version).to_doc())


@pathway.command("branch")
@click.argument("pathway_id")
@click.argument("version", type=int)
@click.option("--node", "node_id", help="branch point (defaults to the terminal node)")
@click.option("--author", default="operator", show_default=True)
@click.pass_context
@_handle
def pathway_branch(ctx, pathway_id, version, node_id, author):
    with _open_store(ctx) as store:
        store.require_pathway_access(pathway_id, version, author)
        _emit(ctx, store.branch_pathway(pathway_id, version, author, node_id).to_doc())


@pathway.command("resume")
@click.argument("pathway_id")
@click.argument("version", type=int)
@click.option("--author", default="operator", show_default=True)
@click.pass_context
@_handle
def pathway_resume(ctx, pathway_id, version, author):
    """Branch at the terminal node: pick up where the pathway left off."""
    with _open_store(ctx) as store:
        store.require_pathway_access(pathway_id, version, author)
        _emit(ctx, store.branch_pathway(pathway_id, version, author, None).to_doc())


@pathway.command("share")
@click.argument("pathway_id")
@click.argument("version", type=int)
@click.option("--recipient", required=True, help="author id, or '*' for public")
@click.pass_context
@_handle
def pathway_share(ctx, pathway_id, version, recipient):
    with _open_store(ctx) as store:
        token = store.share_pathway(pathway_id, version, recipient)
        _emit(ctx, {"pathway_id": pathway_id, "version": version,
                    "recipient": recipient, "token": token})


@pathway.command("report")
@click.argument("pathway_id")
@click.argument("version", type=int)
@click.option("--author", default="operator", show_default=True)
@click.pass_context
@_handle
def pathway_report(ctx, pathway_id, version, author):
    """Emit the self-contained exploration report (canonical JSON)."""
    with _open_store(ctx) as store:
        store.require_pathway_access(pathway_id, version, author)
        sys.stdout.write(store.pathway_report(pathway_id, version).decode("utf-8"))
        sys.stdout.write("\n")


@pathway.command("suggest")
@click.option("--signature", help="node signature string")
@click.option("--kind", help="build the signature from kind + payload")
@click.option("--payload", help="JSON payload used with --kind")
@click.pass_context
@_handle
def pathway_suggest(ctx, signature, kind, payload):
    """Rank what explorers recorded next after a matching step."""
    from .pathways import node_signature

    with _open_store(ctx) as store:
        if signature is None:
            if not kind:
                raise InvalidPayload("pass --signature or --kind/--payload")
            signature = node_signature(
                kind, _load_json_arg(payload, "payload") if payload else {}
            )
        _emit(ctx, store.suggest_next(signature))


# -- persistence -----------------------------------------------------------------

@main.command("import")
@click.argument("path", type=click.Path(exists=True))
@click.pass_context
@_handle
def import_cmd(ctx, path):
    """Load a canonical corpus file into an empty data directory."""
    with _open_store(ctx) as store:
        store.import_records(path)
        _emit(ctx, {"imported": str(path), "records": len(store.iter_records()),
                    "sha256": store.digest()})


@main.command("export")
@click.argument("path", required=False, type=click.Path())
@click.pass_context
@_handle
def export_cmd(ctx, path):
    """Write the canonical snapshot (in place when no PATH), print its digest."""
    with _open_store(ctx) as store:
        if path is None:
            store.compact()
            path = str(Path(ctx.obj["data_dir"]) / SNAPSHOT_FILE)
        else:
            store.export_canonical(path)
        _emit(ctx, {"exported": path, "records": len(store.iter_records()),
                    "sha256": store.digest()})


if __name__ == "__main__":
    main()
