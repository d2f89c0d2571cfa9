"""Operator command line: ingest corpora, inspect, run queries, serve.

Configuration precedence is flags, then environment variables
(MUSHAF_INDEX, MUSHAF_STORE, MUSHAF_LISTEN), then the optional JSON config
file passed with --config.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import __version__
from .abjad import DEFAULT_TABLE, AbjadTable, jummal as jummal_value
from .conventions import ReferenceCounts, reconcile, render_report
from .corpus import Selection, ingest_files
from .errors import MushafError
from .querylab import (
    ExecutionLimits,
    ParameterSpec,
    QueryDefinition,
    RelationalStore,
    bind_parameters,
    execute_main,
    referenced_parameters,
    validate_query,
)
from .service import Engine, ServiceConfig, create_app
from .splitter import SplitRequest, split as split_op
from .stats import ayah_stats, selection_stats, surah_stats, word_stats
from .store import build_store, load_index
from .wiki import Principal, WikiStore


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path, encoding="utf-8") as f:
        return json.load(f)


def _setting(flag_value, config: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    if key in config:
        return config[key]
    return default


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _emit(data: dict, as_json: bool, text_lines: list[str]) -> None:
    if as_json:
        click.echo(json.dumps(data, ensure_ascii=False, indent=1))
    else:
        for line in text_lines:
            click.echo(line)


def _report_lines(report) -> list[str]:
    width = max(len(label) for label in report.labels())
    return [f"{label:<{width}}  {value}" for label, value in report.rows]


@click.group()
@click.version_option(version=__version__, prog_name="mushaf")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="JSON config file (lowest-precedence settings).")
@click.pass_context
def main(ctx: click.Context, config_path: str | None) -> None:
    """Quran corpus indexing and query publishing engine."""
    ctx.obj = _load_config(config_path)


index_option = click.option(
    "--index", "index_path", envvar="MUSHAF_INDEX", type=click.Path(), default=None,
    help="Path to the serialized index/store file [env: MUSHAF_INDEX].",
)
store_option = click.option(
    "--store", "store_path", envvar="MUSHAF_STORE", type=click.Path(), default=None,
    help="Path to the wiki store file [env: MUSHAF_STORE].",
)
json_option = click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")


def _resolve_index(ctx: click.Context, index_path: str | None) -> Path:
    value = _setting(index_path, ctx.obj or {}, "index", None)
    if value is None:
        _fail("no index path; pass --index, set MUSHAF_INDEX or add `index` to the config file")
    return Path(value)


def _resolve_store(ctx: click.Context, store_path: str | None) -> Path:
    value = _setting(store_path, ctx.obj or {}, "store", None)
    if value is None:
        _fail("no wiki store path; pass --store, set MUSHAF_STORE or add `store` to the config file")
    return Path(value)


def _open_index(ctx: click.Context, index_path: str | None):
    try:
        return load_index(_resolve_index(ctx, index_path))
    except MushafError as exc:
        _fail(str(exc))


@main.command()
@click.argument("corpus", type=click.Path())
@click.option("--metadata-dir", type=click.Path(), required=True,
              help="Directory with surahs.tsv, pages.tsv, juzs.tsv, rubs.tsv.")
@click.option("--out", "out_path", type=click.Path(), required=True,
              help="Serialized index/store file to write.")
@click.option("--expected-counts", type=click.Path(exists=True), default=None,
              help="Reference counts JSON to reconcile against.")
@click.option("--conventions-out", type=click.Path(), default=None,
              help="Write the reconciliation report here (requires --expected-counts).")
@json_option
def ingest(corpus: str, metadata_dir: str, out_path: str, expected_counts: str | None,
           conventions_out: str | None, as_json: bool) -> None:
    """Ingest a corpus file and write the serialized index."""
    try:
        index = ingest_files(corpus, metadata_dir)
        build_store(index, out_path)
    except (MushafError, OSError) as exc:
        _fail(str(exc))
    payload = {
        "index": str(out_path),
        "content_hash": index.content_hash,
        "totals": {
            "surahs": index.total_surahs,
            "ayahs": index.total_ayahs,
            "words": index.total_words,
            "letters": index.total_letters,
        },
    }
    if expected_counts is not None:
        checks = reconcile(index, ReferenceCounts.from_json(expected_counts))
        payload["reconciliation"] = [
            {"metric": c.metric, "expected": c.expected, "actual": c.actual, "delta": c.delta}
            for c in checks
        ]
        if conventions_out is not None:
            Path(conventions_out).write_text(render_report(index, checks), encoding="utf-8")
            payload["conventions_report"] = str(conventions_out)
    _emit(payload, as_json, [
        f"ingested {index.total_surahs} surahs, {index.total_ayahs} ayahs, "
        f"{index.total_words} words, {index.total_letters} letters",
        f"index written to {out_path} (content hash {index.content_hash[:12]}...)",
    ])


@main.group()
def stats() -> None:
    """Statistics reports for a surah, ayah, word or selection."""


@stats.command("surah")
@click.argument("surah_no", type=int)
@index_option
@json_option
@click.pass_context
def stats_surah(ctx: click.Context, surah_no: int, index_path: str | None, as_json: bool) -> None:
    index = _open_index(ctx, index_path)
    try:
        report = surah_stats(index, surah_no)
    except MushafError as exc:
        _fail(str(exc))
    _emit(report.to_dict(), as_json, _report_lines(report))


@stats.command("ayah")
@click.argument("serial", type=int)
@index_option
@json_option
@click.pass_context
def stats_ayah(ctx: click.Context, serial: int, index_path: str | None, as_json: bool) -> None:
    index = _open_index(ctx, index_path)
    try:
        report = ayah_stats(index, serial)
    except MushafError as exc:
        _fail(str(exc))
    _emit(report.to_dict(), as_json, _report_lines(report))


@stats.command("word")
@click.argument("serial", type=int)
@index_option
@json_option
@click.pass_context
def stats_word(ctx: click.Context, serial: int, index_path: str | None, as_json: bool) -> None:
    index = _open_index(ctx, index_path)
    try:
        report = word_stats(index, serial)
    except MushafError as exc:
        _fail(str(exc))
    _emit(report.to_dict(), as_json, _report_lines(report))


@stats.command("selection")
@click.argument("serial", type=int)
@click.argument("start", type=int)
@click.argument("end", type=int)
@index_option
@json_option
@click.pass_context
def stats_selection(ctx: click.Context, serial: int, start: int, end: int,
                    index_path: str | None, as_json: bool) -> None:
    index = _open_index(ctx, index_path)
    try:
        report = selection_stats(index, Selection(serial, start, end))
    except MushafError as exc:
        _fail(str(exc))
    _emit(report.to_dict(), as_json, _report_lines(report))


@main.command("split")
@click.option("--surah", "surah_no", type=int, default=None)
@click.option("--ayah", "ayah_serial_no", type=int, default=None)
@click.option("--word", "word_serial_no", type=int, default=None)
@click.option("--selection", "selection_spec", default=None, metavar="SERIAL:START:END")
@click.option("--unit", type=click.Choice(["letters", "words"]), default="letters")
@click.option("--tashkeel", type=click.Choice(["with", "without"]), default="without")
@click.option("--grouped/--ungrouped", default=False)
@index_option
@json_option
@click.pass_context
def split_cmd(ctx: click.Context, surah_no, ayah_serial_no, word_serial_no, selection_spec,
              unit, tashkeel, grouped, index_path, as_json) -> None:
    """Split a target into words or letters, optionally grouped with counts."""
    index = _open_index(ctx, index_path)
    selection = None
    if selection_spec is not None:
        parts = selection_spec.split(":")
        if len(parts) != 3 or not all(p.lstrip("-").isdigit() for p in parts):
            _fail("--selection expects SERIAL:START:END")
        selection = Selection(int(parts[0]), int(parts[1]), int(parts[2]))
    try:
        request = SplitRequest(
            unit=unit, tashkeel=tashkeel, grouping="grouped" if grouped else "none",
            surah_no=surah_no, ayah_serial_no=ayah_serial_no,
            word_serial_no=word_serial_no, selection=selection,
        )
        result = split_op(index, request)
    except MushafError as exc:
        _fail(str(exc))
    if result.grouped:
        lines = [f"{count}\t{token}" for token, count in result.groups]
    else:
        lines = [f"{i}\t{token}" for i, token in enumerate(result.tokens, 1)]
    _emit(result.to_dict(), as_json, lines)


@main.command("jummal")
@click.argument("text")
@click.option("--table", "table_path", type=click.Path(exists=True), default=None,
              help="TSV of letter<TAB>value overrides.")
@json_option
def jummal_cmd(text: str, table_path: str | None, as_json: bool) -> None:
    """Jummal (abjad) value of an Arabic text."""
    try:
        table = AbjadTable.from_tsv(table_path) if table_path else DEFAULT_TABLE
        value = jummal_value(text, table)
    except MushafError as exc:
        _fail(str(exc))
    _emit({"text": text, "jummal": value}, as_json, [str(value)])


def _ad_hoc_definition(sql: str) -> QueryDefinition:
    """Wrap raw SQL as a definition, declaring each @param as alphanumeric."""
    params = tuple(
        ParameterSpec(sequence_no=i, display_name=name, name=f"@{name}")
        for i, name in enumerate(referenced_parameters(sql), 1)
    )
    return QueryDefinition(id="adhoc", title="ad hoc", main_sql=sql, parameters=params)


def _read_sql_arg(sql_or_path: str) -> str:
    path = Path(sql_or_path)
    if path.exists():
        return path.read_text(encoding="utf-8")
    return sql_or_path


@main.group()
def query() -> None:
    """Validate or run read-only SQL against the relational store."""


@query.command("validate")
@click.argument("sql_or_path")
@index_option
@json_option
@click.pass_context
def query_validate(ctx: click.Context, sql_or_path: str, index_path: str | None, as_json: bool) -> None:
    store = RelationalStore(_resolve_index(ctx, index_path))
    defn = _ad_hoc_definition(_read_sql_arg(sql_or_path))
    report = validate_query(defn, store)
    lines = ["valid"] if report.ok else [f"{v.code}: {v.message}" for v in report.violations]
    _emit(report.to_dict(), as_json, lines)
    if not report.ok:
        sys.exit(1)


@query.command("run")
@click.argument("sql_or_path")
@click.option("--param", "params", multiple=True, metavar="NAME=VALUE",
              help="Bind @NAME to VALUE (repeatable).")
@click.option("--row-limit", type=int, default=10_000, show_default=True)
@click.option("--timeout", "timeout_seconds", type=float, default=30.0, show_default=True)
@index_option
@json_option
@click.pass_context
def query_run(ctx: click.Context, sql_or_path: str, params: tuple[str, ...], row_limit: int,
              timeout_seconds: float, index_path: str | None, as_json: bool) -> None:
    store = RelationalStore(_resolve_index(ctx, index_path))
    defn = _ad_hoc_definition(_read_sql_arg(sql_or_path))
    values: dict[str, str] = {}
    for item in params:
        name, sep, value = item.partition("=")
        if not sep:
            _fail(f"--param expects NAME=VALUE, got {item!r}")
        values[name.lstrip("@")] = value
    report = validate_query(defn, store)
    if not report.ok:
        for v in report.violations:
            click.echo(f"error: {v.code}: {v.message}", err=True)
        sys.exit(1)
    try:
        bound = bind_parameters(defn, values)
        grid = execute_main(defn, bound, store, ExecutionLimits(row_limit, timeout_seconds))
    except MushafError as exc:
        _fail(str(exc))
    lines = ["\t".join(grid.columns)]
    lines += ["\t".join("" if v is None else str(v) for v in row) for row in grid.rows]
    if grid.truncated:
        lines.append(f"... truncated at {row_limit} rows")
    _emit(grid.to_dict(), as_json, lines)


@main.group()
def wiki() -> None:
    """Inspect and administer the query wiki store."""


@wiki.command("list")
@store_option
@json_option
@click.pass_context
def wiki_list(ctx: click.Context, store_path: str | None, as_json: bool) -> None:
    wiki_store = WikiStore(_resolve_store(ctx, store_path))
    admin = Principal(name="operator", role="admin")
    queries = wiki_store.list_queries(admin)
    payload = {
        "queries": [
            {"id": q.id, "title": q.title, "state": q.state, "owner": q.owner,
             "topic_path": list(q.topic_path)}
            for q in queries
        ],
        "toc": wiki_store.toc().to_dict(),
    }
    lines = [f"{q.id}  {q.state:<9}  {q.owner:<12}  {q.title}" for q in queries] or ["(no queries)"]
    _emit(payload, as_json, lines)


@wiki.command("publish")
@click.argument("query_id")
@click.option("--topic", required=True, help="Topic path, segments separated by '/'.")
@click.option("--decider", default="operator", show_default=True)
@store_option
@json_option
@click.pass_context
def wiki_publish(ctx: click.Context, query_id: str, topic: str, decider: str,
                 store_path: str | None, as_json: bool) -> None:
    """Approve a submitted query into the table of contents."""
    wiki_store = WikiStore(_resolve_store(ctx, store_path))
    topic_path = tuple(part.strip() for part in topic.split("/") if part.strip())
    try:
        defn = wiki_store.decide(
            Principal(name=decider, role="admin"), query_id, "Published", topic_path
        )
    except MushafError as exc:
        _fail(str(exc))
    _emit(defn.to_dict(), as_json, [f"{defn.id} published under {' / '.join(topic_path)}"])


@main.command()
@click.option("--listen", envvar="MUSHAF_LISTEN", default=None,
              help="host:port to bind [env: MUSHAF_LISTEN].")
@click.option("--workers", type=int, default=None, help="Query worker pool size.")
@click.option("--row-limit", type=int, default=None)
@click.option("--timeout", "timeout_seconds", type=float, default=None)
@click.option("--tokens", "tokens_path", type=click.Path(exists=True), default=None,
              help="JSON file mapping bearer tokens to {name, role}.")
@click.option("--webui", "webui_dir", type=click.Path(), default=None,
              help="Directory of built web assets to serve at /.")
@index_option
@store_option
@click.pass_context
def serve(ctx: click.Context, listen: str | None, workers: int | None, row_limit: int | None,
          timeout_seconds: float | None, tokens_path: str | None, webui_dir: str | None,
          index_path: str | None, store_path: str | None) -> None:
    """Launch the HTTP JSON API."""
    import uvicorn

    cfg = ctx.obj or {}
    listen = _setting(listen, cfg, "listen", "127.0.0.1:8400")
    host, _, port_s = listen.partition(":")
    if not port_s.isdigit():
        _fail(f"--listen expects host:port, got {listen!r}")
    index = _open_index(ctx, index_path)
    store = RelationalStore(_resolve_index(ctx, index_path))
    wiki_store = WikiStore(_resolve_store(ctx, store_path))
    tokens: dict[str, Principal] = {}
    tokens_file = _setting(tokens_path, cfg, "tokens", None)
    if tokens_file is not None:
        with open(tokens_file, encoding="utf-8") as f:
            tokens = {
                token: Principal(name=spec["name"], role=spec["role"])
                for token, spec in json.load(f).items()
            }
    config = ServiceConfig(
        workers=_setting(workers, cfg, "workers", ServiceConfig().workers),
        row_limit=_setting(row_limit, cfg, "row_limit", 10_000),
        timeout_seconds=_setting(timeout_seconds, cfg, "timeout_seconds", 30.0),
        tokens=tokens,
        webui_dir=Path(webui_dir) if webui_dir else None,
    )
    app = create_app(Engine(index, store, wiki_store, config))
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port_s))


if __name__ == "__main__":
    main()
