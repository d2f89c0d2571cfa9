"""Parameterized read-only SQL queries: validation, binding and execution.

Queries are single SELECT statements (CTEs allowed) over the published store
schema, with ``@name`` parameters bound as real sqlite parameters — values are
never spliced into SQL text. Validation reports every violation it finds;
execution adds a stable ordering tiebreak when the author omitted ORDER BY so
published results are deterministic.
"""

from __future__ import annotations

import re
import sqlite3
import time
from dataclasses import dataclass
from pathlib import Path

from . import store as store_mod
from .errors import BindingError, NotFoundError, QueryError, QueryTimeout

PARAM_RE = re.compile(r"@([A-Za-z_][A-Za-z0-9_]*)")
WORD_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")

# Statement-leading keywords a read-only query may use.
ALLOWED_STARTERS = {"SELECT", "WITH", "VALUES"}

# Anything write-, schema- or engine-shaped is rejected wherever it appears
# outside literals. Bare identifiers that collide can be double-quoted.
FORBIDDEN_KEYWORDS = {
    "INSERT", "UPDATE", "DELETE", "DROP", "ALTER", "CREATE", "REPLACE",
    "ATTACH", "DETACH", "PRAGMA", "VACUUM", "REINDEX", "ANALYZE",
    "BEGIN", "COMMIT", "ROLLBACK", "SAVEPOINT", "RELEASE", "TRANSACTION",
    "GRANT", "REVOKE", "MERGE", "TRUNCATE", "EXEC", "EXECUTE", "CALL", "INTO",
}

INPUT_METHODS = ("TextBox", "Dropdown")
DATA_TYPES = ("Alphanumeric", "Integer")
INFO_TYPES = ("Subquery", "AyahSerialNo")
STATES = ("Draft", "Submitted", "Published", "Rejected")


@dataclass(frozen=True)
class ParameterSpec:
    sequence_no: int
    display_name: str
    name: str  # '@'-prefixed
    input_method: str = "TextBox"
    data_type: str = "Alphanumeric"
    default_value: str = ""
    dropdown_source: str | None = None

    @property
    def bare_name(self) -> str:
        return self.name.lstrip("@")

    def to_dict(self) -> dict:
        return {
            "sequence_no": self.sequence_no,
            "display_name": self.display_name,
            "name": self.name,
            "input_method": self.input_method,
            "data_type": self.data_type,
            "default_value": self.default_value,
            "dropdown_source": self.dropdown_source,
        }


@dataclass(frozen=True)
class HyperlinkColumn:
    hyperlink_id: int
    info_type: str  # Subquery | AyahSerialNo
    backing_column: str
    targeted_column: str

    def to_dict(self) -> dict:
        return {
            "hyperlink_id": self.hyperlink_id,
            "info_type": self.info_type,
            "backing_column": self.backing_column,
            "targeted_column": self.targeted_column,
        }


@dataclass(frozen=True)
class QueryDefinition:
    id: str
    title: str
    description: str = ""
    main_sql: str = ""
    parameters: tuple[ParameterSpec, ...] = ()
    detail_sql: str | None = None
    hyperlink_columns: tuple[HyperlinkColumn, ...] = ()
    state: str = "Draft"
    topic_path: tuple[str, ...] = ()
    owner: str = ""
    documentation_name: str | None = None
    rejection_reason: str | None = None

    def parameter(self, bare_name: str) -> ParameterSpec | None:
        for p in self.parameters:
            if p.bare_name == bare_name:
                return p
        return None

    def hyperlink(self, hyperlink_id: int) -> HyperlinkColumn | None:
        for h in self.hyperlink_columns:
            if h.hyperlink_id == hyperlink_id:
                return h
        return None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "title": self.title,
            "description": self.description,
            "main_sql": self.main_sql,
            "parameters": [p.to_dict() for p in self.parameters],
            "detail_sql": self.detail_sql,
            "hyperlink_columns": [h.to_dict() for h in self.hyperlink_columns],
            "state": self.state,
            "topic_path": list(self.topic_path),
            "owner": self.owner,
            "documentation_name": self.documentation_name,
            "rejection_reason": self.rejection_reason,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "QueryDefinition":
        return cls(
            id=d["id"],
            title=d["title"],
            description=d.get("description", ""),
            main_sql=d.get("main_sql", ""),
            parameters=tuple(ParameterSpec(**p) for p in d.get("parameters", [])),
            detail_sql=d.get("detail_sql"),
            hyperlink_columns=tuple(HyperlinkColumn(**h) for h in d.get("hyperlink_columns", [])),
            state=d.get("state", "Draft"),
            topic_path=tuple(d.get("topic_path", [])),
            owner=d.get("owner", ""),
            documentation_name=d.get("documentation_name"),
            rejection_reason=d.get("rejection_reason"),
        )


@dataclass(frozen=True)
class Violation:
    code: str
    message: str

    def to_dict(self) -> dict:
        return {"code": self.code, "message": self.message}


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


@dataclass(frozen=True)
class CellLink:
    row: int
    column: int
    kind: str  # Subquery | AyahSerialNo
    hyperlink_id: int
    value: object

    def to_dict(self) -> dict:
        return {
            "row": self.row,
            "column": self.column,
            "kind": self.kind,
            "hyperlink_id": self.hyperlink_id,
            "value": self.value,
        }


@dataclass(frozen=True)
class ResultGrid:
    columns: tuple[str, ...]
    rows: tuple[tuple, ...]
    links: tuple[CellLink, ...] = ()
    truncated: bool = False
    execution_ms: float = 0.0
    detail: "ResultGrid | None" = None

    def to_dict(self) -> dict:
        d = {
            "columns": list(self.columns),
            "rows": [list(r) for r in self.rows],
            "links": [l.to_dict() for l in self.links],
            "truncated": self.truncated,
            "execution_ms": self.execution_ms,
        }
        d["detail"] = self.detail.to_dict() if self.detail else None
        return d


@dataclass(frozen=True)
class ExecutionLimits:
    row_limit: int = 10_000
    timeout_seconds: float = 30.0


# -- SQL text analysis -------------------------------------------------------


def mask_literals(sql: str) -> str:
    """Blank out string literals, quoted identifiers and comments.

    Lengths are preserved so keyword/parameter scans over the mask line up
    with positions in the original text.
    """
    out = list(sql)
    i, n = 0, len(sql)

    def blank(start: int, end: int) -> None:
        for j in range(start, end):
            if not out[j].isspace():
                out[j] = " "

    while i < n:
        ch = sql[i]
        if ch == "'" or ch == '"' or ch == "`":
            quote = ch
            j = i + 1
            while j < n:
                if sql[j] == quote:
                    if j + 1 < n and sql[j + 1] == quote:  # doubled-quote escape
                        j += 2
                        continue
                    break
                j += 1
            blank(i + 1, min(j, n))
            i = j + 1
        elif ch == "[":
            j = sql.find("]", i + 1)
            j = n if j == -1 else j
            blank(i + 1, j)
            i = j + 1
        elif ch == "-" and sql.startswith("--", i):
            j = sql.find("\n", i)
            j = n if j == -1 else j
            blank(i, j)
            i = j
        elif ch == "/" and sql.startswith("/*", i):
            j = sql.find("*/", i + 2)
            j = n - 2 if j == -1 else j
            blank(i, j + 2)
            i = j + 2
        else:
            i += 1
    return "".join(out)


def statement_parts(sql: str) -> list[str]:
    """Split on semicolons outside literals; drops empty trailing parts."""
    masked = mask_literals(sql)
    parts = []
    start = 0
    for i, ch in enumerate(masked):
        if ch == ";":
            parts.append(sql[start:i])
            start = i + 1
    parts.append(sql[start:])
    return [p for p in parts if p.strip()]


def referenced_parameters(sql: str) -> list[str]:
    """Bare ``@name`` parameter names in first-appearance order."""
    seen: list[str] = []
    for m in PARAM_RE.finditer(mask_literals(sql)):
        if m.group(1) not in seen:
            seen.append(m.group(1))
    return seen


def first_keyword(sql: str) -> str:
    m = WORD_RE.search(mask_literals(sql))
    return m.group(0).upper() if m else ""


def forbidden_keywords(sql: str) -> list[str]:
    found = []
    for m in WORD_RE.finditer(mask_literals(sql)):
        word = m.group(0).upper()
        if word in FORBIDDEN_KEYWORDS and word not in found:
            found.append(word)
    return found


def has_top_level_order_by(sql: str) -> bool:
    masked = mask_literals(sql)
    depth = 0
    for m in re.finditer(r"[()]|\bORDER\b", masked, re.IGNORECASE):
        tok = m.group(0)
        if tok == "(":
            depth += 1
        elif tok == ")":
            depth -= 1
        elif depth == 0:
            return True
    return False


def _statement_violations(sql: str, label: str) -> list[Violation]:
    violations = []
    if not sql or not sql.strip():
        violations.append(Violation("empty_sql", f"{label}: statement is empty"))
        return violations
    parts = statement_parts(sql)
    if len(parts) > 1:
        violations.append(
            Violation("multi_statement", f"{label}: multiple statements are not allowed")
        )
    kw = first_keyword(sql)
    if kw not in ALLOWED_STARTERS:
        violations.append(
            Violation("non_select", f"{label}: only SELECT statements are allowed, found {kw or 'nothing'}")
        )
    for word in forbidden_keywords(sql):
        violations.append(Violation("forbidden_keyword", f"{label}: forbidden keyword {word}"))
    return violations


# -- relational store wrapper ---------------------------------------------------


class RelationalStore:
    """Handle to the store file; opens an isolated read session per execution."""

    def __init__(self, path: str | Path):
        self.path = Path(path)

    def connect(self) -> sqlite3.Connection:
        return store_mod.open_read_connection(self.path)

    def file_hash(self) -> str:
        return store_mod.file_hash(self.path)

    def probe_columns(self, sql: str, param_names: list[str]) -> tuple[str, ...]:
        """Result column names of ``sql`` without materializing rows."""
        conn = self.connect()
        try:
            cur = conn.execute(
                f"SELECT * FROM (\n{sql}\n) LIMIT 0", {name: None for name in param_names}
            )
            return tuple(d[0] for d in cur.description)
        finally:
            conn.close()


# -- operations -------------------------------------------------------------------


def validate_query(defn: QueryDefinition, store: RelationalStore) -> ValidationReport:
    """Static checks over a definition; reports all violations, not just the first."""
    violations: list[Violation] = []

    violations.extend(_statement_violations(defn.main_sql, "main query"))

    declared: dict[str, ParameterSpec] = {}
    for p in defn.parameters:
        if not p.name.startswith("@") or not PARAM_RE.fullmatch(p.name):
            violations.append(Violation("bad_parameter_name", f"parameter name {p.name!r} must be @Identifier"))
            continue
        if p.bare_name in declared:
            violations.append(Violation("duplicate_parameter", f"parameter {p.name} declared twice"))
        declared[p.bare_name] = p
        if p.input_method not in INPUT_METHODS:
            violations.append(Violation("bad_input_method", f"{p.name}: unknown input method {p.input_method!r}"))
        if p.data_type not in DATA_TYPES:
            violations.append(Violation("bad_data_type", f"{p.name}: unknown data type {p.data_type!r}"))
        elif p.data_type == "Integer" and p.default_value:
            try:
                int(p.default_value)
            except ValueError:
                violations.append(
                    Violation("bad_default", f"{p.name}: default {p.default_value!r} is not an integer")
                )
    sequence = sorted(p.sequence_no for p in defn.parameters)
    if sequence != list(range(1, len(sequence) + 1)):
        violations.append(Violation("bad_sequence", "parameter sequence numbers must be dense from 1"))

    main_params = referenced_parameters(defn.main_sql)
    for name in main_params:
        if name not in declared:
            violations.append(Violation("unbound_parameter", f"main query references undeclared @{name}"))

    backing_names = {h.backing_column for h in defn.hyperlink_columns if h.info_type == "Subquery"}
    if defn.detail_sql is not None:
        violations.extend(_statement_violations(defn.detail_sql, "detail query"))
        for name in referenced_parameters(defn.detail_sql):
            if name not in declared and name not in backing_names:
                violations.append(
                    Violation(
                        "unbound_parameter",
                        f"detail query references @{name}, which is neither declared nor a hyperlink backing column",
                    )
                )

    # Column resolution needs a syntactically valid main query.
    main_columns: tuple[str, ...] = ()
    if not any(v.code in ("empty_sql", "multi_statement", "non_select") for v in violations):
        try:
            main_columns = store.probe_columns(defn.main_sql, main_params)
        except sqlite3.Error as exc:
            violations.append(Violation("sql_error", f"main query: {exc}"))

    seen_link_ids = set()
    for h in defn.hyperlink_columns:
        if h.hyperlink_id in seen_link_ids:
            violations.append(Violation("duplicate_hyperlink", f"hyperlink id {h.hyperlink_id} used twice"))
        seen_link_ids.add(h.hyperlink_id)
        if h.info_type not in INFO_TYPES:
            violations.append(Violation("bad_info_type", f"hyperlink {h.hyperlink_id}: unknown info type {h.info_type!r}"))
            continue
        if h.info_type == "Subquery" and defn.detail_sql is None:
            violations.append(
                Violation("missing_detail", f"hyperlink {h.hyperlink_id}: Subquery link requires a detail query")
            )
        if main_columns:
            for role, column in (("backing", h.backing_column), ("targeted", h.targeted_column)):
                if column not in main_columns:
                    violations.append(
                        Violation(
                            "unknown_column",
                            f"hyperlink {h.hyperlink_id}: {role} column {column!r} not in main query result "
                            f"(columns: {', '.join(main_columns)})",
                        )
                    )

    return ValidationReport(violations=tuple(violations))


def bind_parameters(defn: QueryDefinition, user_values: dict[str, str]) -> dict[str, int | str]:
    """Typed binding values keyed by bare name; missing values take defaults."""
    declared = {p.bare_name: p for p in defn.parameters}
    for raw_name in user_values:
        if raw_name.lstrip("@") not in declared:
            raise BindingError(f"unknown parameter {raw_name!r}")
    bound: dict[str, int | str] = {}
    for p in defn.parameters:
        given = user_values.get(p.name, user_values.get(p.bare_name))
        raw = p.default_value if given is None else given
        if p.data_type == "Integer":
            try:
                bound[p.bare_name] = int(str(raw).strip())
            except ValueError:
                raise BindingError(f"parameter {p.name} expects an integer, got {raw!r}") from None
        else:
            bound[p.bare_name] = str(raw)
    return bound


def _execute_grid(
    store: RelationalStore,
    sql: str,
    bindings: dict[str, int | str],
    limits: ExecutionLimits,
) -> tuple[tuple[str, ...], list[tuple], bool, float]:
    """Run one statement with ordering tiebreak, row cap and wall-clock timeout."""
    referenced = referenced_parameters(sql)
    missing = [name for name in referenced if name not in bindings]
    if missing:
        raise BindingError(f"no value bound for @{missing[0]}")
    params = {name: bindings[name] for name in referenced}

    if not has_top_level_order_by(sql):
        try:
            columns = store.probe_columns(sql, referenced)
        except sqlite3.Error as exc:
            raise QueryError(str(exc)) from None
        tiebreak = ", ".join(str(i) for i in range(1, len(columns) + 1))
        sql = f"SELECT * FROM (\n{sql}\n) ORDER BY {tiebreak}"

    conn = store.connect()
    started = time.monotonic()
    deadline = started + limits.timeout_seconds
    timed_out = False

    def watchdog() -> int:
        nonlocal timed_out
        if time.monotonic() > deadline:
            timed_out = True
            return 1
        return 0

    conn.set_progress_handler(watchdog, 5_000)
    try:
        cur = conn.execute(sql, params)
        columns = tuple(d[0] for d in cur.description)
        rows = cur.fetchmany(limits.row_limit)
        truncated = cur.fetchone() is not None
    except sqlite3.OperationalError as exc:
        if timed_out:
            raise QueryTimeout(
                f"query exceeded {limits.timeout_seconds:g}s wall-clock limit"
            ) from None
        raise QueryError(str(exc)) from None
    except sqlite3.Error as exc:
        raise QueryError(str(exc)) from None
    finally:
        conn.close()
    elapsed_ms = (time.monotonic() - started) * 1000.0
    return columns, rows, truncated, elapsed_ms


def _annotate(defn: QueryDefinition, columns: tuple[str, ...], rows: list[tuple]) -> tuple[CellLink, ...]:
    links: list[CellLink] = []
    positions = {name: i for i, name in enumerate(columns)}
    for h in defn.hyperlink_columns:
        if h.backing_column not in positions or h.targeted_column not in positions:
            continue
        backing_idx = positions[h.backing_column]
        target_idx = positions[h.targeted_column]
        for row_idx, row in enumerate(rows):
            links.append(
                CellLink(
                    row=row_idx,
                    column=target_idx,
                    kind=h.info_type,
                    hyperlink_id=h.hyperlink_id,
                    value=row[backing_idx],
                )
            )
    return tuple(links)


def execute_main(
    defn: QueryDefinition,
    bound: dict[str, int | str],
    store: RelationalStore,
    limits: ExecutionLimits = ExecutionLimits(),
) -> ResultGrid:
    columns, rows, truncated, elapsed_ms = _execute_grid(store, defn.main_sql, bound, limits)
    return ResultGrid(
        columns=columns,
        rows=tuple(rows),
        links=_annotate(defn, columns, rows),
        truncated=truncated,
        execution_ms=elapsed_ms,
    )


def execute_detail(
    defn: QueryDefinition,
    main_columns: tuple[str, ...],
    row: tuple,
    hyperlink_id: int,
    bound: dict[str, int | str],
    store: RelationalStore,
    limits: ExecutionLimits = ExecutionLimits(),
) -> ResultGrid:
    """Run the detail query for a clicked Subquery hyperlink on a main-grid row."""
    link = defn.hyperlink(hyperlink_id)
    if link is None:
        raise NotFoundError(f"hyperlink {hyperlink_id} not defined on query {defn.id}")
    if link.info_type != "Subquery":
        raise QueryError(
            f"hyperlink {hyperlink_id} is {link.info_type}; it navigates, it has no detail query"
        )
    if defn.detail_sql is None:
        raise QueryError(f"query {defn.id} has no detail query")
    if link.backing_column not in main_columns:
        raise QueryError(f"backing column {link.backing_column!r} missing from result row")
    backing_value = row[main_columns.index(link.backing_column)]
    if backing_value is None:
        raise QueryError("null link value")
    detail_bound = dict(bound)
    detail_bound[link.backing_column] = backing_value
    columns, rows, truncated, elapsed_ms = _execute_grid(store, defn.detail_sql, detail_bound, limits)
    return ResultGrid(
        columns=columns, rows=tuple(rows), truncated=truncated, execution_ms=elapsed_ms
    )


def run_query(
    defn: QueryDefinition,
    user_values: dict[str, str],
    store: RelationalStore,
    limits: ExecutionLimits = ExecutionLimits(),
) -> ResultGrid:
    """Validate, bind and execute the main query in one step."""
    report = validate_query(defn, store)
    if not report.ok:
        raise QueryError(
            "; ".join(v.message for v in report.violations) or "validation failed"
        )
    bound = bind_parameters(defn, user_values)
    return execute_main(defn, bound, store, limits)
