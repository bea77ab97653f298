"""File formats and report rendering.

Matrix files are CSV: a header row whose first cell labels the id column and
whose remaining cells are criterion names, then one row per alternative.
Criteria and topology files are JSON; ``null`` bounds are open.
"""

from __future__ import annotations

import csv
import io
import json
import math
from decimal import ROUND_HALF_UP, Decimal
from pathlib import Path
from typing import Any, Optional, Sequence

import numpy as np

from .engine import RankingReport, SatisfactionMatrix
from .model import CriterionSpec, DecisionProblem, IsocovError, Nature
from .topology import AggregationRule, Link, MetricRule, Topology, TopologyError

FORMATS = ("json", "csv", "table")
DEFAULT_PRECISION = 4


class ParseError(IsocovError):
    def __init__(self, message: str, path=None, line: Optional[int] = None, column: Optional[int] = None):
        self.path = None if path is None else str(path)
        self.line = line
        self.column = column
        where = ""
        if self.path:
            where = self.path
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}" if where else message)


# -- parsing -----------------------------------------------------------------


def _read_json(path) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, path, exc.lineno, exc.colno) from exc


def _number(value, what: str, path=None) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ParseError(f"{what} must be a number, got {value!r}", path)
    if not math.isfinite(value):
        raise ParseError(f"{what} must be finite", path)
    return value


def criteria_from_json(data, path=None) -> list[CriterionSpec]:
    if not isinstance(data, list):
        raise ParseError("criteria file must hold a JSON array of objects", path)
    out = []
    for k, item in enumerate(data):
        where = f"criteria[{k}]"
        if not isinstance(item, dict):
            raise ParseError(f"{where} must be an object", path)
        for key in ("name", "nature", "weight"):
            if key not in item:
                raise ParseError(f"{where} is missing field {key!r}", path)
        unknown = set(item) - {"name", "nature", "weight", "lower_bound", "upper_bound"}
        if unknown:
            raise ParseError(f"{where} has unknown field(s) {sorted(unknown)}", path)
        name = item["name"]
        if not isinstance(name, str) or not name:
            raise ParseError(f"{where}.name must be a non-empty string", path)
        try:
            nature = Nature(item["nature"])
        except ValueError:
            allowed = ", ".join(repr(n.value) for n in Nature)
            raise ParseError(
                f"{where}.nature ({name!r}) must be one of {allowed}, got {item['nature']!r}", path
            ) from None
        weight = _number(item["weight"], f"{where}.weight", path)
        bounds = []
        for key in ("lower_bound", "upper_bound"):
            value = item.get(key)
            bounds.append(None if value is None else _number(value, f"{where}.{key}", path))
        out.append(CriterionSpec(name, nature, weight, bounds[0], bounds[1]))
    return out


def criteria_to_json(criteria: Sequence[CriterionSpec]) -> list[dict]:
    return [
        {
            "name": c.name,
            "nature": c.nature.value,
            "weight": c.weight,
            "lower_bound": c.lower_bound,
            "upper_bound": c.upper_bound,
        }
        for c in criteria
    ]


def load_criteria(path) -> list[CriterionSpec]:
    return criteria_from_json(_read_json(path), path)


def read_matrix(path) -> tuple[list[str], list[str], list[list[float]]]:
    """Parse a ratings CSV into (criterion names, alternative ids, rows)."""
    try:
        text = Path(path).read_text(encoding="utf-8-sig")
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path) from exc
    reader = csv.reader(io.StringIO(text))
    header = None
    ids: list[str] = []
    rows: list[list[float]] = []
    seen: dict[str, int] = {}
    for record in reader:
        line = reader.line_num
        if not record or all(not cell.strip() for cell in record):
            continue
        if header is None:
            header = [cell.strip() for cell in record]
            if len(header) < 2:
                raise ParseError("header needs an id column and at least one criterion", path, line)
            continue
        if len(record) != len(header):
            raise ParseError(f"expected {len(header)} cells, found {len(record)}", path, line)
        alt = record[0].strip()
        if not alt:
            raise ParseError("empty alternative id", path, line, 1)
        if alt in seen:
            raise ParseError(f"duplicate alternative id {alt!r} (first on line {seen[alt]})", path, line, 1)
        seen[alt] = line
        values = []
        for col, cell in enumerate(record[1:], start=2):
            cell = cell.strip()
            column_name = header[col - 1]
            if not cell:
                raise ParseError(f"blank cell for {alt!r} / {column_name!r}", path, line, col)
            try:
                value = float(cell)
            except ValueError:
                raise ParseError(
                    f"non-numeric cell {cell!r} for {alt!r} / {column_name!r}", path, line, col
                ) from None
            if not math.isfinite(value):
                raise ParseError(f"non-finite cell {cell!r} for {alt!r} / {column_name!r}", path, line, col)
            values.append(value)
        ids.append(alt)
        rows.append(values)
    if header is None:
        raise ParseError("empty matrix file", path)
    return header[1:], ids, rows


def load_problem(matrix_path, criteria_path, hard: bool = False) -> DecisionProblem:
    """Read a ratings CSV and a criteria JSON file into a problem.

    Column order of the matrix must equal the order of the criteria list.
    The result is not validated; call :func:`isocov.model.validate`.
    """
    names, ids, rows = read_matrix(matrix_path)
    criteria = load_criteria(criteria_path)
    expected = [c.name for c in criteria]
    if names != expected:
        raise ParseError(
            f"matrix columns {names} do not match criteria {expected} (same names, same order required)",
            matrix_path,
            1,
        )
    ratings = np.array(rows, dtype=np.float64).reshape(len(rows), len(criteria))
    return DecisionProblem(ids, criteria, ratings, hard)


def problem_to_json(problem: DecisionProblem) -> dict:
    return {
        "alternatives": list(problem.alternatives),
        "criteria": criteria_to_json(problem.criteria),
        "ratings": problem.ratings.tolist(),
        "hard": problem.hard,
    }


def problem_from_json(data, path=None) -> DecisionProblem:
    if not isinstance(data, dict):
        raise ParseError("problem must be a JSON object", path)
    for key in ("alternatives", "criteria", "ratings"):
        if key not in data:
            raise ParseError(f"problem is missing field {key!r}", path)
    criteria = criteria_from_json(data["criteria"], path)
    ratings = data["ratings"]
    if not isinstance(ratings, list) or not all(isinstance(r, list) for r in ratings):
        raise ParseError("ratings must be a list of rows", path)
    for i, row in enumerate(ratings):
        if len(row) != len(criteria):
            raise ParseError(f"ratings[{i}] has {len(row)} values, expected {len(criteria)}", path)
        for j, v in enumerate(row):
            _number(v, f"ratings[{i}][{j}]", path)
    hard = data.get("hard", False)
    if not isinstance(hard, bool):
        raise ParseError("hard must be true or false", path)
    arr = np.array(ratings, dtype=np.float64).reshape(len(ratings), len(criteria))
    return DecisionProblem([str(a) for a in data["alternatives"]], criteria, arr, hard)


def dump_problem(problem: DecisionProblem) -> str:
    return json.dumps(problem_to_json(problem), indent=2)


def loads_problem(text: str) -> DecisionProblem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, None, exc.lineno, exc.colno) from exc
    return problem_from_json(data)


def _parse_rule(spec, where: str, path) -> MetricRule:
    if isinstance(spec, str):
        spec = {"rule": spec}
    if not isinstance(spec, dict) or "rule" not in spec:
        raise ParseError(f"{where} must be a rule name or an object with a 'rule' field", path)
    try:
        rule = AggregationRule(str(spec["rule"]).lower().replace("-", "_"))
    except ValueError:
        allowed = ", ".join(r.value for r in AggregationRule)
        raise ParseError(f"{where}: unknown rule {spec['rule']!r} (expected one of {allowed})", path) from None
    cap = spec.get("cap")
    if cap is not None:
        cap = _number(cap, f"{where}.cap", path)
    return MetricRule(rule, cap)


def topology_from_json(data, path=None) -> Topology:
    if not isinstance(data, dict):
        raise ParseError("topology must be a JSON object", path)
    for key in ("nodes", "links", "source", "destination"):
        if key not in data:
            raise ParseError(f"topology is missing field {key!r}", path)
    if not isinstance(data["nodes"], list):
        raise ParseError("nodes must be a list", path)
    if not isinstance(data["links"], list):
        raise ParseError("links must be a list", path)
    links = []
    for k, item in enumerate(data["links"]):
        where = f"links[{k}]"
        if not isinstance(item, dict) or "from" not in item or "to" not in item:
            raise ParseError(f"{where} must be an object with 'from' and 'to'", path)
        metrics = item.get("metrics", {})
        if not isinstance(metrics, dict):
            raise ParseError(f"{where}.metrics must be an object", path)
        for name, value in metrics.items():
            _number(value, f"{where}.metrics.{name}", path)
        links.append(Link(item["from"], item["to"], metrics))
    rules_data = data.get("rules", {})
    if not isinstance(rules_data, dict):
        raise ParseError("rules must be an object", path)
    rules = {name: _parse_rule(spec, f"rules.{name}", path) for name, spec in rules_data.items()}
    try:
        return Topology(data["nodes"], links, data["source"], data["destination"], rules)
    except TopologyError as exc:
        raise ParseError(str(exc), path) from exc


def load_topology(path) -> Topology:
    return topology_from_json(_read_json(path), path)


# -- rendering ---------------------------------------------------------------


def round_half_away(x: float, places: int) -> Decimal:
    """Round the shortest decimal form of ``x`` half away from zero."""
    return Decimal(repr(float(x))).quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)


def fmt_num(x: float, places: int) -> str:
    out = str(round_half_away(x, places))
    if out.startswith("-") and Decimal(out) == 0:
        out = out[1:]
    return out


def _table(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        widths = [max(w, len(c)) for w, c in zip(widths, row)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        cells = [row[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(row[1:], widths[1:])]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def _csv(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _matrix_sections(report: RankingReport) -> list[tuple[str, list[str], list[list[float]]]]:
    inter = report.intermediates
    crits = list(inter.criteria)
    alts = list(inter.alternatives)
    sections = [
        ("F", ["alternative"] + crits + ["V"], [[a] + list(inter.degrees[i]) + [int(inter.v_flags[i])] for i, a in enumerate(alts)]),
        ("N", ["alternative"] + crits, [[a] + list(inter.normalized[i]) for i, a in enumerate(alts)]),
        ("P", ["alternative"] + crits, [[a] + list(inter.weighted[i]) for i, a in enumerate(alts)]),
        ("ideal", ["vector"] + crits, [["R+"] + list(inter.pis), ["R-"] + list(inter.nis)]),
    ]
    return sections


def _format_cells(row, places: int) -> list[str]:
    out = []
    for cell in row:
        if isinstance(cell, str):
            out.append(cell)
        elif isinstance(cell, (bool, int, np.integer, np.bool_)):
            out.append(str(int(cell)))
        else:
            out.append(fmt_num(cell, places))
    return out


def _intermediates_json(report: RankingReport) -> dict:
    inter = report.intermediates
    return {
        "criteria": list(inter.criteria),
        "alternatives": list(inter.alternatives),
        "F": inter.degrees.tolist(),
        "V": [bool(v) for v in inter.v_flags],
        "N": inter.normalized.tolist(),
        "P": inter.weighted.tolist(),
        "R+": inter.pis.tolist(),
        "R-": inter.nis.tolist(),
    }


def report_to_json(report: RankingReport, intermediates: bool = False) -> dict:
    out: dict[str, Any] = {
        "method": report.method.value,
        "rows": [
            {
                "alternative": r.alternative,
                "score": r.score,
                "rank": r.rank,
                "v_flag": r.v_flag,
                "closeness": r.closeness,
                "s_plus": r.s_plus,
                "s_minus": r.s_minus,
            }
            for r in report.rows
        ],
    }
    if intermediates and report.intermediates is not None:
        out["intermediates"] = _intermediates_json(report)
    return out


def emit_report(
    report: RankingReport,
    fmt: str = "table",
    precision: int = DEFAULT_PRECISION,
    intermediates: bool = False,
) -> str:
    """Render a ranking report.

    JSON carries full double precision regardless of ``precision``. CSV and
    table output round scores half away from zero. With ``intermediates``,
    the F/V, N, P and ideal-vector matrices follow the ranking as extra
    sections (CSV sections start with a ``# name`` line).
    """
    if fmt == "json":
        return json.dumps(report_to_json(report, intermediates), indent=2) + "\n"
    header = ["alternative", "score", "rank", "v_flag"]
    rows = [[r.alternative, fmt_num(r.score, precision), str(r.rank), str(int(r.v_flag))] for r in report.rows]
    if fmt == "csv":
        parts = [_csv(header, rows)]
    elif fmt == "table":
        parts = [f"method: {report.method.value}\n", _table(header, rows)]
    else:
        raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
    if intermediates and report.intermediates is not None:
        for name, sec_header, sec_rows in _matrix_sections(report):
            cells = [_format_cells(r, precision) for r in sec_rows]
            if fmt == "csv":
                parts.append(f"\n# {name}\n" + _csv(sec_header, cells))
            else:
                parts.append(f"\n{name}:\n" + _table(sec_header, cells))
    return "".join(parts)


def emit_degrees(
    problem: DecisionProblem,
    F: SatisfactionMatrix,
    fmt: str = "table",
    precision: int = DEFAULT_PRECISION,
) -> str:
    names = [c.name for c in problem.criteria]
    if fmt == "json":
        payload = {
            "criteria": names,
            "rows": [
                {"alternative": a, "degrees": F.degrees[i].tolist(), "v_flag": bool(F.v_flags[i])}
                for i, a in enumerate(problem.alternatives)
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    header = ["alternative"] + names + ["V"]
    rows = [
        [a] + [fmt_num(x, precision) for x in F.degrees[i]] + [str(int(F.v_flags[i]))]
        for i, a in enumerate(problem.alternatives)
    ]
    if fmt == "csv":
        return _csv(header, rows)
    if fmt == "table":
        return _table(header, rows)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")


def emit_comparison(
    reports: Sequence[RankingReport],
    fmt: str = "table",
    precision: int = DEFAULT_PRECISION,
) -> str:
    """Side-by-side scores and ranks of several methods, one row per
    alternative in input order."""
    alternatives = reports[0].intermediates.alternatives
    lookups = [r.by_alternative() for r in reports]
    if fmt == "json":
        payload = {
            "methods": [r.method.value for r in reports],
            "rows": [
                {
                    "alternative": a,
                    **{
                        r.method.value: {"score": lk[a].score, "rank": lk[a].rank, "v_flag": lk[a].v_flag}
                        for r, lk in zip(reports, lookups)
                    },
                }
                for a in alternatives
            ],
        }
        return json.dumps(payload, indent=2) + "\n"
    header = ["alternative"]
    for r in reports:
        header += [f"{r.method.value} score", f"{r.method.value} rank"]
    rows = []
    for a in alternatives:
        row = [a]
        for lk in lookups:
            row += [fmt_num(lk[a].score, precision), str(lk[a].rank)]
        rows.append(row)
    if fmt == "csv":
        return _csv([h.replace(" ", "_") for h in header], rows)
    if fmt == "table":
        return _table(header, rows)
    raise ValueError(f"unknown format {fmt!r}; expected one of {FORMATS}")
