"""Serialisation of verification records to JSON, CSV and plain text.

Numbers are written as decimal strings produced by mpmath's exact binary to
decimal conversion with an explicit digit count, never via Python floats,
so a report is a deterministic function of the records it is given.
"""

from __future__ import annotations

import csv
import io
import json
from pathlib import Path
from typing import Any, Iterable

from mpmath.libmp import to_str

from zetaint.errors import ZetaIntError

__all__ = [
    "SCHEMA_VERSION",
    "REPORT_SCHEMA",
    "CSV_COLUMNS",
    "ReportWriteError",
    "format_number",
    "emit_report",
    "write_report",
]

SCHEMA_VERSION = 1
BOUND_DIGITS = 6
CSV_COLUMNS = ("spec", "method_a", "method_b", "value_a", "value_b", "delta", "tolerance", "passed")


class ReportWriteError(ZetaIntError, OSError):
    """A report could not be written to its destination."""


def _real_str(x: Any, digits: int) -> str:
    if hasattr(x, "_mpf_"):
        return to_str(x._mpf_, digits)
    if isinstance(x, int):
        return str(x)
    raise TypeError(f"expected an mpmath real, got {type(x).__name__}")


def format_number(x: Any, digits: int) -> str:
    """Decimal string with ``digits`` significant digits; complex as a+bj."""
    if hasattr(x, "_mpc_"):
        re, im = x.real, x.imag
        if im == 0:
            return _real_str(re, digits)
        im_s = _real_str(abs(im), digits)
        sign = "-" if im < 0 else "+"
        return f"{_real_str(re, digits)}{sign}{im_s}j"
    return _real_str(x, digits)


def _complex_obj(x: Any, digits: int) -> dict:
    if hasattr(x, "_mpc_"):
        return {"re": _real_str(x.real, digits), "im": _real_str(x.imag, digits)}
    return {"re": _real_str(x, digits), "im": "0.0"}


def _spec_obj(spec: Any, digits: int) -> dict:
    from zetaint.exact import MonomialSpec

    if isinstance(spec, MonomialSpec):
        return {"kind": "monomial", "r": spec.r, "s": spec.s, "n": spec.n, "label": spec.label()}
    return {"kind": "conjecture", "z": _complex_obj(spec.z, digits), "label": spec.label()}


def _record_obj(rec: Any, digits: int) -> dict:
    cv = rec.closed_form_value
    return {
        "spec": _spec_obj(rec.spec, digits),
        "closed_form": rec.closed_form,
        "closed_form_value": None if cv is None else _complex_obj(cv, digits),
        "values": [
            {
                "method": r.method,
                "value": _complex_obj(r.value, digits),
                "error_bound": format_number(r.error_bound, BOUND_DIGITS),
                "rigorous": r.rigorous,
                "effort": r.effort,
                "precision_bits": r.precision_bits,
            }
            for r in rec.method_values
        ],
        "comparisons": [
            {
                "method_a": c.method_a,
                "method_b": c.method_b,
                "value_a": _complex_obj(c.value_a, digits),
                "value_b": _complex_obj(c.value_b, digits),
                "delta": format_number(c.delta, BOUND_DIGITS),
                "tolerance": format_number(c.tolerance, BOUND_DIGITS),
                "passed": c.passed,
            }
            for c in rec.comparisons
        ],
        "checks": dict(sorted(rec.checks.items())),
        "extra": {k: format_number(v, digits) for k, v in sorted(rec.extra.items())},
        "max_delta": format_number(rec.max_delta, BOUND_DIGITS),
        "tolerance": format_number(rec.tolerance, BOUND_DIGITS),
        "passed": rec.passed,
        "notes": list(rec.notes),
    }


def _summary(records: list) -> dict:
    passed = sum(1 for r in records if r.passed)
    return {"total": len(records), "passed": passed, "failed": len(records) - passed}


def _sorted(records: Iterable) -> list:
    from zetaint.evaluators import spec_sort_key

    return sorted(records, key=lambda r: spec_sort_key(r.spec))


def emit_report(records: Iterable, fmt: str = "json", *, config: dict | None = None,
                digits: int = 40) -> str:
    """Serialise records; ordering is by spec regardless of input order."""
    recs = _sorted(records)
    if fmt == "json":
        doc = {
            "schema_version": SCHEMA_VERSION,
            "config": config or {},
            "summary": _summary(recs),
            "records": [_record_obj(r, digits) for r in recs],
        }
        return json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in recs:
            label = r.spec.label()
            for c in r.comparisons:
                writer.writerow([
                    label, c.method_a, c.method_b,
                    format_number(c.value_a, digits), format_number(c.value_b, digits),
                    format_number(c.delta, BOUND_DIGITS), format_number(c.tolerance, BOUND_DIGITS),
                    "true" if c.passed else "false",
                ])
        return buf.getvalue()
    if fmt == "text":
        lines = []
        for r in recs:
            flag = "PASS" if r.passed else "FAIL"
            lines.append(
                f"{flag}  {r.spec.label()}  max_delta={format_number(r.max_delta, 3)}"
                f"  tol={format_number(r.tolerance, 3)}"
            )
            for key, value in sorted(r.extra.items()):
                lines.append(f"      {key} = {format_number(value, min(digits, 25))}")
            for note in r.notes:
                lines.append(f"      note: {note}")
        s = _summary(recs)
        lines.append(f"total={s['total']} passed={s['passed']} failed={s['failed']}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def write_report(text: str, path: str | Path) -> None:
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {path}: {exc.strerror or exc}") from exc


_NUM = {"type": "string", "pattern": r"^(-?[0-9]+\.[0-9]+(e[+-][0-9]+)?|[+-]?inf|nan)$"}
_CPLX = {
    "type": "object",
    "required": ["re", "im"],
    "properties": {"re": _NUM, "im": _NUM},
    "additionalProperties": False,
}

REPORT_SCHEMA: dict = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "zetaint verification report",
    "type": "object",
    "required": ["schema_version", "config", "summary", "records"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "config": {"type": "object"},
        "summary": {
            "type": "object",
            "required": ["total", "passed", "failed"],
            "properties": {k: {"type": "integer", "minimum": 0} for k in ("total", "passed", "failed")},
        },
        "records": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["spec", "values", "comparisons", "max_delta", "tolerance", "passed"],
                "properties": {
                    "spec": {
                        "type": "object",
                        "required": ["kind", "label"],
                        "properties": {"kind": {"enum": ["monomial", "conjecture"]}},
                    },
                    "closed_form": {"type": ["string", "null"]},
                    "closed_form_value": {"oneOf": [_CPLX, {"type": "null"}]},
                    "values": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["method", "value", "error_bound", "rigorous", "effort"],
                            "properties": {
                                "method": {"enum": ["series", "reduce1d", "quad2d"]},
                                "value": _CPLX,
                                "error_bound": _NUM,
                            },
                        },
                    },
                    "comparisons": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["method_a", "method_b", "value_a", "value_b",
                                         "delta", "tolerance", "passed"],
                            "properties": {
                                "value_a": _CPLX,
                                "value_b": _CPLX,
                                "delta": _NUM,
                                "tolerance": _NUM,
                                "passed": {"type": "boolean"},
                            },
                        },
                    },
                    "checks": {"type": "object", "additionalProperties": {"type": "boolean"}},
                    "extra": {"type": "object", "additionalProperties": _NUM},
                    "max_delta": _NUM,
                    "tolerance": _NUM,
                    "passed": {"type": "boolean"},
                    "notes": {"type": "array", "items": {"type": "string"}},
                },
            },
        },
    },
}
