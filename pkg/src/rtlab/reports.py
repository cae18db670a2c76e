"""Report serialization: CSV and JSON with stable layout.

Columns are emitted in a fixed order, rationals are printed as p/q next
to their decimal value, and the fully resolved parameter set goes into
the header, so two runs with the same seed produce byte-identical files.
"""

import io
import json
from fractions import Fraction

from .verifiers import VerificationReport

CSV_COLUMNS = ["quantity", "value", "value_decimal", "reference", "asserted", "ok"]


def _split_value(v):
    """(exact text, decimal text) for a report cell."""
    if v is None:
        return "", ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}", repr(float(v))
    if isinstance(v, bool):
        return str(v).lower(), ""
    if isinstance(v, int):
        return str(v), str(v)
    if isinstance(v, float):
        return repr(v), repr(v)
    return str(v), ""


def _json_value(v):
    if isinstance(v, Fraction):
        return {"fraction": f"{v.numerator}/{v.denominator}",
                "decimal": float(v)}
    return v


def _stable_counters(counters: dict) -> dict:
    # wall-clock counters would break byte-reproducibility of emitted files
    return {k: v for k, v in counters.items()
            if "elapsed" not in k and "time" not in k}


def emit_report(report: VerificationReport, fmt: str = "csv",
                params: dict | None = None) -> str:
    """Render a report to text; fmt is 'csv' or 'json'."""
    if fmt == "json":
        payload = report.as_json()
        payload["counters"] = _stable_counters(report.counters)
        payload["params"] = dict(sorted((params or {}).items()))
        payload["rows"] = [
            {k: _json_value(row.get(k)) for k in CSV_COLUMNS if k != "value_decimal"}
            for row in report.rows
        ]
        return json.dumps(payload, sort_keys=True, indent=2, default=str) + "\n"
    if fmt != "csv":
        raise ValueError(f"unknown report format: {fmt}")
    buf = io.StringIO()
    buf.write(f"# property={report.property_name} verdict={report.verdict}\n")
    for key in sorted((params or {})):
        buf.write(f"# param {key}={params[key]}\n")
    counters = _stable_counters(report.counters)
    for key in sorted(counters):
        buf.write(f"# counter {key}={counters[key]}\n")
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for row in report.rows:
        exact, dec = _split_value(row.get("value"))
        ref_exact, _ = _split_value(row.get("reference"))
        ok = row.get("ok")
        buf.write(",".join([
            str(row.get("quantity", "")), exact, dec, ref_exact,
            "yes" if row.get("asserted") else "no",
            "" if ok is None else ("yes" if ok else "no"),
        ]) + "\n")
    return buf.getvalue()


def write_report(report: VerificationReport, path: str, fmt: str = "csv",
                 params: dict | None = None) -> None:
    text = emit_report(report, fmt, params)
    with open(path, "w") as fh:
        fh.write(text)
