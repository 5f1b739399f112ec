"""Report records and their JSON / CSV / LaTeX renderings."""

from __future__ import annotations

import csv
import io
import json
import math
from fractions import Fraction
from typing import Any, Iterable

import numpy as np


def jsonable(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return [jsonable(v) for v in x.tolist()]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return {"re": jsonable(float(x.real)), "im": jsonable(float(x.imag))}
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    return x


def check(name: str, passed: bool, value: Any, expected: Any, tolerance: Any, **extra) -> dict:
    rec = {
        "name": name,
        "status": "pass" if passed else "fail",
        "value": value,
        "expected": expected,
        "tolerance": tolerance,
    }
    rec.update(extra)
    return rec


def render_json(document: dict) -> str:
    return json.dumps(jsonable(document), indent=2, sort_keys=False) + "\n"


def _cell(v: Any) -> str:
    v = jsonable(v)
    if isinstance(v, dict) and set(v) == {"re", "im"}:
        return repr(complex(v["re"], v["im"]))
    if isinstance(v, (dict, list)):
        return json.dumps(v)
    return "" if v is None else str(v)


def render_csv(rows: Iterable[dict], columns: list[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf)  # excel dialect: RFC 4180 quoting, CRLF rows
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_cell(row.get(c)) for c in columns])
    return buf.getvalue()


def _tex(s: str) -> str:
    return s.replace("_", r"\_").replace("&", r"\&").replace("%", r"\%")


def render_latex(rows: Iterable[dict], columns: list[str]) -> str:
    rows = list(rows)
    lines = [r"\begin{tabular}{" + "r" * len(columns) + "}", r"\hline"]
    lines.append(" & ".join(_tex(c) for c in columns) + r" \\")
    lines.append(r"\hline")
    for row in rows:
        lines.append(" & ".join(_tex(_cell(row.get(c))) for c in columns) + r" \\")
    lines.append(r"\hline")
    lines.append(r"\end{tabular}")
    return "\n".join(lines) + "\n"
