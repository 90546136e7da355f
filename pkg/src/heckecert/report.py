"""Deterministic report documents.

A report is one JSON document.  Every number is written as an exact decimal
string (``"12"``, ``"-3/25"``); floats are rejected.  Keys are sorted and no
timestamp is written unless ``HECKECERT_TIMESTAMP`` is set, so two runs with the
same configuration produce byte-identical files.
"""
from __future__ import annotations

import datetime
import hashlib
import json
import os
from fractions import Fraction
from typing import Dict, List, Mapping, Optional

from . import __version__
from .numbers import exact_str

REPORT_SCHEMA = "1"


def canonical(obj):
    """Recursively turn numbers into exact strings; reject floats."""
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, Fraction)):
        return exact_str(obj)
    if isinstance(obj, float):
        if obj == float("inf"):
            return "inf"
        raise TypeError("floating point values are not allowed in reports")
    if isinstance(obj, Mapping):
        return {str(k): canonical(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [canonical(v) for v in obj]
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(doc) -> str:
    return json.dumps(canonical(doc), sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def config_hash(config: Mapping) -> str:
    return hashlib.sha256(json.dumps(canonical(config), sort_keys=True).encode()).hexdigest()


def _timestamp() -> Optional[str]:
    value = os.environ.get("HECKECERT_TIMESTAMP")
    if not value:
        return None
    if value.lower() == "now":
        return datetime.datetime.now(datetime.timezone.utc).replace(microsecond=0).isoformat()
    return value


def build_report(target: str, config: Mapping, sections: Mapping[str, List[dict]],
                 certificates: List[dict]) -> dict:
    records = [r for recs in sections.values() for r in recs]
    counts = {status: sum(r["status"] == status for r in records) for status in ("pass", "fail", "degenerate")}
    failures = [{"id": r["id"], "params": r["params"], "detail": r["detail"]}
                for r in records if r["status"] == "fail"]
    meta = {"tool": "heckecert", "version": __version__, "target": target, "config_sha256": config_hash(config)}
    ts = _timestamp()
    if ts:
        meta["timestamp"] = ts
    return {
        "schema": REPORT_SCHEMA,
        "kind": "report",
        "meta": meta,
        "config": config,
        "summary": {"checks": len(records), **counts, "status": "fail" if counts["fail"] else "pass"},
        "sections": dict(sections),
        "certificates": certificates,
        "failures": failures,
    }


def summary_lines(report: Mapping) -> List[str]:
    s = report["summary"]
    lines = [f"{report['meta']['target']}: {s['checks']} checks, {s['pass']} pass, {s['fail']} fail, "
             f"{s['degenerate']} degenerate"]
    for f in report["failures"][:10]:
        lines.append(f"  FAIL {f['id']} {json.dumps(canonical(f['params']), sort_keys=True)}")
    return lines
