"""Canonical on-disk formats: instances, reports, transcripts, summaries.

All JSON is UTF-8 with sorted keys and LF endings, newline-terminated, so a
given object always serializes to identical bytes and content digests are
stable.  Rationals are written as "num/den" strings (never floats); floats
are rounded to 12 significant digits; unbounded bounds serialize as the
literal string "unbounded".
"""

from __future__ import annotations

import hashlib
import io
import json
import os
from fractions import Fraction
from typing import Any

from .analysis import (
    AnalysisReport,
    BoundSet,
    CoherenceCertificate,
    EdgeReport,
)
from .core import Instance, validate_instance
from .engine import CostStats, Step, Transcript

SCHEMA_VERSION = 1

INSTANCE_SUFFIX = ".instance.json"
REPORT_SUFFIX = ".report.json"
TRANSCRIPT_SUFFIX = ".transcript.json"


class PersistenceError(Exception):
    pass


class ParseError(PersistenceError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        position = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{position}")
        self.line = line
        self.column = column


class UnsupportedSchemaVersion(PersistenceError):
    pass


class SinkFailure(PersistenceError):
    pass


class EmptySummary(PersistenceError):
    pass


def _fraction_str(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def _parse_fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ParseError(f"bad rational {text!r}: {exc}") from None


def _float12(value: float | None) -> float | str:
    if value is None:
        return "unbounded"
    return float(f"{value:.12g}")


def _parse_float12(value: Any) -> float | None:
    if value == "unbounded":
        return None
    return float(value)


def canonical_bytes(document: dict) -> bytes:
    return (json.dumps(document, sort_keys=True, indent=1) + "\n").encode("utf-8")


def digest_of(document: dict) -> str:
    return hashlib.sha256(canonical_bytes(document)).hexdigest()


# ---------------------------------------------------------------------------
# Instances


def instance_to_document(instance: Instance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "name": instance.name,
        "family": instance.family,
        "params": dict(instance.params),
        "tests": [
            {"id": t.id, **({"meta": dict(t.meta)} if t.meta else {})}
            for t in instance.tests
        ],
        "hypotheses": [
            {
                "id": h.id,
                "outcomes": h.outcomes,
                **({"meta": dict(h.meta)} if h.meta else {}),
            }
            for h in instance.hypotheses
        ],
    }


def instance_digest(instance: Instance) -> str:
    return digest_of(instance_to_document(instance))


def instance_from_document(document: dict) -> Instance:
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise UnsupportedSchemaVersion(
            f"schema_version {version!r}; this build reads {SCHEMA_VERSION}"
        )
    return validate_instance(document)


def _write_bytes(payload: bytes, sink) -> int:
    try:
        if isinstance(sink, (str, os.PathLike)):
            with open(sink, "wb") as handle:
                handle.write(payload)
        elif isinstance(sink, io.TextIOBase):
            sink.write(payload.decode("utf-8"))
        else:
            sink.write(payload)
    except OSError as exc:
        raise SinkFailure(str(exc)) from exc
    return len(payload)


def _read_text(source) -> str:
    try:
        if isinstance(source, (str, os.PathLike)):
            with open(source, "rb") as handle:
                return handle.read().decode("utf-8")
        data = source.read()
    except OSError as exc:
        raise ParseError(str(exc)) from exc
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _parse_json(text: str) -> dict:
    try:
        document = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno) from None
    if not isinstance(document, dict):
        raise ParseError("top-level JSON value must be an object")
    return document


def write_instance(instance: Instance, sink) -> int:
    return _write_bytes(canonical_bytes(instance_to_document(instance)), sink)


def read_instance(source) -> Instance:
    return instance_from_document(_parse_json(_read_text(source)))


# ---------------------------------------------------------------------------
# Reports, transcripts, cost statistics


def _certificate_to_doc(instance: Instance, cert: CoherenceCertificate) -> dict:
    return {
        "distribution": {
            instance.tests[x].id: _fraction_str(w)
            for x, w in sorted(cert.distribution.items())
        },
        "value": _fraction_str(cert.value),
    }


def _certificate_from_doc(instance: Instance, doc: dict) -> CoherenceCertificate:
    dist = {
        instance.test_index[tid]: _parse_fraction(w)
        for tid, w in doc["distribution"].items()
    }
    return CoherenceCertificate(dist, _parse_fraction(doc["value"]))


def _edge_to_doc(instance: Instance, edge: EdgeReport) -> dict:
    return {
        "from": instance.tests[edge.from_test].id,
        "to": instance.tests[edge.to_test].id,
        "delta_size": edge.delta_size,
        "status": edge.status,
        "edge_value": _fraction_str(edge.edge_value),
        "witness": (
            None
            if edge.witness is None
            else [instance.hypotheses[h].id for h in edge.witness]
        ),
        "samples_tried": edge.samples_tried,
    }


def _edge_from_doc(instance: Instance, doc: dict) -> EdgeReport:
    witness = doc.get("witness")
    return EdgeReport(
        from_test=instance.test_index[doc["from"]],
        to_test=instance.test_index[doc["to"]],
        delta_size=int(doc["delta_size"]),
        status=str(doc["status"]),
        edge_value=_parse_fraction(doc["edge_value"]),
        witness=(
            None
            if witness is None
            else tuple(instance.hypothesis_index[h] for h in witness)
        ),
        samples_tried=int(doc["samples_tried"]),
    )


def report_to_document(report: AnalysisReport, instance: Instance) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "analysis_report",
        "instance_name": instance.name,
        "instance_digest": instance_digest(instance),
        "k_min": report.k_min,
        "coherence": _certificate_to_doc(instance, report.coherence),
        "edges": [_edge_to_doc(instance, e) for e in report.edges],
        "alpha_star": _fraction_str(report.alpha_star),
        "alpha_diagnostic": report.alpha_diagnostic,
        "beta": _fraction_str(report.beta),
        "lambda": _fraction_str(report.bounds.lam),
        "bound_nowak_worst": _float12(report.bounds.nowak_worst),
        "bound_split_worst": _float12(report.bounds.split_worst),
        "bound_split_average": _float12(report.bounds.split_average),
        "knobs": {
            "exhaustive_limit": report.exhaustive_limit,
            "samples": report.sample_count,
            "seed": report.seed,
            "edge_mode": report.edge_mode,
        },
    }


def report_from_document(document: dict, instance: Instance) -> AnalysisReport:
    return AnalysisReport(
        k_min=int(document["k_min"]),
        coherence=_certificate_from_doc(instance, document["coherence"]),
        edges=tuple(_edge_from_doc(instance, e) for e in document["edges"]),
        alpha_star=_parse_fraction(document["alpha_star"]),
        alpha_diagnostic=document.get("alpha_diagnostic"),
        beta=_parse_fraction(document["beta"]),
        bounds=BoundSet(
            lam=_parse_fraction(document["lambda"]),
            nowak_worst=_parse_float12(document["bound_nowak_worst"]),
            split_worst=_parse_float12(document["bound_split_worst"]),
            split_average=_parse_float12(document["bound_split_average"]),
        ),
        exhaustive_limit=int(document["knobs"]["exhaustive_limit"]),
        sample_count=int(document["knobs"]["samples"]),
        seed=int(document["knobs"]["seed"]),
        edge_mode=str(document["knobs"]["edge_mode"]),
    )


def transcript_to_document(transcript: Transcript) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "transcript",
        "oracle_id": transcript.oracle_id,
        "steps": [[s.test_id, s.outcome, s.remaining] for s in transcript.steps],
        "identified": transcript.identified,
        "query_count": transcript.query_count,
    }


def transcript_from_document(document: dict) -> Transcript:
    return Transcript(
        oracle_id=str(document["oracle_id"]),
        steps=tuple(
            Step(str(t), int(o), int(r)) for t, o, r in document["steps"]
        ),
        identified=str(document["identified"]),
    )


def stats_to_document(stats: CostStats) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "kind": "cost_stats",
        "worst_case": stats.worst_case,
        "average": _fraction_str(stats.average),
        "per_oracle": dict(sorted(stats.per_oracle.items())),
    }


def stats_from_document(document: dict) -> CostStats:
    return CostStats(
        worst_case=int(document["worst_case"]),
        average=_parse_fraction(document["average"]),
        per_oracle={k: int(v) for k, v in document["per_oracle"].items()},
    )


def write_report(
    payload: AnalysisReport | Transcript | CostStats,
    sink,
    instance: Instance | None = None,
) -> int:
    if isinstance(payload, AnalysisReport):
        if instance is None:
            raise ValueError("writing an analysis report needs its instance")
        document = report_to_document(payload, instance)
    elif isinstance(payload, Transcript):
        document = transcript_to_document(payload)
    elif isinstance(payload, CostStats):
        document = stats_to_document(payload)
    else:
        raise TypeError(f"cannot serialize {type(payload).__name__}")
    return _write_bytes(canonical_bytes(document), sink)


def read_report_document(source) -> dict:
    document = _parse_json(_read_text(source))
    version = document.get("schema_version")
    if version != SCHEMA_VERSION:
        raise UnsupportedSchemaVersion(
            f"schema_version {version!r}; this build reads {SCHEMA_VERSION}"
        )
    if document.get("kind") not in ("analysis_report", "transcript", "cost_stats"):
        raise ParseError(f"unknown report kind {document.get('kind')!r}")
    return document


# ---------------------------------------------------------------------------
# Batch summaries

CSV_COLUMNS = (
    "name",
    "n",
    "k_min",
    "coherence",
    "alpha_star",
    "beta",
    "bound_nowak_worst",
    "bound_split_worst",
    "bound_split_average",
    "worst_case",
    "average",
)


def _csv_cell(value: Any) -> str:
    if value is None:
        return "unbounded"
    if isinstance(value, Fraction):
        return f"{float(value):.12g}"
    if isinstance(value, float):
        return f"{value:.12g}"
    return str(value)


def write_csv_summary(rows: list[dict], sink) -> int:
    """One header plus one row per instance, in a stable column order."""
    if not rows:
        raise EmptySummary("refusing to write a headerless, empty summary")
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(col)) for col in CSV_COLUMNS))
    return _write_bytes(("\n".join(lines) + "\n").encode("utf-8"), sink)
