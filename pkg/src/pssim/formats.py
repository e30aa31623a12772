"""File formats: raw/canonical report CSVs, trace CSVs, model files, and the
derived CSV outputs (events, validation, bench, plot data).

All CSVs are comma-delimited UTF-8 with a header row and LF line endings.
Trace files use the eight-column report schema with ISO dates on output;
day-first DD/MM/YYYY dates are accepted on ingest only.
"""

from __future__ import annotations

import csv
import datetime as dt
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .aggregation import AggregatedEvent
from .distributions import Pmf
from .errors import PsSimError
from .types import DayBin, Report, TemporalBin, bin_of_time, weekday_of

MODEL_SCHEMA_VERSION = 1

RAW_FIELDS = ("timestamp", "sourceId", "loc", "incidentType")
CANONICAL_HEADER = ("date", "day", "time", "sourceId", "loc", "incidentType")
TRACE_HEADER = (
    "EventNo",
    "Date",
    "Day",
    "Time",
    "ReportNo",
    "SourceId",
    "EventReported",
    "EventOccurred",
)
EVENTS_HEADER = ("date", "dayTime", "loc", "incidentType", "supportCount")
VALIDATION_HEADER = ("fold", "axis", "correlation", "rmse", "realN", "simN")
BENCH_HEADER = ("n", "m", "seconds")
PLOT_HEADER = ("plot", "series", "x", "y")


@dataclass(frozen=True, slots=True)
class IngestedReport:
    """Canonical form of one real report row after ingestion."""

    date: dt.date
    day: DayBin
    time: TemporalBin
    source_id: str
    loc: str
    incident_type: str


@dataclass
class ModelFile:
    """Fitted model parameters plus fitting metadata; schema-versioned."""

    mlog: float
    sdlog: float
    lambda_overall: float
    lambda_by_loc: dict[str, float]
    pmf_day: Pmf
    pmf_time: Pmf
    pmf_ev_type: Pmf
    meta: dict


def parse_timestamp(text: str) -> dt.datetime:
    """Parse an ISO-8601 timestamp, normalized to UTC.

    A trailing Z is accepted; timestamps without an offset are treated as
    already being UTC.
    """
    t = text.strip()
    if t.endswith(("Z", "z")):
        t = t[:-1] + "+00:00"
    stamp = dt.datetime.fromisoformat(t)
    if stamp.tzinfo is None:
        return stamp.replace(tzinfo=dt.timezone.utc)
    return stamp.astimezone(dt.timezone.utc)


def parse_date(text: str) -> dt.date:
    """Accept ISO YYYY-MM-DD or the day-first DD/MM/YYYY trace style."""
    t = text.strip()
    try:
        return dt.date.fromisoformat(t)
    except ValueError:
        pass
    try:
        return dt.datetime.strptime(t, "%d/%m/%Y").date()
    except ValueError:
        raise PsSimError(f"unparseable date {t!r}") from None


def _open_reader(path: Path) -> tuple:
    handle = open(path, newline="", encoding="utf-8")
    return handle, csv.DictReader(handle)


def read_raw_reports(
    path: Path, column_map: Mapping[str, str] | None = None
) -> tuple[list[IngestedReport], dict[str, int]]:
    """Read a raw report CSV; malformed rows are counted per reason, never
    silently dropped.  Raises PsSimError if the header lacks a mapped column.
    """
    colmap = {f: f for f in RAW_FIELDS}
    if column_map:
        colmap.update(column_map)
    handle, reader = _open_reader(path)
    with handle:
        header = reader.fieldnames
        if header is None:
            raise PsSimError(f"{path}: missing header row")
        missing = [colmap[f] for f in RAW_FIELDS if colmap[f] not in header]
        if missing:
            raise PsSimError(f"{path}: header lacks required columns {missing}")

        accepted: list[IngestedReport] = []
        rejects: dict[str, int] = {}

        def reject(reason: str) -> None:
            rejects[reason] = rejects.get(reason, 0) + 1

        for row in reader:
            try:
                stamp = parse_timestamp(row[colmap["timestamp"]] or "")
            except ValueError:
                reject("bad timestamp")
                continue
            source = (row[colmap["sourceId"]] or "").strip()
            loc = (row[colmap["loc"]] or "").strip()
            incident = (row[colmap["incidentType"]] or "").strip()
            if not source:
                reject("missing sourceId")
                continue
            if not loc:
                reject("missing loc")
                continue
            if not incident:
                reject("missing incidentType")
                continue
            date = stamp.date()
            accepted.append(
                IngestedReport(
                    date=date,
                    day=weekday_of(date),
                    time=bin_of_time(stamp.time()),
                    source_id=source,
                    loc=loc,
                    incident_type=incident,
                )
            )
    return accepted, rejects


def _writer(handle):
    return csv.writer(handle, lineterminator="\n")


def write_canonical(reports: Iterable[IngestedReport], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        w = _writer(handle)
        w.writerow(CANONICAL_HEADER)
        for r in reports:
            w.writerow(
                (
                    r.date.isoformat(),
                    r.day.label,
                    r.time.label,
                    r.source_id,
                    r.loc,
                    r.incident_type,
                )
            )


def read_canonical(path: Path) -> tuple[list[IngestedReport], dict[str, int]]:
    """Read a canonical dataset CSV; the day column is recomputed from the
    date so the day==weekday(date) invariant always holds."""
    handle, reader = _open_reader(path)
    with handle:
        if reader.fieldnames is None:
            raise PsSimError(f"{path}: missing header row")
        missing = [c for c in CANONICAL_HEADER if c not in reader.fieldnames]
        if missing:
            raise PsSimError(f"{path}: header lacks required columns {missing}")
        accepted: list[IngestedReport] = []
        rejects: dict[str, int] = {}

        def reject(reason: str) -> None:
            rejects[reason] = rejects.get(reason, 0) + 1

        for row in reader:
            try:
                date = parse_date(row["date"] or "")
            except PsSimError:
                reject("bad date")
                continue
            try:
                time = TemporalBin.from_label((row["time"] or "").strip())
            except PsSimError:
                reject("bad time bin")
                continue
            source = (row["sourceId"] or "").strip()
            loc = (row["loc"] or "").strip()
            incident = (row["incidentType"] or "").strip()
            if not (source and loc and incident):
                reject("missing field")
                continue
            accepted.append(
                IngestedReport(date, weekday_of(date), time, source, loc, incident)
            )
    return accepted, rejects


def write_trace(reports: Iterable[Report], path: Path) -> None:
    """Write the eight-column trace schema with ISO dates."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        w = _writer(handle)
        w.writerow(TRACE_HEADER)
        for r in reports:
            w.writerow(
                (
                    r.event_no,
                    r.date.isoformat(),
                    r.day.label,
                    r.time.label,
                    r.report_no,
                    r.source_id,
                    r.event_reported,
                    r.event_occurred,
                )
            )


def read_trace(path: Path) -> tuple[list[Report], dict[str, int]]:
    """Read a trace CSV back into Report rows.

    Dates may be ISO or DD/MM/YYYY; the day label is recomputed from the
    date, and rows whose stated day disagrees are rejected with a counter.
    """
    handle, reader = _open_reader(path)
    with handle:
        if reader.fieldnames is None:
            raise PsSimError(f"{path}: missing header row")
        missing = [c for c in TRACE_HEADER if c not in reader.fieldnames]
        if missing:
            raise PsSimError(f"{path}: header lacks required columns {missing}")
        accepted: list[Report] = []
        rejects: dict[str, int] = {}

        def reject(reason: str) -> None:
            rejects[reason] = rejects.get(reason, 0) + 1

        for row in reader:
            try:
                date = parse_date(row["Date"] or "")
                time = TemporalBin.from_label((row["Time"] or "").strip())
                day = weekday_of(date)
                stated = (row["Day"] or "").strip()
                if stated and DayBin.from_label(stated) is not day:
                    reject("day/date mismatch")
                    continue
                source = (row["SourceId"] or "").strip()
                reported = (row["EventReported"] or "").strip()
                occurred = (row["EventOccurred"] or "").strip()
                if not (source and reported and occurred):
                    reject("malformed row")
                    continue
                accepted.append(
                    Report(
                        event_no=int(row["EventNo"]),
                        date=date,
                        day=day,
                        time=time,
                        report_no=int(row["ReportNo"]),
                        source_id=source,
                        event_reported=reported,
                        event_occurred=occurred,
                    )
                )
            except (PsSimError, ValueError, TypeError):
                reject("malformed row")
    return accepted, rejects


def _pmf_to_json(pmf: Pmf) -> dict:
    labels = [s.label if hasattr(s, "label") else s for s in pmf.support]
    return {"support": labels, "probs": list(pmf.probs)}


def _pmf_from_json(
    payload: dict, label_kind: str
) -> Pmf:
    support: list = payload["support"]
    if label_kind == "day":
        support = [DayBin.from_label(s) for s in support]
    elif label_kind == "time":
        support = [TemporalBin.from_label(s) for s in support]
    return Pmf(tuple(support), tuple(float(p) for p in payload["probs"]))


def model_to_json(model: ModelFile) -> str:
    payload = {
        "version": MODEL_SCHEMA_VERSION,
        "participation": {"mlog": model.mlog, "sdlog": model.sdlog},
        "lambda_e": {
            "overall": model.lambda_overall,
            "by_location": model.lambda_by_loc,
        },
        "pmf_day": _pmf_to_json(model.pmf_day),
        "pmf_time": _pmf_to_json(model.pmf_time),
        "pmf_event_type": _pmf_to_json(model.pmf_ev_type),
        "meta": model.meta,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def save_model(model: ModelFile, path: Path) -> None:
    Path(path).write_text(model_to_json(model), encoding="utf-8")


def load_model(path: Path) -> ModelFile:
    try:
        payload = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise PsSimError(f"{path}: not a valid model file ({exc})") from None
    version = payload.get("version")
    if version != MODEL_SCHEMA_VERSION:
        raise PsSimError(
            f"{path}: unsupported model schema version {version!r} "
            f"(expected {MODEL_SCHEMA_VERSION})"
        )
    try:
        return ModelFile(
            mlog=float(payload["participation"]["mlog"]),
            sdlog=float(payload["participation"]["sdlog"]),
            lambda_overall=float(payload["lambda_e"]["overall"]),
            lambda_by_loc={
                k: float(v) for k, v in payload["lambda_e"]["by_location"].items()
            },
            pmf_day=_pmf_from_json(payload["pmf_day"], "day"),
            pmf_time=_pmf_from_json(payload["pmf_time"], "time"),
            pmf_ev_type=_pmf_from_json(payload["pmf_event_type"], "label"),
            meta=payload["meta"],
        )
    except KeyError as exc:
        raise PsSimError(f"{path}: model file lacks field {exc}") from None


def _ingest_meta_path(dataset_path: Path) -> Path:
    return Path(str(dataset_path) + ".meta.json")


def write_ingest_meta(dataset_path: Path, meta: dict) -> None:
    """Persist ingestion provenance (window, outlier threshold, reject
    summary) next to the canonical dataset."""
    text = json.dumps(meta, indent=2, sort_keys=True) + "\n"
    _ingest_meta_path(dataset_path).write_text(text, encoding="utf-8")


def read_ingest_meta(dataset_path: Path) -> dict | None:
    """Load the ingestion sidecar if present; None when absent or unreadable."""
    path = _ingest_meta_path(dataset_path)
    if not path.is_file():
        return None
    try:
        meta = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError):
        return None
    return meta if isinstance(meta, dict) else None


def write_events_csv(events: Iterable[AggregatedEvent], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        w = _writer(handle)
        w.writerow(EVENTS_HEADER)
        for ev in events:
            w.writerow(
                (
                    ev.key.date.isoformat(),
                    ev.key.day_time.label,
                    ev.key.loc,
                    ev.key.incident_type,
                    ev.support_count,
                )
            )


def write_validation_csv(reports, path: Path) -> None:
    from .validation import AXES  # local import to keep formats a leaf module

    with open(path, "w", newline="", encoding="utf-8") as handle:
        w = _writer(handle)
        w.writerow(VALIDATION_HEADER)
        for rep in reports:
            for axis in AXES:
                res = rep.axis(axis)
                w.writerow(
                    (rep.fold, axis, res.correlation, res.rmse, res.real_n, res.sim_n)
                )


def write_bench_csv(rows: Iterable[tuple[int, int, float]], path: Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        w = _writer(handle)
        w.writerow(BENCH_HEADER)
        for n, m, seconds in rows:
            w.writerow((n, m, seconds))


def write_plot_data(rows: Iterable[Sequence], path: Path) -> None:
    """Tidy long-format plot data: (plot, series, x, y) per row."""
    with open(path, "w", newline="", encoding="utf-8") as handle:
        w = _writer(handle)
        w.writerow(PLOT_HEADER)
        for row in rows:
            w.writerow(row)
