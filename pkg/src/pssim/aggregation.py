"""Parallel map-reduce grouping of reports into events.

Reports are mapped to key/value pairs keyed by the four-tuple
(date, temporal bin, location, incident type), partitioned by a stable hash,
counted per partition by a worker pool, and merged into a list that is
sorted by the canonical key order.  Because equal keys always land in the
same partition, the result is independent of the partition count, the
worker count, and scheduling.
"""

from __future__ import annotations

import datetime as dt
import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PsSimError
from .types import TemporalBin


@dataclass(frozen=True)
class EventKey:
    """Group identity of an event: the four-tuple that defines it."""

    date: dt.date
    day_time: TemporalBin
    loc: str
    incident_type: str

    def sort_key(self) -> tuple:
        return (self.date, self.day_time.index, self.loc, self.incident_type)

    def canonical(self) -> str:
        return f"{self.date.isoformat()}|{self.day_time.name}|{self.loc}|{self.incident_type}"


@dataclass(frozen=True)
class AggregatedEvent:
    key: EventKey
    support_count: int
    reporters: frozenset[str]


@dataclass(frozen=True)
class AggregateResult:
    events: tuple[AggregatedEvent, ...]
    rejected: int


def map_report(
    report, default_loc: str = "unspecified", use_occurred: bool = False
) -> tuple[EventKey, str]:
    """Project a report onto its (EventKey, sourceId) pair.

    Works on simulated trace rows (which carry reported and occurred types
    but no location) and on ingested raw reports (which carry a location and
    a single incident type).  A missing or None field raises PsSimError,
    which `aggregate` turns into a record-level reject.
    """
    date = getattr(report, "date", None)
    time = getattr(report, "time", None)
    source = getattr(report, "source_id", None)
    loc = getattr(report, "loc", None) or default_loc
    if use_occurred:
        incident = getattr(report, "event_occurred", None) or getattr(
            report, "incident_type", None
        )
    else:
        incident = getattr(report, "event_reported", None) or getattr(
            report, "incident_type", None
        )
    if date is None or time is None or source is None or incident is None:
        raise PsSimError(f"report is missing key fields: {report!r}")
    return EventKey(date, time, loc, incident), source


def partition(key: EventKey, partitions: int) -> int:
    """Stable partition index: hash of the canonical key serialization."""
    if partitions < 1:
        raise PsSimError(f"partition count must be >= 1, got {partitions}")
    digest = hashlib.sha256(key.canonical().encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") % partitions


def reduce_count(key: EventKey, values: Sequence[str]) -> AggregatedEvent:
    """Count supporting reports; reporters deduplicate source ids."""
    if not values:
        raise PsSimError("cannot reduce an empty group")
    return AggregatedEvent(
        key=key, support_count=len(values), reporters=frozenset(values)
    )


def _reduce_bucket(pairs: list[tuple[EventKey, str]]) -> list[AggregatedEvent]:
    groups: dict[EventKey, list[str]] = {}
    for key, source in pairs:
        groups.setdefault(key, []).append(source)
    return [reduce_count(key, sources) for key, sources in groups.items()]


def aggregate(
    reports: Iterable,
    partitions: int = 1,
    workers: int | None = None,
    min_support: int = 1,
    default_loc: str = "unspecified",
    use_occurred: bool = False,
) -> AggregateResult:
    """Group reports into aggregated events, sorted by key order.

    Rejected records (missing fields) are counted, not fatal.  Events with
    fewer than ``min_support`` supporting reports are dropped after counting.
    """
    if partitions < 1:
        raise PsSimError(f"partition count must be >= 1, got {partitions}")
    if min_support < 1:
        raise PsSimError(f"min_support must be >= 1, got {min_support}")

    buckets: list[list[tuple[EventKey, str]]] = [[] for _ in range(partitions)]
    rejected = 0
    for report in reports:
        try:
            key, source = map_report(
                report, default_loc=default_loc, use_occurred=use_occurred
            )
        except PsSimError:
            rejected += 1
            continue
        buckets[partition(key, partitions)].append((key, source))

    with ThreadPoolExecutor(max_workers=workers) as pool:
        per_bucket = list(pool.map(_reduce_bucket, buckets))

    # Equal keys share a partition, so buckets hold disjoint key sets and a
    # single global sort yields the canonical order.
    merged = [
        event
        for bucket in per_bucket
        for event in bucket
        if event.support_count >= min_support
    ]
    merged.sort(key=lambda e: e.key.sort_key())
    return AggregateResult(events=tuple(merged), rejected=rejected)
