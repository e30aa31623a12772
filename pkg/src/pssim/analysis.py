"""Model fitting from report data.

Estimates the categorical day/time/type pmfs, the log-normal participation
parameters with Q-Q diagnostics, per-location Poisson rates, autocorrelation
of binned report counts, and percentile-based outlier filtering.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from .distributions import (
    LogNormalParams,
    Pmf,
    lognormal_quantile,
    pmf_from_counts,
)
from .errors import PsSimError
from .types import DAY_BINS, TEMPORAL_BINS, weekday_of


@dataclass(frozen=True)
class BinnedSeries:
    """Chronological report counts per (date, temporal-bin) cell.

    Cells are date-major: 8 consecutive entries per day, in temporal-bin
    order, starting at ``start_date``.
    """

    location: str
    start_date: dt.date
    cells: np.ndarray

    def __post_init__(self) -> None:
        if len(self.cells) == 0 or len(self.cells) % 8 != 0:
            raise PsSimError("cell vector length must be a positive multiple of 8")

    @property
    def days(self) -> int:
        return len(self.cells) // 8


@dataclass(frozen=True)
class QqData:
    """Quantile-quantile pairs plus the r^2 of their best-fit line."""

    points: tuple[tuple[float, float], ...]
    r2: float


@dataclass
class BinnedData:
    """Result of binning a report set over a window."""

    overall: BinnedSeries
    per_location: dict[str, BinnedSeries]
    user_weekly: dict[str, dict[int, int]]  # sourceId -> week index -> count
    excluded: int
    window_start: dt.date
    window_days: int
    accepted: int = field(default=0)

    def weekly_samples(self) -> list[float]:
        """Positive per-(user, week) report counts, the participation samples."""
        return [
            float(c)
            for weeks in self.user_weekly.values()
            for c in weeks.values()
            if c > 0
        ]


def bin_reports(
    reports: Iterable, window: tuple[dt.date, int], default_loc: str = "unspecified"
) -> BinnedData:
    """Tally reports into per-location (date, bin) cells and per-user weeks.

    Reports need ``date``, ``time`` and ``source_id`` attributes; ``loc`` is
    optional (simulated trace rows carry none).  Reports outside the window
    are excluded with a counter, not an error.
    """
    start, days = window
    if days < 1:
        raise PsSimError(f"empty window: days must be >= 1, got {days}")
    end = start + dt.timedelta(days=days)

    n_cells = 8 * days
    overall = np.zeros(n_cells, dtype=np.int64)
    per_loc: dict[str, np.ndarray] = {}
    user_weekly: dict[str, dict[int, int]] = {}
    excluded = 0
    accepted = 0

    for r in reports:
        if not start <= r.date < end:
            excluded += 1
            continue
        cell = (r.date - start).days * 8 + r.time.index
        overall[cell] += 1
        loc = getattr(r, "loc", None) or default_loc
        cells = per_loc.get(loc)
        if cells is None:
            cells = per_loc[loc] = np.zeros(n_cells, dtype=np.int64)
        cells[cell] += 1
        week = (r.date - start).days // 7
        weeks = user_weekly.setdefault(r.source_id, {})
        weeks[week] = weeks.get(week, 0) + 1
        accepted += 1

    return BinnedData(
        overall=BinnedSeries("(all)", start, overall),
        per_location={
            loc: BinnedSeries(loc, start, cells) for loc, cells in per_loc.items()
        },
        user_weekly=user_weekly,
        excluded=excluded,
        window_start=start,
        window_days=days,
        accepted=accepted,
    )


def estimate_pmfs(binned: BinnedSeries) -> tuple[Pmf, Pmf]:
    """Estimate (pmf_day, pmf_time) from an aggregate binned series."""
    by_day = binned.cells.reshape(binned.days, 8)
    day_counts = {day: 0 for day in DAY_BINS}
    for i in range(binned.days):
        day = weekday_of(binned.start_date + dt.timedelta(days=i))
        day_counts[day] += int(by_day[i].sum())
    time_totals = by_day.sum(axis=0)
    time_counts = {b: int(time_totals[b.index]) for b in TEMPORAL_BINS}
    return pmf_from_counts(day_counts), pmf_from_counts(time_counts)


def estimate_evtype_pmf(reports: Iterable) -> Pmf:
    """Pmf over incident types, support sorted lexicographically."""
    counts: dict[str, int] = {}
    for r in reports:
        label = getattr(r, "incident_type", None) or getattr(
            r, "event_reported", None
        )
        if label is None:
            continue
        counts[label] = counts.get(label, 0) + 1
    return pmf_from_counts({k: counts[k] for k in sorted(counts)})


def estimate_lambda(binned: BinnedSeries | Sequence[float]) -> float:
    """Mean report count per temporal-bin cell (Poisson rate MLE).

    Accepts a BinnedSeries or any bare sequence of cell counts.
    """
    cells = binned.cells if isinstance(binned, BinnedSeries) else np.asarray(binned)
    if len(cells) == 0:
        raise PsSimError("need at least one cell")
    return float(np.mean(cells))


def autocorrelation(series: Sequence[float], lag: int) -> float:
    """Sample ACF: sum((x_t - xbar)(x_{t+lag} - xbar)) / sum((x_t - xbar)^2)."""
    x = np.asarray(series, dtype=np.float64)
    n = x.size
    if not 0 <= lag <= n - 2:
        raise PsSimError(f"lag must be in [0, {n - 2}] for a series of length {n}")
    centered = x - x.mean()
    denom = float(np.dot(centered, centered))
    if denom == 0.0:
        raise PsSimError("constant series: autocorrelation undefined")
    if lag == 0:
        return 1.0
    num = float(np.dot(centered[:-lag], centered[lag:]))
    return num / denom


def qq_against_lognormal(
    samples: Sequence[float], params: LogNormalParams
) -> QqData:
    """Empirical quantiles at plotting positions (i-0.5)/n against the
    theoretical log-normal quantiles, with the r^2 of the fit line."""
    arr = np.sort(np.asarray(samples, dtype=np.float64))
    n = arr.size
    if n < 10:
        raise PsSimError(f"need at least 10 samples for a Q-Q fit, got {n}")
    if arr[0] == arr[-1]:
        raise PsSimError("zero variance: all samples identical")
    positions = (np.arange(1, n + 1) - 0.5) / n
    theoretical = np.asarray([lognormal_quantile(p, params) for p in positions])
    r = np.corrcoef(theoretical, arr)[0, 1]
    points = tuple(zip(theoretical.tolist(), arr.tolist()))
    return QqData(points=points, r2=float(r * r))


def filter_outliers(
    user_counts: Mapping[str, float], percentile: float = 99.5
) -> tuple[dict[str, float], list[str]]:
    """Drop users whose count lies strictly above the given percentile.

    Returns (kept map, rejected user ids sorted).
    """
    if not 0.0 < percentile < 100.0:
        raise PsSimError(f"percentile must be in (0, 100), got {percentile}")
    if not user_counts:
        return {}, []
    threshold = float(np.percentile(list(user_counts.values()), percentile))
    kept = {u: c for u, c in user_counts.items() if c <= threshold}
    rejected = sorted(u for u, c in user_counts.items() if c > threshold)
    return kept, rejected
