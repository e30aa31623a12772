"""Real-vs-simulated similarity: k-fold splits, normalized histograms along
the reports-per-user / per-day-bin / per-time-bin axes, Pearson correlation,
and RMSE."""

from __future__ import annotations

import datetime as dt
import math
from dataclasses import dataclass
from typing import Hashable, Iterable, Sequence

import numpy as np

from .analysis import bin_reports, estimate_evtype_pmf, estimate_lambda, estimate_pmfs
from .distributions import RandomSource, fit_lognormal
from .errors import PsSimError
from .simulator import simulate
from .types import DAY_BINS, TEMPORAL_BINS, SimConfig

AXES = ("perUser", "perDayBin", "perTimeBin")


@dataclass(frozen=True)
class AxisResult:
    correlation: float
    rmse: float
    real_n: int
    sim_n: int


@dataclass(frozen=True)
class ValidationReport:
    """Per-fold comparison along all three histogram axes."""

    fold: int
    per_user: AxisResult
    per_day_bin: AxisResult
    per_time_bin: AxisResult

    def axis(self, name: str) -> AxisResult:
        return {
            "perUser": self.per_user,
            "perDayBin": self.per_day_bin,
            "perTimeBin": self.per_time_bin,
        }[name]


def kfold_split(reports: Sequence, k: int, rng: RandomSource) -> list[list]:
    """Shuffle and split into k disjoint folds with sizes differing by <= 1."""
    n = len(reports)
    if k < 2:
        raise PsSimError(f"need k >= 2 folds, got {k}")
    if k > n:
        raise PsSimError(f"cannot split {n} reports into {k} folds")
    order = rng.generator.permutation(n)
    base, extra = divmod(n, k)
    folds = []
    at = 0
    for i in range(k):
        size = base + (1 if i < extra else 0)
        folds.append([reports[j] for j in order[at : at + size]])
        at += size
    return folds


def histogram(reports: Sequence, axis: str) -> dict[Hashable, float]:
    """Normalized frequency map along one comparison axis.

    perUser: fraction of users at each observed report-count value.
    perDayBin / perTimeBin: fraction of reports per bin, zero-filled over the
    full 7- or 8-bin support.
    """
    if axis not in AXES:
        raise PsSimError(f"unknown axis {axis!r}; expected one of {AXES}")
    if not reports:
        raise PsSimError("cannot build a histogram from an empty report set")
    if axis == "perUser":
        per_user: dict[str, int] = {}
        for r in reports:
            per_user[r.source_id] = per_user.get(r.source_id, 0) + 1
        users = len(per_user)
        freq: dict[Hashable, int] = {}
        for count in per_user.values():
            freq[count] = freq.get(count, 0) + 1
        return {count: freq[count] / users for count in sorted(freq)}
    if axis == "perDayBin":
        support: tuple = DAY_BINS
        key = lambda r: r.day
    else:
        support = TEMPORAL_BINS
        key = lambda r: r.time
    counts = {s: 0 for s in support}
    total = 0
    for r in reports:
        counts[key(r)] += 1
        total += 1
    return {s: counts[s] / total for s in support}


def align_histograms(
    a: dict[Hashable, float], b: dict[Hashable, float]
) -> tuple[np.ndarray, np.ndarray]:
    """Zero-fill both histograms onto their union support, in sorted order."""
    keys = set(a) | set(b)
    ordered = sorted(keys, key=lambda k: k.index if hasattr(k, "index") else k)
    return (
        np.asarray([a.get(k, 0.0) for k in ordered]),
        np.asarray([b.get(k, 0.0) for k in ordered]),
    )


def pearson_correlation(a: Sequence[float], b: Sequence[float]) -> float:
    """Standard sample Pearson coefficient."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise PsSimError("inputs must be one-dimensional vectors of equal length")
    if x.size < 2:
        raise PsSimError(f"need at least 2 points, got {x.size}")
    xc = x - x.mean()
    yc = y - y.mean()
    vx = float(np.dot(xc, xc))
    vy = float(np.dot(yc, yc))
    if vx == 0.0 or vy == 0.0:
        raise PsSimError("zero variance: correlation undefined")
    r = float(np.dot(xc, yc)) / math.sqrt(vx * vy)
    return max(-1.0, min(1.0, r))


def rmse(a: Sequence[float], b: Sequence[float]) -> float:
    """Root-mean-square difference of two equal-length vectors."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1 or x.size < 1:
        raise PsSimError("inputs must be non-empty vectors of equal length")
    return float(np.sqrt(np.mean((x - y) ** 2)))


def compare_axes(real: Sequence, sim: Sequence) -> dict[str, AxisResult]:
    """Histogram both report sets along every axis and score the match."""
    out = {}
    for axis in AXES:
        h_real = histogram(real, axis)
        h_sim = histogram(sim, axis)
        v_real, v_sim = align_histograms(h_real, h_sim)
        out[axis] = AxisResult(
            correlation=pearson_correlation(v_real, v_sim),
            rmse=rmse(v_real, v_sim),
            real_n=len(real),
            sim_n=len(sim),
        )
    return out


def fold_config(
    train: Sequence,
    fold: Sequence,
    window: tuple[dt.date, int],
    seed: int,
) -> SimConfig:
    """Fit models on the training reports, scaled to the test fold's size.

    Shape parameters (sdlog, pmfs, lambda) come from the training folds; the
    location parameter is anchored so the expected per-participant quota
    matches the fold's mean reports per user, and n matches the fold's user
    count, so both traces live at comparable scale.
    """
    start, days = window
    binned = bin_reports(train, window)
    pmf_day, pmf_time = estimate_pmfs(binned.overall)
    pmf_ev = estimate_evtype_pmf(train)
    lam = estimate_lambda(binned.overall)
    participation = fit_lognormal(binned.weekly_samples())

    fold_users = {r.source_id for r in fold}
    mean_per_user = len(fold) / len(fold_users)
    sdlog = participation.s
    mlog = math.log(mean_per_user) - sdlog**2 / 2.0 - math.log(days / 7.0)

    return SimConfig(
        tau=days,
        start_date=start,
        ev_types=tuple(pmf_ev.support),
        pr_lie=0.0,
        n=len(fold_users),
        lambda_e=lam,
        mlog=mlog,
        sdlog=sdlog,
        pmf_time=pmf_time,
        pmf_day=pmf_day,
        pmf_ev_type=pmf_ev,
        seed=seed,
        loc="validation",
    )


def cross_validate(
    real_data: Sequence,
    k: int,
    seed: int,
    window: tuple[dt.date, int] | None = None,
) -> list[ValidationReport]:
    """k-fold validation: per fold, fit on the remaining folds, simulate a
    trace of matching scale, and compare histograms along all three axes."""
    if k < 2:
        raise PsSimError(f"need k >= 2 folds, got {k}")
    if window is None:
        dates = [r.date for r in real_data]
        if not dates:
            raise PsSimError("no reports to validate")
        start = min(dates)
        window = (start, (max(dates) - start).days + 1)

    rng = RandomSource(seed)
    folds = kfold_split(real_data, k, rng.substream("folds"))
    seed_gen = rng.substream("fold-seeds").generator

    results = []
    for i, fold in enumerate(folds):
        train = [r for j, f in enumerate(folds) if j != i for r in f]
        config = fold_config(
            train, fold, window, seed=int(seed_gen.integers(0, 2**63))
        )
        trace = simulate(config)
        axes = compare_axes(fold, trace.reports)
        results.append(
            ValidationReport(
                fold=i,
                per_user=axes["perUser"],
                per_day_bin=axes["perDayBin"],
                per_time_bin=axes["perTimeBin"],
            )
        )
    return results


def summarize(reports: Iterable[ValidationReport]) -> dict[str, dict[str, float]]:
    """Mean and standard deviation of correlation and RMSE per axis."""
    reports = list(reports)
    if not reports:
        raise PsSimError("no validation reports to summarize")
    out = {}
    for axis in AXES:
        corr = np.asarray([r.axis(axis).correlation for r in reports])
        err = np.asarray([r.axis(axis).rmse for r in reports])
        out[axis] = {
            "correlation_mean": float(corr.mean()),
            "correlation_std": float(corr.std()),
            "rmse_mean": float(err.mean()),
            "rmse_std": float(err.std()),
        }
    return out
