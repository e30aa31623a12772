"""Operator command-line surface.

Subcommands: ingest, fit, simulate, aggregate, validate, bench.  Every
command is deterministic given its inputs and --seed (bench timings aside).
Exit codes: 0 success, 2 input/usage error, 3 runtime model error.
"""

from __future__ import annotations

import datetime as dt
import functools
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click
import numpy as np

from . import _kernels, formats
from .aggregation import aggregate
from .analysis import (
    autocorrelation,
    bin_reports,
    estimate_evtype_pmf,
    estimate_lambda,
    estimate_pmfs,
    filter_outliers,
    qq_against_lognormal,
)
from .distributions import Pmf, RandomSource, fit_lognormal, pmf_from_counts
from .errors import PsSimError
from .formats import ModelFile
from .simulator import simulate
from .types import DAY_BINS, TEMPORAL_BINS, SimConfig
from .validation import (
    AXES,
    cross_validate,
    fold_config,
    histogram,
    kfold_split,
    summarize,
)

DEFAULT_EV_TYPES = "Jam,Accident,RoadClosure,Hazard"


def _model_errors_exit_3(fn):
    """Map domain-model failures to exit code 3."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except PsSimError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)

    return wrapper


def _parse_iso_date(text: str, flag: str) -> dt.date:
    try:
        return dt.date.fromisoformat(text)
    except ValueError:
        raise click.UsageError(f"{flag} must be an ISO date (YYYY-MM-DD), got {text!r}")


def _infer_window(
    dates, start: str | None, days: int | None, what: str
) -> tuple[dt.date, int]:
    if start is not None:
        first = _parse_iso_date(start, "--start")
    else:
        if not dates:
            raise PsSimError(f"no reports in {what}; cannot infer a window")
        first = min(dates)
    if days is None:
        if not dates:
            raise PsSimError(f"no reports in {what}; cannot infer a window")
        days = (max(dates) - first).days + 1
    if days < 1:
        raise click.UsageError(f"--days must be >= 1, got {days}")
    return first, days


def _default_workers() -> int:
    env = os.environ.get("PSSIM_WORKERS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise click.UsageError(f"PSSIM_WORKERS must be an integer, got {env!r}")
    return os.cpu_count() or 1


def _uniform_pmf(support) -> Pmf:
    return pmf_from_counts({s: 1 for s in support})


@click.group()
def main():
    """Participatory-sensing data toolkit: fit behavior models from report
    data, simulate synthetic traces, aggregate reports into events, and
    validate simulated against real data."""


@main.command()
@click.argument(
    "input_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--start", default=None, help="Window start date (default: first date in data).")
@click.option("--days", type=int, default=None, help="Window length in days (default: span of data).")
@click.option(
    "--outlier-pct",
    type=float,
    default=99.5,
    show_default=True,
    help="Drop users above this percentile of mean weekly report count; 100 disables.",
)
@click.option(
    "--col",
    "col_overrides",
    multiple=True,
    metavar="FIELD=NAME",
    help="Map a logical column to a differently named CSV column "
    "(fields: timestamp, sourceId, loc, incidentType).",
)
@_model_errors_exit_3
def ingest(input_csv, out, start, days, outlier_pct, col_overrides):
    """Ingest a raw report CSV into the canonical dataset format.

    The raw schema needs columns timestamp (ISO-8601), sourceId, loc and
    incidentType; unknown columns are ignored and bad rows are counted and
    skipped.
    """
    colmap = {}
    for item in col_overrides:
        field, _, name = item.partition("=")
        if field not in formats.RAW_FIELDS or not name:
            raise click.UsageError(f"--col expects FIELD=NAME with a known field, got {item!r}")
        colmap[field] = name
    if not 0.0 < outlier_pct <= 100.0:
        raise click.UsageError(f"--outlier-pct must be in (0, 100], got {outlier_pct}")

    try:
        reports, rejects = formats.read_raw_reports(input_csv, colmap)
    except PsSimError as exc:
        raise click.UsageError(str(exc))

    window = _infer_window([r.date for r in reports], start, days, str(input_csv))
    first, ndays = window
    end = first + dt.timedelta(days=ndays)
    in_window = [r for r in reports if first <= r.date < end]
    excluded = len(reports) - len(in_window)
    if not in_window:
        raise PsSimError("no reports inside the ingestion window")

    outlier_users: list[str] = []
    if outlier_pct < 100.0:
        binned = bin_reports(in_window, window)
        mean_weekly = {
            user: sum(weeks.values()) / len(weeks)
            for user, weeks in binned.user_weekly.items()
        }
        _, outlier_users = filter_outliers(mean_weekly, outlier_pct)
    dropped = set(outlier_users)
    kept = [r for r in in_window if r.source_id not in dropped]
    removed_reports = len(in_window) - len(kept)
    if not kept:
        raise PsSimError("outlier filtering removed every report; raise --outlier-pct")

    formats.write_canonical(kept, out)
    formats.write_ingest_meta(
        out,
        {
            "window_start": first.isoformat(),
            "window_days": ndays,
            "outlier_pct": outlier_pct,
            "outlier_users_removed": len(outlier_users),
            "outlier_reports_removed": removed_reports,
            "out_of_window": excluded,
            "rejects": rejects,
            "accepted": len(kept),
        },
    )
    click.echo(f"accepted {len(kept)} reports -> {out}")
    click.echo(
        f"window {first.isoformat()} +{ndays}d | out-of-window {excluded} | "
        f"outlier users removed {len(outlier_users)} ({removed_reports} reports)"
    )
    if rejects:
        for reason in sorted(rejects):
            click.echo(f"rejected {rejects[reason]} rows: {reason}")
    else:
        click.echo("rejected 0 rows")


def _fit_models(records, window, per_location: bool, out_of_window: int = 0):
    binned = bin_reports(records, window)
    pmf_day, pmf_time = estimate_pmfs(binned.overall)
    pmf_ev = estimate_evtype_pmf(records)
    lam_overall = estimate_lambda(binned.overall)
    lam_by_loc = {
        loc: estimate_lambda(series)
        for loc, series in sorted(binned.per_location.items())
    }
    samples = binned.weekly_samples()
    participation = fit_lognormal(samples)

    qq = None
    if len(samples) >= 10:
        try:
            qq = qq_against_lognormal(samples, participation)
        except PsSimError:
            qq = None

    acf: dict[str, list[float] | None] = {}
    for loc, series in sorted(binned.per_location.items()):
        try:
            acf[loc] = [
                autocorrelation(series.cells, lag)
                for lag in range(1, min(9, len(series.cells) - 1))
            ]
        except PsSimError:
            acf[loc] = None

    meta = {
        "window_start": binned.window_start.isoformat(),
        "window_days": binned.window_days,
        "reports": binned.accepted,
        "users": len(binned.user_weekly),
        "participation_samples": len(samples),
        "excluded": out_of_window,
        "diagnostics": {
            "qq_r2": None if qq is None else qq.r2,
            "acf": acf,
        },
    }
    if per_location:
        per_loc_fit: dict[str, dict[str, float] | None] = {}
        for loc in sorted(binned.per_location):
            loc_records = [r for r in records if r.loc == loc]
            try:
                loc_binned = bin_reports(loc_records, window)
                fit = fit_lognormal(loc_binned.weekly_samples())
                per_loc_fit[loc] = {"mlog": fit.m, "sdlog": fit.s}
            except PsSimError:
                per_loc_fit[loc] = None
        meta["per_location_participation"] = per_loc_fit

    model = ModelFile(
        mlog=participation.m,
        sdlog=participation.s,
        lambda_overall=lam_overall,
        lambda_by_loc=lam_by_loc,
        pmf_day=pmf_day,
        pmf_time=pmf_time,
        pmf_ev_type=pmf_ev,
        meta=meta,
    )
    return model, binned, samples, qq


@main.command()
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--start", default=None, help="Window start date (default: inferred).")
@click.option("--days", type=int, default=None, help="Window days (default: inferred).")
@click.option("--per-location", is_flag=True, help="Also fit participation per location.")
@click.option(
    "--plot-data",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write tidy long-format plot data (histograms, pmfs, Q-Q, ACF).",
)
@_model_errors_exit_3
def fit(dataset, out, start, days, per_location, plot_data):
    """Fit all model parameters from a canonical dataset and write a model file."""
    try:
        records, rejects = formats.read_canonical(dataset)
    except PsSimError as exc:
        raise click.UsageError(str(exc))
    window = _infer_window([r.date for r in records], start, days, str(dataset))
    first, ndays = window
    end = first + dt.timedelta(days=ndays)
    in_window = [r for r in records if first <= r.date < end]
    if not in_window:
        raise PsSimError("no reports inside the fitting window")
    excluded = len(records) - len(in_window)
    records = in_window

    model, binned, samples, qq = _fit_models(records, window, per_location, excluded)
    ingest_meta = formats.read_ingest_meta(dataset)
    if ingest_meta is not None:
        model.meta["ingest"] = ingest_meta
    formats.save_model(model, out)

    click.echo(f"model -> {out}")
    click.echo(
        f"participation mlog={model.mlog:.4f} sdlog={model.sdlog:.4f} "
        f"({len(samples)} user-week samples)"
    )
    click.echo(f"lambda_e overall={model.lambda_overall:.4f} per cell")
    for loc, lam in model.lambda_by_loc.items():
        click.echo(f"  {loc}: {lam:.4f}")
    if qq is not None:
        click.echo(f"Q-Q log-normal fit r^2 = {qq.r2:.4f}")
    acf_table = model.meta["diagnostics"]["acf"]
    for loc, values in acf_table.items():
        if values is None:
            click.echo(f"ACF {loc}: undefined (constant series)")
        else:
            lags = " ".join(f"{v:+.3f}" for v in values)
            click.echo(f"ACF lags 1..{len(values)} {loc}: {lags}")
    if rejects:
        for reason in sorted(rejects):
            click.echo(f"rejected {rejects[reason]} rows: {reason}")

    if plot_data is not None:
        rows = []
        per_user: dict[str, int] = {}
        for r in records:
            per_user[r.source_id] = per_user.get(r.source_id, 0) + 1
        freq: dict[int, int] = {}
        for c in per_user.values():
            freq[c] = freq.get(c, 0) + 1
        for count in sorted(freq):
            rows.append(("participation_hist", "users", count, freq[count]))
        for b, p in zip(model.pmf_time.support, model.pmf_time.probs):
            rows.append(("pmf_time", "fit", b.label, p))
        for b, p in zip(model.pmf_day.support, model.pmf_day.probs):
            rows.append(("pmf_day", "fit", b.label, p))
        for label, p in zip(model.pmf_ev_type.support, model.pmf_ev_type.probs):
            rows.append(("pmf_event_type", "fit", label, p))
        if qq is not None:
            for theo, emp in qq.points:
                rows.append(("qq_participation", "sample", theo, emp))
        for loc, values in acf_table.items():
            if values is not None:
                for lag, value in enumerate(values, start=1):
                    rows.append(("acf", loc, lag, value))
        formats.write_plot_data(rows, plot_data)
        click.echo(f"plot data -> {plot_data}")


@main.command("simulate")
@click.option("--model", "model_path", type=click.Path(exists=True, dir_okay=False, path_type=Path), default=None)
@click.option("--tau", type=int, default=7, show_default=True, help="Days to simulate.")
@click.option("--n", "n_participants", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--pr-lie", type=float, default=0.0, show_default=True)
@click.option("--mlog", type=float, default=None, help="Weekly log-location (default ln 3, or from --model).")
@click.option("--sdlog", type=float, default=None, help="Weekly log-scale (default 0.5, or from --model).")
@click.option("--lambda", "lambda_e", type=float, default=None, help="Events per temporal bin (default 10, or from --model).")
@click.option("--ev-types", default=None, help=f"Comma-separated incident types (default {DEFAULT_EV_TYPES}).")
@click.option("--start-date", default="2015-02-23", show_default=True)
@click.option("--loc", default=None, help="Location label (with --model also selects its lambda).")
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@_model_errors_exit_3
def simulate_cmd(
    model_path, tau, n_participants, seed, pr_lie, mlog, sdlog, lambda_e,
    ev_types, start_date, loc, out,
):
    """Generate a synthetic trace CSV (EventNo,Date,Day,Time,ReportNo,SourceId,
    EventReported,EventOccurred)."""
    if tau < 1:
        raise click.UsageError(f"--tau must be >= 1, got {tau}")
    if n_participants < 1:
        raise click.UsageError(f"--n must be >= 1, got {n_participants}")
    start = _parse_iso_date(start_date, "--start-date")

    if model_path is not None:
        model = formats.load_model(model_path)
        base_mlog, base_sdlog = model.mlog, model.sdlog
        base_lambda = model.lambda_by_loc.get(loc, model.lambda_overall)
        pmf_day, pmf_time, pmf_ev = model.pmf_day, model.pmf_time, model.pmf_ev_type
        types = tuple(pmf_ev.support)
        if ev_types is not None:
            raise click.UsageError("--ev-types conflicts with --model (types come from the model)")
    else:
        types = tuple(t.strip() for t in (ev_types or DEFAULT_EV_TYPES).split(",") if t.strip())
        base_mlog, base_sdlog, base_lambda = math.log(3.0), 0.5, 10.0
        pmf_day = _uniform_pmf(DAY_BINS)
        pmf_time = _uniform_pmf(TEMPORAL_BINS)
        pmf_ev = _uniform_pmf(types)

    config = SimConfig(
        tau=tau,
        start_date=start,
        ev_types=types,
        pr_lie=pr_lie,
        n=n_participants,
        lambda_e=lambda_e if lambda_e is not None else base_lambda,
        mlog=mlog if mlog is not None else base_mlog,
        sdlog=sdlog if sdlog is not None else base_sdlog,
        pmf_time=pmf_time,
        pmf_day=pmf_day,
        pmf_ev_type=pmf_ev,
        seed=seed,
        loc=loc or "unspecified",
    )
    trace = simulate(config)
    formats.write_trace(trace.reports, out)
    click.echo(
        f"trace -> {out} | events {len(trace.events)} | reports {len(trace.reports)} "
        f"| false reports {trace.lie_count}"
    )


def _read_reports_any(path: Path):
    """Read a trace or canonical dataset CSV, detected by its header."""
    with open(path, newline="", encoding="utf-8") as handle:
        first = handle.readline().strip()
    if not first:
        raise click.UsageError(f"{path}: missing header row")
    header = [c.strip() for c in first.split(",")]
    if set(formats.TRACE_HEADER).issubset(header):
        return formats.read_trace(path)
    if set(formats.CANONICAL_HEADER).issubset(header):
        return formats.read_canonical(path)
    raise click.UsageError(
        f"{path}: unrecognized schema; expected a trace or canonical dataset "
        "(run `pssim ingest` on raw data first)"
    )


@main.command("aggregate")
@click.argument("input_csv", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@click.option("--workers", type=int, default=None, help="Worker/partition count (default: PSSIM_WORKERS or CPU count).")
@click.option("--partitions", type=int, default=None, help="Partition count (default: same as --workers).")
@click.option("--min-support", type=int, default=1, show_default=True)
@click.option("--loc", default="unspecified", show_default=True, help="Location label for trace rows (traces carry none).")
@click.option("--key", type=click.Choice(["reported", "occurred"]), default="reported", show_default=True, help="Which incident type keys trace rows.")
@_model_errors_exit_3
def aggregate_cmd(input_csv, out, workers, partitions, min_support, loc, key):
    """Group reports into events keyed by (date, time bin, loc, type) with
    supporting-report counts."""
    if min_support < 1:
        raise click.UsageError(f"--min-support must be >= 1, got {min_support}")
    workers = workers if workers is not None else _default_workers()
    if workers < 1:
        raise click.UsageError(f"--workers must be >= 1, got {workers}")
    partitions = partitions if partitions is not None else workers
    if partitions < 1:
        raise click.UsageError(f"--partitions must be >= 1, got {partitions}")

    try:
        records, rejects = _read_reports_any(input_csv)
    except PsSimError as exc:
        raise click.UsageError(str(exc))

    result = aggregate(
        records,
        partitions=partitions,
        workers=workers,
        min_support=min_support,
        default_loc=loc,
        use_occurred=(key == "occurred"),
    )
    formats.write_events_csv(result.events, out)
    total_rejects = result.rejected + sum(rejects.values())
    click.echo(
        f"events -> {out} | {len(result.events)} events from {len(records)} reports "
        f"| rejected {total_rejects}"
    )


@main.command("validate")
@click.argument("dataset", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--folds", "-k", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--start", default=None, help="Window start date (default: inferred).")
@click.option("--days", type=int, default=None, help="Window days (default: inferred).")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write per-fold metrics CSV.")
@click.option("--plot-data", type=click.Path(dir_okay=False, path_type=Path), default=None, help="Write fold-0 real-vs-simulated histogram data.")
@_model_errors_exit_3
def validate_cmd(dataset, folds, seed, start, days, out, plot_data):
    """Cross-validate simulated traces against a real dataset (k folds)."""
    if folds < 2:
        raise click.UsageError(f"--folds must be >= 2, got {folds}")
    try:
        records, rejects = formats.read_canonical(dataset)
    except PsSimError as exc:
        raise click.UsageError(str(exc))
    window = _infer_window([r.date for r in records], start, days, str(dataset))
    first, ndays = window
    end = first + dt.timedelta(days=ndays)
    records = [r for r in records if first <= r.date < end]

    results = cross_validate(records, folds, seed, window)
    if out is not None:
        formats.write_validation_csv(results, out)
        click.echo(f"per-fold metrics -> {out}")

    stats = summarize(results)
    labels = {
        "perUser": "Reports per user",
        "perDayBin": "Reports per day bin",
        "perTimeBin": "Reports per time bin",
    }
    click.echo(f"{'Parameter':<22}{'Correlation':<20}RMSE")
    for axis in AXES:
        s = stats[axis]
        corr = f"{s['correlation_mean']:.4f} ± {s['correlation_std']:.4f}"
        err = f"{s['rmse_mean']:.4f} ± {s['rmse_std']:.4f}"
        click.echo(f"{labels[axis]:<22}{corr:<20}{err}")
    if rejects:
        for reason in sorted(rejects):
            click.echo(f"rejected {rejects[reason]} rows: {reason}")

    if plot_data is not None:
        # mirrors cross_validate's stream discipline so fold 0 here is the
        # same fold 0 whose metrics were just reported
        rng = RandomSource(seed)
        fold_list = kfold_split(records, folds, rng.substream("folds"))
        seed_gen = rng.substream("fold-seeds").generator
        fold0 = fold_list[0]
        train = [r for f in fold_list[1:] for r in f]
        config = fold_config(train, fold0, window, seed=int(seed_gen.integers(0, 2**63)))
        trace = simulate(config)
        rows = []
        for axis in AXES:
            for series, reports in (("real", fold0), ("simulated", trace.reports)):
                for key_, frac in histogram(reports, axis).items():
                    x = key_.label if hasattr(key_, "label") else key_
                    rows.append((f"fold0_{axis}", series, x, frac))
        formats.write_plot_data(rows, plot_data)
        click.echo(f"plot data -> {plot_data}")


def _parse_range(text: str, flag: str) -> list[int]:
    parts = text.split(":")
    try:
        values = [int(p) for p in parts]
    except ValueError:
        raise click.UsageError(f"{flag} expects START:STOP[:STEP], got {text!r}")
    if len(values) == 1:
        return values
    if len(values) == 2:
        start, stop = values
        step = max(1, (stop - start) // 9)
    elif len(values) == 3:
        start, stop, step = values
    else:
        raise click.UsageError(f"{flag} expects START:STOP[:STEP], got {text!r}")
    if start < 1 or stop < start or step < 1:
        raise click.UsageError(f"{flag} range must be positive and increasing, got {text!r}")
    return list(range(start, stop + 1, step))


def bench_grid(
    n_values, m_values, seed=1, repeats=3, lambda_e=10.0, backend="auto", workers=1
):
    """Time one simulation per grid point; returns rows of (n, m, seconds).

    Timings are the median over ``repeats`` runs.  With workers > 1 grid
    points run concurrently, which speeds the sweep but adds contention
    noise to individual timings.
    """
    types = tuple(DEFAULT_EV_TYPES.split(","))
    pmf_day = _uniform_pmf(DAY_BINS)
    pmf_time = _uniform_pmf(TEMPORAL_BINS)
    pmf_ev = _uniform_pmf(types)

    # warm caches and lazy imports so the first grid point is not penalized
    simulate(
        SimConfig(
            tau=7, start_date=dt.date(2015, 2, 23), ev_types=types, pr_lie=0.1,
            n=10, lambda_e=lambda_e, mlog=math.log(3.0), sdlog=0.5,
            pmf_time=pmf_time, pmf_day=pmf_day, pmf_ev_type=pmf_ev,
            seed=seed, loc="bench",
        ),
        backend=backend,
    )

    def run_point(point):
        n, m = point
        config = SimConfig(
            tau=m,
            start_date=dt.date(2015, 2, 23),
            ev_types=types,
            pr_lie=0.1,
            n=n,
            lambda_e=lambda_e,
            mlog=math.log(3.0),  # three reports per participant-week on average
            sdlog=0.5,
            pmf_time=pmf_time,
            pmf_day=pmf_day,
            pmf_ev_type=pmf_ev,
            seed=seed,
            loc="bench",
        )
        times = []
        for _ in range(repeats):
            t0 = time.perf_counter()
            simulate(config, backend=backend)
            times.append(time.perf_counter() - t0)
        return n, m, float(np.median(times))

    points = [(n, m) for n in n_values for m in m_values]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(run_point, points))
    return [run_point(p) for p in points]


def fit_growth_exponents(rows) -> tuple[float, float] | None:
    """Least-squares fit of log t = c + a log n + b log m over the grid."""
    ns = {r[0] for r in rows}
    ms = {r[1] for r in rows}
    if len(ns) < 2 or len(ms) < 2:
        return None
    design = np.array([[1.0, math.log(n), math.log(m)] for n, m, _ in rows])
    target = np.array([math.log(max(t, 1e-9)) for _, _, t in rows])
    coef, *_ = np.linalg.lstsq(design, target, rcond=None)
    return float(coef[1]), float(coef[2])


@main.command("bench")
@click.option("--n-range", default="100:1000:100", show_default=True, help="Participant grid START:STOP[:STEP].")
@click.option("--m-range", default="10:100:10", show_default=True, help="Duration grid (days) START:STOP[:STEP].")
@click.option("--seed", type=int, default=1, show_default=True)
@click.option("--repeats", type=int, default=3, show_default=True, help="Runs per grid point; median is reported.")
@click.option("--lambda", "lambda_e", type=float, default=10.0, show_default=True)
@click.option(
    "--backend",
    type=click.Choice(["auto", "compiled", "python"]),
    default="auto",
    show_default=True,
    help="Participant-assignment kernel implementation.",
)
@click.option("--workers", type=int, default=1, show_default=True, help="Grid points run concurrently (distorts per-point timings).")
@click.option("--out", required=True, type=click.Path(dir_okay=False, path_type=Path))
@_model_errors_exit_3
def bench_cmd(n_range, m_range, seed, repeats, lambda_e, backend, workers, out):
    """Time trace generation over a grid of participant counts and durations."""
    if repeats < 1:
        raise click.UsageError(f"--repeats must be >= 1, got {repeats}")
    if workers < 1:
        raise click.UsageError(f"--workers must be >= 1, got {workers}")
    n_values = _parse_range(n_range, "--n-range")
    m_values = _parse_range(m_range, "--m-range")

    resolved, _ = _kernels.get_backend(backend)
    rows = bench_grid(
        n_values, m_values, seed=seed, repeats=repeats,
        lambda_e=lambda_e, backend=backend, workers=workers,
    )
    formats.write_bench_csv(rows, out)
    click.echo(f"timings -> {out} | backend {resolved} | {len(rows)} grid points")
    exponents = fit_growth_exponents(rows)
    if exponents is None:
        click.echo("growth exponents: need at least a 2x2 grid to fit")
    else:
        a, b = exponents
        click.echo(f"fitted growth: time ~ n^{a:.2f} * m^{b:.2f}")


if __name__ == "__main__":
    main()
