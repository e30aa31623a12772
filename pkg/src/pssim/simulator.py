"""End-to-end trace simulation.

Pipeline: rescale participation parameters to the simulation horizon, draw
per-participant report quotas, draw the event count from per-cell Poisson
rates, assign event attributes by pmf sampling, then attribute every quota
unit to a uniformly chosen event with optional false-report injection.

Stream layout (fixed; golden traces depend on it):

* ``quotas``      one log-normal batch of n draws
* ``events``      8*tau Poisson draws, one per (date, temporal-bin) cell
* ``attributes``  four batches of length = event count, in order:
                  day uniforms, time uniforms, type uniforms, date uniforms
* ``reports``     event-pick integers, participant uniforms, lie-decision
                  uniforms, then replacement-type integers for the liars

Each stage consumes its own substream of the master seed, so adding draws in
one stage never perturbs another.  The participant-assignment loop runs on
pre-drawn uniforms, which keeps the compiled and pure-Python kernel backends
bit-identical.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .distributions import (
    RandomSource,
    lognormal_sample_counts,
    pmf_sample_indices,
    rescale,
)
from .errors import PsSimError
from .types import DAY_BINS, Event, Report, SimConfig, weekday_of


@dataclass
class ParticipantPool:
    """Participants with their remaining report quotas."""

    quotas: np.ndarray
    ids: tuple[str, ...]

    @classmethod
    def from_quotas(cls, quotas: Sequence[int]) -> "ParticipantPool":
        q = np.asarray(quotas, dtype=np.int64)
        if q.ndim != 1 or q.size == 0:
            raise PsSimError("quota vector must be non-empty and one-dimensional")
        if np.any(q < 0):
            raise PsSimError("quotas must be nonnegative")
        ids = tuple(f"UID{i + 1:06d}" for i in range(q.size))
        return cls(quotas=q, ids=ids)


@dataclass(frozen=True)
class Trace:
    """Simulator output: ordered report rows plus the generating context."""

    reports: tuple[Report, ...]
    events: tuple[Event, ...]
    config: SimConfig
    seed: int

    @property
    def lie_count(self) -> int:
        return sum(1 for r in self.reports if r.event_reported != r.event_occurred)


def gen_poisson_events(config: SimConfig, rng: RandomSource) -> int:
    """Total event count: independent Poisson(lambda_e) draws over all
    8*tau (date, temporal-bin) cells, summed."""
    cells = 8 * config.tau
    draws = rng.generator.poisson(lam=config.lambda_e, size=cells)
    total = int(draws.sum())
    if total == 0:
        raise PsSimError("no events generated; increase lambda_e or tau")
    return total


def assign_event_attributes(
    count: int, config: SimConfig, rng: RandomSource
) -> list[Event]:
    """Draw day, time, and type for each event from the configured pmfs.

    The date is uniform among window dates whose weekday equals the sampled
    day bin, which keeps every event's day label consistent with its date.
    """
    if count < 1:
        raise PsSimError(f"event count must be >= 1, got {count}")

    dates_by_day = {day: [] for day in DAY_BINS}
    for d in config.dates:
        dates_by_day[weekday_of(d)].append(d)
    for day, p in zip(config.pmf_day.support, config.pmf_day.probs):
        if p > 0.0 and not dates_by_day[day]:
            raise PsSimError(
                f"window too short for day pmf: no {day.label} in the "
                f"{config.tau}-day window starting {config.start_date}"
            )

    day_idx = pmf_sample_indices(config.pmf_day, count, rng)
    time_idx = pmf_sample_indices(config.pmf_time, count, rng)
    type_idx = pmf_sample_indices(config.pmf_ev_type, count, rng)
    u_date = rng.generator.random(count)

    day_support = config.pmf_day.support
    time_support = config.pmf_time.support
    type_support = config.pmf_ev_type.support
    candidates = [dates_by_day[day] for day in day_support]
    cand_sizes = np.asarray([len(c) for c in candidates], dtype=np.int64)[day_idx]
    date_pick = np.minimum((u_date * cand_sizes).astype(np.int64), cand_sizes - 1)

    events = []
    for i in range(count):
        di = int(day_idx[i])
        date = candidates[di][int(date_pick[i])]
        events.append(
            Event(
                event_no=i + 1,
                date=date,
                day=day_support[di],
                time=time_support[int(time_idx[i])],
                loc=config.loc,
                incident_type=type_support[int(type_idx[i])],
            )
        )
    return events


def inject_false_report(
    actual: str, ev_types: Sequence[str], pr_lie: float, rng: RandomSource
) -> str:
    """With probability pr_lie return a uniform draw from ev_types excluding
    ``actual``; otherwise return ``actual``."""
    if actual not in ev_types:
        raise PsSimError(f"actual type {actual!r} not in event type list")
    if not 0.0 <= pr_lie <= 1.0:
        raise PsSimError(f"pr_lie must be in [0, 1], got {pr_lie}")
    if pr_lie > 0.0 and len(ev_types) < 2:
        raise PsSimError("pr_lie > 0 requires at least two event types")
    if pr_lie == 0.0 or rng.generator.random() >= pr_lie:
        return actual
    actual_idx = list(ev_types).index(actual)
    r = int(rng.generator.integers(0, len(ev_types) - 1))
    return ev_types[r + (r >= actual_idx)]


def attribute_reports(
    events: Sequence[Event],
    pool: ParticipantPool,
    pr_lie: float,
    ev_types: Sequence[str],
    rng: RandomSource,
    backend: str = "auto",
) -> list[Report]:
    """Emit exactly sum(pool.quotas) reports.

    Each report picks an event uniformly at random and a participant
    uniformly among those with remaining quota (quota decremented); the
    occurred type comes from the event and the reported type goes through
    lie injection.
    """
    if not events:
        raise PsSimError("no events to report")
    total = int(pool.quotas.sum())
    if total < 1:
        raise PsSimError("participant pool has no remaining quota")
    if pr_lie > 0.0 and len(ev_types) < 2:
        raise PsSimError("pr_lie > 0 requires at least two event types")

    ev_types = tuple(ev_types)
    type_index = {t: i for i, t in enumerate(ev_types)}
    try:
        ev_type_idx = np.asarray(
            [type_index[e.incident_type] for e in events], dtype=np.int64
        )
    except KeyError as exc:
        raise PsSimError(f"event type {exc} not in the configured type list") from None

    gen = rng.generator
    ev_pick = gen.integers(0, len(events), size=total)
    u_part = gen.random(total)
    _, kernels = _kernels.get_backend(backend)
    part_idx = kernels.assign_participants(pool.quotas, u_part)

    occurred_idx = ev_type_idx[ev_pick]
    reported_idx = occurred_idx.copy()
    lie_mask = gen.random(total) < pr_lie
    n_lies = int(lie_mask.sum())
    if n_lies:
        r = gen.integers(0, len(ev_types) - 1, size=n_lies)
        reported_idx[lie_mask] = r + (r >= occurred_idx[lie_mask])

    consumed = np.bincount(part_idx, minlength=pool.quotas.size)
    pool.quotas = pool.quotas - consumed

    reports = []
    ids = pool.ids
    for t in range(total):
        ev = events[int(ev_pick[t])]
        reports.append(
            Report(
                event_no=ev.event_no,
                date=ev.date,
                day=ev.day,
                time=ev.time,
                report_no=t + 1,
                source_id=ids[int(part_idx[t])],
                event_reported=ev_types[int(reported_idx[t])],
                event_occurred=ev_types[int(occurred_idx[t])],
            )
        )
    return reports


def simulate(config: SimConfig, backend: str = "auto") -> Trace:
    """Run the full pipeline; a pure function of (config, seed).

    ``backend`` selects the participant-assignment kernel implementation;
    both backends produce bit-identical traces.
    """
    master = RandomSource(config.seed)

    params = rescale(config.mlog, config.sdlog, config.tau)
    quotas = lognormal_sample_counts(config.n, params, master.substream("quotas"))
    if int(quotas.sum()) == 0:
        raise PsSimError(
            "all participant quotas rounded to zero; increase mlog, sdlog, or tau"
        )

    count = gen_poisson_events(config, master.substream("events"))
    events = assign_event_attributes(count, config, master.substream("attributes"))

    pool = ParticipantPool.from_quotas(quotas)
    reports = attribute_reports(
        events,
        pool,
        config.pr_lie,
        config.ev_types,
        master.substream("reports"),
        backend=backend,
    )
    return Trace(
        reports=tuple(reports), events=tuple(events), config=config, seed=config.seed
    )
