import datetime as dt
import math
from pathlib import Path

import pytest

from pssim.distributions import pmf_from_counts
from pssim.types import DAY_BINS, TEMPORAL_BINS, SimConfig

DATA_DIR = Path(__file__).parent / "data"
SAMPLE_CSV = DATA_DIR / "sample_reports.csv"
GOLDEN_TRACE = DATA_DIR / "golden_trace.csv"

DEFAULT_TYPES = ("Jam", "Accident", "Hazard")


def uniform_pmf(support):
    return pmf_from_counts({s: 1 for s in support})


def make_config(**overrides) -> SimConfig:
    """A small, valid SimConfig; keyword overrides replace any field."""
    types = overrides.pop("ev_types", DEFAULT_TYPES)
    fields = dict(
        tau=7,
        start_date=dt.date(2015, 2, 23),  # a Monday
        ev_types=types,
        pr_lie=0.0,
        n=20,
        lambda_e=3.0,
        mlog=math.log(3.0),
        sdlog=0.5,
        pmf_time=uniform_pmf(TEMPORAL_BINS),
        pmf_day=uniform_pmf(DAY_BINS),
        pmf_ev_type=uniform_pmf(types),
        seed=42,
        loc="Elm Street",
    )
    fields.update(overrides)
    return SimConfig(**fields)


@pytest.fixture
def config_factory():
    return make_config
