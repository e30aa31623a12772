"""Compare the compiled kernel backend against the pure-Python fallback.

Times the raw participant-assignment kernel at several sizes and a full
trace simulation at bench scale, for every available backend.

    python benchmarks/kernel_bench.py
"""

import datetime as dt
import math
import time

import numpy as np

from pssim._kernels import available_backends, get_backend
from pssim.distributions import pmf_from_counts
from pssim.simulator import simulate
from pssim.types import DAY_BINS, TEMPORAL_BINS, SimConfig


def time_call(fn, repeats=5):
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def kernel_case(n_participants, total_reports, seed=7):
    rng = np.random.default_rng(seed)
    quotas = rng.integers(0, 2 * total_reports // n_participants + 1,
                          size=n_participants).astype(np.int64)
    u = rng.random(int(quotas.sum()))
    return quotas, u


def bench_kernel():
    print("assign_participants (best of 5):")
    print(f"{'n':>8} {'reports':>10}", end="")
    backends = available_backends()
    for name in backends:
        print(f" {name:>12}", end="")
    print(" speedup" if len(backends) > 1 else "")
    for n, total in ((100, 5_000), (1_000, 50_000), (5_000, 500_000)):
        quotas, u = kernel_case(n, total)
        times = {}
        for name in backends:
            _, kernels = get_backend(name)
            times[name] = time_call(lambda: kernels.assign_participants(quotas, u))
        line = f"{n:>8} {len(u):>10}"
        for name in backends:
            line += f" {times[name] * 1e3:>10.2f}ms"
        if "compiled" in times and "python" in times:
            line += f" {times['python'] / times['compiled']:>6.1f}x"
        print(line)


def bench_simulate():
    types = ("Jam", "Accident", "RoadClosure", "Hazard")
    config = SimConfig(
        tau=100,
        start_date=dt.date(2015, 2, 23),
        ev_types=types,
        pr_lie=0.1,
        n=1000,
        lambda_e=10.0,
        mlog=math.log(3.0),
        sdlog=0.5,
        pmf_time=pmf_from_counts({b: 1 for b in TEMPORAL_BINS}),
        pmf_day=pmf_from_counts({d: 1 for d in DAY_BINS}),
        pmf_ev_type=pmf_from_counts({t: 1 for t in types}),
        seed=1,
        loc="bench",
    )
    trace = simulate(config)  # warm-up; also fixes the workload size
    print(
        f"\nfull simulate, n=1000 m=100 "
        f"({len(trace.reports)} reports, {len(trace.events)} events, best of 5):"
    )
    for name in available_backends():
        t = time_call(lambda: simulate(config, backend=name))
        print(f"  {name:>10}: {t * 1e3:.1f}ms")


def main():
    print(f"available backends: {', '.join(available_backends())}")
    bench_kernel()
    bench_simulate()


if __name__ == "__main__":
    main()
