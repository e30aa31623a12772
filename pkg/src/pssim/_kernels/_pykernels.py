"""Pure-Python kernel implementations (fallback for the compiled core)."""

from __future__ import annotations

import numpy as np


def assign_participants(quotas: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Assign each of len(u) reports to a participant index.

    At each step the participant is drawn uniformly among those with
    remaining quota (u[t] in [0, 1) selects the index), then its quota is
    decremented; exhausted participants leave the candidate set.  The
    history dependence makes this loop inherently sequential.
    """
    remaining = np.asarray(quotas, dtype=np.int64).tolist()
    active = [i for i, q in enumerate(remaining) if q > 0]
    size = len(active)
    out = []
    for x in u.tolist():
        if size == 0:
            raise ValueError("participant quotas exhausted before all reports assigned")
        j = int(x * size)
        if j >= size:  # guard against float rounding at u ~ 1
            j = size - 1
        pid = active[j]
        out.append(pid)
        remaining[pid] -= 1
        if remaining[pid] == 0:
            size -= 1
            active[j] = active[size]
    return np.asarray(out, dtype=np.int64)
