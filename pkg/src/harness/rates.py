# src/harness/rates.py
from __future__ import annotations

"""Observed convergence rates
----------------------------
rate_k = log(E_{k-1} / E_k) / log(n_k / n_{k-1}) between successive rows;
rows with a missing or non-positive error break the chain.
"""

import math
from typing import List, Optional, Sequence


def observed_rates(ns: Sequence[int], errors: Sequence[Optional[float]]) -> List[Optional[float]]:
    if len(ns) != len(errors):
        raise ValueError(f"{len(ns)} resolutions but {len(errors)} errors")
    rates: List[Optional[float]] = [None] * len(ns)
    for k in range(1, len(ns)):
        e0, e1 = errors[k - 1], errors[k]
        if e0 is None or e1 is None or e0 <= 0.0 or e1 <= 0.0:
            continue
        rates[k] = math.log(e0 / e1) / math.log(ns[k] / ns[k - 1])
    return rates


def average_rate(ns: Sequence[int], errors: Sequence[Optional[float]]) -> Optional[float]:
    """Mean of the available successive rates."""
    rates = [r for r in observed_rates(ns, errors) if r is not None]
    if not rates:
        return None
    return sum(rates) / len(rates)


__all__ = ["observed_rates", "average_rate"]
