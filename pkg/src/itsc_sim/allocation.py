"""Two-tier transferable-payoff bandwidth split at a single SBS.

Real-time (HIGH) flows are served first, each up to its demand, in ascending
flow-id order. Whatever capacity they leave is shared equally among the LOW
flows; a LOW flow never receives more than it asks for.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .traffic import PriorityTier


@dataclass(frozen=True)
class AllocationRequest:
    flow_id: int
    tier: PriorityTier
    demand_bps: float

    def __post_init__(self):
        if self.demand_bps < 0:
            raise ValueError(f"flow {self.flow_id}: negative demand {self.demand_bps}")


@dataclass
class AllocationResult:
    grants: dict[int, float] = field(default_factory=dict)
    bw_h_bps: float = 0.0         # total handed to HIGH flows
    bw_l_bps: float = 0.0         # per-flow share offered to each LOW flow
    low_flow_count: int = 0

    @property
    def total_bps(self) -> float:
        return math.fsum(self.grants.values())


def _round_down(q: Fraction, as_int: bool):
    # Rounding must never create bandwidth, so every output is <= its exact value.
    if as_int:
        return math.floor(q)
    f = float(q)
    if Fraction(f) > q:
        f = math.nextafter(f, -math.inf)
    return f


def _check(bw_total):
    if not bw_total > 0:
        raise ValueError(f"bw_total must be positive, got {bw_total}")


def allocate(requests, bw_total: float) -> AllocationResult:
    """Split `bw_total` between HIGH and LOW requests.

    Arithmetic is exact; grants are rounded down. When `bw_total` and every
    demand are ints the grants are ints too.
    """
    _check(bw_total)
    requests = list(requests)
    as_int = isinstance(bw_total, int) and all(isinstance(r.demand_bps, int) for r in requests)
    high = sorted((r for r in requests if r.tier == PriorityTier.HIGH), key=lambda r: r.flow_id)
    low = sorted((r for r in requests if r.tier != PriorityTier.HIGH), key=lambda r: r.flow_id)

    res = AllocationResult()
    total = Fraction(bw_total)
    remaining = total
    for r in high:
        g = min(Fraction(r.demand_bps), remaining)
        remaining -= g
        res.grants[r.flow_id] = _round_down(g, as_int)
    res.bw_h_bps = _round_down(total - remaining, as_int)

    res.low_flow_count = len(low)
    if low:
        share = remaining / len(low)
        res.bw_l_bps = _round_down(share, as_int)
        for r in low:
            res.grants[r.flow_id] = _round_down(min(Fraction(r.demand_bps), share), as_int)
    elif as_int:
        res.bw_l_bps = 0
    return res


def allocate_fcfs(requests, bw_total: float) -> AllocationResult:
    """Grant demands in the given order until capacity runs out. No tiers."""
    _check(bw_total)
    requests = list(requests)
    as_int = isinstance(bw_total, int) and all(isinstance(r.demand_bps, int) for r in requests)
    res = AllocationResult()
    remaining = Fraction(bw_total)
    for r in requests:
        g = min(Fraction(r.demand_bps), remaining)
        remaining -= g
        res.grants[r.flow_id] = _round_down(g, as_int)
    res.bw_h_bps = 0 if as_int else 0.0
    return res
