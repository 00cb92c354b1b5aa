"""Cell capacity, energy efficiency and the per-tick sleep/allocation step.

Three strategies are available:

``itsc``
    Sleep any SBS whose cell capacity is zero; wake it as soon as an associated
    UE has an active flow. Bandwidth follows the HIGH-first split.
``eer-proxy`` (AlwaysOnEqualShare)
    Never sleeps; every flow at an SBS gets an equal share, no tiers.
``nr-proxy`` (AlwaysOnFifo)
    Never sleeps; flows are granted first-come-first-served, ordered by
    the arrival time of their oldest queued packet.

The proxies are comparison points, not models of any particular scheme.
Neither sleeps, and neither gives real-time traffic precedence.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .allocation import AllocationRequest, allocate, allocate_fcfs
from .energy import ACTIVE, SLEEPING
from .mobility import associate_all
from .queueing import DropTailPriQueue
from .traffic import PriorityTier, to_us


class Strategy(str, enum.Enum):
    ITSC = "itsc"
    EQUAL_SHARE = "eer-proxy"
    FIFO = "nr-proxy"

    @property
    def sleeps(self) -> bool:
        return self is Strategy.ITSC

    @classmethod
    def from_name(cls, name) -> "Strategy":
        if isinstance(name, Strategy):
            return name
        try:
            return cls(name)
        except ValueError:
            valid = ", ".join(s.value for s in cls)
            raise ValueError(f"unknown strategy {name!r}; expected one of {valid}") from None


@dataclass
class SbsRuntime:
    config: object
    queue: DropTailPriQueue
    state: str = ACTIVE
    attached_ues: set = field(default_factory=set)
    cell_capacity_bps: float = 0.0
    served_bps: float = 0.0


@dataclass
class World:
    """Snapshot handed to :func:`strategy_tick`. Only the engine mutates it."""
    scenario: object
    t_us: int
    ues: dict          # UE id -> UeState
    sbss: dict         # SBS id -> SbsRuntime, ascending id

    @property
    def t_s(self) -> float:
        return self.t_us / 1e6


@dataclass
class TickPlan:
    t_us: int
    association: dict          # UE id -> SBS id or None
    capacities: dict           # SBS id -> cell capacity (bit/s)
    states: dict               # SBS id -> ACTIVE | SLEEPING
    grants: dict               # SBS id -> {flow id: granted bit/s (int)}
    allocations: dict = field(default_factory=dict)


def _capacity_us(attached, flows, t_us) -> float:
    return sum(f.demand_bps for f in flows if f.source_ue in attached and f.active_at_us(t_us))


def cell_capacity(sbs: SbsRuntime, flows, at: float) -> float:
    """Offered load (bit/s) of active flows whose source UE is attached to `sbs`."""
    if not sbs.attached_ues:
        return 0.0
    return _capacity_us(sbs.attached_ues, flows, to_us(at))


def energy_efficiency(total_capacity_bits: float, pc_total_j: float) -> float:
    """Delivered bits per joule of consumed energy."""
    if not pc_total_j > 0:
        raise ValueError(f"pc_total_j must be positive, got {pc_total_j}")
    return total_capacity_bits / pc_total_j


def _next_state(strategy: Strategy, capacity: float) -> str:
    if not strategy.sleeps:
        return ACTIVE
    return SLEEPING if capacity == 0 else ACTIVE


def decide_states(sbss, flows, at: float, strategy) -> list[tuple[int, str]]:
    """New operational state per SBS, from the attachment sets already on `sbss`."""
    strategy = Strategy.from_name(strategy)
    return [(s.config.id, _next_state(strategy, cell_capacity(s, flows, at))) for s in sbss]


def _requests(sbs_id, sbs, attached, flows, t_us, tierless):
    out = []
    queued = set(sbs.queue.flows())
    for f in flows:
        if (f.source_ue in attached and f.active_at_us(t_us)) or f.id in queued:
            tier = PriorityTier.LOW if tierless else f.tier
            out.append(AllocationRequest(f.id, tier, math.floor(f.demand_bps)))
    return out


def strategy_tick(world: World, strategy) -> TickPlan:
    """Association, capacities, sleep decisions and grants for one control tick.

    A flow requests bandwidth at an SBS if its UE is attached there and it is
    active, or if the SBS still buffers packets of it (left behind after a
    handover). Grants are integer bit/s. `world` is not modified.
    """
    strategy = Strategy.from_name(strategy)
    sc = world.scenario
    t = world.t_us
    ues = [world.ues[k] for k in sorted(world.ues)]
    assoc = associate_all(ues, list(world.sbss.values()), sc.ue_list, sc.radio)

    attached = {sid: set() for sid in world.sbss}
    for ue_id, sid in assoc.items():
        if sid is not None:
            attached[sid].add(ue_id)

    capacities, states, grants, allocations = {}, {}, {}, {}
    for sid, sbs in world.sbss.items():
        cap = _capacity_us(attached[sid], sc.flows, t)
        capacities[sid] = cap
        states[sid] = _next_state(strategy, cap)
        if states[sid] == SLEEPING:
            grants[sid] = {}
            continue
        bw = math.floor(sbs.config.bw_total)
        reqs = _requests(sid, sbs, attached[sid], sc.flows, t, strategy is Strategy.EQUAL_SHARE)
        if strategy is Strategy.FIFO:
            def key(r, q=sbs.queue):
                oldest = q.oldest_arrival_us(r.flow_id)
                return (oldest is None, oldest if oldest is not None else 0, r.flow_id)
            res = allocate_fcfs(sorted(reqs, key=key), bw)
        else:
            res = allocate(reqs, bw)
        allocations[sid] = res
        grants[sid] = dict(res.grants)
    return TickPlan(t_us=t, association=assoc, capacities=capacities, states=states,
                    grants=grants, allocations=allocations)
