"""Deterministic discrete-event core.

Time is kept in integer microseconds. Each SBS is modelled as a set of
per-flow servers: the head-of-line packet of flow ``f`` queued at SBS ``s``
is transmitted at the rate granted to ``f`` at ``s`` by the last control tick.
Remaining work is tracked exactly, in bit-microseconds, so a packet of
``b`` bits served at ``g`` bit/s needs ``ceil(b * 1e6 / g)`` microseconds.
When a tick changes a grant, the work done so far is kept and the rest
continues at the new rate.

Events at the same instant run in a fixed kind order: departures, mobility,
control tick, arrivals, end of run. Within a kind, ties go by (SBS id,)
flow id and finally by scheduling sequence.
"""

from __future__ import annotations

import enum
import heapq
import io
from dataclasses import dataclass, field

from .energy import ACTIVE, SLEEPING, EnergyAccount, accumulate
from .mobility import initial_ue_state, random_waypoint_step, ue_rng
from .queueing import DropTailPriQueue, Packet, enqueue
from .scenario import Scenario, validate_scenario
from .sleep_control import SbsRuntime, Strategy, World, strategy_tick
from .traffic import US_PER_S, arrival_times_us, to_us


class EventKind(enum.IntEnum):
    PACKET_DEPARTURE = 0
    MOBILITY_TICK = 1
    CONTROL_TICK = 2
    PACKET_ARRIVAL = 3
    SIM_END = 4


class Outcome(str, enum.Enum):
    DELIVERED = "delivered"
    DROPPED_QUEUE_FULL = "dropped_queue_full"
    DROPPED_NO_ATTACHMENT = "dropped_no_attachment"
    DROPPED_SBS_SLEPT = "dropped_sbs_slept"
    # Still buffered when the run ends; counted as lost.
    UNDELIVERED_AT_END = "undelivered_at_end"


@dataclass
class Event:
    timestamp_us: int
    sequence: int
    kind: EventKind
    payload: tuple = ()

    @property
    def timestamp(self) -> float:
        return self.timestamp_us / US_PER_S


@dataclass(slots=True)
class PacketRecord:
    pid: int
    flow_id: int
    size_bytes: int
    arrival_us: int
    sbs_id: int | None = None
    outcome: Outcome | None = None
    end_us: int | None = None

    @property
    def arrival_s(self) -> float:
        return self.arrival_us / US_PER_S


@dataclass
class StateChange:
    t_us: int
    sbs_id: int
    old: str
    new: str
    capacity_bps: float


@dataclass
class RunTrace:
    scenario_name: str
    strategy: str
    seed: int
    records: list
    energy: EnergyAccount
    event_counts: dict
    state_changes: list
    delivered_bits_per_sbs: dict
    tx_start_us: int
    tx_stop_us: int
    sim_start_us: int
    sim_end_us: int
    log: list | None = None

    def outcomes(self) -> list[tuple[int, int, str]]:
        """``(flow id, arrival us, outcome)`` per packet, in packet-id order."""
        return [(r.flow_id, r.arrival_us, r.outcome.value if r.outcome else None) for r in self.records]

    def dumps(self) -> str:
        """Canonical text rendering, identical for identical runs."""
        out = io.StringIO()
        out.write(f"# run scenario={self.scenario_name} strategy={self.strategy} seed={self.seed}\n")
        for r in self.records:
            out.write(f"P {r.pid} {r.flow_id} {r.size_bytes} {r.arrival_us} {r.sbs_id} "
                      f"{r.outcome.value} {r.end_us}\n")
        for c in self.state_changes:
            out.write(f"S {c.t_us} {c.sbs_id} {c.old} {c.new} {c.capacity_bps!r}\n")
        for sid in sorted(self.energy.per_sbs_j):
            out.write(f"E {sid} {self.energy.per_sbs_j[sid]!r}\n")
        out.write(f"E backhaul {self.energy.backhaul_j!r}\n")
        for k in sorted(self.event_counts):
            out.write(f"C {k} {self.event_counts[k]}\n")
        return out.getvalue()

    def dump_log(self) -> str:
        if self.log is None:
            raise ValueError("run was executed without trace=True")
        return "".join(line + "\n" for line in self.log)


class SimulationError(RuntimeError):
    pass


class _Server:
    __slots__ = ("grant", "packet", "work", "since", "version")

    def __init__(self, grant):
        self.grant = grant
        self.packet = None
        self.work = 0          # bit-microseconds still to send
        self.since = 0
        self.version = 0


class Simulation:
    def __init__(self, scenario: Scenario, strategy, seed: int, trace: bool = False):
        self.sc = validate_scenario(scenario)
        self.strategy = Strategy.from_name(strategy)
        self.seed = seed
        self.trace = trace

        sc = self.sc
        self.area = sc.area
        self.start_us = to_us(sc.sim_start_s)
        self.end_us = to_us(sc.sim_end_s)
        self.tick_us = to_us(sc.control_tick_s)
        self.mob_us = to_us(sc.mobility_tick_s)
        if self.tick_us <= 0 or self.mob_us <= 0:
            raise SimulationError("control and mobility ticks must be at least 1 us")
        self.tx_start_us = to_us(sc.tx_start_s)
        self.tx_stop_us = to_us(sc.tx_stop_s)
        self.flows = {f.id: f for f in sc.flows}
        self.ue_cfg = {u.id: u for u in sc.ue_list}

        self.rngs = {}
        ues = {}
        for idx, u in enumerate(sc.ue_list):
            rng = ue_rng(seed, idx)
            self.rngs[u.id] = rng
            ues[u.id] = initial_ue_state(u, self.area, rng)
        sbss = {
            s.id: SbsRuntime(config=s, queue=DropTailPriQueue(sc.queue_limit_packets))
            for s in sorted(sc.sbs_list, key=lambda s: s.id)
        }
        self.world = World(scenario=sc, t_us=self.start_us, ues=ues, sbss=sbss)
        self.association = {u.id: None for u in sc.ue_list}
        self.grants = {sid: {} for sid in sbss}
        self.servers = {}          # (sbs id, flow id) -> _Server

        self.records = []
        self.energy = EnergyAccount(per_sbs_j={sid: 0.0 for sid in sbss})
        self.delivered_bits = {sid: 0 for sid in sbss}
        self.state_changes = []
        self.counts = {k.name: 0 for k in EventKind}
        self.log = [] if trace else None

        self._heap = []
        self._seq = 0
        self._arrivals = {
            fid: arrival_times_us(f, self.tx_start_us, self.tx_stop_us) for fid, f in self.flows.items()
        }
        self.now = self.start_us
        self._last_energy_us = self.start_us

    # -- scheduling --------------------------------------------------------

    def _push(self, t, kind, sub, payload):
        self._seq += 1
        heapq.heappush(self._heap, (t, int(kind), sub, self._seq, Event(t, self._seq, kind, payload)))

    def _schedule_departure(self, sid, fid, srv):
        srv.version += 1
        if srv.packet is None or srv.grant <= 0:
            return
        dep = srv.since + -(-srv.work // srv.grant)
        self._push(dep, EventKind.PACKET_DEPARTURE, (sid, fid), (sid, fid, srv.version))

    def _refresh_served(self, sid):
        self.world.sbss[sid].served_bps = sum(
            srv.grant for (s, _), srv in self.servers.items() if s == sid and srv.packet is not None
        )

    # -- packet handling ---------------------------------------------------

    def _resolve(self, rec, outcome, t, sid=None):
        if rec.outcome is not None:
            raise SimulationError(f"packet {rec.pid} resolved twice")
        rec.outcome = outcome
        rec.end_us = t
        if sid is not None:
            rec.sbs_id = sid

    def _start_service(self, sid, fid, srv, pkt, t):
        srv.packet = pkt
        srv.work = pkt.size_bytes * 8 * US_PER_S
        srv.since = t
        self._schedule_departure(sid, fid, srv)

    def _on_arrival(self, t, fid, k):
        f = self.flows[fid]
        rec = PacketRecord(pid=len(self.records), flow_id=fid, size_bytes=f.packet_size_bytes, arrival_us=t)
        self.records.append(rec)
        sid = self.association.get(f.source_ue)
        detail = ""
        if sid is None:
            self._resolve(rec, Outcome.DROPPED_NO_ATTACHMENT, t)
            detail = "drop=no_attachment"
        else:
            sbs = self.world.sbss[sid]
            rec.sbs_id = sid
            pkt = Packet(rec.pid, fid, f.packet_size_bytes, f.tier, t)
            if sbs.state == SLEEPING:
                self._resolve(rec, Outcome.DROPPED_SBS_SLEPT, t)
                detail = "drop=sbs_slept"
            elif not enqueue(sbs.queue, pkt, self.sc.queue_limit_packets):
                self._resolve(rec, Outcome.DROPPED_QUEUE_FULL, t)
                detail = "drop=queue_full"
            else:
                key = (sid, fid)
                srv = self.servers.get(key)
                if srv is None:
                    srv = self.servers[key] = _Server(self.grants[sid].get(fid, 0))
                if srv.packet is None:
                    self._start_service(sid, fid, srv, pkt, t)
                    self._refresh_served(sid)
                detail = f"sbs={sid} qlen={len(sbs.queue)}"
        if self.log is not None:
            self.log.append(f"{t} ARRIVAL pid={rec.pid} flow={fid} {detail}")
        times = self._arrivals[fid]
        if k + 1 < len(times):
            self._push(times[k + 1], EventKind.PACKET_ARRIVAL, (fid,), (fid, k + 1))

    def _on_departure(self, t, sid, fid):
        srv = self.servers[(sid, fid)]
        sbs = self.world.sbss[sid]
        pkt = sbs.queue.pop_flow(fid)
        if pkt is not srv.packet:
            raise SimulationError(f"server/queue mismatch at SBS {sid}, flow {fid}")
        if t < pkt.arrival_us:
            raise SimulationError(f"packet {pkt.pid} departs before it arrives")
        rec = self.records[pkt.pid]
        self._resolve(rec, Outcome.DELIVERED, t, sid)
        self.delivered_bits[sid] += pkt.size_bytes * 8
        nxt = sbs.queue.head(fid)
        if nxt is not None:
            self._start_service(sid, fid, srv, nxt, t)
        else:
            srv.packet = None
            srv.version += 1
        self._refresh_served(sid)
        if self.log is not None:
            self.log.append(f"{t} DEPARTURE pid={pkt.pid} flow={fid} sbs={sid}")

    # -- ticks -------------------------------------------------------------

    def _on_mobility(self, t):
        dt = self.mob_us / US_PER_S
        ues = self.world.ues
        for ue_id in sorted(ues):
            ues[ue_id] = random_waypoint_step(ues[ue_id], self.ue_cfg[ue_id], dt, self.rngs[ue_id], self.area)
        if self.log is not None:
            pos = " ".join(f"{u}:{ues[u].position[0]!r},{ues[u].position[1]!r}" for u in sorted(ues))
            self.log.append(f"{t} MOBILITY {pos}")
        if t + self.mob_us < self.end_us:
            self._push(t + self.mob_us, EventKind.MOBILITY_TICK, (), ())

    def _on_control(self, t):
        self.world.t_us = t
        plan = strategy_tick(self.world, self.strategy)
        for sid, sbs in self.world.sbss.items():
            new = plan.states[sid]
            if new != sbs.state:
                self.state_changes.append(StateChange(t, sid, sbs.state, new, plan.capacities[sid]))
                if new == SLEEPING:
                    for pkt in sbs.queue.drain():
                        self._resolve(self.records[pkt.pid], Outcome.DROPPED_SBS_SLEPT, t, sid)
                    for (s, _), srv in self.servers.items():
                        if s == sid:
                            srv.packet = None
                            srv.version += 1
                sbs.state = new
            sbs.attached_ues = {u for u, s in plan.association.items() if s == sid}
            sbs.cell_capacity_bps = plan.capacities[sid]

        self.association = dict(plan.association)
        self.grants = plan.grants
        for (sid, fid), srv in self.servers.items():
            g = self.grants[sid].get(fid, 0)
            if g == srv.grant:
                continue
            if srv.packet is not None:
                srv.work -= srv.grant * (t - srv.since)
                srv.since = t
                if srv.work < 0:
                    raise SimulationError("negative remaining work")
            srv.grant = g
            self._schedule_departure(sid, fid, srv)
        for sid in self.world.sbss:
            self._refresh_served(sid)

        if self.log is not None:
            states = " ".join(f"{sid}:{plan.states[sid]}" for sid in sorted(plan.states))
            assoc = " ".join(f"{u}>{plan.association[u]}" for u in sorted(plan.association))
            grants = " ".join(
                f"{sid}:" + ",".join(f"{f}={g}" for f, g in sorted(plan.grants[sid].items()))
                for sid in sorted(plan.grants)
            )
            self.log.append(f"{t} CONTROL states[{states}] assoc[{assoc}] grants[{grants}]")
        if t + self.tick_us < self.end_us:
            self._push(t + self.tick_us, EventKind.CONTROL_TICK, (), ())

    def _on_end(self, t):
        for sid, sbs in self.world.sbss.items():
            for pkt in sbs.queue.drain():
                self._resolve(self.records[pkt.pid], Outcome.UNDELIVERED_AT_END, t, sid)
            sbs.served_bps = 0
        if self.log is not None:
            self.log.append(f"{t} END")

    # -- main loop ---------------------------------------------------------

    def _advance_energy(self, t):
        if t > self._last_energy_us:
            accumulate(self.energy, self.world.sbss.values(), (t - self._last_energy_us) / US_PER_S,
                       self.sc.power_profile)
            self._last_energy_us = t

    def run(self) -> RunTrace:
        self._push(self.start_us, EventKind.CONTROL_TICK, (), ())
        if self.start_us + self.mob_us < self.end_us:
            self._push(self.start_us + self.mob_us, EventKind.MOBILITY_TICK, (), ())
        for fid in sorted(self._arrivals):
            times = self._arrivals[fid]
            if times:
                self._push(times[0], EventKind.PACKET_ARRIVAL, (fid,), (fid, 0))
        self._push(self.end_us, EventKind.SIM_END, (), ())

        heap = self._heap
        while heap:
            t, _, _, _, ev = heapq.heappop(heap)
            kind = ev.kind
            if kind is EventKind.PACKET_DEPARTURE:
                sid, fid, version = ev.payload
                if self.servers[(sid, fid)].version != version:
                    continue
            if t < self.now:
                raise SimulationError(f"time went backwards: {t} < {self.now}")
            self._advance_energy(t)
            self.now = t
            self.counts[kind.name] += 1
            if kind is EventKind.PACKET_ARRIVAL:
                self._on_arrival(t, *ev.payload)
            elif kind is EventKind.PACKET_DEPARTURE:
                self._on_departure(t, ev.payload[0], ev.payload[1])
            elif kind is EventKind.CONTROL_TICK:
                self._on_control(t)
            elif kind is EventKind.MOBILITY_TICK:
                self._on_mobility(t)
            else:
                self._on_end(t)
                break

        unresolved = [r.pid for r in self.records if r.outcome is None]
        if unresolved:
            raise SimulationError(f"{len(unresolved)} packets left unresolved")
        return RunTrace(
            scenario_name=self.sc.name,
            strategy=self.strategy.value,
            seed=self.seed,
            records=self.records,
            energy=self.energy,
            event_counts=dict(self.counts),
            state_changes=self.state_changes,
            delivered_bits_per_sbs=dict(self.delivered_bits),
            tx_start_us=self.tx_start_us,
            tx_stop_us=self.tx_stop_us,
            sim_start_us=self.start_us,
            sim_end_us=self.end_us,
            log=self.log,
        )


def run_simulation(scenario: Scenario, strategy, seed: int, trace: bool = False) -> RunTrace:
    """Run one seeded simulation and return its complete trace."""
    return Simulation(scenario, strategy, seed, trace=trace).run()
