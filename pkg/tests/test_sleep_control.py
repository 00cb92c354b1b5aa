import copy

import pytest

from itsc_sim.energy import ACTIVE, SLEEPING
from itsc_sim.engine import run_simulation
from itsc_sim.mobility import UeState
from itsc_sim.queueing import DropTailPriQueue, Packet
from itsc_sim.scenario import Scenario, SbsConfig, UeConfig, paper_default_scenario
from itsc_sim.sleep_control import (
    SbsRuntime,
    Strategy,
    World,
    cell_capacity,
    decide_states,
    energy_efficiency,
    strategy_tick,
)
from itsc_sim.traffic import FlowSpec, PriorityTier, TrafficClass


def email(fid=1, ue=1, start=0.0, stop=100.0, rate=5.0):
    return FlowSpec(fid, TrafficClass.EMAIL, 500, rate, ue, start, stop)


def video(fid=2, ue=1, start=0.0, stop=100.0):
    return FlowSpec(fid, TrafficClass.VIDEO, 84480, 30.0, ue, start, stop)


def rt(sid=1, attached=(), bw=1e9):
    return SbsRuntime(config=SbsConfig(sid, (0.0, 0.0), bw), queue=DropTailPriQueue(10),
                      attached_ues=set(attached))


def test_capacity_empty():
    assert cell_capacity(rt(), [email()], 5.0) == 0


def test_capacity_one_email():
    assert cell_capacity(rt(attached={1}), [email()], 5.0) == 20_000


def test_capacity_additive():
    flows = [email(1, ue=1), video(2, ue=2)]
    both = cell_capacity(rt(attached={1, 2}), flows, 5.0)
    assert both == cell_capacity(rt(attached={1}), flows, 5.0) + cell_capacity(rt(attached={2}), flows, 5.0)


def test_capacity_ignores_inactive():
    assert cell_capacity(rt(attached={1}), [email(start=10.0)], 5.0) == 0


def test_energy_efficiency():
    assert energy_efficiency(0, 3.0) == 0
    assert energy_efficiency(1e6, 2.0) == 5e5
    assert energy_efficiency(1e6, 4.0) == energy_efficiency(1e6, 2.0) / 2
    for bad in (0.0, -1.0):
        with pytest.raises(ValueError):
            energy_efficiency(1.0, bad)


def test_decide_states():
    sbss = [rt(1), rt(2, attached={1})]
    assert decide_states(sbss, [email()], 5.0, "itsc") == [(1, SLEEPING), (2, ACTIVE)]
    for proxy in ("eer-proxy", "nr-proxy"):
        assert decide_states(sbss, [email()], 5.0, proxy) == [(1, ACTIVE), (2, ACTIVE)]


def test_strategy_names():
    assert Strategy.from_name("itsc") is Strategy.ITSC
    assert Strategy.from_name(Strategy.FIFO) is Strategy.FIFO
    with pytest.raises(ValueError, match="nr-proxy"):
        Strategy.from_name("aodv")


def _world(flows, ue_pos=((10.0, 10.0),), bw=1e6, t_us=0):
    sbss_cfg = (SbsConfig(1, (0.0, 0.0), bw), SbsConfig(2, (100.0, 100.0), bw))
    ues_cfg = tuple(UeConfig(i + 1, p) for i, p in enumerate(ue_pos))
    sc = Scenario(area_width_m=100.0, area_height_m=100.0, sbs_list=sbss_cfg, ue_list=ues_cfg,
                  flows=tuple(flows), tx_start_s=0.0, tx_stop_s=100.0)
    ues = {u.id: UeState(u.id, u.initial_position, u.initial_position, 0.0) for u in ues_cfg}
    sbss = {s.id: SbsRuntime(config=s, queue=DropTailPriQueue(10)) for s in sbss_cfg}
    return World(scenario=sc, t_us=t_us, ues=ues, sbss=sbss)


def test_tick_associates_sleeps_and_allocates():
    w = _world([video(2), email(1)], bw=1e8)
    plan = strategy_tick(w, "itsc")
    assert plan.association == {1: 1}
    assert plan.states == {1: ACTIVE, 2: SLEEPING}
    assert plan.grants[1] == {2: 84480 * 8 * 30, 1: 20_000}
    assert plan.grants[2] == {}


def test_tick_high_first_under_pressure():
    w = _world([video(2), email(1)], bw=500_000)
    g = strategy_tick(w, "itsc").grants[1]
    assert g == {2: 500_000, 1: 0}
    eq = strategy_tick(w, "eer-proxy").grants[1]
    assert eq == {2: 250_000, 1: 20_000}


def test_fifo_orders_by_oldest_queued_packet():
    w = _world([video(2), email(1)], bw=500_000)
    w.sbss[1].queue.push(Packet(0, 1, 500, PriorityTier.LOW, 5))
    w.sbss[1].queue.push(Packet(1, 2, 84480, PriorityTier.HIGH, 9))
    g = strategy_tick(w, "nr-proxy").grants[1]
    assert g == {1: 20_000, 2: 480_000}
    w2 = _world([video(2), email(1)], bw=500_000)       # nothing queued: id order
    assert strategy_tick(w2, "nr-proxy").grants[1] == {1: 20_000, 2: 480_000}


def test_stale_queue_keeps_requesting_after_handover():
    w = _world([email(1)], ue_pos=((90.0, 90.0),))
    w.sbss[1].queue.push(Packet(0, 1, 500, PriorityTier.LOW, 5))
    plan = strategy_tick(w, "eer-proxy")
    assert plan.association == {1: 2}
    assert 1 in plan.grants[1] and 1 in plan.grants[2]


def test_all_flows_stopped_everyone_sleeps():
    w = _world([email(1, stop=1.0)], t_us=2_000_000)
    plan = strategy_tick(w, "itsc")
    assert set(plan.states.values()) == {SLEEPING}


def test_tick_is_pure_and_deterministic():
    w = _world([video(2), email(1)], ue_pos=((10.0, 10.0), (80.0, 70.0)))
    snap = copy.deepcopy(w)
    a, b = strategy_tick(w, "itsc"), strategy_tick(w, "itsc")
    assert a == b
    assert w.ues == snap.ues and w.t_us == snap.t_us
    assert {k: (v.state, len(v.queue)) for k, v in w.sbss.items()} == \
           {k: (v.state, len(v.queue)) for k, v in snap.sbss.items()}


def test_paper_default_first_tick():
    sc = paper_default_scenario()
    tr = run_simulation(sc.replace(sim_end_s=10.5, tx_stop_s=10.5), "itsc", 1, trace=True)
    line = next(l for l in tr.log if l.startswith("10000000 CONTROL"))
    states = dict(kv.split(":") for kv in line.split("states[")[1].split("]")[0].split())
    assoc = line.split("assoc[")[1].split("]")[0].split()
    serving = {int(a.split(">")[1]) for a in assoc}
    for sid, state in states.items():
        assert (state == ACTIVE) == (int(sid) in serving)


def _walker():
    """One UE walking from SBS 1 to sleeping SBS 2, sending e-mail the whole time."""
    sbss = (SbsConfig(1, (5.0, 5.0), 1e6), SbsConfig(2, (35.0, 5.0), 1e6))
    ue = (UeConfig(1, (5.0, 5.0), speed_min_mps=3.0, speed_max_mps=3.0, pause_s=100.0),)
    return Scenario(area_width_m=40.0, area_height_m=10.0, sbs_list=sbss, ue_list=ue,
                    flows=(email(1, start=0.0, stop=20.0),), sim_start_s=0.0, tx_start_s=0.0,
                    tx_stop_s=20.0, sim_end_s=20.0, control_tick_s=1.0, seeds=(0,))


def test_wake_latency_bounded_by_one_tick():
    tr = run_simulation(_walker(), "itsc", 0, trace=True)
    ctrl = [l for l in tr.log if " CONTROL " in l]
    for line in ctrl:
        assoc = dict(a.split(">") for a in line.split("assoc[")[1].split("]")[0].split())
        states = dict(kv.split(":") for kv in line.split("states[")[1].split("]")[0].split())
        # whichever SBS the UE picks is active in that same tick
        assert states[assoc["1"]] == ACTIVE
    woke = [c for c in tr.state_changes if c.sbs_id == 2 and c.new == ACTIVE]
    assert woke, "walker never reached SBS 2"
    assert tr.outcomes().count((1, 0, "delivered")) == 1
    assert all(o[2] != "dropped_sbs_slept" for o in tr.outcomes())


@pytest.mark.parametrize("strategy", ["eer-proxy", "nr-proxy"])
def test_proxies_never_sleep(strategy):
    tr = run_simulation(_walker(), strategy, 0)
    assert tr.state_changes == []
