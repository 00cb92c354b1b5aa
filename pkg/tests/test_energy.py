from types import SimpleNamespace

import pytest
from hypothesis import given
from hypothesis import strategies as st

from itsc_sim.energy import ACTIVE, SLEEPING, EnergyAccount, accumulate, power_draw
from itsc_sim.scenario import PowerProfile


def sbs(sid=1, state=ACTIVE, served=0.0, bw=100.0):
    return SimpleNamespace(config=SimpleNamespace(id=sid, bw_total=bw), state=state, served_bps=served)


def test_sleep_ignores_load():
    p = PowerProfile(p_fixed_active_w=2.0, p_sleep_w=0.5, p_dynamic_max_w=9.0)
    assert power_draw(SLEEPING, 0.0, p) == power_draw(SLEEPING, 1.0, p) == 0.5


def test_active_idle_is_fixed_part():
    p = PowerProfile(p_fixed_active_w=3.0, p_sleep_w=0.1, p_dynamic_max_w=9.0)
    assert power_draw(ACTIVE, 0.0, p) == 3.0


def test_active_full_load():
    p = PowerProfile(p_fixed_active_w=10.0, p_sleep_w=1.0, p_dynamic_max_w=5.0)
    assert power_draw(ACTIVE, 1.0, p) == 15.0


@pytest.mark.parametrize("load", [-0.01, 1.01])
def test_load_domain(load):
    with pytest.raises(ValueError):
        power_draw(ACTIVE, load, PowerProfile())


def test_sleeping_hundred_seconds():
    p = PowerProfile(p_fixed_active_w=1.0, p_sleep_w=0.5)
    acc = accumulate(EnergyAccount(), [sbs(state=SLEEPING)], 100.0, p)
    assert acc.per_sbs_j[1] == 50.0


def test_active_idle_hundred_seconds():
    p = PowerProfile(p_fixed_active_w=3.0, p_sleep_w=0.5)
    acc = accumulate(EnergyAccount(), [sbs()], 100.0, p)
    assert acc.per_sbs_j[1] == 300.0


def test_sleep_saving_is_difference_times_window():
    p = PowerProfile(p_fixed_active_w=0.01, p_sleep_w=0.001)
    on = accumulate(EnergyAccount(), [sbs()], 37.5, p).total_j
    off = accumulate(EnergyAccount(), [sbs(state=SLEEPING)], 37.5, p).total_j
    assert on - off == pytest.approx((0.01 - 0.001) * 37.5, abs=1e-15)


def test_load_clamped_and_backhaul_counted():
    p = PowerProfile(p_fixed_active_w=1.0, p_sleep_w=0.1, p_dynamic_max_w=2.0, pc_backhaul_w=0.25)
    acc = accumulate(EnergyAccount(), [sbs(served=250.0, bw=100.0), sbs(2, served=50.0)], 2.0, p)
    assert acc.per_sbs_j == {1: 6.0, 2: 4.0}
    assert acc.backhaul_j == 0.5
    assert acc.total_j == 10.5


def test_dt_must_be_positive():
    with pytest.raises(ValueError):
        accumulate(EnergyAccount(), [sbs()], 0.0, PowerProfile())


@given(st.lists(st.floats(0.001, 50.0), min_size=1, max_size=10),
       st.sampled_from([ACTIVE, SLEEPING]), st.floats(0, 300.0))
def test_additive_and_monotone(dts, state, served):
    p = PowerProfile(p_fixed_active_w=0.01, p_sleep_w=0.001, p_dynamic_max_w=0.01, pc_backhaul_w=0.002)
    acc = EnergyAccount()
    last = 0.0
    for dt in dts:
        accumulate(acc, [sbs(state=state, served=served)], dt, p)
        assert acc.total_j >= last
        last = acc.total_j
    whole = accumulate(EnergyAccount(), [sbs(state=state, served=served)], sum(dts), p)
    assert acc.total_j == pytest.approx(whole.total_j, rel=1e-12)
    assert acc.total_j == pytest.approx(sum(acc.per_sbs_j.values()) + acc.backhaul_j)
