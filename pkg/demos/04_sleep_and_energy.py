"""
Sleeping an idle cell
=====================

One SBS, one UE, one e-mail flow that is only on between 3 s and 8 s of a
15 s run. The sleep-aware strategy parks the SBS whenever its cell capacity
is zero; the always-on baselines keep paying the fixed power. The saving is
exactly the fixed-minus-sleep power times the idle time.
"""

from itsc_sim import run_simulation
from itsc_sim.scenario import PowerProfile, Scenario, SbsConfig, UeConfig
from itsc_sim.traffic import FlowSpec, TrafficClass

power = PowerProfile(p_fixed_active_w=0.01, p_sleep_w=0.001, p_dynamic_max_w=0.01)
sc = Scenario(
    area_width_m=50.0, area_height_m=50.0,
    sbs_list=(SbsConfig(1, (25.0, 25.0), 1e7),),
    ue_list=(UeConfig(1, (30.0, 25.0), speed_min_mps=0.0, speed_max_mps=0.0, pause_s=0.0),),
    flows=(FlowSpec(1, TrafficClass.EMAIL, 500, 5.0, 1, 3.0, 8.0),),
    power_profile=power, sim_start_s=0.0, tx_start_s=0.0, tx_stop_s=15.0, sim_end_s=15.0,
    seeds=(0,), name="idle-cell",
)

runs = {s: run_simulation(sc, s, 0) for s in ("itsc", "eer-proxy", "nr-proxy")}
for s, tr in runs.items():
    print(f"{s:10s} {tr.energy.total_j * 1e3:8.4f} mJ  state changes:",
          [(c.t_us / 1e6, c.new) for c in tr.state_changes])

saving = runs["eer-proxy"].energy.total_j - runs["itsc"].energy.total_j
print(f"saving {saving * 1e3:.6f} mJ, predicted {(0.01 - 0.001) * 10 * 1e3:.6f} mJ for 10 idle seconds")
