"""
Random waypoint and strongest-signal association
================================================

UEs wander the field by the random-waypoint rule and attach to whichever SBS
they hear loudest under two-ray-ground propagation. Sleeping SBSs stay in
the candidate set, which is how a sleeping cell gets woken up.
"""

import numpy as np

from itsc_sim.mobility import (
    associate_all,
    crossover_distance_m,
    initial_ue_state,
    random_waypoint_step,
    two_ray_rx_power,
    ue_rng,
)
from itsc_sim.scenario import RadioProfile, paper_default_scenario

radio = RadioProfile()
lam = radio.wavelength_m
dc = crossover_distance_m(1.5, 1.5, lam)
print(f"wavelength {lam:.4f} m, free-space/two-ray crossover at {dc:.1f} m")

# Far field: received power falls with d**4, so doubling distance costs 16x.
for d in (50, 100, 200, 400):
    p = two_ray_rx_power(radio.tx_power_w, 1, 1, 1.5, 1.5, d, lam)
    print(f"d={d:4d} m  {10 * np.log10(p / 1e-3):7.2f} dBm")

sc = paper_default_scenario()
area = sc.area
print("SBS positions:", [s.position for s in sc.sbs_list])

# Walk every UE for a minute and record which SBS it picks every 10 s.
ues = {}
rngs = {}
for i, cfg in enumerate(sc.ue_list):
    rngs[cfg.id] = ue_rng(seed=1, ue_index=i)
    ues[cfg.id] = initial_ue_state(cfg, area, rngs[cfg.id])

for step in range(0, 601):
    if step % 100 == 0:
        table = associate_all(list(ues.values()), sc.sbs_list, sc.ue_list, radio)
        print(f"t={step / 10:5.1f} s ", " ".join(f"{u}->{s}" for u, s in sorted(table.items())))
    for cfg in sc.ue_list:
        ues[cfg.id] = random_waypoint_step(ues[cfg.id], cfg, 0.1, rngs[cfg.id], area)
