"""
One run, end to end
===================

Run the built-in scenario once, look at the per-packet outcomes and the
event log, and turn the trace into a metrics row.
"""

from collections import Counter

from itsc_sim import compute_report, run_simulation
from itsc_sim.scenario import stress_scenario

sc = stress_scenario()          # 60 Mbit/s per SBS, so some cells overflow
tr = run_simulation(sc, "itsc", seed=1, trace=True)

print(Counter(r.outcome.value for r in tr.records))
print("events:", tr.event_counts)

# The log has one line per event, prefixed by its time in microseconds.
for line in tr.log[:3]:
    print(line[:110])
ctrl = [l for l in tr.log if " CONTROL " in l]
print(ctrl[10][:160])

row = compute_report(tr)
print(f"loss {row.packet_loss_pct:.3f}%  throughput {row.throughput_pct:.3f}%  "
      f"energy {row.energy_total_j:.3f} J  EE {row.ee_bits_per_joule:.3e} bit/J")
print("per-SBS energy:", {k: round(v, 4) for k, v in row.energy_per_sbs_j.items()})
