"""
Paired strategy comparison
==========================

Every strategy sees the same seeds, so the same UE trajectories and the same
packet arrivals. Differences in the report come from the strategy alone.
"""

import sys
from pathlib import Path

from itsc_sim.experiment import compare_strategies
from itsc_sim.metrics import export_report
from itsc_sim.scenario import paper_default_scenario, stress_scenario

out = Path(sys.argv[1] if len(sys.argv) > 1 else "results/demo_compare")

for sc in (paper_default_scenario(), stress_scenario()):
    reps = compare_strategies(sc, ["itsc", "eer-proxy", "nr-proxy"])
    print(sc.name)
    for r in reps:
        print(f"  {r.label:10s} loss {r.mean('packet_loss_pct'):6.3f}% (sd {r.std('packet_loss_pct'):.3f})"
              f"  thr {r.mean('throughput_pct'):7.3f}%  energy {r.mean('energy_total_j'):.3f} J")
    for p in export_report(reps, "both", out, stem=sc.name):
        print("  wrote", p)
