"""
Sweeping SBS capacity
=====================

Packet loss against per-SBS bandwidth for the three strategies. Between
roughly 40 and 80 Mbit/s the cells go from overloaded to comfortable.
"""

from itsc_sim.experiment import sweep
from itsc_sim.scenario import paper_default_scenario

sc = paper_default_scenario().replace(seeds=(1, 2, 3))
values = ["40e6", "60e6", "80e6", "1e8"]
print("bw/SBS     " + "  ".join(f"{s:>10s}" for s in ("itsc", "eer-proxy", "nr-proxy")))
table = {s: sweep(sc, "bw_total_bps", values, s) for s in ("itsc", "eer-proxy", "nr-proxy")}
for i, v in enumerate(values):
    print(f"{float(v) / 1e6:5.0f} Mb/s " + "  ".join(
        f"{table[s][i].mean('packet_loss_pct'):9.3f}%" for s in table))
