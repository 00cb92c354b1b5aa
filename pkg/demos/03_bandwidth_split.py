"""
Two-tier bandwidth split
========================

At each SBS the real-time flows are served first, in flow-id order, up to
their demands. The rest is split evenly among best-effort flows, each capped
at what it asked for. The two proxy baselines split differently: one ignores
tiers, the other grants first come, first served.
"""

from itsc_sim.allocation import AllocationRequest, allocate, allocate_fcfs
from itsc_sim.traffic import PriorityTier

H, L = PriorityTier.HIGH, PriorityTier.LOW
bw = 1_000_000

reqs = [AllocationRequest(1, H, 400_000), AllocationRequest(2, L, 10**9), AllocationRequest(3, L, 10**9)]
res = allocate(reqs, bw)
print("high 40% + two hungry lows:", res.grants, "BW_H", res.bw_h_bps, "per-low share", res.bw_l_bps)

# When the HIGH tier alone oversubscribes the cell, lows get nothing.
over = [AllocationRequest(1, H, 700_000), AllocationRequest(2, H, 700_000), AllocationRequest(3, L, 5_000)]
print("oversubscribed:", allocate(over, bw).grants)

# The same requests without tiers (equal share) and in arrival order (FCFS).
flat = [AllocationRequest(r.flow_id, L, r.demand_bps) for r in over]
print("equal share:  ", allocate(flat, bw).grants)
print("fcfs 3,2,1:   ", allocate_fcfs(list(reversed(over)), bw).grants)

# Grants are whole bit/s and never sum above the capacity.
odd = [AllocationRequest(i, L, 10**9) for i in range(1, 4)]
g = allocate(odd, 1_000_000).grants
print(g, "sum", sum(g.values()))
