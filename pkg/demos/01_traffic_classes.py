"""
Traffic classes and priority tiers
==================================

Four traffic classes feed the network. Each is a constant-bit-rate stream of
fixed-size packets, and the packet size alone decides whether a flow counts
as real-time (HIGH) or best-effort (LOW).
"""

from itsc_sim.traffic import (
    DEFAULT_PACKET_BYTES,
    DEFAULT_RATE_PPS,
    FlowSpec,
    TrafficClass,
    classify_priority,
    generate_arrivals,
    offered_load_bps,
)

# Packet size, default rate and the tier each class lands in.
for cls in TrafficClass:
    size = DEFAULT_PACKET_BYTES[cls]
    rate = DEFAULT_RATE_PPS[cls]
    print(f"{cls.value:6s} {size:6d} B  {rate:4.0f} pkt/s  "
          f"{size * 8 * rate / 1e6:7.3f} Mbit/s  {classify_priority(size).name}")

# The threshold is inclusive: 78022 B is HIGH, one byte less is LOW.
print(classify_priority(78022).name, classify_priority(78021).name)

# A flow only emits packets inside its own window, clipped to the
# transmission window of the experiment.
http = FlowSpec(1, TrafficClass.HTTP, 1000, 10.0, source_ue=0, start_s=10.0, stop_s=100.0)
arr = generate_arrivals(http, 10.0, 11.0)
print(len(arr), "arrivals in [10, 11):", [round(t, 3) for t, _, _ in arr])

# Offered load is what the cell capacity of an SBS adds up.
voice = FlowSpec(2, TrafficClass.VOICE, 78022, 50.0, source_ue=1, start_s=10.0, stop_s=100.0)
for t in (5.0, 10.0, 50.0, 100.0):
    print(f"t={t:5.1f} s  offered {offered_load_bps([http, voice], t) / 1e6:.3f} Mbit/s")
