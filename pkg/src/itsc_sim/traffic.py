"""Traffic classes, CBR packet arrivals and priority-tier classification."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

US_PER_S = 1_000_000

# Packet sizes (bytes) for the four traffic classes.
VIDEO_PACKET_BYTES = 84480
VOICE_PACKET_BYTES = 78022
HTTP_PACKET_BYTES = 1000
EMAIL_PACKET_BYTES = 500

# Smallest packet size that is treated as real-time traffic.
HIGH_PRIORITY_MIN_BYTES = VOICE_PACKET_BYTES


def to_us(seconds: float) -> int:
    """Convert a time in seconds to integer microseconds."""
    return int(round(seconds * US_PER_S))


class TrafficClass(str, enum.Enum):
    VIDEO = "video"
    VOICE = "voice"
    HTTP = "http"
    EMAIL = "email"


DEFAULT_PACKET_BYTES = {
    TrafficClass.VIDEO: VIDEO_PACKET_BYTES,
    TrafficClass.VOICE: VOICE_PACKET_BYTES,
    TrafficClass.HTTP: HTTP_PACKET_BYTES,
    TrafficClass.EMAIL: EMAIL_PACKET_BYTES,
}

# Chosen defaults; override per flow in the scenario file.
DEFAULT_RATE_PPS = {
    TrafficClass.VIDEO: 30.0,
    TrafficClass.VOICE: 50.0,
    TrafficClass.HTTP: 10.0,
    TrafficClass.EMAIL: 5.0,
}


class PriorityTier(enum.IntEnum):
    LOW = 0
    HIGH = 1


@dataclass(frozen=True)
class FlowSpec:
    id: int
    traffic_class: TrafficClass
    packet_size_bytes: int
    rate_pps: float
    source_ue: int
    start_s: float
    stop_s: float
    start_us: int = field(init=False, repr=False, compare=False)
    stop_us: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "start_us", to_us(self.start_s))
        object.__setattr__(self, "stop_us", to_us(self.stop_s))

    @property
    def demand_bps(self) -> float:
        """Offered load of this flow while it is active."""
        return self.packet_size_bytes * 8 * self.rate_pps

    @property
    def tier(self) -> PriorityTier:
        return classify_priority(self.packet_size_bytes)

    def active_at_us(self, t_us: int) -> bool:
        return self.start_us <= t_us < self.stop_us


def classify_priority(packet_size_bytes: int) -> PriorityTier:
    """HIGH for real-time sized packets (>= 78022 B), LOW for everything else.

    HTTP's 1000 B packets sit between the voice and e-mail sizes; they are
    put in the LOW tier together with e-mail.
    """
    if packet_size_bytes <= 0:
        raise ValueError(f"packet size must be positive, got {packet_size_bytes}")
    if packet_size_bytes >= HIGH_PRIORITY_MIN_BYTES:
        return PriorityTier.HIGH
    return PriorityTier.LOW


def arrival_times_us(flow: FlowSpec, window_start_us: int, window_end_us: int) -> list[int]:
    """CBR arrival instants (integer microseconds) of `flow` inside a window.

    Packet k arrives at ``t0 + floor(k * 1e6 / rate)`` where t0 is the later of
    the flow start and the window start. Arrivals stop before the earlier of
    the flow stop and the window end.
    """
    t0 = max(flow.start_us, window_start_us)
    t1 = min(flow.stop_us, window_end_us)
    if t1 <= t0:
        return []
    period = Fraction(US_PER_S) / Fraction(str(flow.rate_pps))
    out = []
    k = 0
    while True:
        t = t0 + math.floor(k * period)
        if t >= t1:
            break
        out.append(t)
        k += 1
    return out


def generate_arrivals(flow: FlowSpec, window_start_s: float, window_end_s: float):
    """Return ``[(timestamp_s, flow_id, packet_size_bytes), ...]`` in time order."""
    times = arrival_times_us(flow, to_us(window_start_s), to_us(window_end_s))
    return [(t / US_PER_S, flow.id, flow.packet_size_bytes) for t in times]


def offered_load_bps(flows, at: float) -> float:
    """Sum of ``size * 8 * rate`` over the flows active at time `at` (seconds)."""
    t_us = to_us(at)
    return sum(f.demand_bps for f in flows if f.active_at_us(t_us))
