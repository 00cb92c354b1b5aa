"""Bounded drop-tail buffer with a two-level (HIGH before LOW) dequeue order."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .traffic import PriorityTier


@dataclass(slots=True)
class Packet:
    pid: int
    flow_id: int
    size_bytes: int
    tier: PriorityTier
    arrival_us: int


class DropTailPriQueue:
    """SBS interface queue.

    Packets are kept per flow so the engine can serve each flow's head of
    line at its own granted rate. :meth:`pop` gives PriQueue order instead:
    HIGH tier first, FIFO (by arrival, then packet id) within a tier. The
    packet being transmitted stays in the buffer until it departs, so it
    counts against `limit`.
    """

    def __init__(self, limit: int):
        if limit <= 0:
            raise ValueError(f"queue limit must be positive, got {limit}")
        self.limit = limit
        self._flows: dict[int, deque] = {}
        self._len = 0

    def __len__(self):
        return self._len

    def __bool__(self):
        return self._len > 0

    def __iter__(self):
        for q in self._flows.values():
            yield from q

    def push(self, packet: Packet):
        self._flows.setdefault(packet.flow_id, deque()).append(packet)
        self._len += 1

    def head(self, flow_id: int) -> Packet | None:
        q = self._flows.get(flow_id)
        return q[0] if q else None

    def pop_flow(self, flow_id: int) -> Packet:
        q = self._flows[flow_id]
        p = q.popleft()
        if not q:
            del self._flows[flow_id]
        self._len -= 1
        return p

    def flows(self) -> list[int]:
        return sorted(self._flows)

    def oldest_arrival_us(self, flow_id: int) -> int | None:
        p = self.head(flow_id)
        return p.arrival_us if p is not None else None

    def pop(self) -> Packet:
        if not self._len:
            raise IndexError("pop from an empty queue")
        best = min(
            (q[0] for q in self._flows.values()),
            key=lambda p: (-int(p.tier), p.arrival_us, p.pid),
        )
        return self.pop_flow(best.flow_id)

    def drain(self) -> list[Packet]:
        """Remove and return every packet, in dequeue order."""
        out = []
        while self._len:
            out.append(self.pop())
        return out


def enqueue(queue: DropTailPriQueue, packet: Packet, limit: int | None = None) -> bool:
    """Accept `packet` if the buffer holds fewer than `limit` packets; else drop it."""
    limit = queue.limit if limit is None else limit
    if limit <= 0:
        raise ValueError(f"queue limit must be positive, got {limit}")
    if len(queue) >= limit:
        return False
    queue.push(packet)
    return True
