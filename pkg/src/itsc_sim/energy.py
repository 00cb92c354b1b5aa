"""Fixed plus load-proportional SBS power, integrated into joules."""

from __future__ import annotations

from dataclasses import dataclass, field

ACTIVE = "active"
SLEEPING = "sleeping"


def power_draw(state: str, load_fraction: float, profile) -> float:
    """Instantaneous draw in watts.

    An active SBS pays its fixed part plus ``load_fraction * p_dynamic_max_w``;
    a sleeping SBS pays ``p_sleep_w`` regardless of load.
    """
    if not 0.0 <= load_fraction <= 1.0:
        raise ValueError(f"load_fraction must lie in [0, 1], got {load_fraction}")
    if state == SLEEPING:
        return profile.p_sleep_w
    return profile.p_fixed_active_w + load_fraction * profile.p_dynamic_max_w


@dataclass
class EnergyAccount:
    per_sbs_j: dict[int, float] = field(default_factory=dict)
    backhaul_j: float = 0.0

    @property
    def total_j(self) -> float:
        return sum(self.per_sbs_j.values()) + self.backhaul_j


def accumulate(account: EnergyAccount, sbss, dt: float, profile) -> EnergyAccount:
    """Add ``dt`` seconds of draw for every SBS, plus the backhaul term.

    Each item of `sbss` needs ``config.id``, ``config.bw_total``, ``state``
    and ``served_bps``. The account is updated in place and returned.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    for s in sbss:
        load = min(1.0, s.served_bps / s.config.bw_total)
        sid = s.config.id
        account.per_sbs_j[sid] = account.per_sbs_j.get(sid, 0.0) + power_draw(s.state, load, profile) * dt
    account.backhaul_j += profile.pc_backhaul_w * dt
    return account
