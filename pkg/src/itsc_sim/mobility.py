"""Random-waypoint mobility, two-ray-ground propagation and UE association."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

# UEs standing on top of an SBS are treated as being this far away.
MIN_DISTANCE_M = 1e-3


@dataclass(frozen=True)
class UeState:
    id: int
    position: tuple[float, float]
    waypoint: tuple[float, float]
    speed_mps: float
    pause_remaining_s: float = 0.0
    attached_sbs: int | None = None


def crossover_distance_m(ht_m: float, hr_m: float, wavelength_m: float) -> float:
    """Distance where two-ray-ground and free-space predictions meet: 4*pi*ht*hr/lambda."""
    return 4.0 * math.pi * ht_m * hr_m / wavelength_m


def two_ray_rx_power(pt_w, gt, gr, ht_m, hr_m, d_m, wavelength_m=None):
    """Received power in watts.

    Without `wavelength_m` this is the far-field two-ray-ground law
    ``pt*gt*gr*ht**2*hr**2/d**4``. With a wavelength, distances below the
    crossover distance use the free-space (Friis) form
    ``pt*gt*gr*lambda**2/(4*pi*d)**2`` instead; the two agree at the crossover.
    """
    if not d_m > 0:
        raise ValueError(f"distance must be positive, got {d_m}")
    if not (ht_m > 0 and hr_m > 0):
        raise ValueError("antenna heights must be positive")
    if wavelength_m is not None and d_m < crossover_distance_m(ht_m, hr_m, wavelength_m):
        return pt_w * gt * gr * wavelength_m ** 2 / (4.0 * math.pi * d_m) ** 2
    return pt_w * gt * gr * ht_m ** 2 * hr_m ** 2 / d_m ** 4


def received_power(sbs_cfg, ue_position, ue_height_m, radio) -> float:
    """Power a UE at `ue_position` hears from one SBS, with near-field handling."""
    d = math.hypot(ue_position[0] - sbs_cfg.position[0], ue_position[1] - sbs_cfg.position[1])
    return two_ray_rx_power(radio.tx_power_w, radio.tx_gain, radio.rx_gain,
                            sbs_cfg.antenna_height_m, ue_height_m,
                            max(d, MIN_DISTANCE_M), radio.wavelength_m)


def ue_rng(seed: int, ue_index: int) -> np.random.Generator:
    """Independent random stream for one UE of one run."""
    return np.random.default_rng([seed, ue_index])


def _uniform_point(rng, area):
    return (float(rng.uniform(0.0, area[0])), float(rng.uniform(0.0, area[1])))


def initial_ue_state(cfg, area, rng) -> UeState:
    """Start at the configured position heading for a fresh uniform waypoint."""
    waypoint = _uniform_point(rng, area)
    speed = float(rng.uniform(cfg.speed_min_mps, cfg.speed_max_mps))
    return UeState(id=cfg.id, position=tuple(cfg.initial_position), waypoint=waypoint, speed_mps=speed)


def random_waypoint_step(state: UeState, cfg, dt: float, rng, area) -> UeState:
    """Advance `state` by `dt` seconds.

    The UE walks straight to its waypoint, waits ``cfg.pause_s`` on arrival,
    then draws a new uniform waypoint and a uniform speed in
    ``[speed_min, speed_max]``. Leftover time carries over between legs.
    """
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    x, y = state.position
    wx, wy = state.waypoint
    speed = state.speed_mps
    pause = state.pause_remaining_s
    left = dt
    # A zero-length leg combined with zero pause would never consume time.
    for _ in range(10_000):
        if left <= 0:
            break
        if pause > 0:
            used = min(pause, left)
            pause -= used
            left -= used
            if pause > 0:
                break
            wx, wy = _uniform_point(rng, area)
            speed = float(rng.uniform(cfg.speed_min_mps, cfg.speed_max_mps))
            continue
        dist = math.hypot(wx - x, wy - y)
        if speed <= 0:
            break
        if speed * left < dist:
            frac = speed * left / dist
            x += (wx - x) * frac
            y += (wy - y) * frac
            left = 0.0
            break
        left -= dist / speed
        x, y = wx, wy
        pause = cfg.pause_s
        if pause == 0:
            wx, wy = _uniform_point(rng, area)
            speed = float(rng.uniform(cfg.speed_min_mps, cfg.speed_max_mps))
    x = min(max(x, 0.0), area[0])
    y = min(max(y, 0.0), area[1])
    return replace(state, position=(x, y), waypoint=(wx, wy), speed_mps=speed, pause_remaining_s=pause)


def associate_all(ues, sbss, ue_configs, radio) -> dict[int, int | None]:
    """Map each UE id to the SBS it hears loudest, sleeping SBSs included.

    `sbss` may hold :class:`~itsc_sim.scenario.SbsConfig` objects or anything
    with a ``config`` attribute. Equal powers go to the lowest SBS id; a UE
    maps to ``None`` only if every SBS delivers zero power.
    """
    cfgs = sorted((getattr(s, "config", s) for s in sbss), key=lambda c: c.id)
    heights = {c.id: c.antenna_height_m for c in ue_configs}
    table = {}
    for ue in ues:
        best, best_p = None, 0.0
        for c in cfgs:
            p = received_power(c, ue.position, heights[ue.id], radio)
            if p > best_p:
                best, best_p = c.id, p
        table[ue.id] = best
    return table
