"""Experiment configuration: types, validation, text format and presets.

The on-disk format is INI-style (read with :mod:`configparser`)::

    [scenario]
    schema_version = 1
    name = paper-default
    area_width_m = 500.0
    area_height_m = 500.0
    sim_start_s = 0.0
    tx_start_s = 10.0
    tx_stop_s = 100.0
    sim_end_s = 100.0
    control_tick_s = 1.0
    mobility_tick_s = 0.1
    queue_limit_packets = 100
    seeds = 1, 2, 3
    strategy = itsc                 ; optional: itsc | eer-proxy | nr-proxy

    [power]
    p_fixed_active_w = 0.01
    p_sleep_w = 0.001
    p_dynamic_max_w = 0.01
    pc_backhaul_w = 0.0

    [radio]                         ; optional, defaults shown
    tx_power_w = 0.28183815
    tx_gain = 1.0
    rx_gain = 1.0
    frequency_hz = 914000000.0

    [sbs.1]
    x_m = 125.0
    y_m = 125.0
    bw_total_bps = 50000000000.0
    antenna_height_m = 1.5

    [ue.0]
    x_m = 10.0
    y_m = 20.0
    speed_min_mps = 1.0
    speed_max_mps = 2.0
    pause_s = 5.0
    antenna_height_m = 1.5

    [flow.0]
    class = video                   ; video | voice | http | email
    packet_size_bytes = 84480       ; optional, class default
    rate_pps = 30.0                 ; optional, class default
    source_ue = 0
    start_s = 10.0
    stop_s = 100.0

Five default SBS positions sit at the area centre and halfway between the
centre and each corner.
"""

from __future__ import annotations

import configparser
import dataclasses
import io
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .traffic import DEFAULT_PACKET_BYTES, DEFAULT_RATE_PPS, FlowSpec, TrafficClass

SCHEMA_VERSION = 1

STRATEGY_NAMES = ("itsc", "eer-proxy", "nr-proxy")

# Radio defaults: 914 MHz, 0.2818 W transmit power, 1.5 m antennas.
DEFAULT_TX_POWER_W = 0.28183815
DEFAULT_FREQUENCY_HZ = 914e6
DEFAULT_ANTENNA_HEIGHT_M = 1.5

DEFAULT_BW_TOTAL_BPS = 50e9
STRESS_BW_TOTAL_BPS = 60e6


class ScenarioError(Exception):
    pass


class ScenarioParseError(ScenarioError):
    pass


class ScenarioValidationError(ScenarioError):
    def __init__(self, field_name: str, message: str):
        super().__init__(f"{field_name}: {message}")
        self.field = field_name


@dataclass(frozen=True)
class SbsConfig:
    id: int
    position: tuple[float, float]
    bw_total: float
    antenna_height_m: float = DEFAULT_ANTENNA_HEIGHT_M


@dataclass(frozen=True)
class UeConfig:
    id: int
    initial_position: tuple[float, float]
    speed_min_mps: float = 1.0
    speed_max_mps: float = 2.0
    pause_s: float = 5.0
    antenna_height_m: float = DEFAULT_ANTENNA_HEIGHT_M


@dataclass(frozen=True)
class PowerProfile:
    # Calibrated so a 5-SBS, 100 s run lands in single-digit joules. These are
    # sensor-scale numbers, not physical base-station draws.
    p_fixed_active_w: float = 0.01
    p_sleep_w: float = 0.001
    p_dynamic_max_w: float = 0.01
    pc_backhaul_w: float = 0.0


@dataclass(frozen=True)
class RadioProfile:
    tx_power_w: float = DEFAULT_TX_POWER_W
    tx_gain: float = 1.0
    rx_gain: float = 1.0
    frequency_hz: float = DEFAULT_FREQUENCY_HZ

    @property
    def wavelength_m(self) -> float:
        return 299_792_458.0 / self.frequency_hz


@dataclass(frozen=True)
class Scenario:
    area_width_m: float
    area_height_m: float
    sbs_list: tuple[SbsConfig, ...]
    ue_list: tuple[UeConfig, ...]
    flows: tuple[FlowSpec, ...]
    power_profile: PowerProfile = field(default_factory=PowerProfile)
    sim_start_s: float = 0.0
    tx_start_s: float = 10.0
    tx_stop_s: float = 100.0
    sim_end_s: float = 100.0
    control_tick_s: float = 1.0
    seeds: tuple[int, ...] = (1,)
    queue_limit_packets: int = 100
    mobility_tick_s: float = 0.1
    radio: RadioProfile = field(default_factory=RadioProfile)
    name: str = "scenario"
    strategy: str | None = None

    @property
    def area(self) -> tuple[float, float]:
        return (self.area_width_m, self.area_height_m)

    def sbs(self, sbs_id: int) -> SbsConfig:
        for s in self.sbs_list:
            if s.id == sbs_id:
                return s
        raise KeyError(sbs_id)

    def replace(self, **changes) -> "Scenario":
        return dataclasses.replace(self, **changes)


def _inside(p, w, h):
    return 0.0 <= p[0] <= w and 0.0 <= p[1] <= h


def validate_scenario(sc: Scenario) -> Scenario:
    """Check every invariant; raise :class:`ScenarioValidationError` naming the field."""
    if not sc.area_width_m > 0:
        raise ScenarioValidationError("area_width_m", "must be > 0")
    if not sc.area_height_m > 0:
        raise ScenarioValidationError("area_height_m", "must be > 0")
    if not sc.sim_start_s <= sc.tx_start_s:
        raise ScenarioValidationError("tx_start_s", "must be >= sim_start_s")
    if not sc.tx_start_s < sc.tx_stop_s:
        raise ScenarioValidationError("tx_stop_s", "must be > tx_start_s")
    if not sc.tx_stop_s <= sc.sim_end_s:
        raise ScenarioValidationError("sim_end_s", "must be >= tx_stop_s")
    if not sc.control_tick_s > 0:
        raise ScenarioValidationError("control_tick_s", "must be > 0")
    if not sc.mobility_tick_s > 0:
        raise ScenarioValidationError("mobility_tick_s", "must be > 0")
    if not sc.seeds:
        raise ScenarioValidationError("seeds", "at least one seed is required")
    for s in sc.seeds:
        if not isinstance(s, int) or s < 0:
            raise ScenarioValidationError("seeds", f"seed {s!r} is not an unsigned integer")
    if not sc.queue_limit_packets > 0:
        raise ScenarioValidationError("queue_limit_packets", "must be > 0")
    if sc.strategy is not None and sc.strategy not in STRATEGY_NAMES:
        raise ScenarioValidationError("strategy", f"unknown strategy {sc.strategy!r}")

    p = sc.power_profile
    for name in ("p_fixed_active_w", "p_sleep_w", "p_dynamic_max_w", "pc_backhaul_w"):
        if getattr(p, name) < 0:
            raise ScenarioValidationError(f"power.{name}", "must be >= 0")
    if not p.p_sleep_w < p.p_fixed_active_w:
        raise ScenarioValidationError("power.p_sleep_w", "must be < p_fixed_active_w")
    r = sc.radio
    if r.tx_power_w < 0 or r.tx_gain < 0 or r.rx_gain < 0:
        raise ScenarioValidationError("radio", "power and gains must be >= 0")
    if not r.frequency_hz > 0:
        raise ScenarioValidationError("radio.frequency_hz", "must be > 0")

    if not sc.sbs_list:
        raise ScenarioValidationError("sbs", "at least one SBS is required")
    seen = set()
    for s in sc.sbs_list:
        tag = f"sbs.{s.id}"
        if s.id in seen:
            raise ScenarioValidationError(tag, "duplicate id")
        seen.add(s.id)
        if not s.bw_total > 0:
            raise ScenarioValidationError(f"{tag}.bw_total_bps", "must be > 0")
        if not s.antenna_height_m > 0:
            raise ScenarioValidationError(f"{tag}.antenna_height_m", "must be > 0")
        if not _inside(s.position, sc.area_width_m, sc.area_height_m):
            raise ScenarioValidationError(f"{tag}.position", "outside the simulation area")

    ue_ids = set()
    for u in sc.ue_list:
        tag = f"ue.{u.id}"
        if u.id in ue_ids:
            raise ScenarioValidationError(tag, "duplicate id")
        ue_ids.add(u.id)
        if not 0 <= u.speed_min_mps <= u.speed_max_mps:
            raise ScenarioValidationError(f"{tag}.speed_min_mps", "need 0 <= speed_min <= speed_max")
        if u.pause_s < 0:
            raise ScenarioValidationError(f"{tag}.pause_s", "must be >= 0")
        if not u.antenna_height_m > 0:
            raise ScenarioValidationError(f"{tag}.antenna_height_m", "must be > 0")
        if not _inside(u.initial_position, sc.area_width_m, sc.area_height_m):
            raise ScenarioValidationError(f"{tag}.position", "outside the simulation area")

    flow_ids = set()
    for f in sc.flows:
        tag = f"flow.{f.id}"
        if f.id in flow_ids:
            raise ScenarioValidationError(tag, "duplicate id")
        flow_ids.add(f.id)
        if f.source_ue not in ue_ids:
            raise ScenarioValidationError(f"{tag}.source_ue", f"unknown UE {f.source_ue}")
        if not f.packet_size_bytes > 0:
            raise ScenarioValidationError(f"{tag}.packet_size_bytes", "must be > 0")
        if not f.rate_pps > 0:
            raise ScenarioValidationError(f"{tag}.rate_pps", "must be > 0")
        if not f.start_s < f.stop_s:
            raise ScenarioValidationError(f"{tag}.stop_s", "must be > start_s")
    return sc


# --- text format ---------------------------------------------------------

def _get(section, key, conv, default=None, where=""):
    if key not in section:
        if default is None:
            raise ScenarioValidationError(f"{where}{key}", "missing")
        return default
    raw = section[key]
    try:
        return conv(raw)
    except (TypeError, ValueError) as exc:
        raise ScenarioParseError(f"{where}{key}: cannot parse {raw!r} ({exc})") from None


def _int(raw: str) -> int:
    return int(raw.strip())


def _seeds(raw: str) -> tuple[int, ...]:
    parts = [p.strip() for p in raw.split(",") if p.strip()]
    return tuple(int(p) for p in parts)


def loads_scenario(text: str) -> Scenario:
    """Parse and validate scenario text."""
    cp = configparser.ConfigParser(inline_comment_prefixes=(";", "#"), interpolation=None)
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ScenarioParseError(str(exc)) from None
    if "scenario" not in cp:
        raise ScenarioParseError("missing [scenario] section")
    top = cp["scenario"]
    version = _get(top, "schema_version", _int, where="scenario.")
    if version != SCHEMA_VERSION:
        raise ScenarioValidationError("scenario.schema_version", f"unsupported version {version}")

    power = PowerProfile()
    if "power" in cp:
        sec = cp["power"]
        power = PowerProfile(**{
            f.name: _get(sec, f.name, float, getattr(power, f.name), "power.")
            for f in dataclasses.fields(PowerProfile)
        })
    radio = RadioProfile()
    if "radio" in cp:
        sec = cp["radio"]
        radio = RadioProfile(**{
            f.name: _get(sec, f.name, float, getattr(radio, f.name), "radio.")
            for f in dataclasses.fields(RadioProfile)
        })

    sbss, ues, flows = [], [], []
    for name in cp.sections():
        kind, _, ident = name.partition(".")
        if kind not in ("sbs", "ue", "flow"):
            if name not in ("scenario", "power", "radio"):
                raise ScenarioParseError(f"unknown section [{name}]")
            continue
        try:
            ident = int(ident)
        except ValueError:
            raise ScenarioParseError(f"section [{name}]: id must be an integer") from None
        sec = cp[name]
        where = f"{name}."
        if kind == "sbs":
            sbss.append(SbsConfig(
                id=ident,
                position=(_get(sec, "x_m", float, where=where), _get(sec, "y_m", float, where=where)),
                bw_total=_get(sec, "bw_total_bps", float, where=where),
                antenna_height_m=_get(sec, "antenna_height_m", float, DEFAULT_ANTENNA_HEIGHT_M, where),
            ))
        elif kind == "ue":
            d = UeConfig(id=ident, initial_position=(0.0, 0.0))
            ues.append(UeConfig(
                id=ident,
                initial_position=(_get(sec, "x_m", float, where=where), _get(sec, "y_m", float, where=where)),
                speed_min_mps=_get(sec, "speed_min_mps", float, d.speed_min_mps, where),
                speed_max_mps=_get(sec, "speed_max_mps", float, d.speed_max_mps, where),
                pause_s=_get(sec, "pause_s", float, d.pause_s, where),
                antenna_height_m=_get(sec, "antenna_height_m", float, d.antenna_height_m, where),
            ))
        else:
            cls = _get(sec, "class", TrafficClass, where=where)
            flows.append(FlowSpec(
                id=ident,
                traffic_class=cls,
                packet_size_bytes=_get(sec, "packet_size_bytes", _int, DEFAULT_PACKET_BYTES[cls], where),
                rate_pps=_get(sec, "rate_pps", float, DEFAULT_RATE_PPS[cls], where),
                source_ue=_get(sec, "source_ue", _int, where=where),
                start_s=_get(sec, "start_s", float, where=where),
                stop_s=_get(sec, "stop_s", float, where=where),
            ))

    strategy = top.get("strategy")
    sc = Scenario(
        name=top.get("name", "scenario"),
        area_width_m=_get(top, "area_width_m", float, where="scenario."),
        area_height_m=_get(top, "area_height_m", float, where="scenario."),
        sbs_list=tuple(sorted(sbss, key=lambda s: s.id)),
        ue_list=tuple(sorted(ues, key=lambda u: u.id)),
        flows=tuple(sorted(flows, key=lambda f: f.id)),
        power_profile=power,
        radio=radio,
        sim_start_s=_get(top, "sim_start_s", float, where="scenario."),
        tx_start_s=_get(top, "tx_start_s", float, where="scenario."),
        tx_stop_s=_get(top, "tx_stop_s", float, where="scenario."),
        sim_end_s=_get(top, "sim_end_s", float, where="scenario."),
        control_tick_s=_get(top, "control_tick_s", float, 1.0, "scenario."),
        mobility_tick_s=_get(top, "mobility_tick_s", float, 0.1, "scenario."),
        queue_limit_packets=_get(top, "queue_limit_packets", _int, where="scenario."),
        seeds=_get(top, "seeds", _seeds, where="scenario."),
        strategy=strategy.strip() if strategy else None,
    )
    return validate_scenario(sc)


def load_scenario(source) -> Scenario:
    """Load a scenario from a path or from configuration text.

    A :class:`pathlib.Path` (or a string naming an existing file) is read from
    disk; any other string is parsed directly.
    """
    if isinstance(source, Path):
        return loads_scenario(source.read_text())
    if isinstance(source, str) and "\n" not in source and "[" not in source:
        return loads_scenario(Path(source).read_text())
    return loads_scenario(source)


def _num(v) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def dumps_scenario(sc: Scenario) -> str:
    """Serialize `sc`; :func:`loads_scenario` of the result compares equal to `sc`."""
    out = io.StringIO()
    w = out.write
    w("[scenario]\n")
    w(f"schema_version = {SCHEMA_VERSION}\n")
    w(f"name = {sc.name}\n")
    for key in ("area_width_m", "area_height_m", "sim_start_s", "tx_start_s", "tx_stop_s",
                "sim_end_s", "control_tick_s", "mobility_tick_s", "queue_limit_packets"):
        w(f"{key} = {_num(getattr(sc, key))}\n")
    w(f"seeds = {', '.join(str(s) for s in sc.seeds)}\n")
    if sc.strategy:
        w(f"strategy = {sc.strategy}\n")
    w("\n[power]\n")
    for f in dataclasses.fields(PowerProfile):
        w(f"{f.name} = {_num(getattr(sc.power_profile, f.name))}\n")
    w("\n[radio]\n")
    for f in dataclasses.fields(RadioProfile):
        w(f"{f.name} = {_num(getattr(sc.radio, f.name))}\n")
    for s in sc.sbs_list:
        w(f"\n[sbs.{s.id}]\n")
        w(f"x_m = {_num(s.position[0])}\ny_m = {_num(s.position[1])}\n")
        w(f"bw_total_bps = {_num(s.bw_total)}\nantenna_height_m = {_num(s.antenna_height_m)}\n")
    for u in sc.ue_list:
        w(f"\n[ue.{u.id}]\n")
        w(f"x_m = {_num(u.initial_position[0])}\ny_m = {_num(u.initial_position[1])}\n")
        w(f"speed_min_mps = {_num(u.speed_min_mps)}\nspeed_max_mps = {_num(u.speed_max_mps)}\n")
        w(f"pause_s = {_num(u.pause_s)}\nantenna_height_m = {_num(u.antenna_height_m)}\n")
    for f in sc.flows:
        w(f"\n[flow.{f.id}]\n")
        w(f"class = {f.traffic_class.value}\n")
        w(f"packet_size_bytes = {f.packet_size_bytes}\nrate_pps = {_num(f.rate_pps)}\n")
        w(f"source_ue = {f.source_ue}\n")
        w(f"start_s = {_num(f.start_s)}\nstop_s = {_num(f.stop_s)}\n")
    return out.getvalue()


# --- presets -------------------------------------------------------------

def default_sbs_positions(width: float, height: float) -> list[tuple[float, float]]:
    cx, cy = width / 2, height / 2
    return [
        (cx / 2, cy / 2),
        (cx + cx / 2, cy / 2),
        (cx, cy),
        (cx / 2, cy + cy / 2),
        (cx + cx / 2, cy + cy / 2),
    ]


CLASS_CYCLE = (TrafficClass.VIDEO, TrafficClass.VOICE, TrafficClass.HTTP, TrafficClass.EMAIL)


def paper_default_scenario(layout_seed: int = 0, n_ues: int = 10, bw_total: float = DEFAULT_BW_TOTAL_BPS,
                           name: str = "paper-default") -> Scenario:
    """Five fixed SBSs and ten randomly placed UEs on a 500 m x 500 m field.

    Packets flow from 10 s to 100 s, the run lasts 100 s, the interface queue
    holds 100 packets and ten seeds are evaluated. UE ``i`` sources one flow
    of class ``CLASS_CYCLE[i % 4]``. `layout_seed` fixes the UE start
    positions; the run seed drives mobility.
    """
    width = height = 500.0
    rng = np.random.default_rng(layout_seed)
    xy = rng.uniform(0.0, 1.0, size=(n_ues, 2)) * [width, height]
    sbss = tuple(
        SbsConfig(id=i + 1, position=p, bw_total=bw_total)
        for i, p in enumerate(default_sbs_positions(width, height))
    )
    ues = tuple(
        UeConfig(id=i, initial_position=(float(xy[i, 0]), float(xy[i, 1])))
        for i in range(n_ues)
    )
    tx_start, tx_stop = 10.0, 100.0
    flows = []
    for i in range(n_ues):
        cls = CLASS_CYCLE[i % len(CLASS_CYCLE)]
        flows.append(FlowSpec(
            id=i, traffic_class=cls, packet_size_bytes=DEFAULT_PACKET_BYTES[cls],
            rate_pps=DEFAULT_RATE_PPS[cls], source_ue=i, start_s=tx_start, stop_s=tx_stop,
        ))
    sc = Scenario(
        name=name,
        area_width_m=width,
        area_height_m=height,
        sbs_list=sbss,
        ue_list=ues,
        flows=tuple(flows),
        sim_start_s=0.0,
        tx_start_s=tx_start,
        tx_stop_s=tx_stop,
        sim_end_s=100.0,
        control_tick_s=1.0,
        seeds=tuple(range(1, 11)),
        queue_limit_packets=100,
    )
    return validate_scenario(sc)


def stress_scenario(layout_seed: int = 0) -> Scenario:
    """The paper-default layout with every SBS cut to 60 Mbit/s.

    At this capacity any SBS serving two real-time flows, or a real-time flow
    plus a tierless equal share, is oversubscribed.
    """
    return paper_default_scenario(layout_seed=layout_seed, bw_total=STRESS_BW_TOTAL_BPS,
                                  name="stress")


# --- parameter sweeps ----------------------------------------------------

SWEEP_AXES = (
    "bw_total_bps",
    "control_tick_s",
    "mobility_tick_s",
    "queue_limit_packets",
    "rate_pps",
    "rate_pps.video",
    "rate_pps.voice",
    "rate_pps.http",
    "rate_pps.email",
    "ue_count",
)


def apply_sweep(sc: Scenario, axis: str, value) -> Scenario:
    """Return a copy of `sc` with one sweepable parameter set to `value`."""
    if axis not in SWEEP_AXES:
        raise KeyError(f"unknown sweep axis {axis!r}; valid axes: {', '.join(SWEEP_AXES)}")
    if axis == "bw_total_bps":
        new = sc.replace(sbs_list=tuple(dataclasses.replace(s, bw_total=float(value)) for s in sc.sbs_list))
    elif axis in ("control_tick_s", "mobility_tick_s"):
        new = sc.replace(**{axis: float(value)})
    elif axis == "queue_limit_packets":
        new = sc.replace(queue_limit_packets=int(value))
    elif axis.startswith("rate_pps"):
        _, _, cls = axis.partition(".")
        new = sc.replace(flows=tuple(
            dataclasses.replace(f, rate_pps=float(value))
            if not cls or f.traffic_class.value == cls else f
            for f in sc.flows
        ))
    else:
        n = int(value)
        if n > len(sc.ue_list):
            raise ValueError(f"ue_count {n} exceeds the {len(sc.ue_list)} UEs defined in the scenario")
        keep = {u.id for u in sc.ue_list[:n]}
        new = sc.replace(ue_list=sc.ue_list[:n], flows=tuple(f for f in sc.flows if f.source_ue in keep))
    return validate_scenario(new)
