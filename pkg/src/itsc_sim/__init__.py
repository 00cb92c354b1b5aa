"""Throughput-based sleep control for dense small-cell networks.

Quick start::

    from itsc_sim import paper_default_scenario, run_simulation, compute_report
    sc = paper_default_scenario()
    row = compute_report(run_simulation(sc, "itsc", seed=1))
"""

from .allocation import AllocationRequest, AllocationResult, allocate, allocate_fcfs
from .energy import ACTIVE, SLEEPING, EnergyAccount, accumulate, power_draw
from .engine import Event, EventKind, Outcome, PacketRecord, RunTrace, run_simulation
from .experiment import compare_strategies, run_seeds, sweep
from .metrics import MetricsReport, RunRow, aggregate_runs, compute_report, export_report
from .mobility import UeState, associate_all, random_waypoint_step, two_ray_rx_power
from .queueing import DropTailPriQueue, Packet, enqueue
from .scenario import (
    PowerProfile,
    RadioProfile,
    SbsConfig,
    Scenario,
    ScenarioError,
    ScenarioParseError,
    ScenarioValidationError,
    UeConfig,
    apply_sweep,
    dumps_scenario,
    load_scenario,
    loads_scenario,
    paper_default_scenario,
    stress_scenario,
)
from .sleep_control import SbsRuntime, Strategy, World, cell_capacity, decide_states, energy_efficiency, strategy_tick
from .traffic import FlowSpec, PriorityTier, TrafficClass, classify_priority, generate_arrivals, offered_load_bps

__version__ = "0.1.0"
