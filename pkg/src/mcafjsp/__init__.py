"""Flexible job-shop scheduling toolkit.

Problem representation and generators, an event-driven scheduling
environment, priority dispatching rules, a Mamba/cross-attention policy
network on a self-contained autodiff kernel, PPO training, and a
benchmark harness with Gantt SVG export.
"""

from .instances import (
    FjspInstance,
    GenSpec,
    Job,
    Operation,
    ParseError,
    generate_instance,
    instance_stats,
    parse_instance,
    write_instance,
)
from .env import (
    FeatureBundle,
    PairAction,
    Schedule,
    ScheduleEntry,
    SimState,
    Violation,
    eligible_actions,
    features,
    is_finished,
    reset,
    step,
    to_schedule,
    validate_schedule,
)
from .rules import Rule, pdr_select, rollout, run_pdr

__version__ = "0.1.0"
