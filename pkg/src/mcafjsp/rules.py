"""Priority dispatching rules and the generic episode driver.

All rules are pure functions of the current state; ties are broken by
(job, op, machine) order so runs are reproducible. Machine choice for the
operation-first rules (FIFO, MOR, MWKR) follows the convention: among
idle eligible machines, FIFO takes the one free earliest, MOR/MWKR take
the fastest one, with the machine index as the final tie-break.
"""

from __future__ import annotations

import enum
from typing import Callable

from . import env
from .env import PairAction, Schedule, SimState
from .instances import FjspInstance

__all__ = ["Rule", "pdr_select", "run_pdr", "rollout"]


class Rule(enum.Enum):
    FIFO = "fifo"
    MOR = "mor"
    SPT = "spt"
    MWKR = "mwkr"


Chooser = Callable[[SimState], PairAction]


def _op_machines(state: SimState, actions: list[PairAction], job: int, op: int) -> list[int]:
    return [a.machine for a in actions if a.job == job and a.op == op]


def _pick_machine_fastest(state: SimState, job: int, op: int, machines: list[int]) -> int:
    o = state.job_first[job] + op
    return min(machines, key=lambda m: (state.proc[o, m], m))


def pdr_select(rule: Rule, state: SimState) -> PairAction:
    """Apply one dispatching rule to the current eligible set."""
    actions = env.eligible_actions(state)
    if not actions:
        raise ValueError("no eligible actions")

    if rule is Rule.SPT:
        return min(
            actions,
            key=lambda a: (state.proc[state.job_first[a.job] + a.op, a.machine], a.job, a.op, a.machine),
        )

    # operation-first rules: rank candidate operations, then pick a machine
    seen: dict[tuple[int, int], None] = {}
    for a in actions:
        seen.setdefault((a.job, a.op), None)
    candidates = list(seen)

    if rule is Rule.FIFO:
        job, op = min(
            candidates, key=lambda c: (state.ready_time[state.job_first[c[0]] + c[1]], c[0], c[1])
        )
        machines = _op_machines(state, actions, job, op)
        machine = min(machines, key=lambda m: (state.machine_free[m], m))
        return PairAction(job, op, machine)

    if rule is Rule.MOR:
        job, op = min(candidates, key=lambda c: (-(state.job_nops[c[0]] - c[1] - 1), c[0], c[1]))
        machines = _op_machines(state, actions, job, op)
        return PairAction(job, op, _pick_machine_fastest(state, job, op, machines))

    if rule is Rule.MWKR:
        workload = env.job_remaining_workload(state)
        job, op = min(candidates, key=lambda c: (-workload[c[0]], c[0], c[1]))
        machines = _op_machines(state, actions, job, op)
        return PairAction(job, op, _pick_machine_fastest(state, job, op, machines))

    raise ValueError(f"unknown rule {rule!r}")


def rollout(inst: FjspInstance, choose: Chooser) -> Schedule:
    """Run one full episode with the given action chooser."""
    state = env.reset(inst)
    while not env.is_finished(state):
        env.step(state, choose(state))
    return env.to_schedule(state)


def run_pdr(inst: FjspInstance, rule: Rule) -> Schedule:
    """Solve one instance with a dispatching rule."""
    return rollout(inst, lambda s: pdr_select(rule, s))
