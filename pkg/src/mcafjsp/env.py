"""Event-driven FJSP scheduling environment.

One decision step dispatches a ready operation onto an idle eligible
machine at the current clock; the clock then jumps to the next operation
completion whenever no dispatch is possible. Every episode takes exactly
``total_ops`` steps. The per-step reward is the decrease of the running
makespan estimate, so episode rewards telescope to
``estimate(s0) - makespan``.

Feature layout (widths 10 / 8 / 8) follows the handcrafted descriptors
used by recent dispatching-policy work; all time-valued entries are
divided by the instance's mean processing time, ratios use guarded
division (0 when the denominator is 0), and rows of finished operations
are zeroed.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .instances import FjspInstance

__all__ = [
    "PairAction",
    "SimState",
    "FeatureBundle",
    "Schedule",
    "ScheduleEntry",
    "Violation",
    "IllegalActionError",
    "reset",
    "eligible_actions",
    "step",
    "is_finished",
    "lower_bound_completion",
    "features",
    "to_schedule",
    "validate_schedule",
    "schedule_to_json",
    "schedule_from_json",
    "job_remaining_workload",
]

# operation lifecycle; transitions only move forward
UNSCHEDULED = 0
READY = 1
PROCESSING = 2
DONE = 3


class PairAction(NamedTuple):
    job: int
    op: int
    machine: int


class IllegalActionError(ValueError):
    """Dispatch attempted outside the current eligible set."""


@dataclass(frozen=True)
class ScheduleEntry:
    job: int
    op: int
    machine: int
    start: int
    end: int


@dataclass(frozen=True)
class Schedule:
    entries: tuple[ScheduleEntry, ...]
    makespan: int


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str


@dataclass
class FeatureBundle:
    """State descriptors for one decision point.

    ``op_feats`` is |O|x10, ``machine_feats`` |M|x8, ``pair_feats`` |A|x8
    with ``pairs`` giving the action for each pair row. ``pair_ops`` /
    ``pair_machines`` carry the global operation index and machine index
    per row for embedding lookups.
    """

    op_feats: np.ndarray
    machine_feats: np.ndarray
    pair_feats: np.ndarray
    op_active: np.ndarray
    pairs: list[PairAction]
    pair_ops: np.ndarray
    pair_machines: np.ndarray


class SimState:
    """Mutable scheduling state over one instance.

    Static per-instance arrays are shared tensors indexed by the global
    operation id (job-major order); dynamic arrays evolve as operations
    are dispatched and the clock advances.
    """

    def __init__(self, inst: FjspInstance):
        self.inst = inst
        n_ops = inst.total_ops
        n_machines = inst.n_machines

        # static layout
        self.n_ops = n_ops
        self.n_machines = n_machines
        self.op_job = np.empty(n_ops, dtype=np.int64)
        self.op_pos = np.empty(n_ops, dtype=np.int64)
        self.job_first = np.empty(inst.n_jobs, dtype=np.int64)
        self.job_nops = np.empty(inst.n_jobs, dtype=np.int64)
        self.proc = np.zeros((n_ops, n_machines), dtype=np.int64)
        idx = 0
        for j, job in enumerate(inst.jobs):
            self.job_first[j] = idx
            self.job_nops[j] = len(job.ops)
            for pos, op in enumerate(job.ops):
                self.op_job[idx] = j
                self.op_pos[idx] = pos
                for m, p in op.eligible.items():
                    self.proc[idx, m] = p
                idx += 1
        self.job_last = self.job_first + self.job_nops - 1
        self.elig = self.proc > 0
        pf = self.proc.astype(np.float64)
        pf[~self.elig] = np.nan
        self.min_p = np.nanmin(pf, axis=1).astype(np.int64)
        self.max_p = np.nanmax(pf, axis=1).astype(np.int64)
        self.avg_p = np.nanmean(pf, axis=1)
        self.span_p = (self.max_p - self.min_p).astype(np.float64)
        self.flex_frac = self.elig.sum(axis=1) / n_machines
        self.scale = float(self.proc[self.elig].mean())

        # dynamic
        self.clock = 0
        self.step_count = 0
        self.n_done = 0
        self.status = np.full(n_ops, UNSCHEDULED, dtype=np.int8)
        self.ready_time = np.full(n_ops, -1, dtype=np.int64)
        self.op_start = np.full(n_ops, -1, dtype=np.int64)
        self.op_end = np.full(n_ops, -1, dtype=np.int64)
        self.op_machine = np.full(n_ops, -1, dtype=np.int64)
        self.machine_free = np.zeros(n_machines, dtype=np.int64)
        self.job_next = np.zeros(inst.n_jobs, dtype=np.int64)
        # completion lower bound per operation: actual end once dispatched,
        # otherwise predecessor bound + fastest processing time
        self.lb_complete = np.empty(n_ops, dtype=np.int64)
        for j in range(inst.n_jobs):
            lo, hi = self.job_first[j], self.job_first[j] + self.job_nops[j]
            self.lb_complete[lo:hi] = np.cumsum(self.min_p[lo:hi])
        self.status[self.job_first] = READY
        self.ready_time[self.job_first] = 0
        self.makespan_lb = int(self.lb_complete[self.job_last].max())


def reset(inst: FjspInstance) -> SimState:
    """Fresh state: clock 0, first operation of each job ready, machines idle."""
    return SimState(inst)


def is_finished(state: SimState) -> bool:
    return state.n_done == state.n_ops


def _ready_frontier(state: SimState) -> np.ndarray:
    """Global indices of ready next-operations, in job order."""
    active = state.job_next < state.job_nops
    frontier = state.job_first[active] + state.job_next[active]
    return frontier[state.status[frontier] == READY]


def _eligible_arrays(state: SimState) -> tuple[np.ndarray, np.ndarray]:
    """(op index, machine index) per eligible pair, job-major then machine order."""
    ready = _ready_frontier(state)
    if ready.size == 0:
        return ready, ready
    ok = state.elig[ready] & (state.machine_free <= state.clock)[None, :]
    rows, machines = np.nonzero(ok)
    return ready[rows], machines


def eligible_actions(state: SimState) -> list[PairAction]:
    """Dispatchable (operation, machine) pairs in deterministic job-major order."""
    ops, machines = _eligible_arrays(state)
    return [
        PairAction(int(state.op_job[o]), int(state.op_pos[o]), int(m))
        for o, m in zip(ops, machines)
    ]


def _advance_clock(state: SimState) -> None:
    """Jump to completion events until a dispatch is possible or all ops done."""
    while True:
        ops, _ = _eligible_arrays(state)
        if ops.size:
            return
        processing = np.nonzero(state.status == PROCESSING)[0]
        if processing.size == 0:
            return  # nothing running and nothing dispatchable: episode over
        state.clock = int(state.op_end[processing].min())
        finished = processing[state.op_end[processing] <= state.clock]
        state.status[finished] = DONE
        state.n_done += finished.size
        for o in finished:
            if state.op_pos[o] + 1 < state.job_nops[state.op_job[o]]:
                succ = o + 1
                state.status[succ] = READY
                state.ready_time[succ] = state.op_end[o]


def _makespan_estimate(state: SimState) -> int:
    return int(max(state.machine_free.max(), state.lb_complete[state.job_last].max()))


def step(state: SimState, action: PairAction) -> tuple[SimState, float]:
    """Dispatch ``action`` at the current clock and settle the next decision point.

    Mutates ``state`` in place and returns it together with the reward
    ``estimate(before) - estimate(after)`` in raw time units.
    """
    job, op, machine = action
    if not (0 <= job < state.inst.n_jobs):
        raise IllegalActionError(f"job {job} out of range")
    o = int(state.job_first[job] + op)
    if op != state.job_next[job] or state.status[o] != READY:
        raise IllegalActionError(f"operation ({job},{op}) is not ready")
    if not (0 <= machine < state.n_machines) or not state.elig[o, machine]:
        raise IllegalActionError(f"machine {machine} cannot process operation ({job},{op})")
    if state.machine_free[machine] > state.clock:
        raise IllegalActionError(f"machine {machine} is busy until {state.machine_free[machine]}")

    before = state.makespan_lb
    start = state.clock
    end = start + int(state.proc[o, machine])
    state.op_start[o] = start
    state.op_end[o] = end
    state.op_machine[o] = machine
    state.machine_free[machine] = end
    state.status[o] = PROCESSING
    state.job_next[job] += 1
    state.step_count += 1

    # tighten the job's completion bounds from the committed end time
    state.lb_complete[o] = end
    hi = int(state.job_first[job] + state.job_nops[job])
    if o + 1 < hi:
        state.lb_complete[o + 1 : hi] = end + np.cumsum(state.min_p[o + 1 : hi])

    _advance_clock(state)
    state.makespan_lb = _makespan_estimate(state)
    return state, float(before - state.makespan_lb)


def lower_bound_completion(state: SimState, job: int, op: int) -> int:
    """Completion-time lower bound of one operation in the current state."""
    return int(state.lb_complete[state.job_first[job] + op])


def job_remaining_workload(state: SimState) -> np.ndarray:
    """Per job: sum of mean processing times of its undispatched operations."""
    undone = state.status <= READY
    return np.bincount(
        state.op_job[undone], weights=state.avg_p[undone], minlength=state.inst.n_jobs
    )


def features(state: SimState) -> FeatureBundle:
    """Descriptor matrices for the current decision point."""
    scale = state.scale
    clock = state.clock
    n_ops, n_machines = state.n_ops, state.n_machines
    undone = state.status <= READY  # not yet dispatched

    # --- operations (|O| x 10) ---
    opf = np.zeros((n_ops, 10))
    opf[:, 0] = state.status >= PROCESSING
    opf[:, 1] = state.min_p / scale
    opf[:, 2] = state.avg_p / scale
    opf[:, 3] = state.span_p / scale
    opf[:, 4] = state.flex_frac
    opf[:, 5] = state.lb_complete / scale
    remaining_ops = state.job_nops - state.job_next
    opf[:, 6] = remaining_ops[state.op_job]
    workload = job_remaining_workload(state)
    opf[:, 7] = workload[state.op_job] / scale
    ready = state.status == READY
    opf[ready, 8] = (clock - state.ready_time[ready]) / scale
    processing = state.status == PROCESSING
    opf[processing, 9] = (state.op_end[processing] - clock) / scale
    done = state.status == DONE
    opf[done] = 0.0

    # --- machines (|M| x 8) ---
    frontier = _ready_frontier(state)
    proc_undone = state.proc[undone].astype(np.float64)
    n_undone_per_m = (proc_undone > 0).sum(axis=0)
    if proc_undone.size:
        min_per_m = np.where(proc_undone > 0, proc_undone, np.inf).min(axis=0)
        min_per_m[n_undone_per_m == 0] = 0.0
        avg_per_m = np.divide(
            proc_undone.sum(axis=0),
            n_undone_per_m,
            out=np.zeros(n_machines),
            where=n_undone_per_m > 0,
        )
    else:
        min_per_m = np.zeros(n_machines)
        avg_per_m = np.zeros(n_machines)
    maf = np.zeros((n_machines, 8))
    maf[:, 0] = state.machine_free > clock
    maf[:, 1] = min_per_m / scale
    maf[:, 2] = avg_per_m / scale
    maf[:, 3] = n_undone_per_m
    maf[:, 4] = (state.proc[frontier] > 0).sum(axis=0) if frontier.size else 0
    maf[:, 5] = state.machine_free / scale
    maf[:, 6] = np.maximum(0, clock - state.machine_free) / scale
    maf[:, 7] = np.maximum(0, state.machine_free - clock) / scale

    # --- eligible pairs (|A| x 8) ---
    pair_ops, pair_machines = _eligible_arrays(state)
    n_pairs = pair_ops.size
    p = state.proc[pair_ops, pair_machines].astype(np.float64)
    paf = np.zeros((n_pairs, 8))
    if n_pairs:
        cand_max_per_m = state.proc[frontier].max(axis=0).astype(np.float64)
        undone_max_per_m = proc_undone.max(axis=0) if proc_undone.size else np.zeros(n_machines)
        undone_max = proc_undone.max() if proc_undone.size else 0.0
        pair_max = p.max()
        wait_op = (clock - state.ready_time[pair_ops]).astype(np.float64)
        wait_m = np.maximum(0, clock - state.machine_free[pair_machines]).astype(np.float64)

        def ratio(den: np.ndarray | float) -> np.ndarray:
            den = np.asarray(den, dtype=np.float64)
            return np.divide(p, den, out=np.zeros_like(p), where=den != 0)

        paf[:, 0] = p / scale
        paf[:, 1] = ratio(state.max_p[pair_ops].astype(np.float64))
        paf[:, 2] = ratio(cand_max_per_m[pair_machines])
        paf[:, 3] = ratio(undone_max)
        paf[:, 4] = ratio(undone_max_per_m[pair_machines])
        paf[:, 5] = ratio(pair_max)
        paf[:, 6] = ratio(workload[state.op_job[pair_ops]])
        paf[:, 7] = (wait_op + wait_m) / scale

    pairs = [
        PairAction(int(state.op_job[o]), int(state.op_pos[o]), int(m))
        for o, m in zip(pair_ops, pair_machines)
    ]
    return FeatureBundle(
        op_feats=opf,
        machine_feats=maf,
        pair_feats=paf,
        op_active=~done,
        pairs=pairs,
        pair_ops=pair_ops,
        pair_machines=pair_machines,
    )


def to_schedule(state: SimState) -> Schedule:
    """Extract the completed schedule; raises if any operation is unfinished."""
    if not is_finished(state):
        raise ValueError(f"episode not finished: {state.n_done}/{state.n_ops} operations done")
    entries = tuple(
        ScheduleEntry(
            job=int(state.op_job[o]),
            op=int(state.op_pos[o]),
            machine=int(state.op_machine[o]),
            start=int(state.op_start[o]),
            end=int(state.op_end[o]),
        )
        for o in range(state.n_ops)
    )
    return Schedule(entries=entries, makespan=int(state.op_end.max()))


def validate_schedule(inst: FjspInstance, sched: Schedule) -> list[Violation]:
    """Check coverage, eligibility, durations, precedence and machine overlap.

    Violations are returned as data; an empty list means the schedule is
    feasible and its makespan field is consistent.
    """
    out: list[Violation] = []
    seen: dict[tuple[int, int], ScheduleEntry] = {}
    for e in sched.entries:
        if not (0 <= e.job < inst.n_jobs) or not (0 <= e.op < len(inst.jobs[e.job].ops)):
            out.append(Violation("coverage", f"unknown operation ({e.job},{e.op})"))
            continue
        if (e.job, e.op) in seen:
            out.append(Violation("coverage", f"operation ({e.job},{e.op}) scheduled twice"))
            continue
        seen[(e.job, e.op)] = e
        if e.start < 0:
            out.append(Violation("bounds", f"({e.job},{e.op}) starts at {e.start} < 0"))
        op = inst.jobs[e.job].ops[e.op]
        if e.machine not in op.eligible:
            out.append(
                Violation("eligibility", f"({e.job},{e.op}) assigned to ineligible machine {e.machine}")
            )
        elif e.end - e.start != op.eligible[e.machine]:
            out.append(
                Violation(
                    "duration",
                    f"({e.job},{e.op}) runs {e.end - e.start}, expected "
                    f"{op.eligible[e.machine]} on machine {e.machine}",
                )
            )
    for j, job in enumerate(inst.jobs):
        for o in range(len(job.ops)):
            if (j, o) not in seen:
                out.append(Violation("coverage", f"operation ({j},{o}) missing"))
        for o in range(1, len(job.ops)):
            if (j, o) in seen and (j, o - 1) in seen:
                prev, cur = seen[(j, o - 1)], seen[(j, o)]
                if cur.start < prev.end:
                    out.append(
                        Violation(
                            "precedence",
                            f"({j},{o}) starts at {cur.start} before ({j},{o - 1}) ends at {prev.end}",
                        )
                    )
    by_machine: dict[int, list[ScheduleEntry]] = {}
    for e in sched.entries:
        by_machine.setdefault(e.machine, []).append(e)
    for m, entries in sorted(by_machine.items()):
        entries.sort(key=lambda e: (e.start, e.end))
        for a, b in zip(entries, entries[1:]):
            if b.start < a.end:
                out.append(
                    Violation(
                        "overlap",
                        f"machine {m}: ({a.job},{a.op}) [{a.start},{a.end}) overlaps "
                        f"({b.job},{b.op}) [{b.start},{b.end})",
                    )
                )
    if sched.entries:
        true_makespan = max(e.end for e in sched.entries)
        if sched.makespan != true_makespan:
            out.append(
                Violation("makespan", f"recorded {sched.makespan}, max end is {true_makespan}")
            )
    return out


def schedule_to_json(sched: Schedule) -> str:
    ops = sorted(sched.entries, key=lambda e: (e.machine, e.start, e.job, e.op))
    doc = {
        "makespan": sched.makespan,
        "ops": [
            {"job": e.job, "op": e.op, "machine": e.machine, "start": e.start, "end": e.end}
            for e in ops
        ],
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def schedule_from_json(text: str) -> Schedule:
    doc = json.loads(text)
    entries = tuple(
        ScheduleEntry(job=o["job"], op=o["op"], machine=o["machine"], start=o["start"], end=o["end"])
        for o in doc["ops"]
    )
    return Schedule(entries=entries, makespan=doc["makespan"])
