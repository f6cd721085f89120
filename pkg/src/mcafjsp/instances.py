"""Flexible job-shop problem instances: representation, text format, synthetic generation.

The text format is the one used by the public FJSP benchmark files:
line 1 is ``<n_jobs> <n_machines> [<avg_flex>]``, then one line per job
holding ``<n_ops>`` followed by, for each operation in order, ``<k>`` and
k pairs ``<machine_1based> <proc_time>``. Machine indices are 1-based in
files and 0-based everywhere else in this package.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Operation",
    "Job",
    "FjspInstance",
    "GenSpec",
    "InstanceStats",
    "ParseError",
    "parse_instance",
    "write_instance",
    "generate_instance",
    "instance_stats",
]


class ParseError(ValueError):
    """Raised when instance text does not follow the standard format."""


@dataclass(frozen=True)
class Operation:
    """One operation: mapping of eligible machine index to processing time."""

    eligible: dict[int, int]

    def __post_init__(self) -> None:
        if not self.eligible:
            raise ValueError("operation has no eligible machine")
        for m, p in self.eligible.items():
            if m < 0:
                raise ValueError(f"negative machine index {m}")
            if p < 1:
                raise ValueError(f"processing time must be >= 1, got {p}")

    def min_time(self) -> int:
        return min(self.eligible.values())


@dataclass(frozen=True)
class Job:
    """Ordered chain of operations; list order is the precedence order."""

    ops: tuple[Operation, ...]

    def __post_init__(self) -> None:
        if not self.ops:
            raise ValueError("job has no operations")


@dataclass(frozen=True)
class FjspInstance:
    n_jobs: int
    n_machines: int
    jobs: tuple[Job, ...]
    total_ops: int = field(init=False)

    def __post_init__(self) -> None:
        if self.n_jobs < 1 or self.n_machines < 1:
            raise ValueError("need at least one job and one machine")
        if len(self.jobs) != self.n_jobs:
            raise ValueError(f"expected {self.n_jobs} jobs, got {len(self.jobs)}")
        total = 0
        for j, job in enumerate(self.jobs):
            total += len(job.ops)
            for op in job.ops:
                for m in op.eligible:
                    if m >= self.n_machines:
                        raise ValueError(
                            f"job {j}: machine index {m} out of range "
                            f"(n_machines={self.n_machines})"
                        )
        object.__setattr__(self, "total_ops", total)

    def operation(self, job: int, op: int) -> Operation:
        return self.jobs[job].ops[op]


@dataclass(frozen=True)
class GenSpec:
    """Parameters of the synthetic instance distribution.

    Ranges are inclusive. When ``ops_per_job`` / ``flex`` are omitted they
    default to ``[ceil(0.8*m), ceil(1.2*m)]`` and ``[1, m]`` where m is the
    machine count. Processing times default to uniform on [1, 20].
    """

    n_jobs: int
    n_machines: int
    ops_per_job: tuple[int, int] | None = None
    flex: tuple[int, int] | None = None
    proc_time: tuple[int, int] = (1, 20)
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_jobs < 1 or self.n_machines < 1:
            raise ValueError("need at least one job and one machine")
        lo, hi = self.ops_range()
        if not (1 <= lo <= hi):
            raise ValueError(f"bad ops_per_job range [{lo}, {hi}]")
        lo, hi = self.flex_range()
        if not (1 <= lo <= hi <= self.n_machines):
            raise ValueError(f"bad flex range [{lo}, {hi}] for {self.n_machines} machines")
        lo, hi = self.proc_time
        if not (1 <= lo <= hi):
            raise ValueError(f"bad proc_time range [{lo}, {hi}]")

    def ops_range(self) -> tuple[int, int]:
        if self.ops_per_job is not None:
            return self.ops_per_job
        return math.ceil(0.8 * self.n_machines), math.ceil(1.2 * self.n_machines)

    def flex_range(self) -> tuple[int, int]:
        if self.flex is not None:
            return self.flex
        return 1, self.n_machines


@dataclass(frozen=True)
class InstanceStats:
    total_ops: int
    mean_flex: float
    min_proc_time: int
    max_proc_time: int


def _tokenize(text: str) -> list[tuple[int, list[str]]]:
    """Non-blank lines with their 1-based line numbers."""
    out = []
    for i, raw in enumerate(text.splitlines(), start=1):
        toks = raw.split()
        if toks:
            out.append((i, toks))
    return out


def _parse_int(tok: str, lineno: int, what: str) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"line {lineno}: {what} is not an integer: {tok!r}") from None


def parse_instance(text: str) -> FjspInstance:
    """Parse standard FJSP text into an instance.

    Raises :class:`ParseError` naming the offending line for a malformed
    header, token count mismatch, out-of-range machine index, or a
    non-positive processing time.
    """
    lines = _tokenize(text)
    if not lines:
        raise ParseError("line 1: empty input")

    lineno, header = lines[0]
    if len(header) not in (2, 3):
        raise ParseError(f"line {lineno}: header must be 'n_jobs n_machines [avg_flex]'")
    n_jobs = _parse_int(header[0], lineno, "job count")
    n_machines = _parse_int(header[1], lineno, "machine count")
    if n_jobs < 1 or n_machines < 1:
        raise ParseError(f"line {lineno}: job and machine counts must be >= 1")
    if len(header) == 3:
        try:
            float(header[2])  # average flexibility; informational only
        except ValueError:
            raise ParseError(f"line {lineno}: average flexibility is not a number") from None

    body = lines[1:]
    if len(body) < n_jobs:
        raise ParseError(f"line {lineno}: expected {n_jobs} job lines, found {len(body)}")
    if len(body) > n_jobs:
        extra_lineno = body[n_jobs][0]
        raise ParseError(f"line {extra_lineno}: unexpected content after {n_jobs} job lines")

    jobs = []
    for lineno, toks in body:
        n_ops = _parse_int(toks[0], lineno, "operation count")
        if n_ops < 1:
            raise ParseError(f"line {lineno}: operation count must be >= 1")
        pos = 1
        ops = []
        for o in range(n_ops):
            if pos >= len(toks):
                raise ParseError(f"line {lineno}: ran out of tokens at operation {o}")
            k = _parse_int(toks[pos], lineno, f"machine-choice count of operation {o}")
            pos += 1
            if k < 1:
                raise ParseError(f"line {lineno}: operation {o} lists {k} machines")
            if pos + 2 * k > len(toks):
                raise ParseError(
                    f"line {lineno}: operation {o} declares {k} machine pairs "
                    f"but the line has too few tokens"
                )
            eligible: dict[int, int] = {}
            for _ in range(k):
                m = _parse_int(toks[pos], lineno, "machine index")
                p = _parse_int(toks[pos + 1], lineno, "processing time")
                pos += 2
                if not (1 <= m <= n_machines):
                    raise ParseError(
                        f"line {lineno}: machine index {m} out of range 1..{n_machines}"
                    )
                if p < 1:
                    raise ParseError(f"line {lineno}: non-positive processing time {p}")
                if m - 1 in eligible:
                    raise ParseError(f"line {lineno}: machine {m} listed twice for one operation")
                eligible[m - 1] = p
            ops.append(Operation(eligible))
        if pos != len(toks):
            raise ParseError(
                f"line {lineno}: {len(toks) - pos} trailing token(s) after "
                f"{n_ops} operations"
            )
        jobs.append(Job(tuple(ops)))

    return FjspInstance(n_jobs=n_jobs, n_machines=n_machines, jobs=tuple(jobs))


def write_instance(inst: FjspInstance) -> str:
    """Serialize an instance to standard FJSP text.

    The header's third field is the mean eligible-machine count with one
    decimal; ``parse_instance(write_instance(x)) == x`` for valid x.
    """
    flex = sum(len(op.eligible) for job in inst.jobs for op in job.ops) / inst.total_ops
    lines = [f"{inst.n_jobs} {inst.n_machines} {flex:.1f}"]
    for job in inst.jobs:
        toks = [str(len(job.ops))]
        for op in job.ops:
            toks.append(str(len(op.eligible)))
            for m in sorted(op.eligible):
                toks.append(str(m + 1))
                toks.append(str(op.eligible[m]))
        lines.append(" ".join(toks))
    return "\n".join(lines) + "\n"


def generate_instance(spec: GenSpec) -> FjspInstance:
    """Sample an instance from the synthetic distribution.

    Operation counts, per-operation machine-set sizes and processing times
    are uniform over their ranges; eligible machines are drawn uniformly
    without replacement. Pure function of the spec (fixed seed, fixed
    output).
    """
    rng = np.random.default_rng(spec.seed)
    ops_lo, ops_hi = spec.ops_range()
    flex_lo, flex_hi = spec.flex_range()
    t_lo, t_hi = spec.proc_time

    jobs = []
    for _ in range(spec.n_jobs):
        n_ops = int(rng.integers(ops_lo, ops_hi + 1))
        ops = []
        for _ in range(n_ops):
            k = int(rng.integers(flex_lo, flex_hi + 1))
            machines = np.sort(rng.choice(spec.n_machines, size=k, replace=False))
            times = rng.integers(t_lo, t_hi + 1, size=k)
            ops.append(Operation({int(m): int(p) for m, p in zip(machines, times)}))
        jobs.append(Job(tuple(ops)))
    return FjspInstance(n_jobs=spec.n_jobs, n_machines=spec.n_machines, jobs=tuple(jobs))


def instance_stats(inst: FjspInstance) -> InstanceStats:
    times = [p for job in inst.jobs for op in job.ops for p in op.eligible.values()]
    flex = sum(len(op.eligible) for job in inst.jobs for op in job.ops)
    return InstanceStats(
        total_ops=inst.total_ops,
        mean_flex=flex / inst.total_ops,
        min_proc_time=min(times),
        max_proc_time=max(times),
    )
