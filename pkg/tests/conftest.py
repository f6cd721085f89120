import numpy as np
import pytest

from mcafjsp.instances import FjspInstance, Job, Operation


def make_instance(n_machines: int, jobs: list[list[dict[int, int]]]) -> FjspInstance:
    """Build an instance from per-job lists of {machine: time} dicts."""
    return FjspInstance(
        n_jobs=len(jobs),
        n_machines=n_machines,
        jobs=tuple(Job(tuple(Operation(dict(op)) for op in ops)) for ops in jobs),
    )


@pytest.fixture
def tiny_111() -> FjspInstance:
    """One job, one machine, one operation taking 5."""
    return make_instance(1, [[{0: 5}]])


@pytest.fixture
def two_jobs_one_machine() -> FjspInstance:
    """Two single-op jobs competing for one machine (times 3 and 4)."""
    return make_instance(1, [[{0: 3}], [{0: 4}]])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
