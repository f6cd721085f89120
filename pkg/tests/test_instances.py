import pytest

from mcafjsp.instances import (
    GenSpec,
    ParseError,
    generate_instance,
    instance_stats,
    parse_instance,
    write_instance,
)


def test_parse_smallest_legal_file():
    inst = parse_instance("1 1 1\n1 1 1 5\n")
    assert inst.n_jobs == 1
    assert inst.n_machines == 1
    assert inst.total_ops == 1
    assert inst.jobs[0].ops[0].eligible == {0: 5}


def test_parse_two_job_file_hand_tokenized():
    # job 0: op0 on machine 1 (time 3), op1 on machines 1/2 (times 1/2)
    # job 1: op0 on machines 1/2 (times 6/7)
    text = "2 2 1.5\n2 1 1 3 2 1 1 2 2\n1 2 1 6 2 7\n"
    inst = parse_instance(text)
    assert inst.n_jobs == 2 and inst.n_machines == 2 and inst.total_ops == 3
    assert inst.jobs[0].ops[0].eligible == {0: 3}
    assert inst.jobs[0].ops[1].eligible == {0: 1, 1: 2}
    assert inst.jobs[1].ops[0].eligible == {0: 6, 1: 7}


def test_parse_rejects_dangling_token_on_job_line():
    # same as above but with one extra trailing token on job 0's line
    text = "2 2 1.5\n2 1 1 3 2 1 1 2 2 4\n1 2 1 6 2 7\n"
    with pytest.raises(ParseError, match="line 2"):
        parse_instance(text)


@pytest.mark.parametrize(
    "text,where",
    [
        ("", "line 1"),
        ("1\n1 1 1 5\n", "line 1"),
        ("1 1 1 1 1\n1 1 1 5\n", "line 1"),
        ("x 1\n1 1 1 5\n", "line 1"),
        ("1 1\n1 1 2 5\n", "line 2"),  # machine index out of range
        ("1 1\n1 1 1 0\n", "line 2"),  # non-positive time
        ("1 1\n1 1 1 -3\n", "line 2"),
        ("2 1\n1 1 1 5\n", "line 1"),  # missing job line
        ("1 1\n1 1 1 5\n1 1 1 5\n", "line 3"),  # extra job line
        ("1 2\n1 2 1 5 1 6\n", "line 2"),  # duplicate machine in one op
        ("1 1\n2 1 1 5\n", "line 2"),  # declared 2 ops, tokens for 1
    ],
)
def test_parse_errors_name_the_line(text, where):
    with pytest.raises(ParseError, match=where):
        parse_instance(text)


def test_write_smallest_instance_exact():
    inst = parse_instance("1 1 1\n1 1 1 5\n")
    assert write_instance(inst) == "1 1 1.0\n1 1 1 5\n"


def test_write_header_flexibility_one_decimal():
    inst = parse_instance("2 2 9.9\n2 1 1 3 2 1 1 2 2\n1 2 1 6 2 7\n")
    header = write_instance(inst).splitlines()[0]
    assert header == "2 2 1.7"  # 5 machine choices over 3 ops


def test_roundtrip_on_random_instances():
    for seed in range(100):
        spec = GenSpec(
            n_jobs=1 + seed % 7,
            n_machines=1 + seed % 5,
            proc_time=(1, 20),
            seed=seed,
        )
        inst = generate_instance(spec)
        assert parse_instance(write_instance(inst)) == inst


def test_parse_write_parse_idempotent():
    spec = GenSpec(n_jobs=10, n_machines=6, ops_per_job=(4, 7), flex=(1, 4), seed=99)
    text = write_instance(generate_instance(spec))
    once = parse_instance(text)
    again = parse_instance(write_instance(once))
    assert once == again


def test_generate_degenerate_ranges():
    spec = GenSpec(n_jobs=1, n_machines=1, ops_per_job=(1, 1), flex=(1, 1), proc_time=(5, 5), seed=0)
    inst = generate_instance(spec)
    assert inst.total_ops == 1
    assert inst.jobs[0].ops[0].eligible == {0: 5}


def test_generate_deterministic():
    spec = GenSpec(n_jobs=10, n_machines=5, ops_per_job=(4, 6), flex=(1, 5), seed=42)
    assert generate_instance(spec) == generate_instance(spec)


def test_generate_respects_ranges():
    spec = GenSpec(n_jobs=8, n_machines=5, ops_per_job=(2, 4), flex=(2, 3), proc_time=(3, 9), seed=7)
    inst = generate_instance(spec)
    for job in inst.jobs:
        assert 2 <= len(job.ops) <= 4
        for op in job.ops:
            assert 2 <= len(op.eligible) <= 3
            assert all(0 <= m < 5 for m in op.eligible)
            assert all(3 <= p <= 9 for p in op.eligible.values())


def test_generate_mean_processing_time_monte_carlo():
    total, count = 0, 0
    for seed in range(1000):
        spec = GenSpec(n_jobs=10, n_machines=5, ops_per_job=(4, 6), flex=(1, 5), seed=seed)
        inst = generate_instance(spec)
        for job in inst.jobs:
            for op in job.ops:
                total += sum(op.eligible.values())
                count += len(op.eligible)
    mean = total / count
    assert 10.0 <= mean <= 11.0  # U(1,20) has mean 10.5


def test_stats_smallest(tiny_111):
    s = instance_stats(tiny_111)
    assert (s.total_ops, s.mean_flex, s.min_proc_time, s.max_proc_time) == (1, 1.0, 5, 5)


def test_stats_min_time_at_least_one():
    inst = generate_instance(GenSpec(n_jobs=6, n_machines=4, seed=3))
    assert instance_stats(inst).min_proc_time >= 1


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(n_jobs=0, n_machines=1),
        dict(n_jobs=1, n_machines=2, flex=(0, 1)),
        dict(n_jobs=1, n_machines=2, flex=(1, 3)),
        dict(n_jobs=1, n_machines=2, ops_per_job=(3, 2)),
        dict(n_jobs=1, n_machines=2, proc_time=(0, 5)),
    ],
)
def test_genspec_validation(kwargs):
    with pytest.raises(ValueError):
        GenSpec(**kwargs)
