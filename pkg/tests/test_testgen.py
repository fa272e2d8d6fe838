import pytest
from hypothesis import given, settings, strategies as st

from jmprelax.ir import Jump, Mode, validate
from jmprelax.layout import layout_all_short
from jmprelax.oracles import iterative_fixpoint
from jmprelax.relax import relax
from jmprelax.testgen import (
    GenParams,
    build_program,
    cascade_distance,
    gen_cascade,
    gen_paper_mutual,
    gen_random,
)


def near_threshold(d):
    if d >= 0:
        return min(abs(d - 127), abs(d - 128)) <= 8
    return min(abs(d + 128), abs(d + 129)) <= 8


def test_no_jumps():
    prog = gen_random(GenParams(seed=1, jump_count=0))
    assert prog.jump_count == 0 and validate(prog) == []


def test_deterministic():
    p = GenParams(seed=99, jump_count=50, blob_mean=12, mode=Mode.BITS16)
    assert gen_random(p) == gen_random(p)
    assert gen_random(p) != gen_random(GenParams(seed=100, jump_count=50, blob_mean=12, mode=Mode.BITS16))


def test_seed_7_relax_agrees_with_oracle():
    prog = gen_random(GenParams(seed=7, jump_count=5, blob_mean=40))
    assert validate(prog) == [] and prog.jump_count == 5
    _, table = layout_all_short(prog)
    assert relax(table).assignment == iterative_fixpoint(prog).assignment


@pytest.mark.parametrize("bad", [dict(jump_count=-1), dict(backward_fraction=1.5), dict(conditional_fraction=-0.1)])
def test_params_validated(bad):
    with pytest.raises(ValueError):
        GenParams(**{"seed": 1, "jump_count": 3, **bad})


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 2**64 - 1), st.integers(1, 200), st.sampled_from([0, 2, 10, 40, 100]),
       st.floats(0, 1), st.floats(0, 1), st.sampled_from(list(Mode)))
def test_random_programs_valid_and_boundary_heavy(seed, n, mean, back, cond, mode):
    prog = gen_random(GenParams(seed, n, mean, back, cond, mode))
    assert validate(prog) == []
    assert prog.jump_count == n and prog.mode is mode
    _, table = layout_all_short(prog)
    near = sum(near_threshold(r.original_distance) for r in table)
    assert near >= 0.25 * n


def test_fractions_are_respected():
    prog = gen_random(GenParams(5, 400, 30, backward_fraction=0.0, conditional_fraction=0.0))
    _, table = layout_all_short(prog)
    assert all(r.original_distance >= 0 for r in table)
    assert not any(j.kind.conditional for j in prog.jumps())
    prog = gen_random(GenParams(5, 400, 30, backward_fraction=1.0, conditional_fraction=1.0))
    _, table = layout_all_short(prog)
    assert sum(r.original_distance < 0 for r in table) > 390  # a few clamp at the program start
    assert all(j.kind.conditional for j in prog.jumps())


def test_cascade_shape():
    assert cascade_distance(Mode.BITS32) == 125
    assert cascade_distance(Mode.BITS16) == 127
    _, table = layout_all_short(gen_cascade(6))
    assert [r.original_distance for r in table] == [125] * 5 + [128]
    assert [r.all_short_start for r in table] == [0, 2, 127, 129, 254, 256]


def test_cascade_one():
    prog = gen_cascade(1)
    _, table = layout_all_short(prog)
    assert [r.original_distance for r in table] == [128]
    assert relax(table).assignment.is_long == (True,)


@pytest.mark.parametrize("mode", list(Mode))
@pytest.mark.parametrize("k", [1, 2, 3, 10, 33])
def test_cascade_all_long(k, mode):
    prog = gen_cascade(k, mode)
    _, table = layout_all_short(prog)
    res = relax(table)
    assert sum(res.assignment.is_long) == k and res.stats.dequeues == k
    rep = iterative_fixpoint(prog)
    assert sum(rep.assignment.is_long) == k and rep.iterations == k


def test_cascade_requires_a_jump():
    with pytest.raises(ValueError):
        gen_cascade(0)


def test_paper_mutual():
    prog = gen_paper_mutual()
    assert len(prog.items) == 4 and prog.jump_count == 2


def test_build_program_rejects_target_inside_jump():
    from jmprelax.ir import UNCONDITIONAL

    with pytest.raises(ValueError):
        build_program(Mode.BITS32, [UNCONDITIONAL, bytes(4)], [1])
    with pytest.raises(ValueError):
        build_program(Mode.BITS32, [UNCONDITIONAL, bytes(4)], [7])
    prog = build_program(Mode.BITS32, [bytes(3), UNCONDITIONAL, bytes(4)], [3])
    assert isinstance(prog.items[2], Jump)
