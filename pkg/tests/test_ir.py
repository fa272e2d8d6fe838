import pytest
from hypothesis import given, strategies as st

from jmprelax.ir import (
    UNCONDITIONAL,
    Blob,
    DuplicateLabel,
    Jump,
    JumpKind,
    Label,
    Mode,
    SizeAssignment,
    SourceProgram,
    UndefinedTarget,
    long_fits,
    long_size,
    short_fits,
    validate,
)


@pytest.mark.parametrize(
    "mode, kind, size",
    [
        (Mode.BITS32, UNCONDITIONAL, 5),
        (Mode.BITS32, JumpKind.cond(4), 6),
        (Mode.BITS64, UNCONDITIONAL, 5),
        (Mode.BITS64, JumpKind.cond(0), 6),
        (Mode.BITS16, UNCONDITIONAL, 3),
        (Mode.BITS16, JumpKind.cond(15), 4),
    ],
)
def test_long_size_table(mode, kind, size):
    assert long_size(mode, kind) == size


def test_long_size_total_and_above_short():
    for mode in Mode:
        for kind in [UNCONDITIONAL] + [JumpKind.cond(c) for c in range(16)]:
            assert long_size(mode, kind) > 2


@pytest.mark.parametrize("disp, fits", [(127, True), (-128, True), (128, False), (-129, False), (0, True)])
def test_short_fits(disp, fits):
    assert short_fits(disp) is fits


@pytest.mark.parametrize(
    "disp, mode, fits",
    [
        (32767, Mode.BITS16, True),
        (32768, Mode.BITS16, False),
        (-32768, Mode.BITS16, True),
        (-32769, Mode.BITS16, False),
        (0, Mode.BITS32, True),
        (2**31 - 1, Mode.BITS32, True),
        (2**31, Mode.BITS64, False),
        (-(2**31), Mode.BITS64, True),
    ],
)
def test_long_fits(disp, mode, fits):
    assert long_fits(disp, mode) is fits


@given(st.integers(-(2**40), 2**40), st.sampled_from(list(Mode)))
def test_short_implies_long(disp, mode):
    if short_fits(disp):
        assert long_fits(disp, mode)


@pytest.mark.parametrize("bad", [-1, 16, None])
def test_condition_index_range(bad):
    with pytest.raises(ValueError):
        JumpKind(True, bad)


def test_unconditional_has_no_condition():
    with pytest.raises(ValueError):
        JumpKind(False, 3)


def test_validate_ok():
    assert validate(SourceProgram(items=(Label("A"), Jump(UNCONDITIONAL, "A")))) == []


def test_validate_undefined_target():
    (err,) = validate(SourceProgram(items=(Jump(UNCONDITIONAL, "B"),)))
    assert isinstance(err, UndefinedTarget)
    assert err.name == "B" and err.item_index == 0


def test_validate_duplicate_label():
    (err,) = validate(SourceProgram(items=(Label("A"), Label("A"))))
    assert isinstance(err, DuplicateLabel)
    assert err.name == "A" and err.item_index == 1


def test_validate_reports_every_violation_in_item_order():
    prog = SourceProgram(items=(Jump(UNCONDITIONAL, "X"), Label("A"), Blob(b"\x90"), Label("A")))
    errs = validate(prog)
    assert [(type(e), e.item_index) for e in errs] == [(UndefinedTarget, 0), (DuplicateLabel, 3)]


def test_backward_reference_to_later_label_is_fine():
    prog = SourceProgram(items=(Jump(UNCONDITIONAL, "end"), Label("end")))
    assert validate(prog) == []


def test_size_assignment():
    a = SizeAssignment((0, 1, 1))
    assert a.is_long == (False, True, True)
    assert len(a) == 3 and a[1]
    assert a.long_set() == {1, 2}
    assert SizeAssignment.all_short(2) == SizeAssignment((False, False))


def test_mode_from_bits():
    assert Mode.from_bits("16") is Mode.BITS16
    with pytest.raises(ValueError):
        Mode.from_bits(8)
