"""Slow, independent ground truth for the relaxation.

Both oracles recompute the exact layout from item sizes; neither uses the
jump table, the span predicate or the worklist.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoder import LongRangeExceeded
from .ir import (
    SHORT_MAX,
    SHORT_MIN,
    SHORT_SIZE,
    Blob,
    Jump,
    Label,
    SizeAssignment,
    SourceProgram,
    ensure_valid,
    long_bounds,
    long_fits,
    long_size,
    short_fits,
)

DEFAULT_MAX_JUMPS = 12


class TooManyJumps(Exception):
    def __init__(self, n: int, max_jumps: int):
        super().__init__(f"{n} jumps exceed the brute-force limit of {max_jumps}")
        self.n = n
        self.max_jumps = max_jumps


@dataclass(frozen=True)
class OracleReport:
    assignment: SizeAssignment
    total_size: int
    iterations: int = 0
    assignments_tried: int = 0
    is_least: bool | None = None


def exact_displacements(program: SourceProgram, assignment: SizeAssignment) -> list[int]:
    """Displacement of every jump, laid out with the given sizes."""
    sizes = []
    k = 0
    for item in program.items:
        if isinstance(item, Jump):
            sizes.append(long_size(program.mode, item.kind) if assignment[k] else SHORT_SIZE)
            k += 1
        elif isinstance(item, Blob):
            sizes.append(len(item.data))
        else:
            sizes.append(0)
    starts = [0] * len(sizes)
    pos = 0
    for i, s in enumerate(sizes):
        starts[i] = pos
        pos += s
    where = {it.name: starts[i] for i, it in enumerate(program.items) if isinstance(it, Label)}
    return [
        where[it.target] - (starts[i] + sizes[i])
        for i, it in enumerate(program.items)
        if isinstance(it, Jump)
    ]


def feasible(program: SourceProgram, assignment: SizeAssignment) -> bool:
    if len(assignment) != program.jump_count:
        raise ValueError("assignment length does not match the jump count")
    for is_long, disp in zip(assignment.is_long, exact_displacements(program, assignment)):
        if not (long_fits(disp, program.mode) if is_long else short_fits(disp)):
            return False
    return True


class _Arrays:
    """Item sizes and jump/label indices as numpy arrays for repeated relayout."""

    def __init__(self, program: SourceProgram):
        ensure_valid(program)
        items = program.items
        label_item = {it.name: i for i, it in enumerate(items) if isinstance(it, Label)}
        self.base = np.array(
            [len(it.data) if isinstance(it, Blob) else 0 for it in items], dtype=np.int64
        )
        jumps = [(i, it) for i, it in enumerate(items) if isinstance(it, Jump)]
        self.jump_item = np.array([i for i, _ in jumps], dtype=np.int64)
        self.target_item = np.array([label_item[it.target] for _, it in jumps], dtype=np.int64)
        self.long = np.array([long_size(program.mode, it.kind) for _, it in jumps], dtype=np.int64)
        self.n = len(jumps)

    def displacements(self, is_long: np.ndarray) -> np.ndarray:
        """Rows of assignments in, rows of displacements out (broadcasts over leading axes)."""
        jump_sizes = np.where(is_long, self.long, SHORT_SIZE)
        sizes = np.broadcast_to(self.base, jump_sizes.shape[:-1] + self.base.shape).copy()
        sizes[..., self.jump_item] = jump_sizes
        ends = np.cumsum(sizes, axis=-1)
        starts = ends - sizes
        return starts[..., self.target_item] - ends[..., self.jump_item]

    def total(self, is_long: np.ndarray) -> np.ndarray:
        return self.base.sum() + np.where(is_long, self.long, SHORT_SIZE).sum(axis=-1)


def iterative_fixpoint(program: SourceProgram) -> OracleReport:
    """Grow from all-short by full relayout until no short jump is out of range."""
    arr = _Arrays(program)
    is_long = np.zeros(arr.n, dtype=bool)
    rounds = 0
    while True:
        rounds += 1
        disp = arr.displacements(is_long)
        promote = ~is_long & ((disp > SHORT_MAX) | (disp < SHORT_MIN))
        if not promote.any():
            break
        is_long |= promote
        if is_long.all():
            disp = arr.displacements(is_long)
            break
    lo, hi = long_bounds(program.mode)
    bad = np.flatnonzero(is_long & ((disp < lo) | (disp > hi)))
    if bad.size:
        k = int(bad[0])
        raise LongRangeExceeded(k, int(disp[k]), program.mode)
    return OracleReport(
        assignment=SizeAssignment(tuple(is_long.tolist())),
        total_size=int(arr.total(is_long)),
        iterations=rounds,
    )


def brute_force_minimal(program: SourceProgram, max_jumps: int = DEFAULT_MAX_JUMPS) -> OracleReport:
    """Enumerate every assignment; return the smallest feasible one.

    Ties go to the lexicographically least long-set. ``is_least`` records
    whether that long-set is contained in every feasible long-set.
    """
    arr = _Arrays(program)
    n = arr.n
    if n > max_jumps:
        raise TooManyJumps(n, max_jumps)
    codes = np.arange(1 << n, dtype=np.int64)
    is_long = ((codes[:, None] >> np.arange(n)) & 1).astype(bool)
    disp = arr.displacements(is_long)
    lo, hi = long_bounds(program.mode)
    ok_short = (disp >= SHORT_MIN) & (disp <= SHORT_MAX)
    ok_long = (disp >= lo) & (disp <= hi)
    ok = np.where(is_long, ok_long, ok_short).all(axis=1)
    candidates = np.flatnonzero(ok)
    if candidates.size == 0:
        raise LongRangeExceeded(0, 0, program.mode)
    totals = arr.total(is_long)
    best_size = totals[candidates].min()
    best = [tuple(np.flatnonzero(is_long[c]).tolist()) for c in candidates if totals[c] == best_size]
    winner = min(best)
    mask = 0
    for k in winner:
        mask |= 1 << k
    least = bool(np.all((codes[candidates] & mask) == mask))
    return OracleReport(
        assignment=SizeAssignment(tuple((mask >> k) & 1 == 1 for k in range(n))),
        total_size=int(best_size),
        assignments_tried=1 << n,
        is_least=least,
    )
