"""Deterministic program generators for tests and benchmarks."""

from __future__ import annotations

import bisect
from dataclasses import dataclass

import numpy as np

from .ir import (
    SHORT_SIZE,
    UNCONDITIONAL,
    Blob,
    Item,
    Jump,
    JumpKind,
    Label,
    Mode,
    SourceProgram,
    long_size,
)

# random programs are padded so a near-threshold target always exists
EDGE_PAD = 140
NEAR_FORWARD = (120, 135)
NEAR_BACKWARD = (-136, -121)
FAR_LIMIT = 200


@dataclass(frozen=True)
class GenParams:
    seed: int
    jump_count: int
    blob_mean: float = 40.0
    backward_fraction: float = 0.5
    conditional_fraction: float = 0.3
    mode: Mode = Mode.BITS32

    def __post_init__(self) -> None:
        if self.jump_count < 0:
            raise ValueError("jump_count must be >= 0")
        if self.blob_mean < 0:
            raise ValueError("blob_mean must be >= 0")
        for name in ("backward_fraction", "conditional_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")


def build_program(mode: Mode, skeleton: list, targets: list[int]) -> SourceProgram:
    """Place one label per distinct target offset into an item skeleton.

    ``skeleton`` holds ``JumpKind`` entries (2 bytes each in the all-short
    layout) and ``bytes`` blobs. ``targets[k]`` is the all-short offset that
    jump k must reach; it has to fall on an item boundary or inside a blob.
    """
    offsets = sorted(set(targets))
    names = {off: f"L{i}" for i, off in enumerate(offsets)}
    items: list[Item] = []
    pos = 0
    nxt = 0
    k = 0

    def labels_upto(limit: int, inclusive: bool) -> None:
        nonlocal nxt
        while nxt < len(offsets) and (offsets[nxt] < limit or inclusive and offsets[nxt] == limit):
            items.append(Label(names[offsets[nxt]]))
            nxt += 1

    for entry in skeleton:
        if isinstance(entry, JumpKind):
            labels_upto(pos, inclusive=True)
            if nxt < len(offsets) and offsets[nxt] < pos + SHORT_SIZE:
                raise ValueError(f"target {offsets[nxt]} falls inside a jump")
            items.append(Jump(entry, names[targets[k]]))
            k += 1
            pos += SHORT_SIZE
        else:
            data = bytes(entry)
            cut = 0
            while nxt < len(offsets) and offsets[nxt] < pos + len(data):
                split = offsets[nxt] - pos
                if split > cut:
                    items.append(Blob(data[cut:split]))
                    cut = split
                labels_upto(offsets[nxt], inclusive=True)
            if cut < len(data):
                items.append(Blob(data[cut:]))
            pos += len(data)
    labels_upto(pos, inclusive=True)
    if nxt != len(offsets):
        raise ValueError(f"target {offsets[nxt]} lies past the end of the program ({pos})")
    return SourceProgram(mode, tuple(items))


def gen_random(params: GenParams) -> SourceProgram:
    """Random jumps over geometric blobs; at least half aim within 8 bytes of a rel8 limit."""
    rng = np.random.default_rng(params.seed)
    n = params.jump_count
    p = 1.0 / (params.blob_mean + 1.0)
    gaps = rng.geometric(p, size=n + 1) - 1
    gaps[0] += EDGE_PAD
    gaps[-1] += EDGE_PAD
    near = np.zeros(n, dtype=bool)
    near[rng.permutation(n)[: (n + 1) // 2]] = True
    backward = rng.random(n) < params.backward_fraction
    conditional = rng.random(n) < params.conditional_fraction
    conditions = rng.integers(0, 16, size=n)
    near_fwd = rng.integers(NEAR_FORWARD[0], NEAR_FORWARD[1] + 1, size=n)
    near_bwd = rng.integers(NEAR_BACKWARD[0], NEAR_BACKWARD[1] + 1, size=n)
    far_fwd = rng.integers(0, FAR_LIMIT + 1, size=n)
    far_bwd = rng.integers(-FAR_LIMIT, -1, size=n)

    skeleton: list = []
    starts: list[int] = []
    pos = 0
    for k in range(n + 1):
        gap = int(gaps[k])
        if gap:
            skeleton.append(rng.integers(0, 256, size=gap, dtype=np.uint8).tobytes())
            pos += gap
        if k == n:
            break
        kind = JumpKind.cond(int(conditions[k])) if conditional[k] else UNCONDITIONAL
        skeleton.append(kind)
        starts.append(pos)
        pos += SHORT_SIZE
    total = pos

    targets = []
    for k, s in enumerate(starts):
        if backward[k]:
            d = near_bwd[k] if near[k] else far_bwd[k]
        else:
            d = near_fwd[k] if near[k] else far_fwd[k]
        t = min(max(s + SHORT_SIZE + int(d), 0), total)
        # a target inside a jump's two bytes snaps to that jump's start
        j = bisect.bisect_right(starts, t) - 1
        if j >= 0 and starts[j] < t < starts[j] + SHORT_SIZE:
            t = starts[j]
        targets.append(t)
    return build_program(params.mode, skeleton, targets)


def cascade_distance(mode: Mode) -> int:
    """All-short displacement that overflows rel8 after one neighbour goes long."""
    return 127 - (long_size(mode, UNCONDITIONAL) - SHORT_SIZE) + 1


def gen_cascade(k: int, mode: Mode = Mode.BITS32) -> SourceProgram:
    """k forward jumps where promoting the last one promotes each earlier one in turn.

    Jumps come in adjacent pairs, pairs ``d + 2`` bytes apart. Jump i's target
    is either the start of jump i+2 (not spanned) or the end of jump i+1's
    short form (spanned), so it only spans jump i+1. The last jump starts at
    displacement 128.
    """
    if k < 1:
        raise ValueError("cascade needs at least one jump")
    d = cascade_distance(mode)
    starts = [(d + 2) * (i // 2) + SHORT_SIZE * (i % 2) for i in range(k)]
    targets = [s + SHORT_SIZE + d for s in starts[:-1]] + [starts[-1] + SHORT_SIZE + 128]
    skeleton: list = []
    pos = 0
    for s in starts:
        if s > pos:
            skeleton.append(bytes(s - pos))
        skeleton.append(UNCONDITIONAL)
        pos = s + SHORT_SIZE
    end = max(targets)
    if end > pos:
        skeleton.append(bytes(end - pos))
    return build_program(mode, skeleton, targets)


def gen_paper_mutual() -> SourceProgram:
    return SourceProgram(
        Mode.BITS32,
        (
            Label("LabelA"),
            Jump(UNCONDITIONAL, "LabelB"),
            Jump(UNCONDITIONAL, "LabelA"),
            Label("LabelB"),
        ),
    )


def gen_cascade_pair() -> SourceProgram:
    """Two adjacent jumps: the second starts at +128, the first at +126 reaching past it."""
    return SourceProgram(
        Mode.BITS32,
        (
            Jump(UNCONDITIONAL, "A"),
            Jump(UNCONDITIONAL, "B"),
            Blob(bytes(124)),
            Label("A"),
            Blob(bytes(4)),
            Label("B"),
        ),
    )
