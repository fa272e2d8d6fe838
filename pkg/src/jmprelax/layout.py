"""All-short layout: label offsets and the jump table the relaxation works on."""

from __future__ import annotations

from array import array
from dataclasses import dataclass

from .ir import SHORT_SIZE, Blob, Jump, Label, Mode, SourceProgram, ensure_valid, long_size

LabelTable = dict[str, int]


@dataclass(frozen=True)
class JumpRecord:
    index: int
    item_index: int
    all_short_start: int
    original_distance: int
    current_distance: int
    marked: bool
    long_size: int

    @property
    def src_point(self) -> int:
        return self.all_short_start + SHORT_SIZE

    @property
    def target_offset(self) -> int:
        return self.src_point + self.original_distance

    @property
    def is_forward(self) -> bool:
        return self.original_distance >= 0


class JumpTable:
    """Jumps sorted by all-short offset, stored column-wise.

    The columns are ``array('q')`` / ``bytearray`` so the compiled kernel can
    take them as typed memoryviews without copying. Only ``current`` and
    ``marked`` change during relaxation.
    """

    def __init__(self, mode: Mode, item_index, start, original, long_sizes):
        self.mode = mode
        self.item_index = array("q", item_index)
        self.start = array("q", start)
        self.original = array("q", original)
        self.long_size = array("q", long_sizes)
        self.current = array("q", self.original)
        self.marked = bytearray(len(self.start))

    def __len__(self) -> int:
        return len(self.start)

    def __getitem__(self, k: int) -> JumpRecord:
        if k < 0:
            k += len(self)
        if not 0 <= k < len(self):
            raise IndexError(k)
        return JumpRecord(
            index=k,
            item_index=self.item_index[k],
            all_short_start=self.start[k],
            original_distance=self.original[k],
            current_distance=self.current[k],
            marked=bool(self.marked[k]),
            long_size=self.long_size[k],
        )

    def __iter__(self):
        return (self[k] for k in range(len(self)))

    def reset(self) -> None:
        """Restore the pre-relaxation state (all unmarked, distances original)."""
        self.current = array("q", self.original)
        self.marked = bytearray(len(self.start))

    def copy(self) -> "JumpTable":
        t = JumpTable(self.mode, self.item_index, self.start, self.original, self.long_size)
        t.current = array("q", self.current)
        t.marked = bytearray(self.marked)
        return t


def layout_all_short(program: SourceProgram) -> tuple[LabelTable, JumpTable]:
    ensure_valid(program)
    labels: LabelTable = {}
    item_index, start, targets, sizes = [], [], [], []
    offset = 0
    for idx, item in enumerate(program.items):
        if isinstance(item, Label):
            labels[item.name] = offset
        elif isinstance(item, Jump):
            item_index.append(idx)
            start.append(offset)
            targets.append(item.target)
            sizes.append(long_size(program.mode, item.kind))
            offset += SHORT_SIZE
        elif isinstance(item, Blob):
            offset += len(item.data)
    original = [labels[t] - (s + SHORT_SIZE) for t, s in zip(targets, start)]
    return labels, JumpTable(program.mode, item_index, start, original, sizes)


def all_short_size(program: SourceProgram) -> int:
    return sum(
        SHORT_SIZE if isinstance(it, Jump) else len(it.data) if isinstance(it, Blob) else 0
        for it in program.items
    )
