"""Final layout, x86 byte emission and an independent decode-and-verify pass."""

from __future__ import annotations

from dataclasses import dataclass, field

from .ir import (
    SHORT_SIZE,
    Blob,
    Jump,
    Label,
    Mode,
    SizeAssignment,
    SourceProgram,
    long_fits,
    long_size,
    short_fits,
)
from .parser import format_item

JMP_SHORT = 0xEB
JMP_LONG = 0xE9
JCC_SHORT = 0x70
JCC_LONG_PREFIX = 0x0F
JCC_LONG = 0x80


class EncodeError(Exception):
    def __init__(self, jump: int, displacement: int, message: str):
        super().__init__(message)
        self.jump = jump
        self.displacement = displacement


class ShortRangeViolation(EncodeError):
    def __init__(self, jump: int, displacement: int):
        super().__init__(jump, displacement, f"jump {jump}: displacement {displacement} does not fit rel8")


class LongRangeExceeded(EncodeError):
    def __init__(self, jump: int, displacement: int, mode: Mode):
        super().__init__(
            jump, displacement,
            f"jump {jump}: displacement {displacement} exceeds the {mode.value}-bit long range",
        )


@dataclass(frozen=True)
class ListingEntry:
    offset: int
    data: bytes
    source: str

    @property
    def size(self) -> int:
        return len(self.data)

    def render(self, max_bytes: int = 6) -> str:
        shown = self.data[:max_bytes].hex()
        if len(self.data) > max_bytes:
            shown += ".."
        return "%08x  %-14s  %s" % (self.offset, shown, self.source)


@dataclass(frozen=True)
class EncodedProgram:
    data: bytes
    label_offsets: dict[str, int]
    listing: list[ListingEntry] = field(default_factory=list)

    def listing_text(self) -> str:
        return "".join(e.render() + "\n" for e in self.listing)


@dataclass(frozen=True)
class Mismatch:
    jump: int | None
    expected: int | None
    actual: int | None
    message: str

    def __str__(self) -> str:
        return self.message


def _check_lengths(program: SourceProgram, assignment: SizeAssignment) -> None:
    n = program.jump_count
    if len(assignment) != n:
        raise ValueError(f"assignment has {len(assignment)} entries for {n} jumps")


def jump_size(mode: Mode, jump: Jump, is_long: bool) -> int:
    return long_size(mode, jump.kind) if is_long else SHORT_SIZE


def final_layout(
    program: SourceProgram, assignment: SizeAssignment
) -> tuple[dict[str, int], list[int]]:
    """Label offsets and jump start offsets with the given sizes."""
    _check_lengths(program, assignment)
    labels: dict[str, int] = {}
    jump_offsets: list[int] = []
    offset = 0
    for item in program.items:
        if isinstance(item, Label):
            labels[item.name] = offset
        elif isinstance(item, Jump):
            jump_offsets.append(offset)
            offset += jump_size(program.mode, item, assignment[len(jump_offsets) - 1])
        else:
            offset += len(item.data)
    return labels, jump_offsets


def total_size(program: SourceProgram, assignment: SizeAssignment) -> int:
    _check_lengths(program, assignment)
    k = 0
    size = 0
    for item in program.items:
        if isinstance(item, Jump):
            size += jump_size(program.mode, item, assignment[k])
            k += 1
        elif isinstance(item, Blob):
            size += len(item.data)
    return size


def encode_jump(mode: Mode, jump: Jump, is_long: bool, displacement: int) -> bytes:
    kind = jump.kind
    if not is_long:
        op = JCC_SHORT + kind.condition if kind.conditional else JMP_SHORT
        return bytes((op,)) + displacement.to_bytes(1, "little", signed=True)
    width = 2 if mode is Mode.BITS16 else 4
    rel = displacement.to_bytes(width, "little", signed=True)
    if kind.conditional:
        return bytes((JCC_LONG_PREFIX, JCC_LONG + kind.condition)) + rel
    return bytes((JMP_LONG,)) + rel


def encode(program: SourceProgram, assignment: SizeAssignment) -> EncodedProgram:
    labels, jump_offsets = final_layout(program, assignment)
    mode = program.mode
    out = bytearray()
    listing: list[ListingEntry] = []
    k = 0
    for item in program.items:
        offset = len(out)
        if isinstance(item, Label):
            chunk = b""
        elif isinstance(item, Jump):
            is_long = assignment[k]
            end = jump_offsets[k] + jump_size(mode, item, is_long)
            disp = labels[item.target] - end
            if not is_long and not short_fits(disp):
                raise ShortRangeViolation(k, disp)
            if is_long and not long_fits(disp, mode):
                raise LongRangeExceeded(k, disp, mode)
            chunk = encode_jump(mode, item, is_long, disp)
            k += 1
        else:
            chunk = item.data
        out += chunk
        listing.append(ListingEntry(offset, bytes(chunk), format_item(item)))
    return EncodedProgram(bytes(out), labels, listing)


def _decode_jump(data: bytes, pos: int, mode: Mode):
    """Decode one jump at ``pos``: (size, is_long, condition or None, displacement)."""
    op = data[pos]
    if op == JMP_SHORT or JCC_SHORT <= op <= JCC_SHORT + 15:
        disp = int.from_bytes(data[pos + 1:pos + 2], "little", signed=True)
        return 2, False, None if op == JMP_SHORT else op - JCC_SHORT, disp
    width = 2 if mode is Mode.BITS16 else 4
    if op == JMP_LONG:
        size, cond, rel_at = 1 + width, None, pos + 1
    elif op == JCC_LONG_PREFIX and JCC_LONG <= data[pos + 1] <= JCC_LONG + 15:
        size, cond, rel_at = 2 + width, data[pos + 1] - JCC_LONG, pos + 2
    else:
        raise ValueError(f"no jump opcode at offset {pos:#x}: {op:#04x}")
    if pos + size > len(data):
        raise ValueError(f"truncated jump at offset {pos:#x}")
    return size, True, cond, int.from_bytes(data[rel_at:pos + size], "little", signed=True)


def decode_verify(
    encoded: EncodedProgram, program: SourceProgram, assignment: SizeAssignment
) -> Mismatch | None:
    """Walk the image guided by the program items and check every jump lands on its label.

    Label positions come from this walk, not from the encoder's layout.
    Returns None when everything checks out.
    """
    data = encoded.data
    mode = program.mode
    pos = 0
    k = 0
    found: dict[str, int] = {}
    landings: list[tuple[int, str, int]] = []
    for item in program.items:
        if isinstance(item, Label):
            found[item.name] = pos
            if encoded.label_offsets.get(item.name) != pos:
                return Mismatch(None, pos, encoded.label_offsets.get(item.name),
                                f"label {item.name}: at {pos:#x}, layout says "
                                f"{encoded.label_offsets.get(item.name)}")
        elif isinstance(item, Blob):
            if data[pos:pos + len(item.data)] != item.data:
                return Mismatch(None, None, pos, f"blob at {pos:#x} not copied verbatim")
            pos += len(item.data)
        else:
            if pos >= len(data):
                return Mismatch(k, None, pos, f"jump {k}: image ends at {pos:#x}")
            try:
                size, is_long, cond, disp = _decode_jump(data, pos, mode)
            except ValueError as exc:
                return Mismatch(k, None, pos, f"jump {k}: {exc}")
            if is_long != assignment[k]:
                return Mismatch(k, None, pos, f"jump {k}: encoded {'long' if is_long else 'short'}, "
                                              f"assignment says otherwise")
            if cond != item.kind.condition:
                return Mismatch(k, None, pos, f"jump {k}: condition {cond} != {item.kind.condition}")
            if size != jump_size(mode, item, is_long):
                return Mismatch(k, None, pos, f"jump {k}: decoded size {size}")
            landings.append((k, item.target, pos + size + disp))
            pos += size
            k += 1
    if pos != len(data):
        return Mismatch(None, len(data), pos, f"image is {len(data)} bytes, items cover {pos}")
    for k, target, landed in landings:
        if found[target] != landed:
            return Mismatch(k, found[target], landed,
                            f"jump {k}: lands at {landed:#x}, label {target} is at {found[target]:#x}")
    return None
