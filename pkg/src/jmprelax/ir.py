"""Domain model: assembly modes, jump kinds, program items and size tables."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

SHORT_SIZE = 2
SHORT_MIN = -128
SHORT_MAX = 127


class Mode(enum.Enum):
    BITS16 = 16
    BITS32 = 32
    BITS64 = 64

    @classmethod
    def from_bits(cls, bits: int | str) -> "Mode":
        try:
            return cls(int(bits))
        except (ValueError, TypeError):
            raise ValueError(f"unsupported mode: {bits!r} (expected 16, 32 or 64)") from None


@dataclass(frozen=True)
class JumpKind:
    """Unconditional jump, or conditional jump with an x86 condition nibble."""

    conditional: bool = False
    condition: int | None = None

    def __post_init__(self) -> None:
        if self.conditional:
            if self.condition is None or not 0 <= self.condition <= 15:
                raise ValueError(f"condition index out of range: {self.condition!r}")
        elif self.condition is not None:
            raise ValueError("unconditional jump cannot carry a condition")

    @classmethod
    def cond(cls, condition: int) -> "JumpKind":
        return cls(True, condition)


UNCONDITIONAL = JumpKind()


@dataclass(frozen=True)
class Label:
    name: str


@dataclass(frozen=True)
class Jump:
    kind: JumpKind
    target: str


@dataclass(frozen=True)
class Blob:
    """Opaque bytes whose size never depends on layout."""

    data: bytes = b""

    def __len__(self) -> int:
        return len(self.data)


Item = Union[Label, Jump, Blob]


@dataclass(frozen=True)
class SourceProgram:
    mode: Mode = Mode.BITS32
    items: tuple[Item, ...] = ()

    def __post_init__(self) -> None:
        if not isinstance(self.items, tuple):
            object.__setattr__(self, "items", tuple(self.items))

    def jumps(self) -> Iterator[Jump]:
        return (it for it in self.items if isinstance(it, Jump))

    @property
    def jump_count(self) -> int:
        return sum(1 for _ in self.jumps())

    def with_mode(self, mode: Mode) -> "SourceProgram":
        return SourceProgram(mode, self.items)


@dataclass(frozen=True)
class SizeAssignment:
    """Short/long decision for each jump, in program order."""

    is_long: tuple[bool, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "is_long", tuple(bool(b) for b in self.is_long))

    @classmethod
    def all_short(cls, n: int) -> "SizeAssignment":
        return cls((False,) * n)

    @classmethod
    def all_long(cls, n: int) -> "SizeAssignment":
        return cls((True,) * n)

    def __len__(self) -> int:
        return len(self.is_long)

    def __getitem__(self, k: int) -> bool:
        return self.is_long[k]

    def long_set(self) -> frozenset[int]:
        return frozenset(k for k, b in enumerate(self.is_long) if b)


def long_size(mode: Mode, kind: JumpKind) -> int:
    if mode is Mode.BITS16:
        return 4 if kind.conditional else 3
    return 6 if kind.conditional else 5


def short_fits(displacement: int) -> bool:
    return SHORT_MIN <= displacement <= SHORT_MAX


def long_bounds(mode: Mode) -> tuple[int, int]:
    bits = 16 if mode is Mode.BITS16 else 32
    return -(1 << (bits - 1)), (1 << (bits - 1)) - 1


def long_fits(displacement: int, mode: Mode) -> bool:
    lo, hi = long_bounds(mode)
    return lo <= displacement <= hi


class SemanticError(Exception):
    """A program-level invariant violation, located at an item index."""

    def __init__(self, name: str, item_index: int, message: str):
        super().__init__(message)
        self.name = name
        self.item_index = item_index


class DuplicateLabel(SemanticError):
    def __init__(self, name: str, item_index: int):
        super().__init__(name, item_index, f"item {item_index}: duplicate label {name!r}")


class UndefinedTarget(SemanticError):
    def __init__(self, name: str, item_index: int):
        super().__init__(name, item_index, f"item {item_index}: undefined jump target {name!r}")


class ValidationError(Exception):
    def __init__(self, errors: Sequence[SemanticError]):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


def validate(program: SourceProgram) -> list[SemanticError]:
    """Return every semantic error in ``program``; an empty list means ok."""
    errors: list[SemanticError] = []
    seen: set[str] = set()
    for idx, item in enumerate(program.items):
        if isinstance(item, Label):
            if item.name in seen:
                errors.append(DuplicateLabel(item.name, idx))
            seen.add(item.name)
    for idx, item in enumerate(program.items):
        if isinstance(item, Jump) and item.target not in seen:
            errors.append(UndefinedTarget(item.target, idx))
    errors.sort(key=lambda e: e.item_index)
    return errors


def ensure_valid(program: SourceProgram) -> None:
    errors = validate(program)
    if errors:
        raise ValidationError(errors)
