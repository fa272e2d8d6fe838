"""Text dialect for jump programs.

One statement per line, ``;`` starts a comment::

    .mode 32            ; optional, before any item, at most once
    top:  je  done      ; a label and an instruction may share a line
          db  90 90     ; literal bytes, two hex digits each
          space 130     ; 130 zero bytes
          jmp top
    done:
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable

from .ir import Blob, Item, Jump, JumpKind, Label, Mode, SourceProgram, UNCONDITIONAL

CONDITIONAL_MNEMONICS = (
    "jo", "jno", "jb", "jae", "je", "jne", "jbe", "ja",
    "js", "jns", "jp", "jnp", "jl", "jge", "jle", "jg",
)
_CONDITION_INDEX = {m: i for i, m in enumerate(CONDITIONAL_MNEMONICS)}

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_HEX_BYTE = re.compile(r"[0-9A-Fa-f]{2}\Z")
_DECIMAL = re.compile(r"[0-9]+\Z")
_TOKEN = re.compile(r"\S+")


@dataclass(frozen=True)
class ParseError:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"{self.line}:{self.column}: {self.message}"


class AsmSyntaxError(Exception):
    def __init__(self, errors: Iterable[ParseError]):
        self.errors = list(errors)
        super().__init__("\n".join(str(e) for e in self.errors))


def parse(text: str) -> SourceProgram:
    """Parse ``text`` into a program; raise AsmSyntaxError listing every bad line."""
    mode: Mode | None = None
    items: list[Item] = []
    errors: list[ParseError] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        code = raw.split(";", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(code)]
        if not tokens:
            continue

        def err(col: int, msg: str) -> None:
            errors.append(ParseError(lineno, col, msg))

        word, col = tokens[0]
        if word == ".mode":
            if len(tokens) != 2:
                err(col, ".mode takes exactly one operand")
            elif mode is not None:
                err(col, "duplicate .mode directive")
            elif items:
                err(col, ".mode must precede every label and instruction")
            elif tokens[1][0] not in ("16", "32", "64"):
                err(tokens[1][1], f"unsupported mode {tokens[1][0]!r}")
            else:
                mode = Mode.from_bits(tokens[1][0])
            continue

        if word.endswith(":"):
            name = word[:-1]
            if not _IDENT.match(name):
                err(col, f"invalid label name {name!r}")
                continue
            items.append(Label(name))
            tokens = tokens[1:]
            if not tokens:
                continue
            word, col = tokens[0]

        operands = tokens[1:]
        if word == "jmp" or word in _CONDITION_INDEX:
            if len(operands) != 1:
                err(col, f"{word} takes exactly one label operand")
            elif not _IDENT.match(operands[0][0]):
                err(operands[0][1], f"invalid jump target {operands[0][0]!r}")
            else:
                kind = UNCONDITIONAL if word == "jmp" else JumpKind.cond(_CONDITION_INDEX[word])
                items.append(Jump(kind, operands[0][0]))
        elif word == "db":
            bad = [(t, c) for t, c in operands if not _HEX_BYTE.match(t)]
            if not operands:
                err(col, "db needs at least one byte")
            elif bad:
                err(bad[0][1], f"invalid byte {bad[0][0]!r} (expected two hex digits)")
            else:
                items.append(Blob(bytes(int(t, 16) for t, _ in operands)))
        elif word == "space":
            if len(operands) != 1 or not _DECIMAL.match(operands[0][0]):
                err(col, "space takes one non-negative decimal count")
            else:
                items.append(Blob(bytes(int(operands[0][0]))))
        else:
            err(col, f"unknown statement {word!r}")

    if errors:
        raise AsmSyntaxError(errors)
    return SourceProgram(mode or Mode.BITS32, tuple(items))


def format_item(item: Item) -> str:
    if isinstance(item, Label):
        return f"{item.name}:"
    if isinstance(item, Jump):
        mnemonic = CONDITIONAL_MNEMONICS[item.kind.condition] if item.kind.conditional else "jmp"
        return f"{mnemonic} {item.target}"
    if not any(item.data):
        return f"space {len(item.data)}"
    return "db " + " ".join(f"{b:02x}" for b in item.data)


def format(program: SourceProgram) -> str:  # noqa: A001 - mirrors parse()
    lines = [f".mode {program.mode.value}"]
    for item in program.items:
        text = format_item(item)
        lines.append(text if isinstance(item, Label) else "    " + text)
    return "\n".join(lines) + "\n"
