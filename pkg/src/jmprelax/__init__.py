"""Mini x86 jump assembler built around linear-time branch displacement optimization."""

from .encoder import EncodedProgram, decode_verify, encode, final_layout
from .ir import (
    Blob,
    Jump,
    JumpKind,
    Label,
    Mode,
    SizeAssignment,
    SourceProgram,
    long_fits,
    long_size,
    short_fits,
    validate,
)
from .layout import JumpTable, layout_all_short
from .parser import format, parse
from .relax import BACKEND, RelaxationResult, relax, relax_with_order, spans

__all__ = [
    "BACKEND", "Blob", "EncodedProgram", "Jump", "JumpKind", "JumpTable", "Label", "Mode",
    "RelaxationResult", "SizeAssignment", "SourceProgram", "assemble", "decode_verify",
    "encode", "final_layout", "format", "layout_all_short", "long_fits", "long_size",
    "parse", "relax", "relax_with_order", "short_fits", "spans", "validate",
]


def assemble(text: str) -> EncodedProgram:
    """Parse, size and encode assembly text in one go."""
    program = parse(text)
    _, table = layout_all_short(program)
    return encode(program, relax(table).assignment)
