"""Linear-time worklist marking of jumps that need the long encoding.

Every jump starts short. Jumps whose all-short displacement is already out of
rel8 range are marked and queued. Dequeuing a jump J visits only the jumps
whose all-short start lies within 128 bytes of J's; each unmarked one that
spans J has its tracked displacement pushed away from zero by J's growth,
and is marked and queued when it leaves [-128, 127]. A short jump that spans
J must be within that window, so nothing outside it needs looking at.

The kernel is compiled when the ``_ckernel`` extension was built; otherwise
(or with ``JMPRELAX_PURE_PYTHON=1``) the pure-Python kernel runs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Literal

from . import _pykernel
from .ir import SHORT_SIZE, SizeAssignment
from .layout import JumpRecord, JumpTable

try:
    if os.environ.get("JMPRELAX_PURE_PYTHON"):
        raise ImportError("pure Python requested")
    from . import _ckernel
except ImportError:
    _ckernel = None

BACKEND = "cython" if _ckernel is not None else "python"
WINDOW = _pykernel.WINDOW

Policy = Literal["fifo", "lifo", "shuffle"]


@dataclass(frozen=True)
class RelaxStats:
    dequeues: int
    neighbor_checks: int
    max_neighbors_per_dequeue: int


@dataclass(frozen=True)
class RelaxationResult:
    assignment: SizeAssignment
    final_distances: tuple[int, ...]
    stats: RelaxStats


def available_backends() -> list[str]:
    return ["python"] + (["cython"] if _ckernel is not None else [])


def spans(k: JumpRecord, j: JumpRecord) -> bool:
    """Does growing ``j`` change the displacement of ``k``?

    J's extra long-form bytes are inserted right after its short form, and a
    label sitting exactly there moves with the code after it.
    """
    target = k.target_offset
    if k.original_distance > 0 and k.all_short_start < j.all_short_start:
        return target >= j.all_short_start + SHORT_SIZE
    if k.original_distance < 0 and k.all_short_start > j.all_short_start:
        return target <= j.all_short_start
    return False


def _kernel_for(policy: str, backend: str | None):
    if backend is None:
        backend = "cython" if _ckernel is not None and policy != "shuffle" else "python"
    if backend == "cython":
        if _ckernel is None:
            raise RuntimeError("compiled kernel is not available")
        if policy == "shuffle":
            raise ValueError("the compiled kernel supports only fifo and lifo")
        return _ckernel.relax_kernel
    if backend == "python":
        return _pykernel.relax_kernel
    raise ValueError(f"unknown backend {backend!r}")


def relax_with_order(
    table: JumpTable, policy: Policy = "fifo", seed: int = 0, backend: str | None = None
) -> RelaxationResult:
    """Relax with an explicit queue discipline.

    The marked set and every short jump's final distance do not depend on the
    policy. A long jump's recorded distance is the value at which it first
    left rel8 range, so that one does.
    """
    kernel = _kernel_for(policy, backend)
    dequeues, checks, max_nb = kernel(
        table.start, table.original, table.current, table.marked, table.long_size, policy, seed
    )
    return RelaxationResult(
        assignment=SizeAssignment(tuple(map(bool, table.marked))),
        final_distances=tuple(table.current),
        stats=RelaxStats(dequeues, checks, max_nb),
    )


def relax(table: JumpTable, backend: str | None = None) -> RelaxationResult:
    """Mark the long jumps of a fresh all-short table (FIFO queue)."""
    return relax_with_order(table, "fifo", backend=backend)
