"""Command-line front end.

Exit codes: 0 ok, 1 usage, 2 parse error, 3 semantic or range error,
4 algorithms disagree.
"""

from __future__ import annotations

import argparse
import csv
import gc
import re
import sys
import time
from pathlib import Path

from . import parser as asmparser
from .encoder import EncodeError, decode_verify, encode, final_layout, total_size
from .ir import Mode, SizeAssignment, SourceProgram, ValidationError, ensure_valid
from .layout import layout_all_short
from .oracles import DEFAULT_MAX_JUMPS, brute_force_minimal, iterative_fixpoint
from .relax import RelaxationResult, available_backends, relax
from .testgen import GenParams, gen_cascade, gen_paper_mutual, gen_random

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_SEMANTIC, EXIT_MISMATCH = 0, 1, 2, 3, 4


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _split_list(text: str) -> list[str]:
    return [t for t in re.split(r"[;,\s]+", text) if t]


def _load(path: str, mode: str | None = None) -> SourceProgram:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise CliError(EXIT_USAGE, f"cannot read {path}: {exc.strerror}") from None
    try:
        program = asmparser.parse(text)
    except asmparser.AsmSyntaxError as exc:
        raise CliError(EXIT_PARSE, "\n".join(f"{path}:{e}" for e in exc.errors)) from None
    if mode is not None:
        program = program.with_mode(Mode.from_bits(mode))
    try:
        ensure_valid(program)
    except ValidationError as exc:
        raise CliError(EXIT_SEMANTIC, "\n".join(f"{path}: {e}" for e in exc.errors)) from None
    return program


def _linear(program: SourceProgram) -> RelaxationResult:
    _, table = layout_all_short(program)
    return relax(table)


def _assign(program: SourceProgram, algo: str) -> SizeAssignment:
    try:
        if algo == "iterative":
            return iterative_fixpoint(program).assignment
        return _linear(program).assignment
    except EncodeError as exc:
        raise CliError(EXIT_SEMANTIC, str(exc)) from None


def cmd_asm(args) -> int:
    program = _load(args.input, args.mode)
    assignment = _assign(program, args.algo)
    try:
        encoded = encode(program, assignment)
    except EncodeError as exc:
        raise CliError(EXIT_SEMANTIC, str(exc)) from None
    mismatch = decode_verify(encoded, program, assignment)
    if mismatch is not None:
        raise CliError(EXIT_SEMANTIC, f"internal error: decode verification failed: {mismatch}")
    Path(args.out).write_bytes(encoded.data)
    if args.listing:
        Path(args.listing).write_text(encoded.listing_text())
    return EXIT_OK


def cmd_explain(args) -> int:
    program = _load(args.input, args.mode)
    _, table = layout_all_short(program)
    originals = list(table)
    result = relax(table)
    try:
        encoded = encode(program, result.assignment)
    except EncodeError as exc:
        raise CliError(EXIT_SEMANTIC, str(exc)) from None
    labels, offsets = final_layout(program, result.assignment)
    header = ("idx", "start", "orig_dist", "final_dist", "size", "long_size", "final_off", "final_disp")
    rows = []
    for rec, final_dist, is_long, off in zip(
        originals, result.final_distances, result.assignment.is_long, offsets
    ):
        end = off + (rec.long_size if is_long else 2)
        disp = labels[program.items[rec.item_index].target] - end
        rows.append((rec.index, rec.all_short_start, rec.original_distance, final_dist,
                     "long" if is_long else "short", rec.long_size, off, disp))
    widths = [max(len(str(r[c])) for r in [header, *rows]) for c in range(len(header))]
    for row in [header, *rows]:
        print("  ".join(str(v).rjust(w) for v, w in zip(row, widths)).rstrip())
    s = result.stats
    print(f"# {sum(result.assignment.is_long)} long of {len(rows)} jumps; "
          f"{s.dequeues} dequeues, {s.neighbor_checks} neighbor checks; "
          f"{len(encoded.data)} bytes", file=sys.stderr)
    return EXIT_OK


def cmd_compare(args) -> int:
    program = _load(args.input, args.mode)
    try:
        results = {"linear": _linear(program).assignment,
                   "iterative": iterative_fixpoint(program).assignment}
        if program.jump_count <= DEFAULT_MAX_JUMPS:
            results["brute-force"] = brute_force_minimal(program).assignment
    except EncodeError as exc:
        raise CliError(EXIT_SEMANTIC, str(exc)) from None
    if args.debug_perturb is not None:
        flipped = list(results["linear"].is_long)
        if not 0 <= args.debug_perturb < len(flipped):
            raise CliError(EXIT_USAGE, f"--debug-perturb: no jump {args.debug_perturb}")
        flipped[args.debug_perturb] = not flipped[args.debug_perturb]
        results["linear"] = SizeAssignment(tuple(flipped))
    reference = results["linear"]
    differing = [name for name, a in results.items() if a != reference]
    if differing:
        for name, a in results.items():
            print(f"{name:12} long = {sorted(a.long_set())}")
        for name in differing:
            diff = sorted(reference.long_set() ^ results[name].long_set())
            print(f"linear vs {name}: jumps {diff} differ")
        return EXIT_MISMATCH
    print(f"{len(results)} algorithms agreed: {sum(reference.is_long)} long of "
          f"{len(reference)} jumps, {total_size(program, reference)} bytes")
    return EXIT_OK


def _generate(kind: str, jumps: int, seed: int, mode: Mode) -> SourceProgram:
    if kind == "paper":
        return gen_paper_mutual()
    if kind == "cascade":
        return gen_cascade(jumps, mode) if jumps else SourceProgram(mode)
    return gen_random(GenParams(seed=seed, jump_count=jumps, mode=mode))


class _Cell:
    """One (algorithm, program) benchmark cell; ``run`` times a single repetition."""

    def __init__(self, algo: str, program: SourceProgram):
        self.algo = algo
        self.program = program
        self.best: int | None = None
        self.backend = {"linear": None, "linear-python": "python", "linear-cython": "cython"}.get(algo)
        self.table = None if algo == "iterative" else layout_all_short(program)[1]

    def run(self) -> None:
        if self.table is not None:
            self.table.reset()
        gc.disable()
        try:
            t0 = time.perf_counter_ns()
            if self.table is None:
                self.outcome = iterative_fixpoint(self.program)
            else:
                self.outcome = relax(self.table, backend=self.backend)
            dt = time.perf_counter_ns() - t0
        finally:
            gc.enable()
        self.best = dt if self.best is None else min(self.best, dt)

    def row(self) -> list:
        if self.table is None:
            assignment, dq, nc = self.outcome.assignment, 0, 0
        else:
            stats = self.outcome.stats
            assignment, dq, nc = self.outcome.assignment, stats.dequeues, stats.neighbor_checks
        return [self.algo, self.program.jump_count, self.best, dq, nc,
                total_size(self.program, assignment)]


def run_bench(programs: list[SourceProgram], algos: list[str], reps: int) -> list[list]:
    """Best-of-``reps`` relaxation time per cell.

    Repetitions are interleaved across cells so a burst of machine noise
    hits every size rather than one of them.
    """
    cells = [_Cell(a, p) for p in programs for a in algos]
    for _ in range(reps):
        for cell in cells:
            cell.run()
    return [c.row() for c in cells]


BENCH_ALGOS = ("linear", "linear-python", "linear-cython", "iterative")


def cmd_bench(args) -> int:
    try:
        sizes = [int(t) for t in _split_list(args.jumps)]
    except ValueError:
        raise CliError(EXIT_USAGE, f"--jumps: not a list of integers: {args.jumps!r}") from None
    algos = _split_list(args.algo)
    for a in algos:
        if a not in BENCH_ALGOS:
            raise CliError(EXIT_USAGE, f"--algo: unknown algorithm {a!r}")
        if a == "linear-cython" and "cython" not in available_backends():
            raise CliError(EXIT_USAGE, "--algo linear-cython: compiled kernel not built")
    if args.reps < 5:
        raise CliError(EXIT_USAGE, "--reps must be at least 5")
    if any(n < 0 for n in sizes):
        raise CliError(EXIT_USAGE, "jump counts must be >= 0")
    mode = Mode.from_bits(args.mode or 32)
    rows = run_bench([_generate(args.kind, n, args.seed, mode) for n in sizes], algos, args.reps)
    out = open(args.csv, "w", newline="") if args.csv else sys.stdout
    try:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["algo", "jumps", "ns", "dequeues", "neighbor_checks", "bytes"])
        writer.writerows(rows)
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.jumps < 0:
        raise CliError(EXIT_USAGE, "--jumps must be >= 0")
    program = _generate(args.kind, args.jumps, args.seed, Mode.from_bits(args.mode or 32))
    text = asmparser.format(program)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="jmprelax", description="x86 jump assembler with linear-time jump sizing")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    modes = ("16", "32", "64")

    a = sub.add_parser("asm", help="assemble to a flat binary")
    a.add_argument("input")
    a.add_argument("--out", "-o", required=True)
    a.add_argument("--listing")
    a.add_argument("--algo", choices=("linear", "iterative"), default="linear")
    a.add_argument("--mode", choices=modes, help="override the file's .mode")
    a.set_defaults(func=cmd_asm)

    e = sub.add_parser("explain", help="print the per-jump sizing table")
    e.add_argument("input")
    e.add_argument("--mode", choices=modes)
    e.set_defaults(func=cmd_explain)

    c = sub.add_parser("compare", help="check linear, iterative and brute force agree")
    c.add_argument("input")
    c.add_argument("--mode", choices=modes)
    c.add_argument("--debug-perturb", type=int, metavar="K",
                   help="flip jump K in the linear result (exercises the mismatch path)")
    c.set_defaults(func=cmd_compare)

    b = sub.add_parser("bench", help="time the relaxation phase, CSV out")
    b.add_argument("--kind", choices=("cascade", "random"), default="cascade")
    b.add_argument("--jumps", default="10000;20000;40000")
    b.add_argument("--seed", type=int, default=1)
    b.add_argument("--algo", default="linear", help=f"list from {', '.join(BENCH_ALGOS)}")
    b.add_argument("--reps", type=int, default=5)
    b.add_argument("--mode", choices=modes)
    b.add_argument("--csv")
    b.set_defaults(func=cmd_bench)

    g = sub.add_parser("gen", help="write a generated program as assembly text")
    g.add_argument("--kind", choices=("paper", "cascade", "random"), default="random")
    g.add_argument("--jumps", type=int, default=8)
    g.add_argument("--seed", type=int, default=1)
    g.add_argument("--mode", choices=modes)
    g.add_argument("--out", "-o")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
