"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 verification failure.
"""

from __future__ import annotations

import argparse
import csv
import sys
from typing import Optional, Sequence

import numpy as np

from . import counting, io
from .clubseq import make_club_sequence
from .core import ValidationError, num_qudits, parse_dits
from .eigensynth import eigen_synthesize
from .householder import club_householder_onto
from .lowering import lower_circuit
from .triangle import synthesize
from .verify import compare, haar_random_unitary, random_state

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 1, 2


def _check_dims(what: str, d: int, n: int, args) -> None:
    if args.d is not None and args.d != d:
        raise ValidationError(f"{what} has d={d}, --d says {args.d}")
    if args.n is not None and args.n != n:
        raise ValidationError(f"{what} has n={n}, --n says {args.n}")


def cmd_synth(args) -> int:
    u, d, n = io.load_matrix(args.input)
    _check_dims(args.input, d, n, args)
    if args.method == "eigen":
        c = eigen_synthesize(u, d, n)
    else:
        c = synthesize(u, d, n, fix_phase=args.fix_phase, prune_identities=args.prune)
    io.save_circuit(args.out, c)
    print(f"{len(c)} gates written to {args.out}")
    if args.no_verify:
        return EXIT_OK
    stored, _ = io.load_circuit(args.out)
    report = compare(u, stored, tol=1e-9)
    print(report)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_statesynth(args) -> int:
    psi, d, n = io.load_state(args.input)
    _check_dims(args.input, d, n, args)
    onto = parse_dits(args.onto, d, n) if args.onto else (0,) * n
    c = club_householder_onto(psi, onto, d, fix_phase=args.fix_phase)
    io.save_circuit(args.out, c)
    if args.verbose:
        shown = onto if any(onto) else None
        for term, g in zip(make_club_sequence(d, n), c):
            label = term.render(args.utf8)
            print(f"{label}  {g.word}" if shown is None else f"{label}  {g.word}  (shifted by {shown})",
                  file=sys.stderr)
    print(f"{len(c)} gates written to {args.out}")
    return EXIT_OK


def _pairs(args) -> list[tuple[int, int]]:
    return [(d, n) for d in args.d for n in args.n]


def cmd_count(args) -> int:
    pairs = _pairs(args)
    rows = []
    for d, n in pairs:
        if args.chain:
            table = counting.chain_table(d, n)
            total = counting.chain_total(d, n)
        else:
            table = counting.f_table(d, n)
            total = counting.total_control_boxes(d, n)
        rows.append((d, n, table, total))
    if len(rows) == 1 and not args.per_k:
        print(rows[0][3])
    else:
        for d, n, table, total in rows:
            line = f"d={d} n={n} total={total}"
            if args.per_k:
                line += " " + " ".join(f"k{k}={v}" for k, v in enumerate(table.as_list()))
            print(line)
    if args.csv:
        width = max(len(t.as_list()) for _, _, t, _ in rows) if args.per_k else 0
        with open(args.csv, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(["d", "n", "total"] + [f"k{k}" for k in range(width)])
            for d, n, table, total in rows:
                counts = [str(x) for x in table.as_list()] if args.per_k else []
                w.writerow([d, n, str(total)] + counts + [""] * (width - len(counts)))
    return EXIT_OK


def cmd_lower(args) -> int:
    c, r = io.load_circuit(args.input)
    if r:
        raise ValidationError("circuit already has ancillas")
    low = lower_circuit(c, args.max_ancillas)
    io.save_circuit(args.out, low)
    print(f"{len(low)} gates on {low.n} data + {low.r} ancilla lines written to {args.out}")
    return EXIT_OK


def cmd_verify(args) -> int:
    u, d, n = io.load_matrix(args.unitary)
    c, r = io.load_circuit(args.circuit)
    if r:
        raise ValidationError("verify expects a circuit without ancillas")
    if (c.d, c.n) != (d, n):
        raise ValidationError(f"circuit is (d={c.d}, n={c.n}), unitary is (d={d}, n={n})")
    report = compare(u, c, tol=args.tol, up_to_phase=args.up_to_phase)
    print(report.to_json() if args.json else report)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_simulate(args) -> int:
    c, r = io.load_circuit(args.circuit)
    psi, d, n = io.load_state(args.state, normalized=False)
    if (c.d, c.n - r) != (d, n):
        raise ValidationError(f"circuit is (d={c.d}, n={c.n - r}), state is (d={d}, n={n})")
    if r:
        full = np.zeros((d**n, d**r), dtype=complex)
        full[:, 0] = psi
        psi = full.reshape(-1)
    states = c.trace(psi) if args.trace else [c.apply(psi)]
    out = io.state_to_dict(states[-1], d, c.n)
    if args.trace:
        out["trace"] = [io.state_to_dict(s, d, c.n)["entries"] for s in states]
    io.write_json(args.out, out)
    print(f"final state written to {args.out}")
    return EXIT_OK


def cmd_random_unitary(args) -> int:
    d, n = _dims_for(args.dim, args.d)
    io.save_matrix(args.out, haar_random_unitary(args.dim, args.seed), d, n)
    return EXIT_OK


def cmd_random_state(args) -> int:
    d, n = _dims_for(args.dim, args.d)
    io.save_state(args.out, random_state(args.dim, args.seed), d, n)
    return EXIT_OK


def cmd_sequence(args) -> int:
    for term in make_club_sequence(args.d, args.n):
        print(f"{term.render(args.utf8)}  {term.control_word()}")
    return EXIT_OK


def _dims_for(dim: int, d: Optional[int]) -> tuple[int, int]:
    if d is not None:
        return d, num_qudits(dim, d)
    for base in range(2, dim + 1):
        try:
            return base, num_qudits(dim, base)
        except ValidationError:
            continue
    raise ValidationError(f"dimension {dim} is not a power of any d >= 2")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--utf8", action=argparse.BooleanOptionalAction, default=True,
                        help="render the club symbol as U+2663 (default) or 'c'")
    p = argparse.ArgumentParser(prog="quditqr", description="Exact qudit circuit synthesis.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name: str, **kw) -> argparse.ArgumentParser:
        return sub.add_parser(name, parents=[common], **kw)

    s = add("synth", help="synthesize a unitary")
    s.add_argument("--d", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--method", choices=["triangle", "eigen"], default="triangle")
    s.add_argument("--prune", action="store_true", help="drop identity gates")
    s.add_argument("--fix-phase", action=argparse.BooleanOptionalAction, default=True,
                   help="rephase payloads so no diagonal gates are needed (default on)")
    s.add_argument("--no-verify", action="store_true")
    s.set_defaults(func=cmd_synth)

    s = add("statesynth", help="collapse a state onto a basis state")
    s.add_argument("--d", type=int)
    s.add_argument("--n", type=int)
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--onto", help="target dit string, e.g. 012 (default all zeros)")
    s.add_argument("--fix-phase", action="store_true", help="append a gate removing the final phase")
    s.add_argument("-v", "--verbose", action="store_true")
    s.set_defaults(func=cmd_statesynth)

    s = add("count", help="exact control counts")
    s.add_argument("--d", type=int, nargs="+", required=True)
    s.add_argument("--n", type=int, nargs="+", required=True)
    s.add_argument("--per-k", action="store_true")
    s.add_argument("--chain", action="store_true", help="nearest-neighbour chain counts")
    s.add_argument("--csv")
    s.set_defaults(func=cmd_count)

    s = add("lower", help="expand to gates with at most one control")
    s.add_argument("--in", dest="input", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--max-ancillas", type=int)
    s.set_defaults(func=cmd_lower)

    s = add("verify", help="compare a circuit with a unitary")
    s.add_argument("--unitary", required=True)
    s.add_argument("--circuit", required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--up-to-phase", action="store_true")
    s.add_argument("--json", action="store_true")
    s.set_defaults(func=cmd_verify)

    s = add("simulate", help="run a circuit on a state")
    s.add_argument("--circuit", required=True)
    s.add_argument("--state", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--trace", action="store_true", help="store every intermediate state")
    s.set_defaults(func=cmd_simulate)

    for name, func, what in (("random-unitary", cmd_random_unitary, "Haar unitary"),
                             ("random-state", cmd_random_state, "generic random state")):
        s = add(name, help=f"write a seeded {what}")
        s.add_argument("--dim", type=int, required=True)
        s.add_argument("--d", type=int, help="local dimension (inferred if omitted)")
        s.add_argument("--seed", type=int, default=0)
        s.add_argument("--out", required=True)
        s.set_defaults(func=func)

    s = add("sequence", help="print the club sequence")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.set_defaults(func=cmd_sequence)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
