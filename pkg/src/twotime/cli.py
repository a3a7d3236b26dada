"""Command-line entry points: ``check``, ``compile``, ``run`` and ``examples``.

Exit codes: 0 on success, 1 when a law or verification fails, 2 on usage
or parse errors.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Sequence

from . import circuit as cm
from . import quantum as qm
from .errors import TooManyWires, TwotimeError
from .examples import EXAMPLES, write_example
from .interp import default_interp, interpret_circuit, load_signature
from .laws import LAWS, MUTATIONS, run_laws, run_mutation
from .program import parse_program, result_to_json, run, sample
from .wires import MAX_WIRES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


@dataclass(frozen=True)
class Config:
    tolerance: float = qm.TOL
    seed: int = 0
    max_wires: int = MAX_WIRES
    signature: Optional[Path] = None
    out: Optional[Path] = None


class _UsageError(Exception):
    pass


def _config(args: argparse.Namespace) -> Config:
    seed = args.seed
    if seed is None:
        env = os.environ.get("TWOTIME_SEED")
        try:
            seed = int(env) if env else 0
        except ValueError:
            raise _UsageError(f"TWOTIME_SEED must be an integer, got {env!r}") from None
    if not args.tolerance > 0:
        raise _UsageError("--tolerance must be positive")
    if not 0 < args.max_wires <= MAX_WIRES:
        raise _UsageError(f"--max-wires must be between 1 and {MAX_WIRES}")
    sig = Path(args.signature) if getattr(args, "signature", None) else None
    out = Path(args.out) if args.out else None
    return Config(args.tolerance, seed, args.max_wires, sig, out)


def _emit(cfg: Config, payload) -> None:
    text = json.dumps(payload, indent=2) + "\n"
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        cfg.out.write_text(text)


def _signature(cfg: Config):
    if cfg.signature is None:
        return cm.default_signature(), default_interp()
    return load_signature(cfg.signature, cfg.tolerance)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise _UsageError(str(exc)) from None


def _guard_width(c: cm.Circuit, cfg: Config) -> None:
    width = cm.circuit_width(c)
    if width > cfg.max_wires:
        raise TooManyWires(f"circuit needs {width} live wires, limit is {cfg.max_wires}")


def cmd_check(cfg: Config, laws: Sequence[str] = (), mutation: Optional[str] = None) -> int:
    if mutation is not None:
        if laws:
            raise _UsageError("--mutation selects its own law; do not combine it with --law")
        reports = run_mutation(mutation, cfg.seed)
    else:
        reports = run_laws(laws, cfg.seed)
    for r in reports:
        print(r.line(), file=sys.stderr)
    _emit(cfg, [r.to_json() for r in reports])
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_compile(cfg: Config, circuit_file: str) -> int:
    sig, gi = _signature(cfg)
    c = cm.deserialize(sig, _read(circuit_file))
    _guard_width(c, cfg)
    op = interpret_circuit(gi, c)
    cp, tp = qm.is_cp(op, cfg.tolerance), qm.is_tp(op, cfg.tolerance)
    payload = qm.superop_to_json(op)
    payload["cp"] = {"passed": cp.passed, "deviation": cp.deviation}
    payload["tp"] = {"passed": tp.passed, "deviation": tp.deviation}
    _emit(cfg, payload)
    return EXIT_OK if cp.passed and tp.passed else EXIT_FAIL


def cmd_run(cfg: Config, program_file: str, shots: Optional[int] = None) -> int:
    sig, gi = _signature(cfg)
    prog = parse_program(_read(program_file))
    if len(prog.inputs) > cfg.max_wires:
        raise TooManyWires(f"program has {len(prog.inputs)} inputs, limit is {cfg.max_wires}")
    result = run(gi, sig, prog, tol=cfg.tolerance)
    for b in result.branches:
        _guard_width(b.trace, cfg)
    payload = result_to_json(result, cfg.tolerance)
    if shots is not None:
        if shots < 0:
            raise _UsageError("--sample needs a non-negative count")
        counts = sample(result, shots, cfg.seed)
        payload["samples"] = {"shots": shots, "seed": cfg.seed,
                              "counts": [{"params": list(k), "count": v} for k, v in counts.items()]}
    _emit(cfg, payload)
    return EXIT_OK


def cmd_examples(cfg: Config, name: str) -> int:
    directory = cfg.out if cfg.out is not None else Path(".")
    for path in write_example(name, directory):
        print(path)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tolerance", type=float, default=qm.TOL, help="numerical tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=None, help="random seed (fallback: $TWOTIME_SEED, then 0)")
    common.add_argument("--max-wires", type=int, default=MAX_WIRES, help=f"wire limit, at most {MAX_WIRES}")
    common.add_argument("--out", help="output file (directory for 'examples'); default stdout")

    parser = argparse.ArgumentParser(prog="twotime", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", parents=[common], help="run the law suites")
    p.add_argument("--law", action="append", default=[], help=f"law to run (repeatable): {', '.join(LAWS)}")
    p.add_argument("--mutation", choices=sorted(MUTATIONS), help="run one deliberately broken variant")

    p = sub.add_parser("compile", parents=[common], help="interpret a circuit file as a superoperator")
    p.add_argument("circuit")
    p.add_argument("--signature", help="signature file extending the default gates")

    p = sub.add_parser("run", parents=[common], help="execute a program exactly")
    p.add_argument("program")
    p.add_argument("--signature", help="signature file extending the default gates")
    p.add_argument("--sample", type=int, default=None, metavar="N", help="also draw N seeded samples")

    p = sub.add_parser("examples", parents=[common], help="write a bundled example program and signature")
    p.add_argument("name", help=f"one of: {', '.join(EXAMPLES)}")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        cfg = _config(args)
        if args.command == "check":
            return cmd_check(cfg, args.law, args.mutation)
        if args.command == "compile":
            return cmd_compile(cfg, args.circuit)
        if args.command == "run":
            return cmd_run(cfg, args.program, args.sample)
        return cmd_examples(cfg, args.name)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except TwotimeError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
