"""Command-line harness: ``superfft fft | pfaffian | selftest``.

Exit codes: 0 pass, 1 verification failure, 2 guard exceeded, 64 usage error.
Reports are UTF-8 JSON, one document per run, with sorted keys.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass
from typing import List, Optional

from .invariants import DEFAULT_MAX_CELLS, GuardExceeded, fft_spanning_report
from . import selftest, superpfaffian

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_GUARD = 2
EXIT_USAGE = 64

log = logging.getLogger("superfft")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    group: Optional[str] = None
    m: Optional[int] = None
    n: Optional[int] = None
    N: Optional[int] = None
    max_cells: Optional[int] = DEFAULT_MAX_CELLS
    out: Optional[str] = None
    verbosity: int = 0
    emit_basis: bool = False
    override_guard: bool = False


def default_max_cells() -> int:
    env = os.environ.get("SUPERFFT_MAX_CELLS")
    if env is None:
        return DEFAULT_MAX_CELLS
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"SUPERFFT_MAX_CELLS must be an integer, got {env!r}")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="superfft", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="count", default=0)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    f = sub.add_parser("fft", help="verify the matching-invariant spanning statement")
    f.add_argument("--group", choices=("osp", "pe"), required=True)
    f.add_argument("--m", type=int, default=None, help="even dimension (osp)")
    f.add_argument("--n", type=int, required=True, help="odd dimension is 2n (osp) or n|n (pe)")
    f.add_argument("--N", type=int, required=True, help="number of tensor slots")
    f.add_argument("--max-cells", type=int, default=None)
    f.add_argument("--override-guard", action="store_true")
    f.add_argument("--emit-basis", action="store_true")
    f.add_argument("--out")

    q = sub.add_parser("pfaffian", help="certify the super Pfaffian")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--factorization", action="store_true", help="also check the Gram factorization (m >= 2)")
    q.add_argument("--print-delta", action="store_true", help="include the polynomial in the report")
    q.add_argument("--normalization", choices=("unit", "standard"), default="unit")
    q.add_argument("--override-guard", action="store_true")
    q.add_argument("--out")

    s = sub.add_parser("selftest", help="run the built-in property suites")
    s.add_argument("--only", choices=sorted(selftest.SUITES))
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    return p


def _emit(doc: dict, out: Optional[str]) -> None:
    text = json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_fft(cfg: RunConfig) -> int:
    if cfg.n is None or cfg.n < 0 or cfg.N is None or cfg.N < 0:
        raise UsageError("--n and --N must be non-negative")
    if cfg.group == "osp":
        if cfg.m is None or cfg.m < 0:
            raise UsageError("osp needs a non-negative --m")
        m = cfg.m
        if m + 2 * cfg.n == 0:
            raise UsageError("the super vector space must be nonzero")
    else:
        if cfg.m is not None and cfg.m != cfg.n:
            raise UsageError("the periplectic group lives on dim n|n; drop --m or set it to n")
        if cfg.n == 0:
            raise UsageError("pe needs n >= 1")
        m = 0
    limit = None if cfg.override_guard else cfg.max_cells
    try:
        report = fft_spanning_report(cfg.group, m, cfg.n, cfg.N, max_cells=limit, emit_basis=cfg.emit_basis)
    except GuardExceeded as exc:
        _emit({"schema": 1, "status": "guard", "error": str(exc)}, cfg.out)
        return EXIT_GUARD
    _emit(report, cfg.out)
    return EXIT_OK if report["pass"] else EXIT_FAIL


def cmd_pfaffian(cfg: RunConfig, factorization: bool = False, print_delta: bool = False,
                 normalization: str = "unit") -> int:
    if cfg.m is None or cfg.n is None or cfg.m < 1 or cfg.n < 0:
        raise UsageError("pfaffian needs --m >= 1 and --n >= 0")
    if factorization and cfg.m < 2:
        raise UsageError("--factorization needs m >= 2")
    try:
        gen = superpfaffian.GenericConfig(cfg.m, cfg.n, normalization, override_guard=cfg.override_guard)
    except superpfaffian.GuardExceeded as exc:
        _emit({"schema": 1, "status": "guard", "error": str(exc)}, cfg.out)
        return EXIT_GUARD
    cert = superpfaffian.super_pfaffian(gen)
    if cert.is_polynomial:
        superpfaffian.verify_sosp_invariance(gen, cert)
    if factorization:
        cert.factorization_ok = superpfaffian.verify_gram_factorization(gen)
    _emit(cert.to_json(include_delta=print_delta), cfg.out)
    return EXIT_OK if cert.passed() else EXIT_FAIL


def cmd_selftest(only: Optional[str] = None, seed: int = 0, out: Optional[str] = None) -> int:
    ok, record = selftest.run(only, seed)
    _emit(record, out)
    return EXIT_OK if ok else EXIT_FAIL


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        if args.command == "fft":
            cfg = RunConfig("fft", args.group, args.m, args.n, args.N,
                            args.max_cells if args.max_cells is not None else default_max_cells(),
                            args.out, args.verbose, args.emit_basis, args.override_guard)
            return cmd_fft(cfg)
        if args.command == "pfaffian":
            cfg = RunConfig("pfaffian", None, args.m, args.n, None, None, args.out, args.verbose,
                            override_guard=args.override_guard)
            return cmd_pfaffian(cfg, args.factorization, args.print_delta, args.normalization)
        return cmd_selftest(args.only, args.seed, args.out)
    except UsageError as exc:
        sys.stderr.write(f"superfft: error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
