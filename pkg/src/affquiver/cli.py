"""Command-line front end: ``affquiver RING [--format dot|json|text] [--oracle] ...``."""
from __future__ import annotations

import argparse
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from .local_quiver import affine_quiver, invariant_violations, local_quiver
from .oracle import ORACLE_LIMIT, HypothesisError, oracle_quiver
from .rings import RingError, local_decomposition, make_ring

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_ORACLE = 3
EXIT_INVARIANT = 4

log = logging.getLogger("affquiver")


@dataclass
class RunConfig:
    ring_spec: str
    format: str = "text"
    oracle: bool = False
    check_invariants: bool = False
    output_path: str | None = None


def _write_atomic(path: str, text: str) -> None:
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(config: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    if config.format not in ("dot", "json", "text"):
        print(f"error: unknown format {config.format!r}", file=stderr)
        return EXIT_INPUT
    try:
        ring = make_ring(config.ring_spec)
    except RingError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INPUT

    factors = [f.ring for f in local_decomposition(ring)]
    if config.oracle:
        too_big = [F for F in factors if F.order ** 2 > ORACLE_LIMIT]
        if too_big:
            print(f"error: oracle needs |R_i|^2 <= {ORACLE_LIMIT}; too large: "
                  + ", ".join(str(F) for F in too_big), file=stderr)
            return EXIT_INPUT

    quiver = affine_quiver(ring)

    if config.oracle:
        for F in factors:
            closed = local_quiver(F)
            try:
                brute = oracle_quiver(F)
            except (HypothesisError, ArithmeticError, AssertionError) as exc:
                print(f"error: oracle failed on {F}: {exc}", file=stderr)
                return EXIT_ORACLE
            if brute != closed:
                print(f"oracle disagreement on {F}\nclosed form: {closed.to_json()}\n"
                      f"oracle:      {brute.to_json()}", file=stderr)
                return EXIT_ORACLE
            log.info("oracle agrees on %s", F)

    if config.check_invariants:
        problems = invariant_violations(ring, quiver)
        if problems:
            for p in problems:
                print(f"invariant violated: {p}", file=stderr)
            return EXIT_INVARIANT

    if config.format == "dot":
        text = quiver.to_dot()
    elif config.format == "json":
        text = quiver.to_json() + "\n"
    else:
        text = f"ring: {ring}\nlocal factors: {', '.join(str(F) for F in factors)}\n" + quiver.to_text()

    if config.output_path:
        _write_atomic(config.output_path, text)
    else:
        stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="affquiver",
        description="Gabriel quiver of the complex algebra of the affine monoid Aff(R).")
    ap.add_argument("ring", nargs="?", help='ring expression, e.g. "Z/8", "GF(9)", "Z/4 x Z/3"')
    ap.add_argument("--format", choices=["dot", "json", "text"], default="text")
    ap.add_argument("--oracle", action="store_true",
                    help="cross-check every local factor against the brute-force monoid computation")
    ap.add_argument("--check-invariants", action="store_true")
    ap.add_argument("--output", metavar="PATH")
    ap.add_argument("--table", metavar="PATH", help='ring table file (same as "table:PATH")')
    ap.add_argument("-v", "--verbose", action="store_true")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    if args.table and args.ring:
        print("error: give either a ring expression or --table, not both", file=sys.stderr)
        return EXIT_INPUT
    spec = f"table:{args.table}" if args.table else args.ring
    if not spec:
        print("error: no ring given", file=sys.stderr)
        return EXIT_INPUT
    return run(RunConfig(spec, args.format, args.oracle, args.check_invariants, args.output))


if __name__ == "__main__":
    sys.exit(main())
