"""Command line: ``geoprover prove FILE`` and ``geoprover bench DIR``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from .dsl import DSLError, parse_file
from .geomodel import ConstructionError
from .groebner import DEFAULT_MAX_PAIRS
from .prover import FALSE, TRUE, UNKNOWN, ProofTask, ProverConfig, prove
from .translate import TranslationError

EXPECTED = {"t": TRUE, "true": TRUE, "f": FALSE, "false": FALSE}

CORRECT = "correct"
INCORRECT = "incorrect"
INCONCLUSIVE = "inconclusive"
TIMEOUT = "timeout"


@dataclass
class BenchRecord:
    name: str
    expected: str
    obtained: str
    outcome: str
    ms: int

    def row(self) -> list:
        return [self.name, self.expected, self.obtained, self.outcome, str(self.ms)]


def _config(args, details: bool = False) -> ProverConfig:
    return ProverConfig(timeout=args.timeout, max_pairs=args.max_pairs,
                        fix_second_point=args.fix_second_point,
                        parametric=not args.plain, details=details)


def cmd_prove(args) -> int:
    try:
        construction, statement, mode = parse_file(args.file)
        details = args.details or mode == "ProveDetails"
        result = prove(ProofTask(construction, statement, _config(args, details)))
    except (OSError, DSLError, ConstructionError, TranslationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    if args.debug:
        for line in result.log:
            print(line, file=sys.stderr)
    print(result.render(details))
    if not args.debug:
        print(f"Benchmarking: {round(result.elapsed_ms)} ms", file=sys.stderr)
    return 2 if result.verdict == UNKNOWN else 0


def read_manifest(path: Path) -> dict:
    out = {}
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2 or parts[1].lower() not in EXPECTED:
            raise ValueError(f"{path}:{lineno}: expected '<name> <t|f>'")
        out[parts[0].removesuffix(".geo")] = EXPECTED[parts[1].lower()]
    return out


def classify(expected: str, obtained: str, reason: str = "") -> str:
    if obtained in (TRUE, FALSE):
        return CORRECT if obtained == expected else INCORRECT
    if "time" in reason:
        return TIMEOUT
    return INCONCLUSIVE


def run_one(path: str, expected: str, config: ProverConfig) -> BenchRecord:
    name = Path(path).stem
    start = time.perf_counter()
    try:
        c, s, _ = parse_file(path)
        r = prove(ProofTask(c, s, config))
        obtained, reason = r.verdict, r.reason
    except Exception as exc:  # a broken test is inconclusive, never correct
        obtained, reason = "ERROR", str(exc)
    ms = round((time.perf_counter() - start) * 1000)
    return BenchRecord(name, expected, obtained, classify(expected, obtained, reason), ms)


def run_bench(corpus: Path, config: ProverConfig, jobs: int = 1, warn=None) -> list:
    manifest = read_manifest(corpus / "manifest.tsv")
    todo = []
    for path in sorted(corpus.glob("*.geo")):
        if path.stem not in manifest:
            if warn:
                warn(f"warning: {path.name} has no manifest entry, skipped")
            continue
        todo.append((str(path), manifest[path.stem]))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = [pool.submit(run_one, p, e, config) for p, e in todo]
            records = [f.result() for f in futures]
    else:
        records = [run_one(p, e, config) for p, e in todo]
    return sorted(records, key=lambda r: r.name)


def summary(records) -> str:
    counts = {k: sum(1 for r in records if r.outcome == k)
              for k in (CORRECT, INCORRECT, INCONCLUSIVE, TIMEOUT)}
    return (f"correct={counts[CORRECT]} incorrect={counts[INCORRECT]} "
            f"inconclusive={counts[INCONCLUSIVE] + counts[TIMEOUT]} (timeout={counts[TIMEOUT]}); "
            f"properly working in {counts[CORRECT]}/{len(records)} cases")


def human_table(records) -> str:
    width = max([len(r.name) for r in records] + [4])
    lines = [f"{'name':<{width}}  expected  obtained  class         ms"]
    for r in records:
        lines.append(f"{r.name:<{width}}  {r.expected:<8}  {r.obtained:<8}  {r.outcome:<12}  {r.ms:>6}")
    return "\n".join(lines)


def machine_table(records, fmt: str) -> str:
    if fmt == "json":
        return json.dumps([asdict(r) for r in records], indent=1)
    rows = [["name", "expected", "obtained", "class", "ms"]] + [r.row() for r in records]
    return "\n".join("\t".join(r) for r in rows)


def cmd_bench(args) -> int:
    corpus = Path(args.dir)
    try:
        records = run_bench(corpus, _config(args), args.jobs,
                            warn=lambda m: print(m, file=sys.stderr))
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    table = machine_table(records, args.format)
    if args.output:
        Path(args.output).write_text(table + "\n", encoding="utf-8")
    else:
        print(table)
    print(human_table(records), file=sys.stderr)
    print(summary(records), file=sys.stderr)
    return 1 if any(r.outcome == INCORRECT for r in records) else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="geoprover",
                                     description="Prove plane geometry statements by Gröbner bases.")
    sub = parser.add_subparsers(dest="command", required=True)

    def budget_flags(p):
        p.add_argument("--timeout", type=float, default=60.0, help="seconds per proof (default 60)")
        p.add_argument("--max-pairs", type=int, default=DEFAULT_MAX_PAIRS,
                       help="maximum pair reductions per proof")
        p.add_argument("--fix-second-point", action="store_true",
                       help="also put the second free point on the x-axis")
        p.add_argument("--plain", action="store_true",
                       help="plain elimination only, without the parametric reduction")

    p = sub.add_parser("prove", help="prove the statement of one .geo file")
    p.add_argument("file")
    p.add_argument("--details", action="store_true", help="print non-degeneracy conditions")
    p.add_argument("--debug", action="store_true", help="print the hypothesis and elimination log")
    budget_flags(p)
    p.set_defaults(func=cmd_prove)

    b = sub.add_parser("bench", help="run a corpus directory with manifest.tsv")
    b.add_argument("dir")
    b.add_argument("--format", choices=("tsv", "json"), default="tsv")
    b.add_argument("--jobs", type=int, default=1)
    b.add_argument("--output", help="write the machine table here instead of stdout")
    budget_flags(b)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "debug", False):
        logging.basicConfig(level=logging.WARNING)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
