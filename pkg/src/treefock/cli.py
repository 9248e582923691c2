"""Command line driver for the verification suites.

Exit codes: 0 all suites passed, 1 a suite failed, 2 usage error,
3 an enumeration cap was exceeded, 4 the report could not be written.
Reports are deterministic for a fixed configuration except for the
timing section, which is kept separate from the suite results.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from typing import Dict, List, Optional, Sequence

from . import __version__
from .errors import CapExceeded
from .suites import COMMANDS, RunConfig, SuiteReport

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_CAP = 3
EXIT_IO = 4

_COMMAND_HELP = {
    "verify-fock": "word combinatorics, norms, embeddings, and the torus action",
    "verify-alpha": "the step-function realization on the product of trees",
    "verify-beta": "the Gaussian polynomial realization and its moments",
    "verify-coherence": "consistency of the realizations across levels",
    "verify-density": "expansion remainders and their exact decay rates",
    "verify-spectral": "grid measures, tensor products, and the constraint grid",
    "simulate": "Monte Carlo cross-checks of exact moments",
    "all": "every verification suite in sequence",
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="treefock",
        description="Run exact verification suites for the tree Fock space, "
                    "its two function-space realizations, and the spectral "
                    "grid calculus.")
    parser.add_argument("--version", action="version",
                        version=f"treefock {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--level-max", type=int, default=2, metavar="N",
                        help="deepest word level to enumerate, 1..4 (default 2)")
    common.add_argument("--degree-max", type=int, default=4, metavar="L",
                        help="largest word degree to enumerate, 1..5 (default 4)")
    common.add_argument("--depth-max", type=int, default=10, metavar="K",
                        help="deepest grid or sample refinement, 1..16 (default 10)")
    common.add_argument("--samples", type=int, default=100_000, metavar="S",
                        help="Monte Carlo sample count (default 100000)")
    common.add_argument("--seed", type=int, default=7, metavar="SEED",
                        help="seed for every randomized choice (default 7)")
    common.add_argument("--backend", choices=("exact", "float"), default="exact",
                        help="exact eighth-root phases or float angles")
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"),
                        default="text", help="report format (default text)")
    common.add_argument("--output", default=None, metavar="PATH",
                        help="write the report here instead of stdout")
    for name in (*COMMANDS, "all"):
        sub.add_parser(name, parents=[common], help=_COMMAND_HELP[name],
                       description=_COMMAND_HELP[name])
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(command=args.command, level_max=args.level_max,
                     degree_max=args.degree_max, depth_max=args.depth_max,
                     samples=args.samples, seed=args.seed,
                     backend=args.backend, fmt=args.fmt, output=args.output)


def run_suites(cfg: RunConfig) -> tuple[List[SuiteReport], Dict[str, float]]:
    names = list(COMMANDS) if cfg.command == "all" else [cfg.command]
    suites: List[SuiteReport] = []
    timings: Dict[str, float] = {}
    start = time.perf_counter()
    for name in names:
        t0 = time.perf_counter()
        suites.extend(COMMANDS[name](cfg))
        timings[name] = round(time.perf_counter() - t0, 3)
    timings["total"] = round(time.perf_counter() - start, 3)
    return suites, timings


def report_dict(cfg: RunConfig, suites: Sequence[SuiteReport],
                timings: Dict[str, float]) -> dict:
    failing = sum(1 for s in suites if not s.passed)
    return {
        "program": "treefock",
        "version": __version__,
        "config": cfg.to_json_dict(),
        "suites": [s.to_json_dict() for s in suites],
        "summary": {
            "suites": len(suites),
            "cases": sum(s.cases for s in suites),
            "failing_suites": failing,
            "passed": failing == 0,
        },
        "timings": timings,
    }


def render_text(cfg: RunConfig, suites: Sequence[SuiteReport],
                timings: Dict[str, float]) -> str:
    lines = [f"treefock {cfg.command}  backend={cfg.backend} "
             f"level<={cfg.level_max} degree<={cfg.degree_max} "
             f"depth<={cfg.depth_max} samples={cfg.samples} seed={cfg.seed}"]
    for s in suites:
        mark = "PASS" if s.passed else "FAIL"
        lines.append(f"  {mark} {s.suite + '/' + s.check:30s} cases={s.cases:<6d} "
                     f"{s.statement}")
        if not s.passed:
            shown = s.failures[0] if s.failures else {"note": "no cases ran"}
            lines.append(f"       first counterexample: {shown}")
    failing = sum(1 for s in suites if not s.passed)
    lines.append(f"summary: {len(suites)} suites, "
                 f"{sum(s.cases for s in suites)} cases, "
                 f"{failing} failing")
    lines.append("timings: " + " ".join(f"{k}={v:.3f}s" for k, v in timings.items()))
    return "\n".join(lines) + "\n"


def render_json(cfg: RunConfig, suites: Sequence[SuiteReport],
                timings: Dict[str, float]) -> str:
    return json.dumps(report_dict(cfg, suites, timings), indent=2) + "\n"


def render_csv(cfg: RunConfig, suites: Sequence[SuiteReport],
               timings: Dict[str, float]) -> str:
    # timing columns are omitted so equal configurations give equal bytes
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["suite", "check", "cases", "passed", "first_failure"])
    for s in suites:
        writer.writerow([s.suite, s.check, s.cases, s.passed,
                         json.dumps(s.failures[0]) if s.failures else ""])
    return buf.getvalue()


_RENDERERS = {"text": render_text, "json": render_json, "csv": render_csv}


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        cfg.validate()
    except ValueError as exc:
        print(f"treefock: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        suites, timings = run_suites(cfg)
    except CapExceeded as exc:
        print(f"treefock: {exc}", file=sys.stderr)
        return EXIT_CAP
    rendered = _RENDERERS[cfg.fmt](cfg, suites, timings)
    try:
        if cfg.output:
            with open(cfg.output, "w", encoding="utf-8") as fh:
                fh.write(rendered)
        else:
            sys.stdout.write(rendered)
    except OSError as exc:
        print(f"treefock: cannot write report: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK if all(s.passed for s in suites) else EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
