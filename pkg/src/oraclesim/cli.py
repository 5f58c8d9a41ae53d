"""Command-line runner for the kernels and verification suites."""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass

from . import suites
from .families import FAMILIES

OUTPUT_ENV = "ORACLESIM_OUTPUT"
GROVER_NS = (2, 4, 6, 8)
FIFTY_NS = (2, 4)


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    family: str = "grover"
    n: int = 2
    seed: int = 0
    format: str = "text"
    output: str | None = None

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.subcommand == "grover" and self.n not in GROVER_NS:
            raise ValueError(f"grover needs n in {GROVER_NS}")
        if self.subcommand == "verify-50" and self.family == "grover" and self.n not in FIFTY_NS:
            raise ValueError(f"verify-50 on grover needs n in {FIFTY_NS}")


def collect(config: RunConfig) -> list[suites.Report]:
    sub = config.subcommand
    if sub == "grover":
        return [suites.grover_suite(config.n)]
    if sub == "dj":
        return [suites.dj_suite()]
    if sub == "simon":
        return [suites.simon_suite(config.seed)]
    if sub == "perm":
        return [suites.perm_suite()]
    if sub == "verify-states":
        return [suites.states_suite(config.seed)]
    if sub == "verify-entropy":
        return [suites.entropy_suite()]
    if sub == "verify-histories":
        return [suites.histories_suite()]
    if sub == "verify-50":
        return [suites.fifty_suite(config.family, config.n)]
    if sub == "verify-all":
        return suites.verify_all(config.seed)
    raise ValueError(f"unknown subcommand {sub!r}")


def _show(v) -> str:
    return json.dumps(suites._plain(v), sort_keys=True)


def render(reports: list[suites.Report], fmt: str) -> str:
    lines = []
    overall = all(r.passed for r in reports)
    if fmt == "structured":
        for r in reports:
            for c in r.checks:
                lines.append(json.dumps(c.record(r.suite), sort_keys=True))
            lines.append(json.dumps({"suite": r.suite, "checks": len(r.checks), "overall": r.verdict}, sort_keys=True))
        lines.append(json.dumps({"suite": "*", "reports": len(reports), "overall": "PASS" if overall else "FAIL"}, sort_keys=True))
    else:
        for r in reports:
            lines.append(f"== {r.suite}")
            for c in r.checks:
                tol = "exact" if c.tolerance is None else f"tol={c.tolerance:g}"
                lines.append(
                    f"{c.verdict}  {c.id}  expected={_show(c.expected)} actual={_show(c.actual)} {tol}  ({c.anchor})"
                )
            lines.append(f"{r.suite}: {r.verdict} ({len(r.checks)} checks)")
        lines.append(f"overall: {'PASS' if overall else 'FAIL'}")
    return "\n".join(lines) + "\n"


def run(config: RunConfig) -> tuple[int, list[suites.Report]]:
    reports = collect(config)
    return (0 if all(r.passed for r in reports) else 1), reports


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument("--output", help=f"write the report here (default: ${OUTPUT_ENV} or stdout)")

    parser = argparse.ArgumentParser(prog="oraclesim", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)
    g = sub.add_parser("grover", parents=[common], help="search kernel")
    g.add_argument("--n", type=int, default=2, choices=GROVER_NS)
    sub.add_parser("dj", parents=[common], help="Deutsch-Jozsa kernel")
    s = sub.add_parser("simon", parents=[common], help="Simon kernel with period recovery")
    s.add_argument("--seed", type=_unsigned, default=0)
    sub.add_parser("perm", parents=[common], help="permutation partition kernel")
    vs = sub.add_parser("verify-states", parents=[common], help="simulated vs hand-expanded states")
    vs.add_argument("--seed", type=_unsigned, default=0)
    sub.add_parser("verify-entropy", parents=[common], help="entropy ledgers, backdating, even share")
    sub.add_parser("verify-histories", parents=[common], help="history reconstruction")
    f = sub.add_parser("verify-50", parents=[common], help="quantum vs advice-assisted classical calls")
    f.add_argument("--family", choices=sorted(FAMILIES), default="grover")
    f.add_argument("--n", type=int, default=2, choices=FIFTY_NS)
    va = sub.add_parser("verify-all", parents=[common], help="every suite")
    va.add_argument("--seed", type=_unsigned, default=0)
    return parser


def _unsigned(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("seed must be a non-negative integer")
    return value


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = RunConfig(
            args.subcommand,
            family=getattr(args, "family", "grover"),
            n=getattr(args, "n", 2),
            seed=getattr(args, "seed", 0),
            format=args.format,
            output=args.output or os.environ.get(OUTPUT_ENV) or None,
        )
    except ValueError as exc:
        parser.error(str(exc))
    status, reports = run(config)
    text = render(reports, config.format)
    if config.output:
        with open(config.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if status:
        failed = next(r.first_failure() for r in reports if not r.passed)
        print(f"first failing check: {failed.id}", file=sys.stderr)
    return status


if __name__ == "__main__":
    sys.exit(main())
