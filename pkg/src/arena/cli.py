"""Command line entry point: ``arena run``, ``arena stats``, ``arena traces``."""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .domain import ScenarioFormatError
from .persistence import PersistenceError, StatsStore
from .registry import AgentSpecError, split_agent_list
from .tournament import TournamentConfig, TournamentError, report, run_tournament

log = logging.getLogger("arena")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="arena", description="Bilateral negotiation tournaments.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a round-robin tournament")
    run.add_argument("--agents", required=True, help="e.g. chargingboul,boulware:e=0.05,hardliner")
    run.add_argument(
        "--scenario", action="append", dest="scenarios",
        help="gen:seed=7,issues=4,values=5[,opposition=0.8] or a scenario JSON file; repeatable",
    )
    run.add_argument("--sessions", type=int, default=50, help="sessions per pairing and scenario")
    run.add_argument("--deadline", type=int, default=1000, help="turns per session")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--out", type=Path, required=True)
    run.add_argument("--no-learning", action="store_true", help="forget opponent stats before every session")
    run.add_argument("--self-play", action="store_true")
    run.add_argument("--dump-transcripts", action="store_true")
    run.add_argument("--no-plots", action="store_true", help="skip the PNG figures")

    stats = sub.add_parser("stats", help="print persisted opponent records")
    stats.add_argument("store_dir", type=Path)

    traces = sub.add_parser("traces", help="write bidding-curve traces (CSV + PNG)")
    traces.add_argument("--out", type=Path, required=True)
    traces.add_argument("--no-plots", action="store_true")
    return parser


def cmd_run(args) -> int:
    config = TournamentConfig(
        agents=split_agent_list(args.agents),
        scenarios=args.scenarios or ["gen:seed=0,issues=4,values=5"],
        sessions_per_pairing=args.sessions,
        deadline_turns=args.deadline,
        seed=args.seed,
        learning=not args.no_learning,
        self_play=args.self_play,
        out_dir=args.out,
        dump_transcripts=args.dump_transcripts,
    )
    result = run_tournament(config)
    paths = report(result.standings, result.outcomes, args.out)
    if not args.no_plots:
        from .plots import render_report_figures

        render_report_figures(result, args.out)
    print(f"{'agent':<28} {'utility':>8} {'welfare':>8} {'agreed':>7}")
    for s in result.standings.agents:
        print(f"{s.agent:<28} {s.mean_utility:8.4f} {s.mean_welfare:8.4f} {s.agreement_rate:7.2%}")
    if result.standings.violations:
        print(f"protocol violations: {result.standings.violations}", file=sys.stderr)
    print(f"wrote {paths['outcomes'].parent}")
    return 0


def cmd_stats(args) -> int:
    root = args.store_dir
    if not root.is_dir():
        raise PersistenceError(f"{root} is not a directory")
    dirs = sorted({p.parent for p in root.rglob("*.json") if not p.name.startswith(".")})
    print("store\topponent_id\tubi\taui\tsessions_observed")
    for d in dirs:
        for rec in StatsStore(d).records():
            rel = d.relative_to(root).as_posix() or "."
            print(f"{rel}\t{rec.opponent_id}\t{rec.ubi}\t{rec.aui}\t{rec.sessions_observed}")
    return 0


def cmd_traces(args) -> int:
    from .plots import write_traces

    for path in write_traces(args.out, render=not args.no_plots):
        print(path)
    return 0


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    handler = {"run": cmd_run, "stats": cmd_stats, "traces": cmd_traces}[args.command]
    try:
        return handler(args)
    except (AgentSpecError, ScenarioFormatError, TournamentError, PersistenceError, ValueError) as exc:
        print(f"arena: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
