"""Round-robin tournaments over repeated sessions, with CSV reports."""

from __future__ import annotations

import csv
import io
import logging
import shutil
import tempfile
import zlib
from collections import defaultdict
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .domain import (
    Domain,
    LinearAdditiveProfile,
    ScenarioFormatError,
    load_scenario,
    random_scenario,
)
from .persistence import PersistenceError, StatsStore, sanitize_id
from .protocol import SessionConfig, run_session, write_transcript_csv
from .registry import AgentSpecError, make_agent, parse_spec

log = logging.getLogger(__name__)

OUTCOME_HEADER = [
    "session_id", "scenario", "agent_a", "agent_b", "starter", "result",
    "util_a", "util_b", "welfare", "turns", "ubi_a_recorded", "aui_a_recorded",
]
STANDINGS_HEADER = ["agent", "mean_utility", "mean_welfare", "agreement_rate"]


class TournamentError(RuntimeError):
    pass


@dataclass
class TournamentConfig:
    agents: list[str]
    scenarios: list[str] = field(default_factory=lambda: ["gen:seed=0,issues=4,values=5"])
    sessions_per_pairing: int = 50
    deadline_turns: int = 1000
    seed: int = 0
    learning: bool = True
    self_play: bool = False
    out_dir: Path | None = None
    dump_transcripts: bool = False

    def __post_init__(self) -> None:
        if self.sessions_per_pairing < 1:
            raise ValueError("sessions_per_pairing must be >= 1")
        if len(set(self.agents)) != len(self.agents):
            raise ValueError("agent specs must be distinct")
        if not self.agents or (len(self.agents) < 2 and not self.self_play):
            raise ValueError("need at least two agents, or one with self-play")


@dataclass
class Scenario:
    label: str
    domain: Domain
    profile_a: LinearAdditiveProfile
    profile_b: LinearAdditiveProfile


@dataclass(frozen=True)
class OutcomeRow:
    session_id: int
    scenario: str
    agent_a: str
    agent_b: str
    starter: str
    result: str
    util_a: float
    util_b: float
    welfare: float
    turns: int
    ubi_a_recorded: int | None
    aui_a_recorded: int | None

    def as_csv(self) -> list:
        opt = lambda v: "" if v is None else v  # noqa: E731
        return [
            self.session_id, self.scenario, self.agent_a, self.agent_b, self.starter, self.result,
            repr(self.util_a), repr(self.util_b), repr(self.welfare), self.turns,
            opt(self.ubi_a_recorded), opt(self.aui_a_recorded),
        ]


@dataclass
class AgentStanding:
    agent: str
    mean_utility: float
    mean_welfare: float
    agreement_rate: float
    sessions: int


@dataclass
class Standings:
    agents: list[AgentStanding]
    pairings: dict[tuple[str, str], dict[str, float]]
    violations: int = 0

    def by_agent(self) -> dict[str, AgentStanding]:
        return {s.agent: s for s in self.agents}


@dataclass
class TournamentResult:
    standings: Standings
    outcomes: list[OutcomeRow]
    # per pairing, per learning side: parameters each session started with
    session_params: dict[tuple[str, str, str], list] = field(default_factory=dict)


def load_scenario_source(source: str) -> Scenario:
    """``gen:seed=7,issues=4,values=5[,opposition=0.8]`` or a scenario JSON path."""
    if source.startswith("gen:"):
        opts = {"seed": 0, "issues": 4, "values": 5, "opposition": 0.0}
        for part in filter(None, source[4:].split(",")):
            key, eq, value = part.partition("=")
            if not eq or key not in opts:
                raise ScenarioFormatError(f"bad generator option {part!r}")
            try:
                opts[key] = float(value) if key == "opposition" else int(value)
            except ValueError:
                raise ScenarioFormatError(f"bad generator value {part!r}") from None
        domain, pa, pb = random_scenario(
            opts["seed"], opts["issues"], opts["values"], opposition=opts["opposition"]
        )
        return Scenario(source, domain, pa, pb)
    try:
        domain, pa, pb = load_scenario(source)
    except OSError as exc:
        raise ScenarioFormatError(f"cannot read scenario {source!r}: {exc}") from exc
    except ValueError as exc:  # includes JSON decode errors
        raise ScenarioFormatError(f"{source}: {exc}") from exc
    return Scenario(source, domain, pa, pb)


def _session_seed(master: int, *parts: str | int) -> int:
    words = [master & 0xFFFFFFFF] + [
        zlib.crc32(p.encode()) if isinstance(p, str) else p for p in parts
    ]
    return int(np.random.SeedSequence(words).generate_state(1)[0])


def pairings(agents: list[str], self_play: bool = False) -> list[tuple[str, str]]:
    # canonical order keeps results independent of registration order
    names = sorted(agents)
    pairs = [(a, b) for i, a in enumerate(names) for b in names[i + 1:]]
    if self_play:
        pairs += [(a, a) for a in names]
    return sorted(pairs)


def run_tournament(config: TournamentConfig) -> TournamentResult:
    for spec in config.agents:
        parse_spec(spec)
    scenarios = [load_scenario_source(s) for s in config.scenarios]

    tmp = None
    if config.out_dir is not None:
        memory_root = Path(config.out_dir) / "memory"
        if memory_root.exists():
            shutil.rmtree(memory_root)
    else:
        tmp = tempfile.TemporaryDirectory(prefix="arena-memory-")
        memory_root = Path(tmp.name)
    transcript_dir = None
    if config.dump_transcripts:
        if config.out_dir is None:
            raise TournamentError("--dump-transcripts needs an output directory")
        transcript_dir = Path(config.out_dir) / "transcripts"
        transcript_dir.mkdir(parents=True, exist_ok=True)

    outcomes: list[OutcomeRow] = []
    session_params: dict[tuple[str, str, str], list] = {}
    violations = 0
    session_id = 0
    try:
        for a, b in pairings(config.agents, config.self_play):
            namespace = memory_root / f"{sanitize_id(a)}__vs__{sanitize_id(b)}"
            stores = {"A": StatsStore(namespace / "A"), "B": StatsStore(namespace / "B")}
            factories = {"A": make_agent(a, stores["A"]), "B": make_agent(b, stores["B"])}
            ids = {"A": a, "B": b} if a != b else {"A": f"{a}#A", "B": f"{b}#B"}
            for scenario in scenarios:
                for k in range(config.sessions_per_pairing):
                    if not config.learning:
                        for store in stores.values():
                            store.reset_all()
                    agent_a, agent_b = factories["A"](), factories["B"]()
                    starter = "A" if k % 2 == 0 else "B"
                    seed = _session_seed(config.seed, scenario.label, a, b, k)
                    outcome, transcript = run_session(
                        agent_a, agent_b, scenario.profile_a, scenario.profile_b,
                        SessionConfig(config.deadline_turns, starter), seed,
                        id_a=ids["A"], id_b=ids["B"],
                    )
                    for side, agent in (("A", agent_a), ("B", agent_b)):
                        err = getattr(agent, "persistence_error", None)
                        if err is not None:
                            raise TournamentError(f"stats store failed for {ids[side]}: {err}")
                        if hasattr(agent, "initial_params"):
                            session_params.setdefault((a, b, side), []).append(agent.initial_params)
                    if outcome.violation:
                        violations += 1
                        log.warning(
                            "session %d: %s accepted with no pending offer",
                            session_id, ids[outcome.violation],
                        )
                    stats = getattr(agent_a, "last_stats", None)
                    outcomes.append(
                        OutcomeRow(
                            session_id, scenario.label, a, b, ids[starter].split("#")[0],
                            "agreement" if outcome.is_agreement else "failure",
                            outcome.utility_a, outcome.utility_b, outcome.social_welfare,
                            outcome.turn,
                            stats.ubi if stats is not None else None,
                            stats.aui if stats is not None else None,
                        )
                    )
                    if transcript_dir is not None:
                        write_transcript_csv(
                            transcript_dir / f"session_{session_id:05d}.csv",
                            transcript, scenario.domain, ids,
                        )
                    session_id += 1
    except PersistenceError as exc:
        raise TournamentError(str(exc)) from exc
    finally:
        if tmp is not None:
            tmp.cleanup()

    standings = compute_standings(outcomes)
    standings.violations = violations
    return TournamentResult(standings, outcomes, session_params)


def compute_standings(outcomes: list[OutcomeRow]) -> Standings:
    utils: dict[str, list[float]] = defaultdict(list)
    welfare: dict[str, list[float]] = defaultdict(list)
    agreed: dict[str, list[bool]] = defaultdict(list)
    per_pair: dict[tuple[str, str], list[OutcomeRow]] = defaultdict(list)
    for row in outcomes:
        per_pair[(row.agent_a, row.agent_b)].append(row)
        for agent, u in ((row.agent_a, row.util_a), (row.agent_b, row.util_b)):
            utils[agent].append(u)
            welfare[agent].append(row.welfare)
            agreed[agent].append(row.result == "agreement")
    agents = [
        AgentStanding(
            name,
            float(np.mean(utils[name])),
            float(np.mean(welfare[name])),
            float(np.mean(agreed[name])),
            len(utils[name]),
        )
        for name in sorted(utils)
    ]
    pairs = {
        key: {
            "mean_util_a": float(np.mean([r.util_a for r in rows])),
            "mean_util_b": float(np.mean([r.util_b for r in rows])),
            "mean_welfare": float(np.mean([r.welfare for r in rows])),
            "agreement_rate": float(np.mean([r.result == "agreement" for r in rows])),
        }
        for key, rows in sorted(per_pair.items())
    }
    return Standings(agents, pairs)


def outcomes_csv(outcomes: list[OutcomeRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(OUTCOME_HEADER)
    writer.writerows(r.as_csv() for r in outcomes)
    return buf.getvalue()


def standings_csv(standings: Standings) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STANDINGS_HEADER)
    for s in standings.agents:
        writer.writerow([s.agent, repr(s.mean_utility), repr(s.mean_welfare), repr(s.agreement_rate)])
    return buf.getvalue()


def report(standings: Standings, outcomes: list[OutcomeRow], out_dir: str | Path) -> dict[str, Path]:
    """Write ``outcomes.csv``, ``standings.csv`` and ``pairings.csv`` into ``out_dir``."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        paths = {
            "outcomes": out / "outcomes.csv",
            "standings": out / "standings.csv",
            "pairings": out / "pairings.csv",
        }
        paths["outcomes"].write_text(outcomes_csv(outcomes), encoding="utf-8")
        paths["standings"].write_text(standings_csv(standings), encoding="utf-8")
        with open(paths["pairings"], "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(["agent_a", "agent_b", "mean_util_a", "mean_util_b", "mean_welfare", "agreement_rate"])
            for (a, b), m in standings.pairings.items():
                writer.writerow([a, b] + [repr(m[k]) for k in ("mean_util_a", "mean_util_b", "mean_welfare", "agreement_rate")])
    except OSError as exc:
        raise TournamentError(f"cannot write report to {out}: {exc}") from exc
    return paths


def read_outcomes(path: str | Path) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))
