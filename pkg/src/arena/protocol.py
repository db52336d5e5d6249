"""Alternating-offers sessions with a turn deadline."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, Union

from .domain import Bid, LinearAdditiveProfile, utility


@dataclass(frozen=True)
class Offer:
    bid: Bid


@dataclass(frozen=True)
class Accept:
    pass


Action = Union[Offer, Accept]


class ProtocolViolation(RuntimeError):
    pass


@dataclass(frozen=True)
class SessionConfig:
    deadline_turns: int = 1000
    starting_agent: str = "A"

    def __post_init__(self) -> None:
        if self.deadline_turns < 2:
            raise ValueError("deadline_turns must be >= 2")
        if self.starting_agent not in ("A", "B"):
            raise ValueError("starting_agent must be 'A' or 'B'")


@dataclass(frozen=True)
class TranscriptRow:
    turn: int  # 1-based action count
    actor: str  # "A" or "B"
    action: Action
    t: float  # clock seen by the actor when it acted
    utility_a: float
    utility_b: float

    @property
    def bid(self) -> Bid:
        return self.action.bid if isinstance(self.action, Offer) else None


@dataclass
class Transcript:
    deadline_turns: int
    rows: list[TranscriptRow] = field(default_factory=list)

    def bids_of(self, actor: str) -> list[Bid]:
        return [r.action.bid for r in self.rows if r.actor == actor and isinstance(r.action, Offer)]

    def received_utilities(self, actor: str) -> list[float]:
        """``actor``'s own utility of each bid the other side offered, in order."""
        col = "utility_a" if actor == "A" else "utility_b"
        return [
            getattr(r, col)
            for r in self.rows
            if r.actor != actor and isinstance(r.action, Offer)
        ]

    def view(self, actor: str, outcome: SessionOutcome) -> TranscriptView:
        other = "B" if actor == "A" else "A"
        return TranscriptView(
            own_bids=self.bids_of(actor),
            opponent_bids=self.bids_of(other),
            own_utilities_of_opponent_bids=self.received_utilities(actor),
            agreement=outcome.agreement,
            turns=len(self.rows),
            deadline_turns=self.deadline_turns,
        )


@dataclass(frozen=True)
class TranscriptView:
    """What one agent gets to see when a session ends."""

    own_bids: list[Bid]
    opponent_bids: list[Bid]
    own_utilities_of_opponent_bids: list[float]
    agreement: Bid | None
    turns: int
    deadline_turns: int


@dataclass(frozen=True)
class SessionOutcome:
    agreement: Bid | None
    utility_a: float
    utility_b: float
    turn: int
    violation: str | None = None  # actor that broke the protocol, if any

    @property
    def is_agreement(self) -> bool:
        return self.agreement is not None

    @property
    def social_welfare(self) -> float:
        return social_welfare(self)


def social_welfare(outcome: SessionOutcome) -> float:
    return outcome.utility_a + outcome.utility_b


class Agent(Protocol):
    name: str

    def begin_session(self, profile: LinearAdditiveProfile, opponent_id: str, seed: int) -> None: ...

    def act(self, received: Bid | None, t: float) -> Action: ...

    def end_session(self, view: TranscriptView, outcome: SessionOutcome) -> None: ...


def run_session(
    agent_a: Agent,
    agent_b: Agent,
    profile_a: LinearAdditiveProfile,
    profile_b: LinearAdditiveProfile,
    config: SessionConfig = SessionConfig(),
    seed: int = 0,
    *,
    id_a: str | None = None,
    id_b: str | None = None,
) -> tuple[SessionOutcome, Transcript]:
    """Run one alternating-offers session between two agents.

    The actor of the k-th action (1-based) sees ``t = (k - 1) / deadline``.
    The session fails once ``deadline_turns`` actions pass without an
    Accept. Both agents are notified with their own transcript view at the
    end, including after a protocol violation.
    """
    if profile_a.domain != profile_b.domain:
        raise ValueError("profiles must share one domain")
    agents = {"A": agent_a, "B": agent_b}
    profiles = {"A": profile_a, "B": profile_b}
    ids = {"A": id_a or agent_a.name, "B": id_b or agent_b.name}
    agent_a.begin_session(profile_a, ids["B"], seed * 2)
    agent_b.begin_session(profile_b, ids["A"], seed * 2 + 1)

    transcript = Transcript(config.deadline_turns)
    actor = config.starting_agent
    pending: Bid | None = None
    outcome = None
    deadline = config.deadline_turns
    for elapsed in range(deadline):
        t = elapsed / deadline
        action = agents[actor].act(pending, t)
        turn = elapsed + 1
        if isinstance(action, Accept):
            if pending is None:
                transcript.rows.append(TranscriptRow(turn, actor, action, t, float("nan"), float("nan")))
                outcome = SessionOutcome(
                    None, profile_a.reservation, profile_b.reservation, turn, violation=actor
                )
                break
            ua, ub = utility(profile_a, pending), utility(profile_b, pending)
            transcript.rows.append(TranscriptRow(turn, actor, action, t, ua, ub))
            outcome = SessionOutcome(pending, ua, ub, turn)
            break
        if not isinstance(action, Offer):
            raise ProtocolViolation(f"agent {ids[actor]!r} returned {action!r}")
        pending = action.bid
        transcript.rows.append(
            TranscriptRow(turn, actor, action, t, utility(profile_a, pending), utility(profile_b, pending))
        )
        actor = "B" if actor == "A" else "A"
    if outcome is None:
        outcome = SessionOutcome(None, profile_a.reservation, profile_b.reservation, deadline)

    for side in ("A", "B"):
        agents[side].end_session(transcript.view(side, outcome), outcome)
    return outcome, transcript


TRANSCRIPT_HEADER = ["turn", "actor", "action", "bid_id", "utility_self", "utility_opponent_true"]


def transcript_rows(transcript: Transcript, domain, names: dict[str, str] | None = None):
    """Flatten a transcript into CSV-ready rows; Accept rows carry the accepted bid."""
    names = names or {"A": "A", "B": "B"}
    last_bid = None
    for row in transcript.rows:
        if isinstance(row.action, Offer):
            last_bid = row.action.bid
            kind = "offer"
        else:
            kind = "accept"
        bid_id = domain.bid_index(last_bid) if last_bid is not None else ""
        own, other = (row.utility_a, row.utility_b) if row.actor == "A" else (row.utility_b, row.utility_a)
        yield [row.turn, names[row.actor], kind, bid_id, repr(own), repr(other)]


def write_transcript_csv(path: str | Path, transcript: Transcript, domain, names=None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TRANSCRIPT_HEADER)
        writer.writerows(transcript_rows(transcript, domain, names))
