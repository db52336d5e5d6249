"""Scripted opponents: time-dependent tactics, Hardliner and Random."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .domain import Bid, BidSpace, LinearAdditiveProfile, bid_space
from .protocol import Accept, Action, Offer, SessionOutcome, TranscriptView

HARDLINER_ACCEPT = 0.95
RANDOM_ACCEPT = 0.5


@dataclass(frozen=True)
class TimeDependentParams:
    e: float = 1.0
    floor: float = 0.3
    band: float = 0.05

    def __post_init__(self) -> None:
        if self.e <= 0:
            raise ValueError("e must be positive")
        if not 0.0 <= self.floor < 1.0:
            raise ValueError("floor must lie in [0, 1)")
        if self.band < 0:
            raise ValueError("band must be non-negative")

    def target(self, t: float) -> float:
        # e < 1 holds out until late (Boulware), e > 1 concedes early
        return 1.0 - (1.0 - self.floor) * t ** (1.0 / self.e)


class _Scripted:
    name = "scripted"

    def begin_session(self, profile: LinearAdditiveProfile, opponent_id: str, seed: int) -> None:
        self.profile = profile
        self.space: BidSpace = bid_space(profile)
        self.rng = random.Random(seed)

    def end_session(self, view: TranscriptView, outcome: SessionOutcome) -> None:
        pass


class TimeDependentAgent(_Scripted):
    def __init__(self, params: TimeDependentParams, name: str = "time-dependent"):
        self.params = params
        self.name = name

    def offer_at(self, t: float) -> Bid:
        """Random bid with own utility in [target, target + band].

        Falls back to the nearest bid above the band, then to the best bid.
        """
        space = self.space
        target = self.params.target(t)
        i, j = space.range_slice(target, target + self.params.band)
        if i < j:
            return space.sorted_bids[self.rng.randrange(i, j)]
        return space.sorted_bids[min(i, len(space.sorted_bids) - 1)]

    def act(self, received: Bid | None, t: float) -> Action:
        return time_dependent_decide(self, received, t)


def time_dependent_decide(agent: TimeDependentAgent, received: Bid | None, t: float) -> Action:
    if received is not None and agent.space.utility(received) >= agent.params.target(t):
        return Accept()
    return Offer(agent.offer_at(t))


class Hardliner(_Scripted):
    def __init__(self, name: str = "hardliner"):
        self.name = name

    def act(self, received: Bid | None, t: float) -> Action:
        return hardliner_decide(self, received, t)


def hardliner_decide(agent: Hardliner, received: Bid | None, t: float) -> Action:
    if received is not None and agent.space.utility(received) >= HARDLINER_ACCEPT:
        return Accept()
    return Offer(agent.space.best_bid)


class RandomAgent(_Scripted):
    def __init__(self, name: str = "random"):
        self.name = name

    def act(self, received: Bid | None, t: float) -> Action:
        return random_decide(self, received, t)


def random_decide(agent: RandomAgent, received: Bid | None, t: float) -> Action:
    if received is not None and agent.space.utility(received) >= RANDOM_ACCEPT:
        return Accept()
    bids = agent.space.bids
    return Offer(bids[agent.rng.randrange(len(bids))])
