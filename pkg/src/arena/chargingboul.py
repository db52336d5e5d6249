"""The ChargingBoul negotiating agent."""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, replace

from .domain import Bid, BidSpace, LinearAdditiveProfile, bid_space, compute_tolerance
from .opponent_model import (
    FrequencyModel,
    OpponentClass,
    OpponentStats,
    classify,
    finalize_session,
)
from .persistence import PersistenceError, StatsRecord, StatsStore
from .protocol import Accept, Action, Offer, SessionOutcome, TranscriptView

log = logging.getLogger(__name__)

DEFAULT_M = 0.5
DEFAULT_E = 0.1
CONCEDER_M = 0.4
LATE_PHASE_M = 0.3


@dataclass(frozen=True)
class StrategyParams:
    m: float = DEFAULT_M
    E: float = DEFAULT_E
    epsilon: float = 0.05

    def __post_init__(self) -> None:
        if not 0.0 < self.m < 1.0:
            raise ValueError("m must lie in (0, 1)")
        if self.E <= 0.0:
            raise ValueError("E must be positive")


def utility_goal(t: float, m: float, E: float) -> float:
    """Target utility at normalized time ``t``: 1 at t=0, m at t=1."""
    return m + (1.0 - m) * (1.0 - t ** (1.0 / E))


def bid_interval(t: float, g: float, epsilon: float) -> tuple[float, float]:
    half = (3.0 * t + 1.0) * epsilon
    return max(0.0, g - half), min(1.0, g + half)


def adapt_E(ubi: int) -> float:
    return 0.2 * 2.0 ** (5 - ubi)


def late_phase_threshold(ubi: int) -> float:
    return 1.0 - 0.5**ubi


def configure_for_session(
    prior: OpponentStats | None,
    epsilon: float = 0.05,
    m: float | None = None,
    E: float | None = None,
) -> StrategyParams:
    """Session parameters given the opponent's stats from the previous session.

    ``m``/``E`` replace the defaults the class adjustments start from.
    """
    base_m = DEFAULT_M if m is None else m
    base_e = DEFAULT_E if E is None else E
    cls = classify(prior) if prior is not None else OpponentClass.UNKNOWN
    if cls is OpponentClass.BOULWARE:
        return StrategyParams(base_m, adapt_E(prior.ubi), epsilon)
    if cls is OpponentClass.CONCEDER:
        return StrategyParams(CONCEDER_M, base_e, epsilon)
    return StrategyParams(base_m, base_e, epsilon)


class ChargingBoul:
    """Boulware-style bidder that adapts to the opponent class it saw last time.

    Opponent stats are read from ``store`` at the start of each session and
    written back at the end, keyed by the opponent id the protocol passes in.
    Without a store the agent plays every session with default parameters.
    """

    def __init__(
        self,
        name: str = "chargingboul",
        store: StatsStore | None = None,
        m: float | None = None,
        E: float | None = None,
    ):
        self.name = name
        self.store = store
        self.m_override = m
        self.E_override = E
        self.session_log: list[dict] = []
        self.persistence_error: PersistenceError | None = None

    # -- session lifecycle -------------------------------------------------

    def begin_session(self, profile: LinearAdditiveProfile, opponent_id: str, seed: int) -> None:
        self.profile = profile
        self.space: BidSpace = bid_space(profile)
        self.opponent_id = opponent_id
        self.rng = random.Random(seed)
        self.prior_stats: OpponentStats | None = None
        if self.store is not None:
            try:
                record = self.store.load(opponent_id)
            except PersistenceError as exc:
                # negotiate with defaults; callers check persistence_error
                log.error("ChargingBoul %s: %s", self.name, exc)
                self.persistence_error = exc
                record = None
            if record is not None:
                self.prior_stats = record.stats
        self.opponent_class = (
            classify(self.prior_stats) if self.prior_stats is not None else OpponentClass.UNKNOWN
        )
        self.params = configure_for_session(
            self.prior_stats, compute_tolerance(profile), self.m_override, self.E_override
        )
        self.initial_params = self.params
        self.late_start = (
            late_phase_threshold(self.prior_stats.ubi)
            if self.opponent_class is OpponentClass.BOULWARE
            else None
        )
        self.late_phase_active = False
        self.best_received: Bid | None = None
        self.best_received_utility = float("-inf")
        self.frequency = FrequencyModel(profile.domain)
        self.last_stats: OpponentStats | None = None

    def end_session(self, view: TranscriptView, outcome: SessionOutcome) -> None:
        self.on_session_end(view)

    def on_session_end(self, view: TranscriptView) -> OpponentStats:
        stats = finalize_session(view.opponent_bids, view.own_utilities_of_opponent_bids, self.prior_stats)
        self.last_stats = stats
        self.session_log.append(
            {
                "opponent_id": self.opponent_id,
                "opponent_class": self.opponent_class,
                "params": self.initial_params,
                "late_phase": self.late_phase_active,
                "stats": stats,
            }
        )
        if self.store is not None:
            try:
                self.store.save(StatsRecord.from_stats(self.opponent_id, stats))
            except PersistenceError as exc:
                # the finished session stands; callers check persistence_error
                log.error("could not persist stats for %s: %s", self.opponent_id, exc)
                self.persistence_error = exc
        return stats

    # -- bidding -------------------------------------------------------------

    def observe(self, bid: Bid) -> None:
        self.frequency.update(bid)
        u = self.space.utility(bid)
        if u > self.best_received_utility:
            self.best_received, self.best_received_utility = bid, u

    def _in_late_phase(self, t: float) -> bool:
        return self.late_start is not None and t > self.late_start

    def select_bid(self, t: float) -> Bid:
        if self._in_late_phase(t):
            if not self.late_phase_active:
                self.late_phase_active = True
                self.params = replace(self.params, m=LATE_PHASE_M)
            best = self.best_received
            if (
                best is not None
                and self.best_received_utility > self.params.m
                and self.frequency.total_bids_observed > 0
                and self.frequency.predict(best) < 2 * self.params.m
            ):
                return best

        candidate, u = self._random_in_interval(t)
        if self.best_received is not None and u < self.best_received_utility:
            return self.best_received
        return candidate

    def _random_in_interval(self, t: float) -> tuple[Bid, float]:
        p = self.params
        g = utility_goal(t, p.m, p.E)
        lo, hi = bid_interval(t, g, p.epsilon)
        space = self.space
        i, j = space.range_slice(lo, hi)
        if i >= j:
            # nothing inside: nearest utility at or above the goal, else the top bid
            i = min(space.first_at_least(g), len(space.sorted_bids) - 1)
        else:
            i = self.rng.randrange(i, j)
        return space.sorted_bids[i], space.sorted_utils[i]

    def act(self, received: Bid | None, t: float) -> Action:
        if received is None:
            return Offer(self.select_bid(t))
        self.observe(received)
        candidate = self.select_bid(t)
        if self.space.utility(received) >= self.space.utility(candidate):
            return Accept()
        return Offer(candidate)

    decide = act
