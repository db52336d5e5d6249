"""Opponent modelling: frequency-based preferences and UBI/AUI strategy statistics."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .domain import Bid, Domain, DomainMismatchError

BOULWARE_MIN_UBI = 5
HARDLINER_MAX_AUI = 2


class OpponentClass(enum.Enum):
    BOULWARE = "boulware"
    HARDLINER = "hardliner"
    CONCEDER = "conceder"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class OpponentStats:
    ubi: int = 0
    aui: int = 0
    sessions_observed: int = 0

    def __post_init__(self) -> None:
        if min(self.ubi, self.aui, self.sessions_observed) < 0:
            raise ValueError("stats must be non-negative")

    @property
    def opponent_class(self) -> OpponentClass:
        return classify(self)


def _halves(seq: Sequence) -> tuple[Sequence, Sequence]:
    mid = len(seq) // 2
    return seq[:mid], seq[mid:]


def calculate_ubi(received_bids: Sequence[Bid], ubi: int = 0) -> int:
    """Unique bid index.

    Splits the bids into halves (the right half takes the odd element) and
    recurses on the right half while it holds strictly more distinct bids
    than the left one, counting the recursion depth.
    """
    left, right = _halves(received_bids)
    n_left, n_right = len(set(left)), len(set(right))
    if n_left > 0 and n_right > 0 and n_left < n_right:
        return calculate_ubi(right, ubi + 1)
    return ubi


def calculate_aui(received_utils: Sequence[float], aui: int = 0) -> int:
    """Average utility index: like :func:`calculate_ubi` but comparing half means."""
    left, right = _halves(received_utils)
    if left and right and sum(left) / len(left) < sum(right) / len(right):
        return calculate_aui(right, aui + 1)
    return aui


def classify(stats: OpponentStats) -> OpponentClass:
    if stats.sessions_observed < 1:
        return OpponentClass.UNKNOWN
    if stats.ubi >= BOULWARE_MIN_UBI:
        return OpponentClass.BOULWARE
    if stats.aui <= HARDLINER_MAX_AUI:
        return OpponentClass.HARDLINER
    return OpponentClass.CONCEDER


def finalize_session(
    opponent_bids: Sequence[Bid],
    own_utilities: Sequence[float],
    prior: OpponentStats | None = None,
) -> OpponentStats:
    """Statistics of one finished session, to be stored for the next one."""
    seen = prior.sessions_observed if prior is not None else 0
    return OpponentStats(
        ubi=calculate_ubi(list(opponent_bids)),
        aui=calculate_aui(list(own_utilities)),
        sessions_observed=seen + 1,
    )


class FrequencyModel:
    """Estimate of the opponent's utility from the bids it sends.

    Issue weights come from how often an issue keeps its value between
    consecutive bids (Laplace smoothed); value scores are occurrence counts
    normalized by the issue's most frequent value.
    """

    def __init__(self, domain: Domain):
        self.domain = domain
        self.value_counts: list[dict[str, int]] = [dict.fromkeys(i.values, 0) for i in domain.issues]
        self.unchanged_counts = [0] * len(domain.issues)
        self.total_bids_observed = 0
        self._previous: Bid | None = None

    def update(self, bid: Bid) -> FrequencyModel:
        if len(bid) != len(self.value_counts):
            raise DomainMismatchError("bid does not match the model's domain")
        for counts, value in zip(self.value_counts, bid):
            if value not in counts:
                raise DomainMismatchError(f"unknown value {value!r}")
        for k, value in enumerate(bid):
            self.value_counts[k][value] += 1
            if self._previous is not None and self._previous[k] == value:
                self.unchanged_counts[k] += 1
        self._previous = bid
        self.total_bids_observed += 1
        return self

    def issue_weights(self) -> list[float]:
        smoothed = [c + 1 for c in self.unchanged_counts]
        total = sum(smoothed)
        return [s / total for s in smoothed]

    def value_score(self, issue_index: int, value: str) -> float:
        counts = self.value_counts[issue_index]
        return counts[value] / max(counts.values())

    def predict(self, bid: Bid) -> float:
        if self.total_bids_observed == 0:
            raise ValueError("no bids observed yet")
        if len(bid) != len(self.value_counts):
            raise DomainMismatchError("bid does not match the model's domain")
        try:
            return sum(
                w * self.value_score(k, v) for k, (w, v) in enumerate(zip(self.issue_weights(), bid))
            )
        except KeyError as exc:
            raise DomainMismatchError(f"unknown value {exc.args[0]!r}") from None


def update_frequency_model(model: FrequencyModel, bid: Bid) -> FrequencyModel:
    return model.update(bid)


def predict_opponent_utility(model: FrequencyModel, bid: Bid) -> float:
    return model.predict(bid)
