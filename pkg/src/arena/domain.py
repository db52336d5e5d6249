"""Negotiation domains, bids and linear additive utility profiles."""

from __future__ import annotations

import bisect
import itertools
import json
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Iterator, Mapping, Sequence

import numpy as np

EPSILON_MIN = 0.001
EPSILON_MAX = 0.05
DEFAULT_BID_CAP = 1_000_000

# A bid is the tuple of chosen value labels, in the domain's issue order.
Bid = tuple[str, ...]


class DomainMismatchError(ValueError):
    """A bid or profile references issues or values outside its domain."""


class CapacityError(ValueError):
    """The bid space is larger than the configured enumeration cap."""


class ScenarioFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Issue:
    name: str
    values: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(self.values))
        if not self.values:
            raise ValueError(f"issue {self.name!r} has no values")
        if len(set(self.values)) != len(self.values):
            raise ValueError(f"issue {self.name!r} has duplicate value labels")


@dataclass(frozen=True)
class Domain:
    issues: tuple[Issue, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "issues", tuple(self.issues))
        if not self.issues:
            raise ValueError("a domain needs at least one issue")
        names = [i.name for i in self.issues]
        if len(set(names)) != len(names):
            raise ValueError("issue names must be unique")

    @property
    def issue_names(self) -> tuple[str, ...]:
        return tuple(i.name for i in self.issues)

    @property
    def size(self) -> int:
        return math.prod(len(i.values) for i in self.issues)

    def issue_index(self, name: str) -> int:
        for k, issue in enumerate(self.issues):
            if issue.name == name:
                return k
        raise DomainMismatchError(f"unknown issue {name!r}")

    def make_bid(self, assignment: Mapping[str, str]) -> Bid:
        """Build a bid from an issue-name -> value mapping."""
        if set(assignment) != set(self.issue_names):
            raise DomainMismatchError("assignment must cover exactly the domain's issues")
        bid = tuple(assignment[i.name] for i in self.issues)
        self.validate(bid)
        return bid

    def as_mapping(self, bid: Bid) -> dict[str, str]:
        self.validate(bid)
        return dict(zip(self.issue_names, bid))

    def validate(self, bid: Bid) -> None:
        if len(bid) != len(self.issues):
            raise DomainMismatchError(
                f"bid has {len(bid)} values, domain has {len(self.issues)} issues"
            )
        for issue, value in zip(self.issues, bid):
            if value not in issue.values:
                raise DomainMismatchError(f"value {value!r} not in issue {issue.name!r}")

    def bid_index(self, bid: Bid) -> int:
        """Position of ``bid`` in :func:`enumerate_bids` order (mixed radix)."""
        self.validate(bid)
        index = 0
        for issue, value in zip(self.issues, bid):
            index = index * len(issue.values) + issue.values.index(value)
        return index


def enumerate_bids(domain: Domain, cap: int = DEFAULT_BID_CAP) -> list[Bid]:
    """All bids of ``domain`` in lexicographic issue/value order."""
    if domain.size > cap:
        raise CapacityError(f"domain has {domain.size} bids, cap is {cap}")
    return list(itertools.product(*(i.values for i in domain.issues)))


def iter_bids(domain: Domain) -> Iterator[Bid]:
    return itertools.product(*(i.values for i in domain.issues))


@dataclass(frozen=True)
class LinearAdditiveProfile:
    """Linear additive utility over a discrete domain.

    ``weights[k]`` belongs to ``domain.issues[k]`` and ``value_scores[k][j]``
    to ``domain.issues[k].values[j]``. Use :meth:`from_mappings` to build one
    from name-keyed dictionaries.
    """

    domain: Domain
    weights: tuple[float, ...]
    value_scores: tuple[tuple[float, ...], ...]
    reservation: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "weights", tuple(float(w) for w in self.weights))
        object.__setattr__(
            self, "value_scores", tuple(tuple(float(s) for s in row) for row in self.value_scores)
        )
        issues = self.domain.issues
        if len(self.weights) != len(issues) or len(self.value_scores) != len(issues):
            raise DomainMismatchError("profile does not match the domain's issue count")
        if any(not 0.0 <= w <= 1.0 for w in self.weights):
            raise ValueError("weights must lie in [0, 1]")
        if abs(math.fsum(self.weights) - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {math.fsum(self.weights)}, expected 1")
        for issue, row in zip(issues, self.value_scores):
            if len(row) != len(issue.values):
                raise DomainMismatchError(f"score count mismatch for issue {issue.name!r}")
            if any(not 0.0 <= s <= 1.0 for s in row):
                raise ValueError(f"scores of issue {issue.name!r} must lie in [0, 1]")
            if max(row) != 1.0:
                raise ValueError(f"issue {issue.name!r} needs a value with score 1")
        if not 0.0 <= self.reservation <= 1.0:
            raise ValueError("reservation must lie in [0, 1]")

    @classmethod
    def from_mappings(
        cls,
        domain: Domain,
        weights: Mapping[str, float],
        value_scores: Mapping[str, Mapping[str, float]],
        reservation: float = 0.0,
    ) -> LinearAdditiveProfile:
        if set(weights) != set(domain.issue_names) or set(value_scores) != set(domain.issue_names):
            raise DomainMismatchError("weights/value_scores must name exactly the domain's issues")
        rows = []
        for issue in domain.issues:
            scores = value_scores[issue.name]
            if set(scores) != set(issue.values):
                raise DomainMismatchError(f"value_scores of {issue.name!r} must cover its values")
            rows.append(tuple(scores[v] for v in issue.values))
        return cls(domain, tuple(weights[i.name] for i in domain.issues), tuple(rows), reservation)

    def weight(self, issue: str) -> float:
        return self.weights[self.domain.issue_index(issue)]

    def score(self, issue: str, value: str) -> float:
        k = self.domain.issue_index(issue)
        try:
            return self.value_scores[k][self.domain.issues[k].values.index(value)]
        except ValueError:
            raise DomainMismatchError(f"value {value!r} not in issue {issue!r}") from None

    @cached_property
    def _lookup(self) -> tuple[dict[str, float], ...]:
        return tuple(
            {v: w * s for v, s in zip(issue.values, row)}
            for issue, w, row in zip(self.domain.issues, self.weights, self.value_scores)
        )

    def to_mappings(self) -> dict:
        return {
            "weights": {i.name: w for i, w in zip(self.domain.issues, self.weights)},
            "value_scores": {
                i.name: dict(zip(i.values, row))
                for i, row in zip(self.domain.issues, self.value_scores)
            },
            "reservation": self.reservation,
        }


def utility(profile: LinearAdditiveProfile, bid: Bid) -> float:
    """Weighted sum of the chosen values' scores."""
    lookup = profile._lookup
    if len(bid) != len(lookup):
        raise DomainMismatchError(f"bid has {len(bid)} values, profile has {len(lookup)} issues")
    total = 0.0
    try:
        for table, value in zip(lookup, bid):
            total += table[value]
    except KeyError as exc:
        raise DomainMismatchError(f"unknown value {exc.args[0]!r}") from None
    return total


class BidSpace:
    """Enumerated bids of one profile, sorted by utility for range queries."""

    def __init__(self, profile: LinearAdditiveProfile, cap: int = DEFAULT_BID_CAP):
        self.profile = profile
        self.bids = enumerate_bids(profile.domain, cap)
        self.utilities = np.array([utility(profile, b) for b in self.bids])
        order = np.argsort(self.utilities, kind="stable")
        self.sorted_bids: list[Bid] = [self.bids[k] for k in order]
        self.sorted_utils: list[float] = self.utilities[order].tolist()
        self._util_of = dict(zip(self.bids, self.utilities.tolist()))

    def __len__(self) -> int:
        return len(self.bids)

    def utility(self, bid: Bid) -> float:
        try:
            return self._util_of[bid]
        except KeyError:
            raise DomainMismatchError(f"bid {bid!r} is not in the domain") from None

    @cached_property
    def best_bid(self) -> Bid:
        """Highest-utility bid; earliest in enumeration order on ties."""
        return self.bids[int(np.argmax(self.utilities))]

    def range_slice(self, lo: float, hi: float) -> tuple[int, int]:
        """Half-open index range into ``sorted_bids`` with lo <= u <= hi."""
        return bisect.bisect_left(self.sorted_utils, lo), bisect.bisect_right(self.sorted_utils, hi)

    def first_at_least(self, value: float) -> int:
        return bisect.bisect_left(self.sorted_utils, value)


@lru_cache(maxsize=64)
def bid_space(profile: LinearAdditiveProfile) -> BidSpace:
    return BidSpace(profile)


def compute_tolerance(profile: LinearAdditiveProfile, domain: Domain | None = None) -> float:
    """Mean gap between adjacent distinct bid utilities, clamped to [0.001, 0.05]."""
    if domain is not None and domain != profile.domain:
        raise DomainMismatchError("profile belongs to a different domain")
    utils = bid_space(profile).utilities
    # rounding merges float-noise duplicates of the same utility level
    distinct = np.unique(np.round(utils, 12))
    return tolerance_from_utilities(distinct)


def tolerance_from_utilities(utilities: Sequence[float]) -> float:
    distinct = np.unique(np.asarray(utilities, dtype=float))
    if distinct.size < 2:
        return EPSILON_MAX
    mean_gap = float(np.mean(np.diff(distinct)))
    return min(EPSILON_MAX, max(EPSILON_MIN, mean_gap))


def random_scenario(
    seed: int, issue_count: int, values_per_issue: int, opposition: float = 0.0
) -> tuple[Domain, LinearAdditiveProfile, LinearAdditiveProfile]:
    """Random domain with two normalized profiles.

    With ``opposition=0`` the profiles are drawn independently. Larger values
    blend profile B towards the mirror image of A (same issue weights, scores
    ``1 - score_A``), which makes the two sides' interests conflict more.
    """
    if issue_count < 1 or values_per_issue < 1:
        raise ValueError("issue_count and values_per_issue must be >= 1")
    if not 0.0 <= opposition <= 1.0:
        raise ValueError("opposition must lie in [0, 1]")
    rng = np.random.default_rng(seed)
    domain = Domain(
        tuple(
            Issue(f"i{k}", tuple(f"v{j}" for j in range(values_per_issue)))
            for k in range(issue_count)
        )
    )

    def draw() -> tuple[np.ndarray, list[np.ndarray]]:
        raw = rng.uniform(0.05, 1.0, size=issue_count)
        rows = [rng.uniform(0.0, 1.0, size=values_per_issue) for _ in range(issue_count)]
        return raw / raw.sum(), rows

    def build(weights: np.ndarray, rows: list[np.ndarray]) -> LinearAdditiveProfile:
        weights = weights / weights.sum()
        weights[-1] = 1.0 - math.fsum(weights[:-1])
        normalized = []
        for scores in rows:
            top = scores.max()
            scores = np.ones_like(scores) if top <= 0 else np.clip(scores / top, 0.0, 1.0)
            normalized.append(tuple(scores))
        return LinearAdditiveProfile(domain, tuple(weights), tuple(normalized))

    w_a, rows_a = draw()
    w_b, rows_b = draw()
    profile_a = build(w_a, rows_a)
    k = opposition
    mirrored = [1.0 - np.array(r) for r in profile_a.value_scores]
    profile_b = build(
        (1 - k) * w_b + k * w_a, [(1 - k) * rb + k * mb for rb, mb in zip(rows_b, mirrored)]
    )
    return domain, profile_a, profile_b


_SCENARIO_KEYS = {"issues", "profileA", "profileB"}
_PROFILE_KEYS = {"weights", "value_scores", "reservation"}


def parse_scenario(doc: Mapping) -> tuple[Domain, LinearAdditiveProfile, LinearAdditiveProfile]:
    if not isinstance(doc, Mapping):
        raise ScenarioFormatError("scenario must be a JSON object")
    extra = set(doc) - _SCENARIO_KEYS
    missing = _SCENARIO_KEYS - set(doc)
    if extra or missing:
        raise ScenarioFormatError(f"bad scenario keys: unknown={sorted(extra)} missing={sorted(missing)}")
    try:
        domain = Domain(tuple(Issue(str(name), tuple(vals)) for name, vals in doc["issues"].items()))
        profiles = []
        for key in ("profileA", "profileB"):
            p = doc[key]
            extra = set(p) - _PROFILE_KEYS
            if extra or not {"weights", "value_scores"} <= set(p):
                raise ScenarioFormatError(f"bad keys in {key}: {sorted(set(p))}")
            profiles.append(
                LinearAdditiveProfile.from_mappings(
                    domain, p["weights"], p["value_scores"], float(p.get("reservation", 0.0))
                )
            )
    except ScenarioFormatError:
        raise
    except (AttributeError, TypeError, ValueError) as exc:
        raise ScenarioFormatError(str(exc)) from exc
    return domain, profiles[0], profiles[1]


def load_scenario(path: str | Path):
    with open(path, encoding="utf-8") as fh:
        return parse_scenario(json.load(fh))


def dump_scenario(
    domain: Domain, profile_a: LinearAdditiveProfile, profile_b: LinearAdditiveProfile
) -> dict:
    return {
        "issues": {i.name: list(i.values) for i in domain.issues},
        "profileA": profile_a.to_mappings(),
        "profileB": profile_b.to_mappings(),
    }
