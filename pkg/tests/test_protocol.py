import csv

import pytest

from arena.baselines import Hardliner
from arena.domain import random_scenario, utility
from arena.protocol import (
    TRANSCRIPT_HEADER,
    Accept,
    Offer,
    SessionConfig,
    SessionOutcome,
    run_session,
    social_welfare,
    write_transcript_csv,
)
from helpers import Scripted


def test_immediate_acceptance():
    domain, pa, pb = random_scenario(0, 2, 3)
    bid = ("v1", "v2")
    a = Scripted([Offer(bid)])
    b = Scripted([Accept()])
    outcome, transcript = run_session(a, b, pa, pb, SessionConfig(10), seed=1)
    assert outcome.is_agreement and outcome.turn == 2
    assert outcome.agreement == bid
    assert outcome.utility_a == utility(pa, bid)
    assert outcome.utility_b == utility(pb, bid)
    assert [r.actor for r in transcript.rows] == ["A", "B"]
    assert b.seen == [(bid, 0.1)]


def test_two_hardliners_fail(opposed_pair):
    _, pa, pb = opposed_pair
    outcome, transcript = run_session(Hardliner(), Hardliner(), pa, pb, SessionConfig(50), seed=0)
    assert not outcome.is_agreement
    assert outcome.social_welfare == 0.0
    assert len(transcript.rows) == 50
    assert outcome.turn == 50


def test_clock_at_halfway_acceptance(opposed_pair):
    _, pa, pb = opposed_pair
    a = Scripted([lambda r, t: Accept() if t >= 0.5 else Offer(("a",))] * 1000)
    b = Scripted([], default=("b",))
    outcome, transcript = run_session(a, b, pa, pb, SessionConfig(1000), seed=0)
    # 500 actions have elapsed when A accepts with the 501st
    assert outcome.turn == 501
    assert transcript.rows[-1].t == 0.5
    assert a.seen[-1][1] == 0.5


def test_clock_is_exact_and_alternation_strict(opposed_pair):
    _, pa, pb = opposed_pair
    a, b = Scripted([], default=("a",)), Scripted([], default=("b",))
    _, transcript = run_session(a, b, pa, pb, SessionConfig(37, "B"), seed=0)
    assert [r.t for r in transcript.rows] == [k / 37 for k in range(37)]
    actors = [r.actor for r in transcript.rows]
    assert actors[0] == "B"
    assert all(x != y for x, y in zip(actors, actors[1:]))
    assert a.seen[0][0] == ("b",)


def test_accept_without_offer_is_violation():
    _, pa, pb = random_scenario(0, 2, 2)
    pa2 = pa.__class__(pa.domain, pa.weights, pa.value_scores, 0.25)
    a = Scripted([Accept()])
    b = Scripted([])
    outcome, _ = run_session(a, b, pa2, pb, SessionConfig(10), seed=0)
    assert not outcome.is_agreement
    assert outcome.violation == "A"
    assert (outcome.utility_a, outcome.utility_b) == (0.25, 0.0)
    assert len(b.views) == 1


def test_end_of_session_views():
    domain, pa, pb = random_scenario(1, 2, 3)
    bids = [("v0", "v0"), ("v1", "v1"), ("v2", "v2")]
    a = Scripted([Offer(bids[0]), Offer(bids[2])])
    b = Scripted([Offer(bids[1]), Accept()])
    outcome, _ = run_session(a, b, pa, pb, SessionConfig(10), seed=0)
    view_a, _ = a.views[0]
    view_b, _ = b.views[0]
    assert view_a.own_bids == [bids[0], bids[2]]
    assert view_a.opponent_bids == [bids[1]]
    assert view_a.own_utilities_of_opponent_bids == [utility(pa, bids[1])]
    assert view_b.own_utilities_of_opponent_bids == [utility(pb, bids[0]), utility(pb, bids[2])]
    assert view_a.agreement == bids[2] == outcome.agreement
    assert view_b.turns == 4


def test_agreement_bid_is_preceding_offer():
    domain, pa, pb = random_scenario(2, 3, 3)
    from arena.chargingboul import ChargingBoul
    from arena.baselines import TimeDependentAgent, TimeDependentParams

    outcome, transcript = run_session(
        ChargingBoul(), TimeDependentAgent(TimeDependentParams(e=1.0)), pa, pb, SessionConfig(200), seed=3
    )
    assert outcome.is_agreement
    last, before = transcript.rows[-1], transcript.rows[-2]
    assert isinstance(last.action, Accept)
    assert before.action.bid == outcome.agreement
    assert outcome.utility_a == utility(pa, outcome.agreement)
    assert outcome.utility_b == utility(pb, outcome.agreement)


@pytest.mark.parametrize(
    "ua,ub,expected", [(0.7, 0.6, 1.3), (0.0, 0.0, 0.0), (1.0, 1.0, 2.0)]
)
def test_social_welfare(ua, ub, expected):
    assert social_welfare(SessionOutcome(None, ua, ub, 1)) == pytest.approx(expected)


def test_config_validation():
    with pytest.raises(ValueError):
        SessionConfig(1)
    with pytest.raises(ValueError):
        SessionConfig(10, "C")


def test_profiles_must_share_domain():
    _, pa, _ = random_scenario(0, 2, 2)
    _, _, pb = random_scenario(0, 3, 2)
    with pytest.raises(ValueError):
        run_session(Scripted([]), Scripted([]), pa, pb)


def test_transcript_csv(tmp_path):
    domain, pa, pb = random_scenario(1, 2, 3)
    a = Scripted([Offer(("v0", "v1"))])
    b = Scripted([Accept()])
    _, transcript = run_session(a, b, pa, pb, SessionConfig(10), seed=0)
    path = tmp_path / "t.csv"
    write_transcript_csv(path, transcript, domain, {"A": "alice", "B": "bob"})
    rows = list(csv.reader(open(path)))
    assert rows[0] == TRANSCRIPT_HEADER
    assert rows[1][:4] == ["1", "alice", "offer", "1"]
    assert float(rows[1][4]) == utility(pa, ("v0", "v1"))
    assert float(rows[1][5]) == utility(pb, ("v0", "v1"))
    assert rows[2][:4] == ["2", "bob", "accept", "1"]
    assert float(rows[2][4]) == utility(pb, ("v0", "v1"))
