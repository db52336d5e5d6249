from __future__ import annotations

from arena.domain import Domain, Issue, LinearAdditiveProfile
from arena.protocol import Offer


def single_issue(scores, labels=None, reservation=0.0):
    labels = labels or [f"v{k}" for k in range(len(scores))]
    domain = Domain((Issue("x", tuple(labels)),))
    return domain, LinearAdditiveProfile(domain, (1.0,), (tuple(scores),), reservation)


class Scripted:
    """Plays a fixed list of actions, recording the clock it was shown."""

    def __init__(self, actions, name="scripted", default=("a",)):
        self.actions = list(actions)
        self.name = name
        self.default = default
        self.seen = []
        self.views = []

    def begin_session(self, profile, opponent_id, seed):
        self.profile = profile
        self.opponent_id = opponent_id

    def act(self, received, t):
        self.seen.append((received, t))
        action = self.actions.pop(0) if self.actions else Offer(self.default)
        return action(received, t) if callable(action) else action

    def end_session(self, view, outcome):
        self.views.append((view, outcome))
