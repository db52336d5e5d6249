"""Agent spec strings such as ``conceder:e=2`` and the factories behind them."""

from __future__ import annotations

from typing import Callable

from .baselines import Hardliner, RandomAgent, TimeDependentAgent, TimeDependentParams
from .chargingboul import ChargingBoul
from .persistence import StatsStore

TIME_DEPENDENT_DEFAULTS = {"boulware": 0.05, "linear": 1.0, "conceder": 2.0}
LEARNING_AGENTS = {"chargingboul"}


class AgentSpecError(ValueError):
    pass


def parse_spec(spec: str) -> tuple[str, dict[str, float]]:
    name, _, rest = spec.strip().partition(":")
    name = name.strip().lower()
    if name not in TIME_DEPENDENT_DEFAULTS and name not in ("chargingboul", "hardliner", "random"):
        raise AgentSpecError(f"unknown agent {name!r}")
    params: dict[str, float] = {}
    for part in filter(None, (p.strip() for p in rest.split(","))):
        key, eq, value = part.partition("=")
        if not eq:
            raise AgentSpecError(f"bad parameter {part!r} in {spec!r}")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise AgentSpecError(f"parameter {key!r} of {spec!r} is not a number") from None
    allowed = {
        "chargingboul": {"m", "E"},
        "hardliner": set(),
        "random": set(),
    }.get(name, {"e", "floor", "band"})
    unknown = set(params) - allowed
    if unknown:
        raise AgentSpecError(f"{name} does not take {sorted(unknown)}")
    return name, params


def split_agent_list(text: str) -> list[str]:
    """Split ``a,b:x=1,y=2,c`` into specs; ``key=value`` tokens stay with the previous agent."""
    specs: list[str] = []
    for token in (t.strip() for t in text.split(",")):
        if not token:
            continue
        if "=" in token and ":" not in token and specs:
            specs[-1] += "," + token
        else:
            specs.append(token)
    return specs


def make_agent(spec: str, store: StatsStore | None = None) -> Callable:
    """Return a zero-argument factory building a fresh agent for ``spec``.

    Only learning agents use ``store``.
    """
    name, params = parse_spec(spec)
    if name == "chargingboul":
        if not 0 < params.get("m", 0.5) < 1 or params.get("E", 0.1) <= 0:
            raise AgentSpecError(f"{spec}: need 0 < m < 1 and E > 0")
        return lambda: ChargingBoul(spec, store, params.get("m"), params.get("E"))
    if name == "hardliner":
        return lambda: Hardliner(spec)
    if name == "random":
        return lambda: RandomAgent(spec)
    kwargs = {"e": params.get("e", TIME_DEPENDENT_DEFAULTS[name])}
    kwargs.update({k: params[k] for k in ("floor", "band") if k in params})
    try:
        td = TimeDependentParams(**kwargs)
    except ValueError as exc:
        raise AgentSpecError(f"{spec}: {exc}") from None
    return lambda: TimeDependentAgent(td, spec)


def is_learning(spec: str) -> bool:
    return parse_spec(spec)[0] in LEARNING_AGENTS
