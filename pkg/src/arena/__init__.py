"""ChargingBoul negotiation agent, scripted opponents and a tournament runner."""

from .chargingboul import ChargingBoul, StrategyParams
from .domain import Bid, Domain, Issue, LinearAdditiveProfile, random_scenario, utility
from .opponent_model import OpponentClass, OpponentStats, calculate_aui, calculate_ubi, classify
from .protocol import Accept, Offer, SessionConfig, SessionOutcome, run_session
from .tournament import TournamentConfig, run_tournament

__all__ = [
    "Accept", "Bid", "ChargingBoul", "Domain", "Issue", "LinearAdditiveProfile", "Offer",
    "OpponentClass", "OpponentStats", "SessionConfig", "SessionOutcome", "StrategyParams",
    "TournamentConfig", "calculate_aui", "calculate_ubi", "classify", "random_scenario",
    "run_session", "run_tournament", "utility",
]
__version__ = "0.1.0"
