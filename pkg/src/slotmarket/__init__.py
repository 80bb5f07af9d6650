"""Airport landing-slot market: equilibrium schedules, minimum prices, VCG checks."""

from .bmatch import DualPotentials, MatchGraph, build_match_graph, solve_min_bmatching
from .equilibrium import (
    IndifferenceGraph,
    clear_market,
    extract_prices,
    indifference_graph,
    minimum_prices,
    run_minimum_prices,
    verify_equilibrium,
)
from .errors import (
    Infeasible,
    InvalidSchedule,
    IterationBound,
    NoEquilibriumPrices,
    NotEquilibrium,
    NotLatticeMin,
    NotNormalized,
    RoundInfeasible,
    ScenarioError,
    SlotMarketError,
    TooLarge,
)
from .model import EquilibriumOutcome, Flight, Instance, Slot, total_delay_cost, validate_instance
from .oracle import enumerate_optimal_schedules, min_equilibrium_prices_oracle
from .vcg import check_leonard, truthfulness_probe, vcg_payments

__version__ = "0.1.0"
