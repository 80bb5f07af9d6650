"""VCG payments by re-solving without each flight, and truthfulness probes."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .bmatch import build_match_graph, solve_min_bmatching
from .equilibrium import clear_market
from .errors import SlotMarketError
from .model import FlightId, Instance, Schedule, SlotId, total_delay_cost

PaymentVector = Dict[FlightId, int]

MAX_RERUNS = 10**4


def optimal_cost(inst: Instance) -> int:
    sched, _ = solve_min_bmatching(build_match_graph(inst))
    return total_delay_cost(inst, sched)


def vcg_payments(inst: Instance) -> Tuple[Schedule, PaymentVector]:
    """Clarke-pivot payments for the solver's optimal schedule.

    A flight pays the delay cost it pushes onto everyone else: the others'
    cost in the full optimum minus the others' optimal cost had it not
    shown up. Both terms are nonnegative and the difference is too, since
    dropping a flight only loosens capacity.
    """
    sched, _ = solve_min_bmatching(build_match_graph(inst))
    full = total_delay_cost(inst, sched)
    flights = inst.flight_map
    pay = {}
    for fid, sid in sched.items():
        others_with = full - flights[fid].delay_cost[sid]
        others_without = optimal_cost(inst.without(fid))
        pay[fid] = others_with - others_without
    return sched, pay


def check_leonard(inst: Instance) -> bool:
    """True when each flight's VCG payment equals the minimum price of its slot."""
    outcome = clear_market(inst, prices="min")
    sched, pay = vcg_payments(inst)
    if sched != outcome.schedule:
        raise SlotMarketError("solver returned different schedules for the same instance")
    return all(outcome.prices[sid] == pay[fid] for fid, sid in sched.items())


@dataclass(frozen=True)
class Misreport:
    flight: FlightId
    reported: Dict[SlotId, int]
    slot: SlotId
    true_cost: int
    truthful_cost: int

    @property
    def gain(self) -> int:
        return self.truthful_cost - self.true_cost


def true_total_cost(inst: Instance, flight: FlightId, report: Optional[Mapping[SlotId, int]] = None):
    """Run the mechanism on ``report`` and score the outcome with the flight's real costs."""
    f = inst.flight_map[flight]
    run = inst if report is None else inst.with_flight_costs(flight, report)
    outcome = clear_market(run, prices="min")
    slot = outcome.schedule[flight]
    return slot, outcome.prices[slot] + f.delay_cost[slot]


def default_grid(inst: Instance, flight: FlightId) -> List[Dict[SlotId, int]]:
    """All integer cost maps on the flight's window with entries in ``[0, 2 * max true cost]``."""
    f = inst.flight_map[flight]
    top = 2 * max(f.delay_cost.values())
    return box_grid(f.window, range(top + 1))


def box_grid(window: Sequence[SlotId], values: Iterable[int]) -> List[Dict[SlotId, int]]:
    values = list(values)
    n = len(values) ** len(window)
    if n > MAX_RERUNS:
        raise ValueError(f"misreport grid has {n} points, more than the {MAX_RERUNS} rerun cap")
    return [dict(zip(window, combo)) for combo in itertools.product(values, repeat=len(window))]


def truthfulness_probe(inst: Instance, flight: FlightId,
                       misreport_grid: Optional[Iterable[Mapping[SlotId, int]]] = None) -> List[Misreport]:
    """Misreports that would strictly lower the flight's true total cost; empty if none."""
    f = inst.flight_map[flight]
    grid = default_grid(inst, flight) if misreport_grid is None else list(misreport_grid)
    if len(grid) > MAX_RERUNS:
        raise ValueError(f"{len(grid)} misreports exceed the {MAX_RERUNS} rerun cap")
    _, honest = true_total_cost(inst, flight)
    found = []
    for report in grid:
        if set(report) != set(f.window) or any(c < 0 for c in report.values()):
            raise ValueError(f"misreport {report!r} is not a nonnegative cost map on {list(f.window)}")
        slot, cost = true_total_cost(inst, flight, report)
        if cost < honest:
            found.append(Misreport(flight, dict(report), slot, cost, honest))
    return found


def grid_size(inst: Instance, flight: FlightId) -> int:
    f = inst.flight_map[flight]
    return (2 * max(f.delay_cost.values()) + 1) ** len(f.window)
