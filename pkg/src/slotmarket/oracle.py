"""Brute-force reference answers for small instances.

Nothing here shares code with the solver or the price reduction: schedules
come from plain enumeration, prices from a scan of the integer price
lattice.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from typing import List, Tuple

import numpy as np

from .errors import Infeasible, NoEquilibriumPrices, NotLatticeMin, TooLarge
from .model import Instance, PriceVector, Schedule

MAX_FLIGHTS = 8
MAX_PRODUCT = 10**6
MAX_SLOTS = 4
MAX_LATTICE = 5 * 10**6


def enumerate_optimal_schedules(inst: Instance) -> Tuple[int, List[Schedule]]:
    flights = inst.flights
    if len(flights) > MAX_FLIGHTS:
        raise TooLarge(f"{len(flights)} flights > {MAX_FLIGHTS}")
    size = math.prod(len(f.window) for f in flights)
    if size > MAX_PRODUCT:
        raise TooLarge(f"{size} candidate assignments > {MAX_PRODUCT}")
    caps = {s.id: s.capacity for s in inst.slots}
    best, argmin = None, []
    for combo in itertools.product(*(f.window for f in flights)):
        if any(n > caps[s] for s, n in Counter(combo).items()):
            continue
        total = sum(f.delay_cost[s] for f, s in zip(flights, combo))
        if best is None or total < best:
            best, argmin = total, [combo]
        elif total == best:
            argmin.append(combo)
    if best is None:
        raise Infeasible("no capacity-feasible assignment exists")
    return best, [{f.id: s for f, s in zip(flights, combo)} for combo in argmin]


def price_bound(inst: Instance) -> int:
    return inst.max_cost * len(inst.slots)


def equilibrium_price_lattice(inst: Instance, sched: Schedule) -> np.ndarray:
    """Every integer price vector in ``[0, maxcost*|S|]^|S|`` that supports ``sched``.

    Rows are price vectors with columns in ``inst.slots`` order. Slots below
    capacity are pinned to zero up front, which shrinks the scan.
    """
    slots = [s.id for s in inst.slots]
    if len(slots) > MAX_SLOTS:
        raise TooLarge(f"{len(slots)} slots > {MAX_SLOTS}")
    load = Counter(sched.values())
    bound = price_bound(inst)
    free = [k for k, s in enumerate(inst.slots) if load[s.id] >= s.capacity]
    if (bound + 1) ** len(free) > MAX_LATTICE:
        raise TooLarge(f"price lattice has {(bound + 1) ** len(free)} points")
    grid = np.zeros(((bound + 1) ** len(free), len(slots)), dtype=np.int64)
    if free:
        axes = np.meshgrid(*([np.arange(bound + 1)] * len(free)), indexing="ij")
        for k, ax in zip(free, axes):
            grid[:, k] = ax.ravel()
    col = {s: k for k, s in enumerate(slots)}
    ok = np.ones(len(grid), dtype=bool)
    for f in inst.flights:
        s = sched[f.id]
        mine = grid[:, col[s]] + f.delay_cost[s]
        for t in f.window:
            if t != s:
                ok &= mine <= grid[:, col[t]] + f.delay_cost[t]
    return grid[ok]


def min_equilibrium_prices_oracle(inst: Instance, sched: Schedule) -> PriceVector:
    feasible = equilibrium_price_lattice(inst, sched)
    if len(feasible) == 0:
        raise NoEquilibriumPrices("no lattice point supports the schedule")
    best = feasible[np.argmin(feasible.sum(axis=1))]
    if not np.array_equal(best, feasible.min(axis=0)):
        raise NotLatticeMin(f"min-sum vector {best.tolist()} is not below every equilibrium vector")
    bound = price_bound(inst)
    if bound > 0 and (best == bound).any():
        raise NotLatticeMin(f"minimum {best.tolist()} touches the lattice bound {bound}")
    return {s.id: int(v) for s, v in zip(inst.slots, best)}
