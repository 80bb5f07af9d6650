"""Equilibrium prices: extraction from duals, verification, and the minimum price vector."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Iterable, List, Mapping, Optional, Tuple

import numpy as np

from .bmatch import DualPotentials, build_match_graph, solve_min_bmatching
from .errors import IterationBound, NotEquilibrium, NotNormalized
from .model import (
    EquilibriumOutcome,
    FlightId,
    Instance,
    PriceVector,
    Schedule,
    SlotId,
    check_schedule,
    flight_costs,
    slot_load,
    total_delay_cost,
)


def normalize_duals(duals: DualPotentials) -> DualPotentials:
    """Shift potentials across the bipartition so the dummy node sits at 1.

    Adding ``k`` to every left node and subtracting it from every right node
    leaves each edge's ``q_left + q_right`` unchanged.
    """
    k = 1 - duals.dummy
    return DualPotentials(
        flight={f: q + k for f, q in duals.flight.items()},
        slot={s: q - k for s, q in duals.slot.items()},
        dummy=1,
    )


def extract_prices(duals: DualPotentials) -> PriceVector:
    if duals.dummy != 1:
        raise NotNormalized(f"dummy potential is {duals.dummy}, expected 1")
    prices = {s: -q for s, q in duals.slot.items()}
    negative = {s: p for s, p in prices.items() if p < 0}
    if negative:
        raise NotNormalized(f"slot potentials above zero give negative prices: {negative}")
    return prices


@dataclass(frozen=True)
class EquilibriumViolation:
    condition: str          # "min_cost", "zero_price", or "price_domain"
    slot: SlotId
    flight: Optional[FlightId] = None
    witness: Optional[SlotId] = None
    detail: str = ""

    def __str__(self):
        return self.detail


def verify_equilibrium(inst: Instance, sched: Schedule, prices: Mapping[SlotId, int]) -> List[EquilibriumViolation]:
    """Check both equilibrium conditions and list every violation found.

    ``min_cost``: no flight can lower price + delay cost by moving to another
    slot of its window; the cheaper slot is reported as ``witness``.
    ``zero_price``: a slot below capacity must be free.
    """
    check_schedule(inst, sched)
    out = []
    for s in inst.slots:
        p = prices.get(s.id)
        if not isinstance(p, (int, np.integer)) or p < 0:
            out.append(EquilibriumViolation(
                "price_domain", s.id, detail=f"slot {s.id!r} has price {p!r}; prices must be nonnegative integers"))
    if out:
        return out
    for f in inst.flights:
        s = sched[f.id]
        mine = prices[s] + f.delay_cost[s]
        for t in f.window:
            other = prices[t] + f.delay_cost[t]
            if other < mine:
                out.append(EquilibriumViolation(
                    "min_cost", s, f.id, t,
                    f"flight {f.id!r} pays {mine} at {s!r} but only {other} at {t!r}"))
    load = slot_load(inst, sched)
    for sl in inst.slots:
        if load[sl.id] < sl.capacity and prices[sl.id] != 0:
            out.append(EquilibriumViolation(
                "zero_price", sl.id,
                detail=f"slot {sl.id!r} holds {load[sl.id]} of {sl.capacity} but is priced {prices[sl.id]}"))
    return out


@dataclass(frozen=True)
class IndifferenceGraph:
    """Slots as nodes; ``(s, t, f)`` when flight ``f`` at ``s`` pays the same total at ``t``."""

    nodes: Tuple[SlotId, ...]
    edges: Tuple[Tuple[SlotId, SlotId, FlightId], ...]

    def successors(self):
        adj = {n: [] for n in self.nodes}
        for s, t, _ in self.edges:
            adj[s].append(t)
        return adj

    def predecessors(self):
        adj = {n: [] for n in self.nodes}
        for s, t, _ in self.edges:
            adj[t].append(s)
        return adj

    def reachable_from(self, sources: Iterable[SlotId]) -> set:
        return _bfs(self.successors(), sources)

    def reaching(self, target: SlotId) -> set:
        return _bfs(self.predecessors(), [target])


def _bfs(adj, sources):
    seen = set(sources)
    queue = deque(seen)
    while queue:
        u = queue.popleft()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                queue.append(v)
    return seen


def indifference_graph(inst: Instance, sched: Schedule, prices: Mapping[SlotId, int]) -> IndifferenceGraph:
    bad = verify_equilibrium(inst, sched, prices)
    if bad:
        raise NotEquilibrium(f"{len(bad)} violation(s), first: {bad[0]}")
    edges = []
    for f in inst.flights:
        s = sched[f.id]
        mine = prices[s] + f.delay_cost[s]
        for t in f.window:
            if t != s and prices[t] + f.delay_cost[t] == mine:
                edges.append((s, t, f.id))
    return IndifferenceGraph(tuple(inst.slot_order()), tuple(edges))


def zero_reachable(inst: Instance, sched: Schedule, prices: Mapping[SlotId, int]) -> set:
    g = indifference_graph(inst, sched, prices)
    return g.reachable_from(s for s in g.nodes if prices[s] == 0)


@dataclass(frozen=True)
class MinimumPricesRun:
    prices: PriceVector
    events: int             # number of price-lowering steps taken
    cap: int                # safety cap on events for this instance


def event_cap(n_slots: int, n_flights: int) -> int:
    return n_slots * n_slots * (n_flights + n_slots)


def run_minimum_prices(inst: Instance, sched: Schedule, prices: Mapping[SlotId, int],
                       max_events: Optional[int] = None) -> MinimumPricesRun:
    """Lower an equilibrium price vector to the componentwise-minimum one.

    Repeats, until every slot is reachable in the indifference graph from a
    zero-priced slot:

    1. ``Z`` = slots reachable from a zero-priced slot.
    2. ``d`` = earliest slot outside ``Z``.
    3. ``D`` = slots that can reach ``d``; lower every price in ``D`` by
       ``delta``, the largest step that keeps prices nonnegative and keeps
       every flight parked outside ``D`` from strictly preferring a slot of
       ``D``.
    4. If a price in ``D`` hit zero, restart at 1. Otherwise a new edge entered
       ``D``: rebuild ``Z``; go to 2 if ``d`` joined it, else back to 3.

    The graph is rebuilt from scratch after every step, since lowering
    ``D`` can also delete edges leaving ``D``.
    """
    bad = verify_equilibrium(inst, sched, prices)
    if bad:
        raise NotEquilibrium(f"{len(bad)} violation(s), first: {bad[0]}")

    order = inst.slot_order()
    n = len(order)
    pos = {s: k for k, s in enumerate(order)}
    flights = inst.flights
    cap = event_cap(n, len(flights)) if max_events is None else max_events
    if not flights or n == 0:
        return MinimumPricesRun({s: int(prices[s]) for s in order}, 0, cap)

    pf, ps, pc = [], [], []
    for k, f in enumerate(flights):
        for s in f.window:
            pf.append(k)
            ps.append(pos[s])
            pc.append(f.delay_cost[s])
    pf = np.asarray(pf, dtype=np.int64)
    ps = np.asarray(ps, dtype=np.int64)
    pc = np.asarray(pc, dtype=np.int64)
    home = np.asarray([pos[sched[f.id]] for f in flights], dtype=np.int64)
    home_cost = np.asarray([f.delay_cost[sched[f.id]] for f in flights], dtype=np.int64)
    src = home[pf]
    away = ps != src
    p = np.asarray([prices[s] for s in order], dtype=np.int64)

    def gaps():
        return p[ps] + pc - (p[home] + home_cost)[pf]

    def adjacency(gap):
        adj = np.zeros((n, n), dtype=bool)
        m = away & (gap == 0)
        adj[src[m], ps[m]] = True
        return adj

    def closure(adj, seed):
        reach = seed.copy()
        frontier = seed
        while frontier.any():
            nxt = adj[frontier].any(axis=0) & ~reach
            reach |= nxt
            frontier = nxt
        return reach

    events = 0
    while True:
        # step 1
        adj = adjacency(gaps())
        zset = closure(adj, p == 0)
        if zset.all():
            break
        # step 2
        d = int(np.flatnonzero(~zset)[0])
        while True:
            # step 3
            seed = np.zeros(n, dtype=bool)
            seed[d] = True
            dset = closure(adj.T, seed)
            gap = gaps()
            crossing = ~dset[src] & dset[ps]
            delta = int(p[dset].min())
            if crossing.any():
                delta = min(delta, int(gap[crossing].min()))
            # step 4
            p[dset] -= delta
            events += 1
            if events > cap:
                raise IterationBound(f"exceeded {cap} price-lowering steps")
            if (p[dset] == 0).any():
                break
            adj = adjacency(gaps())
            zset = closure(adj, p == 0)
            if zset[d]:
                if zset.all():
                    break
                d = int(np.flatnonzero(~zset)[0])
    return MinimumPricesRun({s: int(p[k]) for k, s in enumerate(order)}, events, cap)


def minimum_prices(inst: Instance, sched: Schedule, prices: Mapping[SlotId, int]) -> PriceVector:
    return run_minimum_prices(inst, sched, prices).prices


def clear_market(inst: Instance, prices: str = "min") -> EquilibriumOutcome:
    """Solve, extract prices, and (for ``prices="min"``) reduce them to the minimum vector."""
    if prices not in ("raw", "min"):
        raise ValueError(f"prices must be 'raw' or 'min', not {prices!r}")
    sched, duals = solve_min_bmatching(build_match_graph(inst))
    p = extract_prices(duals)
    if prices == "min":
        p = minimum_prices(inst, sched, p)
    return EquilibriumOutcome(
        schedule=sched,
        prices=p,
        flight_cost=flight_costs(inst, sched, p),
        objective=total_delay_cost(inst, sched),
        minimal_prices=prices == "min",
    )
