"""Minimum-weight perfect b-matching between flights and slots.

The bipartite graph has flights plus one dummy node ``v`` on the left and
slots on the right. Flight ``i`` connects to every slot ``s`` of its window
with weight ``c_is``; ``v`` connects to slot ``s`` through ``cap(s)``
parallel unit-weight edges. Requirements are ``b_i = 1``, ``b_s = cap(s)``
and ``b_v = sum(cap) - |A|``.

Because every dummy edge costs the same, the dummy only soaks up leftover
capacity and never changes which flight schedule is optimal. The solver
therefore runs successive shortest paths over flights alone (each flight is
a unit source, each slot a sink of capacity ``cap(s)``) and realises the
dummy implicitly: every slot left with spare capacity receives dummy edges,
and potentials are normalised so that ``q_v = 1``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Dict, Tuple

from .errors import Infeasible
from .model import FlightId, Instance, Schedule, SlotId

DUMMY = "__dummy__"
INF = float("inf")


@dataclass(frozen=True)
class MatchGraph:
    slot_ids: Tuple[SlotId, ...]           # sorted by (time_index, id)
    flight_ids: Tuple[FlightId, ...]       # sorted by id
    flight_edges: Tuple[Tuple[FlightId, SlotId, int], ...]
    dummy_edges: Dict[SlotId, int]         # slot -> multiplicity (= cap)
    b_slot: Dict[SlotId, int]
    b_dummy: int

    @property
    def b_flight(self) -> Dict[FlightId, int]:
        return dict.fromkeys(self.flight_ids, 1)

    def edge_weight(self, flight: FlightId, slot: SlotId) -> int:
        for f, s, w in self.flight_edges:
            if f == flight and s == slot:
                return w
        raise KeyError((flight, slot))


@dataclass(frozen=True)
class DualPotentials:
    """One potential per flight, per slot, and for the dummy node."""

    flight: Dict[FlightId, int]
    slot: Dict[SlotId, int]
    dummy: int

    def __getitem__(self, node):
        if node == DUMMY:
            return self.dummy
        if node in self.flight:
            return self.flight[node]
        return self.slot[node]


def build_match_graph(inst: Instance) -> MatchGraph:
    deficit = inst.total_capacity - len(inst.flights)
    if deficit < 0:
        raise Infeasible(f"total capacity {inst.total_capacity} < {len(inst.flights)} flights (short by {-deficit})")
    slot_ids = tuple(inst.slot_order())
    flights = sorted(inst.flights, key=lambda f: f.id)
    pos = {s: k for k, s in enumerate(slot_ids)}
    edges = tuple(
        (f.id, s, f.delay_cost[s])
        for f in flights
        for s in sorted(f.window, key=pos.__getitem__)
    )
    caps = {s.id: s.capacity for s in inst.slots}
    return MatchGraph(
        slot_ids=slot_ids,
        flight_ids=tuple(f.id for f in flights),
        flight_edges=edges,
        dummy_edges={s: caps[s] for s in slot_ids if caps[s] > 0},
        b_slot={s: caps[s] for s in slot_ids},
        b_dummy=deficit,
    )


def solve_min_bmatching(g: MatchGraph) -> Tuple[Schedule, DualPotentials]:
    """Return a minimum-weight schedule and dual potentials proving its optimality.

    Flights are inserted one at a time in id order. Each insertion runs
    Dijkstra over slots on reduced costs (a flight already parked at slot
    ``s`` can be pushed to ``s'`` at reduced cost
    ``p[s'] + c[j, s'] - p[s] - c[j, s]``) until it reaches a slot with spare
    capacity, then shifts the flights along that path. Slot prices ``p`` only
    ever rise, and only on slots that are full, so slots with spare capacity
    keep price zero throughout. Heap ties break on (distance, slot time order,
    flight id order), which makes the result reproducible.
    """
    slot_ids = g.slot_ids
    n_slots = len(slot_ids)
    pos = {s: k for k, s in enumerate(slot_ids)}
    fpos = {f: k for k, f in enumerate(g.flight_ids)}
    window = [[] for _ in g.flight_ids]       # [(slot_idx, cost)] in time order
    cost = [{} for _ in g.flight_ids]
    for f, s, w in g.flight_edges:
        k, j = fpos[f], pos[s]
        window[k].append((j, w))
        cost[k][j] = w
    cap = [g.b_slot[s] for s in slot_ids]
    load = [0] * n_slots
    parked = [[] for _ in range(n_slots)]     # flights currently at each slot
    where = [-1] * len(g.flight_ids)
    price = [0] * n_slots

    push, pop = heapq.heappush, heapq.heappop
    for i0 in range(len(g.flight_ids)):
        base = min(price[j] + c for j, c in window[i0])
        heap = [(price[j] + c - base, j, i0, -1) for j, c in window[i0]]
        heapq.heapify(heap)
        best = [INF] * n_slots                # tentative distances; skip pushes that do not improve
        for d, j, _, _ in heap:
            best[j] = d
        done = [False] * n_slots
        settled = []
        pred = {}
        terminal = -1
        while heap:
            d, s, via, prev = pop(heap)
            if done[s]:
                continue
            done[s] = True
            settled.append((s, d))
            pred[s] = (via, prev)
            if load[s] < cap[s]:
                terminal = s
                break
            ps = price[s]
            for j in parked[s]:
                shift = d - ps - cost[j][s]
                for t, c in window[j]:
                    nd = shift + price[t] + c
                    if nd < best[t] and not done[t]:
                        best[t] = nd
                        push(heap, (nd, t, j, s))
        if terminal < 0:
            raise Infeasible(f"flight {g.flight_ids[i0]!r} cannot be placed: its window is saturated")

        delta = settled[-1][1]
        for s, d in settled:
            if d < delta:
                price[s] += delta - d

        s = terminal
        load[s] += 1
        while True:
            j, prev = pred[s]
            parked[s].append(j)
            where[j] = s
            if prev < 0:
                break
            parked[prev].remove(j)
            s = prev

    sched = {g.flight_ids[k]: slot_ids[where[k]] for k in range(len(g.flight_ids))}
    duals = DualPotentials(
        flight={g.flight_ids[k]: price[where[k]] + cost[k][where[k]] for k in range(len(g.flight_ids))},
        slot={slot_ids[j]: -price[j] for j in range(n_slots)},
        dummy=1,
    )
    return sched, duals


def matching_weight(g: MatchGraph, sched: Schedule) -> int:
    """Weight of the perfect b-matching induced by ``sched`` (flight edges plus dummy fill)."""
    w = {(f, s): c for f, s, c in g.flight_edges}
    return sum(w[f, s] for f, s in sched.items()) + g.b_dummy


def dual_objective(g: MatchGraph, duals: DualPotentials) -> int:
    return (
        sum(duals.flight[f] for f in g.flight_ids)
        + sum(g.b_slot[s] * duals.slot[s] for s in g.slot_ids)
        + g.b_dummy * duals.dummy
    )


def solve_instance(inst: Instance) -> Tuple[Schedule, DualPotentials]:
    return solve_min_bmatching(build_match_graph(inst))
