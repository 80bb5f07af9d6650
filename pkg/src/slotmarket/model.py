"""Market primitives for a single airport: slots, flights, schedules, prices.

Money is always an ``int`` in minor currency units. A schedule is a plain
``dict`` mapping flight id to slot id, and a price vector is a plain ``dict``
mapping slot id to price.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Mapping, Sequence

from .errors import InvalidSchedule

SlotId = str
FlightId = str
Schedule = Dict[FlightId, SlotId]
PriceVector = Dict[SlotId, int]


@dataclass(frozen=True)
class Slot:
    id: SlotId
    capacity: int
    time_index: int = 0


@dataclass(frozen=True)
class Flight:
    """A flight with its landing window and declared delay cost per window slot."""

    id: FlightId
    window: Sequence[SlotId]
    delay_cost: Mapping[SlotId, int]
    airline: str = ""

    def __post_init__(self):
        object.__setattr__(self, "window", tuple(self.window))
        object.__setattr__(self, "delay_cost", dict(self.delay_cost))

    def cost(self, slot: SlotId) -> int:
        return self.delay_cost[slot]

    def with_costs(self, costs: Mapping[SlotId, int]) -> "Flight":
        return Flight(self.id, self.window, costs, self.airline)


@dataclass(frozen=True)
class Instance:
    slots: Sequence[Slot]
    flights: Sequence[Flight]

    def __post_init__(self):
        object.__setattr__(self, "slots", tuple(self.slots))
        object.__setattr__(self, "flights", tuple(self.flights))

    @cached_property
    def slot_map(self) -> Dict[SlotId, Slot]:
        return {s.id: s for s in self.slots}

    @cached_property
    def flight_map(self) -> Dict[FlightId, Flight]:
        return {f.id: f for f in self.flights}

    @property
    def total_capacity(self) -> int:
        return sum(s.capacity for s in self.slots)

    @property
    def max_cost(self) -> int:
        return max((c for f in self.flights for c in f.delay_cost.values()), default=0)

    def without(self, flight_id: FlightId) -> "Instance":
        return Instance(self.slots, [f for f in self.flights if f.id != flight_id])

    def with_flight_costs(self, flight_id: FlightId, costs: Mapping[SlotId, int]) -> "Instance":
        flights = [f.with_costs(costs) if f.id == flight_id else f for f in self.flights]
        return Instance(self.slots, flights)

    def slot_order(self):
        """Slot ids sorted by (time_index, id); the canonical deterministic order."""
        return [s.id for s in sorted(self.slots, key=lambda s: (s.time_index, s.id))]


@dataclass(frozen=True)
class EquilibriumOutcome:
    schedule: Schedule
    prices: PriceVector
    flight_cost: Dict[FlightId, int]
    objective: int
    minimal_prices: bool = False

    @property
    def revenue(self) -> int:
        return sum(self.prices[s] for s in self.schedule.values())


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    where: str = field(default="")

    def __str__(self):
        return f"{self.where}: {self.message}" if self.where else self.message


ValidationReport = list


def validate_instance(inst: Instance) -> ValidationReport:
    """List every broken instance invariant; an empty list means well-formed.

    Checks unique nonempty ids, nonnegative capacities and time indices,
    nonempty windows of known slots, cost maps whose domain is exactly the
    window with nonnegative integer values, and total capacity >= flights.
    """
    out = []
    slot_counts = Counter(s.id for s in inst.slots)
    for sid, n in slot_counts.items():
        if n > 1:
            out.append(Violation("duplicate_slot", f"slot id {sid!r} appears {n} times", "slots"))
    for k, s in enumerate(inst.slots):
        where = f"slots[{k}]"
        if not isinstance(s.id, str) or not s.id:
            out.append(Violation("empty_id", "slot id must be a nonempty string", where))
        if not _is_int(s.capacity) or s.capacity < 0:
            out.append(Violation("negative_capacity", f"capacity {s.capacity!r} is not a nonnegative integer", where))
        if not _is_int(s.time_index) or s.time_index < 0:
            out.append(Violation("negative_time_index", f"time_index {s.time_index!r} is not a nonnegative integer", where))

    flight_counts = Counter(f.id for f in inst.flights)
    for fid, n in flight_counts.items():
        if n > 1:
            out.append(Violation("duplicate_flight", f"flight id {fid!r} appears {n} times", "flights"))
    known = set(slot_counts)
    for k, f in enumerate(inst.flights):
        where = f"flights[{k}]"
        if not isinstance(f.id, str) or not f.id:
            out.append(Violation("empty_id", "flight id must be a nonempty string", where))
        if not f.window:
            out.append(Violation("empty_window", f"flight {f.id!r} has an empty window", where))
        dup = [s for s, n in Counter(f.window).items() if n > 1]
        if dup:
            out.append(Violation("duplicate_window_slot", f"flight {f.id!r} lists {dup} more than once", where))
        unknown = [s for s in f.window if s not in known]
        if unknown:
            out.append(Violation("unknown_slot", f"flight {f.id!r} window names unknown slots {unknown}", where))
        if set(f.delay_cost) != set(f.window):
            out.append(Violation(
                "cost_domain",
                f"cost domain {sorted(f.delay_cost)} != window {sorted(set(f.window))}",
                where,
            ))
        for s, c in f.delay_cost.items():
            if not _is_int(c) or c < 0:
                out.append(Violation("negative_cost", f"cost {c!r} at slot {s!r} is not a nonnegative integer", where))

    total = inst.total_capacity if all(_is_int(s.capacity) for s in inst.slots) else None
    if total is not None and total < len(inst.flights):
        out.append(Violation(
            "capacity_deficit",
            f"total capacity {total} < {len(inst.flights)} flights",
        ))
    return out


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def check_schedule(inst: Instance, sched: Mapping[FlightId, SlotId]) -> None:
    """Raise InvalidSchedule unless every flight sits in its window within capacity."""
    flights = inst.flight_map
    missing = [fid for fid in flights if fid not in sched]
    if missing:
        raise InvalidSchedule(f"flights without a slot: {missing}")
    extra = [fid for fid in sched if fid not in flights]
    if extra:
        raise InvalidSchedule(f"schedule names unknown flights: {extra}")
    for fid, sid in sched.items():
        if sid not in flights[fid].delay_cost:
            raise InvalidSchedule(f"flight {fid!r} assigned to {sid!r} outside its window")
    load = Counter(sched.values())
    slots = inst.slot_map
    for sid, n in load.items():
        if n > slots[sid].capacity:
            raise InvalidSchedule(f"slot {sid!r} holds {n} flights but capacity is {slots[sid].capacity}")


def slot_load(inst: Instance, sched: Mapping[FlightId, SlotId]) -> Dict[SlotId, int]:
    load = dict.fromkeys(inst.slot_map, 0)
    for sid in sched.values():
        load[sid] += 1
    return load


def total_delay_cost(inst: Instance, sched: Mapping[FlightId, SlotId]) -> int:
    check_schedule(inst, sched)
    flights = inst.flight_map
    return sum(flights[fid].delay_cost[sid] for fid, sid in sched.items())


def flight_costs(inst: Instance, sched: Mapping[FlightId, SlotId], prices: Mapping[SlotId, int]) -> Dict[FlightId, int]:
    """Total cost (landing price plus delay cost) each flight pays at its slot."""
    flights = inst.flight_map
    return {fid: prices[sid] + flights[fid].delay_cost[sid] for fid, sid in sched.items()}
