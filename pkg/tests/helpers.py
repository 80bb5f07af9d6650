"""Shared builders for the test suite."""

import numpy as np

from slotmarket.model import Flight, Instance, Slot, slot_load
from slotmarket.generate import random_instance


def running_example():
    slots = [Slot("s1", 1, 0), Slot("s2", 1, 1)]
    flights = [
        Flight("f1", ["s1", "s2"], {"s1": 0, "s2": 10}, "AA"),
        Flight("f2", ["s1", "s2"], {"s1": 0, "s2": 4}, "UA"),
    ]
    return Instance(slots, flights)


def chain_example():
    # f4 pins s1, which pushes f1 to s2, f2 to s3 and f3 to s4.
    slots = [Slot(f"s{k}", 1, k) for k in range(1, 5)]
    flights = [
        Flight("f1", ["s1", "s2"], {"s1": 0, "s2": 1}),
        Flight("f2", ["s2", "s3"], {"s2": 0, "s3": 1}),
        Flight("f3", ["s3", "s4"], {"s3": 0, "s4": 2}),
        Flight("f4", ["s1"], {"s1": 0}),
    ]
    return Instance(slots, flights)


def single_flight():
    return Instance([Slot("s1", 1, 0)], [Flight("f1", ["s1"], {"s1": 0})])


def raise_prices(inst, sched, prices, amount):
    """Another equilibrium price vector: lift a closed set of full slots by ``amount``.

    Start from all full slots and drop any slot holding a flight that would
    then prefer a slot outside the set; the survivors can all be raised.
    """
    load = slot_load(inst, sched)
    lifted = {s.id for s in inst.slots if load[s.id] >= s.capacity}
    changed = True
    while changed:
        changed = False
        for f in inst.flights:
            s = sched[f.id]
            if s not in lifted:
                continue
            mine = prices[s] + f.delay_cost[s]
            if any(t not in lifted and prices[t] + f.delay_cost[t] - mine < amount for t in f.window):
                lifted.discard(s)
                changed = True
    return {s: p + amount if s in lifted else p for s, p in prices.items()}


def small_instances(seed, count, max_flights=6, max_slots=4, max_cap=3, max_cost=9):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield random_instance(rng, int(rng.integers(1, max_flights + 1)), int(rng.integers(1, max_slots + 1)),
                              max_cap=max_cap, max_cost=max_cost)


ACCEPTANCE = []


class criterion:
    """Record one PASS/FAIL line for an acceptance criterion around a block of asserts."""

    def __init__(self, number, title):
        self.number = number
        self.title = title
        self.notes = []

    def note(self, text):
        self.notes.append(text)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        status = "PASS" if exc_type is None else "FAIL"
        detail = "; ".join(self.notes)
        if exc is not None:
            detail = f"{detail}; {type(exc).__name__}: {exc}".strip("; ")
        ACCEPTANCE.append(f"[AC{self.number}] {status} {self.title}" + (f" ({detail})" if detail else ""))
        return False
