"""Random and synthetic instances for tests, demos and benchmarks."""

from __future__ import annotations

import numpy as np

from .model import Flight, Instance, Slot


def random_instance(rng, n_flights, n_slots, max_cap=3, max_cost=9, min_cap=0, window=None):
    """Uniform random market; windows are random nonempty slot subsets.

    ``window`` bounds the window size (default: up to all slots). The result
    may be infeasible.
    """
    rng = np.random.default_rng(rng)
    slots = [Slot(f"s{k}", int(rng.integers(min_cap, max_cap + 1)), k) for k in range(n_slots)]
    top = n_slots if window is None else min(window, n_slots)
    flights = []
    for k in range(n_flights):
        width = int(rng.integers(1, top + 1))
        picked = sorted(rng.choice(n_slots, size=width, replace=False).tolist())
        w = [f"s{j}" for j in picked]
        costs = {s: int(rng.integers(0, max_cost + 1)) for s in w}
        flights.append(Flight(f"f{k}", w, costs, airline=f"A{k % 3}"))
    return Instance(slots, flights)


def random_feasible_instance(rng, n_flights, n_slots, **kw):
    """Like :func:`random_instance` but every flight's window contains a spare-capacity cushion.

    Capacities are drawn first, then bumped so each flight's first window
    slot can absorb it; this guarantees a feasible schedule exists.
    """
    rng = np.random.default_rng(rng)
    inst = random_instance(rng, n_flights, n_slots, **kw)
    caps = {s.id: s.capacity for s in inst.slots}
    need = {}
    for f in inst.flights:
        need[f.window[0]] = need.get(f.window[0], 0) + 1
    slots = [Slot(s.id, max(caps[s.id], need.get(s.id, 0)), s.time_index) for s in inst.slots]
    return Instance(slots, inst.flights)


def synthetic_day(rng=0, n_flights=3000, n_slots=288, window=24, capacity=15, weather_cut=(96, 132, 9),
                  max_cost=500):
    """One congested day at a single airport.

    Five-minute slots with ``capacity`` landings each, reduced to
    ``weather_cut[2]`` between slot indices ``weather_cut[0]`` and
    ``weather_cut[1]``. Scheduled arrivals bunch into morning and evening
    banks. Each flight's window starts at its scheduled slot (cost 0) and
    runs up to ``window`` slots later; delay costs grow with lateness at a
    flight-specific rate, plus integer noise, so they are not monotone.
    """
    rng = np.random.default_rng(rng)
    lo, hi, cut = weather_cut
    slots = [Slot(f"t{k:03d}", cut if lo <= k < hi else capacity, k) for k in range(n_slots)]
    banks = rng.choice(3, size=n_flights, p=[0.4, 0.2, 0.4])
    centers = np.array([90, 150, 210])[banks]
    sched = np.clip(rng.normal(centers, 36), 0, n_slots - window).astype(int)
    flights = []
    for k in range(n_flights):
        start = int(sched[k])
        width = int(rng.integers(window // 2, window + 1))
        last = min(n_slots, start + width)
        rate = float(rng.uniform(1, max_cost / window))
        w = [f"t{j:03d}" for j in range(start, last)]
        costs = {}
        for lag, s in enumerate(w):
            noise = int(rng.integers(0, 5)) if lag else 0
            costs[s] = int(rate * lag) + noise
        flights.append(Flight(f"F{k:04d}", w, costs, airline=f"AL{k % 17:02d}"))
    return Instance(slots, flights)
