"""Exit criteria for the clearing engine, one test per criterion.

Each test records a PASS/FAIL line that is printed in the terminal summary
under "acceptance criteria".
"""

import itertools
import json
import math
import os
import time

import numpy as np
import pytest

from slotmarket.bmatch import build_match_graph, solve_min_bmatching
from slotmarket.equilibrium import (
    extract_prices,
    run_minimum_prices,
    verify_equilibrium,
    zero_reachable,
)
from slotmarket.errors import Infeasible
from slotmarket.generate import random_feasible_instance, random_instance, synthetic_day
from slotmarket.horizon import Round, WindowedScenario, log_to_dict, run_horizon
from slotmarket.model import Flight, Instance, Slot, total_delay_cost
from slotmarket.oracle import (
    enumerate_optimal_schedules,
    equilibrium_price_lattice,
    min_equilibrium_prices_oracle,
)
from slotmarket.vcg import box_grid, check_leonard, truthfulness_probe

from helpers import chain_example, criterion, raise_prices, running_example

# SLOTMARKET_SEED shifts every random family below; the default reproduces the recorded run.
SEED = int(os.environ.get("SLOTMARKET_SEED", "0"))
EVENT_LOG = []      # (n_slots, n_flights, events, cap) from every minimum-price run below


def solve(inst):
    sched, duals = solve_min_bmatching(build_match_graph(inst))
    return sched, extract_prices(duals)


def min_run(inst, sched, prices):
    run = run_minimum_prices(inst, sched, prices)
    EVENT_LOG.append((len(inst.slots), len(inst.flights), run.events, run.cap))
    return run.prices


def feasible_draws(rng, count, **kw):
    """Yield ``count`` feasible random instances; infeasible draws are skipped and counted."""
    made = skipped = 0
    while made < count:
        inst = random_instance(rng, int(rng.integers(1, kw["max_flights"] + 1)),
                               int(rng.integers(1, kw["max_slots"] + 1)),
                               max_cap=kw["max_cap"], max_cost=kw["max_cost"])
        try:
            enumerate_optimal_schedules(inst)
        except Infeasible:
            skipped += 1
            with pytest.raises(Infeasible):
                solve(inst)
            continue
        made += 1
        yield inst
    feasible_draws.skipped = skipped


def test_ac1_oracle_equivalence():
    with criterion(1, "solver objective == enumeration on 500 instances, |A|<=6 |S|<=4 cap<=3 cost<=9, < 10 s") as c:
        rng = np.random.default_rng(SEED + 101)
        start = time.perf_counter()
        n = 0
        for inst in feasible_draws(rng, 500, max_flights=6, max_slots=4, max_cap=3, max_cost=9):
            best, _ = enumerate_optimal_schedules(inst)
            sched, _ = solve(inst)
            assert total_delay_cost(inst, sched) == best
            n += 1
        elapsed = time.perf_counter() - start
        c.note(f"{n} feasible, {feasible_draws.skipped} infeasible draws agreed, {elapsed:.2f} s")
        assert n == 500
        assert elapsed < 10.0


def test_ac2_equilibrium_conditions():
    with criterion(2, "raw and minimum prices satisfy both equilibrium conditions on 200 instances up to 50x20") as c:
        rng = np.random.default_rng(SEED + 202)
        for k in range(200):
            n_flights = int(rng.integers(1, 51))
            n_slots = int(rng.integers(1, 21))
            inst = random_feasible_instance(rng, n_flights, n_slots, max_cap=5, max_cost=50, window=8)
            sched, raw = solve(inst)
            assert verify_equilibrium(inst, sched, raw) == []
            low = min_run(inst, sched, raw)
            assert verify_equilibrium(inst, sched, low) == []
            lifted = raise_prices(inst, sched, raw, 7)
            assert verify_equilibrium(inst, sched, min_run(inst, sched, lifted)) == []
        c.note("200 instances, 0 violations")


def test_ac3_minimum_prices():
    with criterion(3, "MinimumPrices == lattice oracle, zero-reachable, idempotent, start-independent (300 instances)") as c:
        rng = np.random.default_rng(SEED + 303)
        lifted_differs = 0
        for inst in feasible_draws(rng, 300, max_flights=6, max_slots=4, max_cap=3, max_cost=9):
            sched, raw = solve(inst)
            oracle = min_equilibrium_prices_oracle(inst, sched)
            lattice = equilibrium_price_lattice(inst, sched)
            picks = lattice[rng.integers(len(lattice), size=2)]
            starts = [raw, raise_prices(inst, sched, raw, 5)]
            starts += [{s.id: int(v) for s, v in zip(inst.slots, row)} for row in picks]
            lifted_differs += starts[1] != raw
            outs = [min_run(inst, sched, p) for p in starts]
            for out in outs:
                assert out == oracle
            low = outs[0]
            assert zero_reachable(inst, sched, low) == {s.id for s in inst.slots}
            assert min_run(inst, sched, low) == low
        c.note(f"300 instances x 4 starts; {lifted_differs} had a nontrivial +5 lift")


def exhaustive_family():
    """The instance families used for the VCG correspondence check.

    The literal space (|A| <= 4, |S| <= 3, caps <= 2, costs 0..3, arbitrary
    windows) has more than 10^8 members, so it is covered as:

    * every multiset of 1-3 flights over 2 slots, caps in {0,1,2}^2, any
      nonempty window, costs in {0..3} on the window;
    * every multiset of 4 full-window flights over 2 slots of capacity 2;
    * every multiset of 3 full-window flights over 3 slots of capacity 1
      whose cost vectors have a zero entry (a scheduled slot);
    * 3000 seeded draws from the literal space.
    """
    two = ["a", "b"]
    types = []
    for w in (["a"], ["b"], ["a", "b"]):
        for costs in itertools.product(range(4), repeat=len(w)):
            types.append((tuple(w), costs))
    for caps in itertools.product(range(3), repeat=2):
        slots = [Slot(s, c, k) for k, (s, c) in enumerate(zip(two, caps))]
        for m in range(1, 4):
            for combo in itertools.combinations_with_replacement(range(len(types)), m):
                yield Instance(slots, [Flight(f"f{k}", types[t][0], dict(zip(*types[t]))) for k, t in enumerate(combo)])
    full2 = list(itertools.product(range(4), repeat=2))
    slots = [Slot("a", 2, 0), Slot("b", 2, 1)]
    for combo in itertools.combinations_with_replacement(range(len(full2)), 4):
        yield Instance(slots, [Flight(f"f{k}", two, dict(zip(two, full2[t]))) for k, t in enumerate(combo)])
    three = ["a", "b", "c"]
    full3 = [v for v in itertools.product(range(4), repeat=3) if 0 in v]
    slots = [Slot(s, 1, k) for k, s in enumerate(three)]
    for combo in itertools.combinations_with_replacement(range(len(full3)), 3):
        yield Instance(slots, [Flight(f"f{k}", three, dict(zip(three, full3[t]))) for k, t in enumerate(combo)])
    rng = np.random.default_rng(SEED + 404)
    for _ in range(3000):
        yield random_instance(rng, int(rng.integers(1, 5)), int(rng.integers(1, 4)), max_cap=2, max_cost=3)


def test_ac4_vcg_correspondence():
    with criterion(4, "minimum prices == VCG payments on every feasible instance of the exhaustive family") as c:
        checked = infeasible = 0
        failures = []
        for inst in exhaustive_family():
            try:
                ok = check_leonard(inst)
            except Infeasible:
                infeasible += 1
                continue
            checked += 1
            if not ok:
                failures.append(inst)
        c.note(f"{checked} feasible instances checked, {infeasible} infeasible skipped, {len(failures)} mismatches")
        assert not failures
        assert checked > 5000


def test_ac5_truthfulness():
    with criterion(5, "no profitable misreport: running example grid [0,12]^2 and 50 random instances") as c:
        running = running_example()
        grid = box_grid(["s1", "s2"], range(13))
        reruns = 0
        for f in running.flights:
            assert truthfulness_probe(running, f.id, grid) == []
            reruns += len(grid)
        rng = np.random.default_rng(SEED + 505)
        n = 0
        while n < 50:
            inst = random_instance(rng, int(rng.integers(2, 5)), int(rng.integers(1, 4)), max_cap=2, max_cost=4)
            try:
                solve(inst)
            except Infeasible:
                continue
            if inst.max_cost == 0:
                continue
            values = range(2 * inst.max_cost + 1)
            for f in inst.flights:
                g = box_grid(f.window, values)
                assert truthfulness_probe(inst, f.id, g) == []
                reruns += len(g)
            n += 1
        c.note(f"{reruns} mechanism reruns, 0 profitable")


def test_ac6_scale():
    with criterion(6, "3000 flights, 288 slots, windows <= 24: solve + prices + MinimumPrices < 10 s") as c:
        inst = synthetic_day(0)
        assert len(inst.flights) == 3000 and len(inst.slots) == 288
        assert max(len(f.window) for f in inst.flights) <= 24
        start = time.perf_counter()
        sched, raw = solve(inst)
        low = min_run(inst, sched, raw)
        elapsed = time.perf_counter() - start
        assert verify_equilibrium(inst, sched, low) == []
        lifted = raise_prices(inst, sched, low, 5)
        t1 = time.perf_counter()
        again = min_run(inst, sched, lifted)
        lifted_time = time.perf_counter() - t1
        assert again == low
        c.note(f"pipeline {elapsed:.2f} s, objective {total_delay_cost(inst, sched)}, "
               f"MinimumPrices from a +5 lift {lifted_time:.2f} s over {EVENT_LOG[-1][2]} events")
        assert elapsed < 10.0


def test_ac6_scale_objective_matches_lp():
    optimize = pytest.importorskip("scipy.optimize")
    sparse = pytest.importorskip("scipy.sparse")
    inst = synthetic_day(0)
    sched, _ = solve(inst)
    col = {s.id: k for k, s in enumerate(inst.slots)}
    rows, slots_of, cost = [], [], []
    for i, f in enumerate(inst.flights):
        for s in f.window:
            rows.append(i)
            slots_of.append(col[s])
            cost.append(f.delay_cost[s])
    n = len(cost)
    cover = sparse.csr_matrix((-np.ones(n), (rows, range(n))), shape=(len(inst.flights), n))
    capacity = sparse.csr_matrix((np.ones(n), (slots_of, range(n))), shape=(len(inst.slots), n))
    res = optimize.linprog(cost, A_ub=sparse.vstack([cover, capacity]),
                           b_ub=np.r_[-np.ones(len(inst.flights)), [s.capacity for s in inst.slots]],
                           bounds=(0, None), method="highs")
    assert res.status == 0
    assert round(res.fun) == total_delay_cost(inst, sched)


def test_ac7_event_counts():
    with criterion(7, "MinimumPrices event count within the safety cap; growth in |S| reported") as c:
        rng = np.random.default_rng(SEED + 707)
        growth = {}
        for n_slots in (4, 8, 16, 32, 64):
            counts = []
            for _ in range(10):
                inst = random_feasible_instance(rng, 3 * n_slots, n_slots, min_cap=1, max_cap=3, max_cost=30, window=6)
                sched, raw = solve(inst)
                for amount in (3, 11):
                    lifted = raise_prices(inst, sched, raw, amount)
                    min_run(inst, sched, lifted)
                    counts.append(EVENT_LOG[-1][2])
            growth[n_slots] = float(np.mean(counts))
        over = [e for e in EVENT_LOG if e[2] > e[3]]
        assert not over
        xs = [math.log(k) for k, v in growth.items() if v > 0]
        ys = [math.log(v) for v in growth.values() if v > 0]
        slope = float(np.polyfit(xs, ys, 1)[0]) if len(xs) >= 2 else float("nan")
        table = ", ".join(f"|S|={k}: {v:.1f}" for k, v in growth.items())
        c.note(f"{len(EVENT_LOG)} runs, max {max(e[2] for e in EVENT_LOG)} events; mean events {table}; "
               f"log-log slope {slope:.2f}")


def test_ac8_horizon_independence():
    with criterion(8, "two airports at one timestamp: logs byte-identical to standalone runs") as c:
        chain = chain_example()
        other = Instance(chain.slots, [Flight("g" + f.id[1:], f.window, f.delay_cost) for f in chain.flights])
        scn = WindowedScenario((
            Round("ORD", 0, 0, running_example()),
            Round("JFK", 0, 0, other),
            Round("ORD", 1, 60, random_feasible_instance(np.random.default_rng(SEED + 808), 40, 12,
                                                         max_cap=4, max_cost=30, window=5)),
        ))
        full = log_to_dict(run_horizon(scn))["rounds"]
        for aid in scn.airports:
            alone = json.dumps(log_to_dict(run_horizon(scn.only(aid)))["rounds"])
            assert json.dumps([r for r in full if r["airport"] == aid]) == alone
        flipped = WindowedScenario(tuple(reversed(scn.rounds)))
        assert json.dumps(log_to_dict(run_horizon(flipped))) == json.dumps({"rounds": full})
        c.note(f"{len(full)} rounds across {len(scn.airports)} airports")
