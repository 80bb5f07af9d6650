"""
Walking prices down to the minimum
==================================

Start from an inflated but valid price vector and let the descent procedure
lower it. The result does not depend on where it started.
"""

# %%
import numpy as np

from slotmarket import minimum_prices, run_minimum_prices, verify_equilibrium
from slotmarket.bmatch import build_match_graph, solve_min_bmatching
from slotmarket.equilibrium import indifference_graph
from slotmarket.generate import random_feasible_instance
from slotmarket.model import Flight, Instance, Slot
from slotmarket.oracle import equilibrium_price_lattice, min_equilibrium_prices_oracle

# %%
# A chain: each flight can slip one slot, f4 only fits in s1.
chain = Instance(
    [Slot(f"s{k}", 1, k) for k in range(1, 5)],
    [Flight("f1", ["s1", "s2"], {"s1": 0, "s2": 1}),
     Flight("f2", ["s2", "s3"], {"s2": 0, "s3": 1}),
     Flight("f3", ["s3", "s4"], {"s3": 0, "s4": 2}),
     Flight("f4", ["s1"], {"s1": 0})],
)
sched, _ = solve_min_bmatching(build_match_graph(chain))
print(sched)

# %%
start = {"s1": 20, "s2": 12, "s3": 11, "s4": 9}
print("valid start:", verify_equilibrium(chain, sched, start) == [])
run = run_minimum_prices(chain, sched, start)
print(run.prices, "after", run.events, "events, cap", run.cap)

# %%
# Flights that are indifferent between two slots link them. At the minimum
# every slot can be reached from a free one.
print(indifference_graph(chain, sched, run.prices).edges)

# %%
# Brute force over the whole price box agrees.
lattice = equilibrium_price_lattice(chain, sched)
print(len(lattice), "equilibrium price vectors; componentwise min", lattice.min(axis=0))
print(min_equilibrium_prices_oracle(chain, sched))

# %%
# Same check from random points of the lattice on a random market.
rng = np.random.default_rng(10)
inst = random_feasible_instance(rng, 6, 4, max_cap=2, max_cost=6)
sched, _ = solve_min_bmatching(build_match_graph(inst))
lattice = equilibrium_price_lattice(inst, sched)
for row in lattice[rng.integers(len(lattice), size=5)]:
    p0 = {s.id: int(v) for s, v in zip(inst.slots, row)}
    print(p0, "->", minimum_prices(inst, sched, p0))
