"""
A full day at a congested airport
=================================

3000 arrivals over 288 five-minute slots, with a weather cut in the
afternoon. Prices rise where demand piles up against reduced capacity.
"""

# %%
import time

import numpy as np

from slotmarket import clear_market, verify_equilibrium
from slotmarket.generate import synthetic_day

inst = synthetic_day(0)
print(len(inst.flights), "flights,", len(inst.slots), "slots, capacity", inst.total_capacity)

# %%
t0 = time.perf_counter()
out = clear_market(inst)
print(f"cleared in {time.perf_counter() - t0:.2f} s, objective {out.objective}, revenue {out.revenue}")
print("violations:", len(verify_equilibrium(inst, out.schedule, out.prices)))

# %%
prices = np.array([out.prices[s.id] for s in inst.slots])
caps = np.array([s.capacity for s in inst.slots])
hours = prices.reshape(24, 12)
print("peak price by hour:", hours.max(axis=1))
print("slots with a positive price:", int((prices > 0).sum()))
print("mean price in the weather cut:", prices[caps < caps.max()].mean().round(1))

# %%
lag = np.array([inst.slot_map[out.schedule[f.id]].time_index - inst.slot_map[f.window[0]].time_index
                for f in inst.flights])
print("slots of delay, percentiles 50/90/99:", np.percentile(lag, [50, 90, 99]))
