"""
Clearing a two-slot market
==========================

Two flights want the early slot. One of them loses 4 by moving back, the
other loses 10, so the cheaper delay goes to the later slot and the early slot
carries a price.
"""

# %%
from slotmarket import Flight, Instance, Slot, clear_market, verify_equilibrium

inst = Instance(
    [Slot("s1", 1, 0), Slot("s2", 1, 1)],
    [Flight("f1", ["s1", "s2"], {"s1": 0, "s2": 10}),
     Flight("f2", ["s1", "s2"], {"s1": 0, "s2": 4})],
)

# %%
# Raw prices straight out of the matching duals. Any price gap in [4, 10]
# keeps both flights content.
raw = clear_market(inst, prices="raw")
print(raw.schedule, raw.prices)

# %%
# The smallest such prices.
low = clear_market(inst)
print(low.schedule, low.prices, "objective", low.objective, "revenue", low.revenue)
print("violations:", verify_equilibrium(inst, low.schedule, low.prices))

# %%
# Each flight's total cost (price plus delay) at the slot it got.
print(low.flight_cost)
