"""
Minimum prices as VCG payments
==============================

Each flight pays the extra delay its presence imposes on everyone else. That
payment coincides with the minimum price of the slot it lands in, which is why
overstating or understating delay costs does not help.
"""

# %%
from slotmarket import Flight, Instance, Slot, check_leonard, clear_market, truthfulness_probe, vcg_payments
from slotmarket.vcg import box_grid, true_total_cost

inst = Instance(
    [Slot("s1", 1, 0), Slot("s2", 1, 1)],
    [Flight("f1", ["s1", "s2"], {"s1": 0, "s2": 10}),
     Flight("f2", ["s1", "s2"], {"s1": 0, "s2": 4})],
)

# %%
sched, pay = vcg_payments(inst)
low = clear_market(inst)
print("payments", pay)
print("prices at assigned slots", {f: low.prices[s] for f, s in low.schedule.items()})
print("match:", check_leonard(inst))

# %%
# f2 pretending its delay costs 11 instead of 4 grabs s1 but then pays 10.
print("honest:", true_total_cost(inst, "f2"))
print("lying: ", true_total_cost(inst, "f2", {"s1": 0, "s2": 11}))

# %%
# Every report in [0, 12]^2 for both flights.
grid = box_grid(["s1", "s2"], range(13))
for f in ("f1", "f2"):
    print(f, len(grid), "reports,", len(truthfulness_probe(inst, f, grid)), "profitable")
