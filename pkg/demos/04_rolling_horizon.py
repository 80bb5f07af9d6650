"""
Rolling horizon with connections
================================

Two airports clear in sequence. Flight Z at JFK connects from X at ORD. When
X gets pushed back, the delay hook makes a late slot costlier for Z before JFK
clears.
"""

# %%
from slotmarket.horizon import DelayMultiplierHook, Round, WindowedScenario, run_horizon, summary_rows
from slotmarket.model import Flight, Instance, Slot

ord_ = Instance(
    [Slot("o0", 1, 0), Slot("o1", 1, 1)],
    [Flight("X", ["o0", "o1"], {"o0": 0, "o1": 1}), Flight("Y", ["o0", "o1"], {"o0": 0, "o1": 9})],
)
jfk = Instance(
    [Slot("j0", 1, 0), Slot("j1", 1, 1)],
    [Flight("Z", ["j0", "j1"], {"j0": 0, "j1": 2}), Flight("W", ["j0", "j1"], {"j0": 0, "j1": 5})],
)
scn = WindowedScenario((Round("ORD", 0, 0, ord_), Round("JFK", 0, 120, jfk)), {"Z": "X"})

# %%
plain = run_horizon(scn)
for row in summary_rows(plain):
    print(row)
print("Z lands in", plain.records[1].outcome.schedule["Z"])

# %%
hooked = run_horizon(scn, DelayMultiplierHook(3, scn.connections))
for row in summary_rows(hooked):
    print(row)
rec = hooked.records[1]
print("Z costs seen at JFK:", rec.instance.flight_map["Z"].delay_cost)
print("Z lands in", rec.outcome.schedule["Z"], "and pays", rec.payments["Z"])
