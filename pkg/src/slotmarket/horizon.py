"""Rolling-horizon clearing across airports.

Each airport's day is cut into rounds of flights already airborne. Rounds are
cleared in timestamp order; airports sharing a timestamp are cleared
independently of one another. The only link between rounds is the cost
hook, which may rewrite the upcoming round's delay costs after seeing what
happened so far.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

from .equilibrium import clear_market
from .errors import Infeasible, RoundInfeasible, SlotMarketError
from .model import EquilibriumOutcome, FlightId, Instance, SlotId, slot_load, validate_instance
from .scenario import _field, _join, instance_to_dict, outcome_to_dict, parse_instance
from .vcg import vcg_payments

AirportId = str


@dataclass(frozen=True)
class Round:
    airport: AirportId
    index: int
    timestamp: int
    instance: Instance


@dataclass(frozen=True)
class WindowedScenario:
    rounds: Tuple[Round, ...]
    connections: Dict[FlightId, FlightId] = field(default_factory=dict)   # flight -> feeder flight

    @property
    def airports(self) -> List[AirportId]:
        return sorted({r.airport for r in self.rounds})

    def rounds_of(self, airport: AirportId) -> List[Round]:
        return [r for r in self.rounds if r.airport == airport]

    def schedule_order(self) -> List[Round]:
        return sorted(self.rounds, key=lambda r: (r.timestamp, r.airport, r.index))

    def only(self, airport: AirportId) -> "WindowedScenario":
        return WindowedScenario(tuple(self.rounds_of(airport)), dict(self.connections))


def validate_scenario(scn: WindowedScenario) -> List[str]:
    out = []
    for r in scn.rounds:
        for v in validate_instance(r.instance):
            out.append(f"{r.airport} round {r.index}: {v}")
    seen = Counter(f.id for r in scn.rounds for f in r.instance.flights)
    for fid, n in seen.items():
        if n > 1:
            out.append(f"flight {fid!r} appears in {n} rounds")
    for fid, feeder in scn.connections.items():
        if feeder not in seen:
            out.append(f"flight {fid!r} connects from unknown flight {feeder!r}")
    keys = Counter((r.airport, r.index) for r in scn.rounds)
    out.extend(f"duplicate round {k}" for k, n in keys.items() if n > 1)
    return out


@dataclass(frozen=True)
class RoundRecord:
    airport: AirportId
    index: int
    timestamp: int
    instance: Instance                  # after the hook ran
    outcome: Optional[EquilibriumOutcome]
    payments: Dict[FlightId, int]
    unserved: Tuple[FlightId, ...] = ()

    @property
    def status(self) -> str:
        return "cleared" if self.outcome is not None else "skipped"

    @property
    def revenue(self) -> int:
        return sum(self.payments.values())

    @property
    def objective(self) -> Optional[int]:
        return None if self.outcome is None else self.outcome.objective

    @property
    def max_price(self) -> int:
        return max(self.outcome.prices.values(), default=0) if self.outcome else 0

    @property
    def spare_capacity(self) -> int:
        if self.outcome is None:
            return self.instance.total_capacity
        return self.instance.total_capacity - len(self.outcome.schedule)

    @property
    def underfilled_slots(self) -> int:
        if self.outcome is None:
            return len(self.instance.slots)
        load = slot_load(self.instance, self.outcome.schedule)
        return sum(load[s.id] < s.capacity for s in self.instance.slots)

    def delay(self, flight: FlightId) -> Optional[int]:
        """Slots between the flight's earliest window slot and where it landed."""
        if self.outcome is None or flight not in self.outcome.schedule:
            return None
        slots = self.instance.slot_map
        f = self.instance.flight_map[flight]
        first = min(slots[s].time_index for s in f.window)
        return slots[self.outcome.schedule[flight]].time_index - first


@dataclass
class ClearingLog:
    records: List[RoundRecord] = field(default_factory=list)

    def record_for(self, flight: FlightId) -> Optional[RoundRecord]:
        for rec in self.records:
            if flight in rec.instance.flight_map:
                return rec
        return None

    @property
    def unserved(self) -> List[FlightId]:
        return [f for rec in self.records for f in rec.unserved]


CostUpdateHook = Callable[[ClearingLog, Round], Optional[Mapping[FlightId, Mapping[SlotId, int]]]]


class DelayMultiplierHook:
    """Scale up late-slot costs of flights whose feeder flight landed late.

    For a flight with a feeder (``connects_from``) that landed ``> 0`` slots
    after its earliest window slot, every cost on a slot later than the
    flight's own earliest window slot is multiplied by ``factor``.
    """

    def __init__(self, factor: int, connections: Mapping[FlightId, FlightId]):
        if not isinstance(factor, int) or factor < 0:
            raise ValueError("factor must be a nonnegative integer")
        self.factor = factor
        self.connections = dict(connections)

    def __call__(self, log: ClearingLog, rnd: Round):
        slots = rnd.instance.slot_map
        revised = {}
        for f in rnd.instance.flights:
            feeder = self.connections.get(f.id)
            if feeder is None:
                continue
            rec = log.record_for(feeder)
            late = rec.delay(feeder) if rec is not None else None
            if not late:
                continue
            first = min(slots[s].time_index for s in f.window)
            revised[f.id] = {
                s: c * self.factor if slots[s].time_index > first else c
                for s, c in f.delay_cost.items()
            }
        return revised


def _apply_hook(rnd: Round, revised) -> Round:
    if not revised:
        return rnd
    inst = rnd.instance
    for fid, costs in revised.items():
        f = inst.flight_map.get(fid)
        if f is None:
            raise ValueError(f"hook revised unknown flight {fid!r}")
        if set(costs) != set(f.window):
            raise ValueError(f"hook changed the window of flight {fid!r}")
        if any(not isinstance(c, int) or isinstance(c, bool) or c < 0 for c in costs.values()):
            raise ValueError(f"hook produced a cost that is not a nonnegative integer for {fid!r}")
        inst = inst.with_flight_costs(fid, dict(costs))
    return Round(rnd.airport, rnd.index, rnd.timestamp, inst)


def clear_round(rnd: Round, check_vcg: bool = False) -> RoundRecord:
    outcome = clear_market(rnd.instance, prices="min")
    payments = {fid: outcome.prices[sid] for fid, sid in outcome.schedule.items()}
    if check_vcg:
        _, pay = vcg_payments(rnd.instance)
        if pay != payments:
            raise SlotMarketError(f"{rnd.airport} round {rnd.index}: minimum prices differ from VCG payments")
    return RoundRecord(rnd.airport, rnd.index, rnd.timestamp, rnd.instance, outcome, payments)


def run_horizon(scn: WindowedScenario, hook: Optional[CostUpdateHook] = None,
                on_infeasible: str = "abort", check_vcg: bool = False) -> ClearingLog:
    """Clear every round of every airport and return the full log.

    The hook sees the log as it stood before the current timestamp, so
    airports sharing a timestamp never observe each other and the result
    does not depend on which of them is processed first.

    ``on_infeasible="abort"`` raises :class:`RoundInfeasible` carrying the
    partial log; ``"skip"`` records the round with all its flights unserved.
    """
    if on_infeasible not in ("abort", "skip"):
        raise ValueError(f"on_infeasible must be 'abort' or 'skip', not {on_infeasible!r}")
    log = ClearingLog()
    pending = scn.schedule_order()
    k = 0
    while k < len(pending):
        ts = pending[k].timestamp
        batch = []
        while k < len(pending) and pending[k].timestamp == ts:
            batch.append(pending[k])
            k += 1
        frozen = ClearingLog(list(log.records))
        for rnd in batch:
            if hook is not None:
                rnd = _apply_hook(rnd, hook(frozen, rnd))
            try:
                rec = clear_round(rnd, check_vcg=check_vcg)
            except Infeasible as exc:
                if on_infeasible == "abort":
                    raise RoundInfeasible(rnd.airport, rnd.index, exc, log) from exc
                rec = RoundRecord(rnd.airport, rnd.index, rnd.timestamp, rnd.instance, None, {},
                                  tuple(f.id for f in rnd.instance.flights))
            log.records.append(rec)
    return log


def parse_horizon(doc, path: str = "") -> WindowedScenario:
    airports = _field(doc, "airports", path, list)
    rounds = []
    connections = {}
    for a, ap in enumerate(airports):
        ap_path = _join(_join(path, "airports"), a)
        aid = _field(ap, "id", ap_path, str)
        for k, rd in enumerate(_field(ap, "rounds", ap_path, list)):
            rd_path = _join(_join(ap_path, "rounds"), k)
            inst = parse_instance(rd, rd_path)
            for j, f in enumerate(rd["flights"]):
                feeder = _field(f, "connects_from", _join(_join(rd_path, "flights"), j), str, default=None)
                if feeder is not None:
                    connections[f["id"]] = feeder
            rounds.append(Round(aid, k, _field(rd, "timestamp", rd_path, int), inst))
    return WindowedScenario(tuple(rounds), connections)


def horizon_to_dict(scn: WindowedScenario) -> dict:
    out = []
    for aid in scn.airports:
        rounds = []
        for r in sorted(scn.rounds_of(aid), key=lambda r: r.index):
            doc = instance_to_dict(r.instance)
            for f in doc["flights"]:
                if f["id"] in scn.connections:
                    f["connects_from"] = scn.connections[f["id"]]
            rounds.append({"timestamp": r.timestamp, **doc})
        out.append({"id": aid, "rounds": rounds})
    return {"airports": out}


def record_to_dict(rec: RoundRecord) -> dict:
    return {
        "airport": rec.airport,
        "round": rec.index,
        "timestamp": rec.timestamp,
        "status": rec.status,
        "objective": rec.objective,
        "revenue": rec.revenue,
        "max_price": rec.max_price,
        "spare_capacity": rec.spare_capacity,
        "underfilled_slots": rec.underfilled_slots,
        "unserved": list(rec.unserved),
        "payments": {f.id: rec.payments[f.id] for f in rec.instance.flights if f.id in rec.payments},
        "outcome": outcome_to_dict(rec.outcome, rec.instance) if rec.outcome else None,
    }


def log_to_dict(log: ClearingLog) -> dict:
    return {"rounds": [record_to_dict(r) for r in log.records]}


def summary_rows(log: ClearingLog):
    for rec in log.records:
        yield {
            "round": rec.index,
            "airport": rec.airport,
            "timestamp": rec.timestamp,
            "status": rec.status,
            "objective": "" if rec.objective is None else rec.objective,
            "revenue": rec.revenue,
            "max_price": rec.max_price,
        }

