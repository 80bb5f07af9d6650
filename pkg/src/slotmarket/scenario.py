"""JSON scenario and outcome documents.

Single-airport scenario::

    {"slots":   [{"id": "s1", "capacity": 1, "time_index": 0}, ...],
     "flights": [{"id": "f1", "airline": "AA", "window": ["s1", "s2"],
                  "costs": {"s1": 0, "s2": 10}}, ...]}

Multi-airport horizon scenario::

    {"airports": [{"id": "ORD",
                   "rounds": [{"timestamp": 0, "slots": [...], "flights": [...]}, ...]},
                  ...]}

A horizon flight may carry ``"connects_from": "<flight id>"`` naming an
earlier flight whose delay the built-in cost hooks react to.

Parsers raise :class:`ScenarioError` whose ``path`` is a dotted/bracketed
pointer to the offending field, e.g. ``flights[2].costs.s3``.
"""

from __future__ import annotations

import json
from typing import Any, Dict

from .errors import ScenarioError
from .model import EquilibriumOutcome, Flight, Instance, Slot


def _join(path, key):
    if isinstance(key, int):
        return f"{path}[{key}]"
    return f"{path}.{key}" if path else str(key)


def _field(obj, key, path, kind=None, default=...):
    if not isinstance(obj, dict):
        raise ScenarioError(path, "expected an object")
    if key not in obj:
        if default is not ...:
            return default
        raise ScenarioError(_join(path, key), "missing field")
    val = obj[key]
    if kind is not None:
        _expect(val, kind, _join(path, key))
    return val


def _expect(val, kind, path):
    if kind is int:
        if not isinstance(val, int) or isinstance(val, bool):
            raise ScenarioError(path, f"expected an integer, got {val!r}")
    elif not isinstance(val, kind):
        name = {list: "an array", dict: "an object", str: "a string"}.get(kind, kind.__name__)
        raise ScenarioError(path, f"expected {name}, got {type(val).__name__}")


def parse_instance(doc: Any, path: str = "") -> Instance:
    """Build an :class:`Instance` from a decoded JSON document.

    Only structure and types are checked here; semantic invariants (unique
    ids, cost domain equal to window, capacity) are the job of
    :func:`slotmarket.model.validate_instance`.
    """
    slots_doc = _field(doc, "slots", path, list)
    flights_doc = _field(doc, "flights", path, list)
    slots = []
    for k, s in enumerate(slots_doc):
        p = _join(_join(path, "slots"), k)
        slots.append(Slot(
            id=_field(s, "id", p, str),
            capacity=_field(s, "capacity", p, int),
            time_index=_field(s, "time_index", p, int, default=k),
        ))
    flights = []
    for k, f in enumerate(flights_doc):
        p = _join(_join(path, "flights"), k)
        window = _field(f, "window", p, list)
        for j, sid in enumerate(window):
            _expect(sid, str, _join(_join(p, "window"), j))
        costs = _field(f, "costs", p, dict)
        for sid, c in costs.items():
            _expect(c, int, _join(_join(p, "costs"), sid))
        flights.append(Flight(
            id=_field(f, "id", p, str),
            window=window,
            delay_cost=costs,
            airline=_field(f, "airline", p, str, default=""),
        ))
    return Instance(slots, flights)


def instance_to_dict(inst: Instance) -> Dict[str, Any]:
    return {
        "slots": [{"id": s.id, "capacity": s.capacity, "time_index": s.time_index} for s in inst.slots],
        "flights": [
            {"id": f.id, "airline": f.airline, "window": list(f.window),
             "costs": dict(f.delay_cost)}
            for f in inst.flights
        ],
    }


def load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ScenarioError("", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def load_instance(path) -> Instance:
    return parse_instance(load_json(path))


def dumps(doc) -> str:
    return json.dumps(doc, indent=2) + "\n"


def outcome_to_dict(outcome: EquilibriumOutcome, inst: Instance) -> Dict[str, Any]:
    order = inst.slot_order()
    return {
        "objective": outcome.objective,
        "revenue": outcome.revenue,
        "minimal_prices": outcome.minimal_prices,
        "schedule": {f.id: outcome.schedule[f.id] for f in inst.flights},
        "prices": {s: outcome.prices[s] for s in order},
        "flight_cost": {f.id: outcome.flight_cost[f.id] for f in inst.flights},
    }


def parse_outcome(doc: Any, path: str = "") -> EquilibriumOutcome:
    """Inverse of :func:`outcome_to_dict` (``revenue`` is derived, so only type-checked)."""
    sched = _field(doc, "schedule", path, dict)
    prices = _field(doc, "prices", path, dict)
    costs = _field(doc, "flight_cost", path, dict)
    for name, m, kind in (("schedule", sched, str), ("prices", prices, int), ("flight_cost", costs, int)):
        for k, v in m.items():
            _expect(v, kind, _join(_join(path, name), k))
    _field(doc, "revenue", path, int)
    minimal = _field(doc, "minimal_prices", path, bool)
    return EquilibriumOutcome(
        schedule=dict(sched),
        prices=dict(prices),
        flight_cost=dict(costs),
        objective=_field(doc, "objective", path, int),
        minimal_prices=minimal,
    )
