"""``slotmarket`` command line: solve, verify, oracle, simulate.

Exit codes: 0 success, 1 a verification check failed, 2 unreadable or
invalid scenario, 3 infeasible market, 4 instance too large for the
brute-force checks.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys

from .equilibrium import clear_market, verify_equilibrium
from .errors import Infeasible, RoundInfeasible, ScenarioError, TooLarge
from .horizon import DelayMultiplierHook, log_to_dict, parse_horizon, record_to_dict, run_horizon, summary_rows, validate_scenario
from .model import validate_instance
from .oracle import enumerate_optimal_schedules, min_equilibrium_prices_oracle
from .scenario import dumps, load_json, outcome_to_dict, parse_instance
from .vcg import MAX_RERUNS, check_leonard, grid_size, truthfulness_probe

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_INFEASIBLE, EXIT_TOO_LARGE = 0, 1, 2, 3, 4


class _Exit(Exception):
    def __init__(self, code, message):
        self.code = code
        self.message = message


def _load_instance(path):
    try:
        inst = parse_instance(load_json(path))
    except OSError as exc:
        raise _Exit(EXIT_INPUT, f"cannot read {path}: {exc.strerror}")
    except ScenarioError as exc:
        raise _Exit(EXIT_INPUT, f"invalid scenario: {exc}")
    problems = [v for v in validate_instance(inst) if v.code != "capacity_deficit"]
    if problems:
        raise _Exit(EXIT_INPUT, "invalid scenario:\n" + "\n".join(f"  {v}" for v in problems))
    return inst


def _solve_csv(inst, outcome):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["kind", "id", "slot", "price", "delay_cost", "total_cost"])
    for f in inst.flights:
        s = outcome.schedule[f.id]
        w.writerow(["flight", f.id, s, outcome.prices[s], f.delay_cost[s], outcome.flight_cost[f.id]])
    for s in inst.slot_order():
        w.writerow(["slot", s, s, outcome.prices[s], "", ""])
    w.writerow(["summary", "objective", "", "", "", outcome.objective])
    w.writerow(["summary", "revenue", "", "", "", outcome.revenue])
    return buf.getvalue()


def _emit(text, output):
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_solve(args):
    inst = _load_instance(args.scenario)
    try:
        outcome = clear_market(inst, prices=args.prices)
    except Infeasible as exc:
        raise _Exit(EXIT_INFEASIBLE, f"infeasible: {exc}")
    text = dumps(outcome_to_dict(outcome, inst)) if args.format == "json" else _solve_csv(inst, outcome)
    _emit(text, args.output)
    return EXIT_OK


def _guard(inst):
    try:
        enumerate_optimal_schedules(inst)
    except TooLarge as exc:
        raise _Exit(EXIT_TOO_LARGE, f"too large for verification: {exc}")
    except Infeasible as exc:
        raise _Exit(EXIT_INFEASIBLE, f"infeasible: {exc}")
    for f in inst.flights:
        if grid_size(inst, f.id) > MAX_RERUNS:
            raise _Exit(EXIT_TOO_LARGE, f"too large for verification: misreport grid of {f.id!r} exceeds {MAX_RERUNS}")


def cmd_verify(args):
    inst = _load_instance(args.scenario)
    _guard(inst)
    results = []

    def check(name, ok, detail=""):
        results.append(ok)
        print(f"{'PASS' if ok else 'FAIL'} {name}" + (f": {detail}" if detail and not ok else ""))

    best, _ = enumerate_optimal_schedules(inst)
    raw = clear_market(inst, prices="raw")
    mine = clear_market(inst, prices="min")
    prices = dict(mine.prices)
    if args.tamper:
        prices = {s: p + 1 for s, p in prices.items()}
    try:
        oracle_min = min_equilibrium_prices_oracle(inst, mine.schedule)
    except TooLarge as exc:
        raise _Exit(EXIT_TOO_LARGE, f"too large for verification: {exc}")
    check("oracle-objective", raw.objective == best, f"solver {raw.objective} vs enumeration {best}")
    bad = verify_equilibrium(inst, raw.schedule, raw.prices)
    check("equilibrium-raw", not bad, "; ".join(map(str, bad)))
    bad = verify_equilibrium(inst, mine.schedule, prices)
    check("equilibrium-min", not bad, "; ".join(map(str, bad)))
    check("minimum-prices-oracle", prices == oracle_min, f"{prices} vs oracle {oracle_min}")
    check("leonard-vcg", check_leonard(inst))
    found = [m for f in inst.flights for m in truthfulness_probe(inst, f.id)]
    check("truthfulness", not found, f"{len(found)} profitable misreport(s), first {found[0]}" if found else "")
    return EXIT_OK if all(results) else EXIT_FAIL


def cmd_oracle(args):
    inst = _load_instance(args.scenario)
    try:
        best, schedules = enumerate_optimal_schedules(inst)
        prices = [min_equilibrium_prices_oracle(inst, s) for s in schedules]
    except TooLarge as exc:
        raise _Exit(EXIT_TOO_LARGE, f"too large for the oracle: {exc}")
    except Infeasible as exc:
        raise _Exit(EXIT_INFEASIBLE, f"infeasible: {exc}")
    doc = {
        "objective": best,
        "optimal": [{"schedule": s, "min_prices": p} for s, p in zip(schedules, prices)],
    }
    _emit(dumps(doc), args.output)
    return EXIT_OK


def _write_log(log, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    for rec in log.records:
        name = f"round_{rec.timestamp:06d}_{rec.airport}_{rec.index:03d}.json"
        with open(os.path.join(out_dir, name), "w", encoding="utf-8") as fh:
            fh.write(dumps(record_to_dict(rec)))
    with open(os.path.join(out_dir, "log.json"), "w", encoding="utf-8") as fh:
        fh.write(dumps(log_to_dict(log)))
    rows = list(summary_rows(log))
    with open(os.path.join(out_dir, "summary.csv"), "w", encoding="utf-8", newline="") as fh:
        w = csv.DictWriter(fh, ["round", "airport", "timestamp", "status", "objective", "revenue", "max_price"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(rows)


def cmd_simulate(args):
    try:
        scn = parse_horizon(load_json(args.scenario))
    except OSError as exc:
        raise _Exit(EXIT_INPUT, f"cannot read {args.scenario}: {exc.strerror}")
    except ScenarioError as exc:
        raise _Exit(EXIT_INPUT, f"invalid scenario: {exc}")
    problems = [p for p in validate_scenario(scn) if "total capacity" not in p]
    if problems:
        raise _Exit(EXIT_INPUT, "invalid scenario:\n" + "\n".join(f"  {p}" for p in problems))
    hook = DelayMultiplierHook(args.factor, scn.connections) if args.hook == "delay-multiplier" else None
    try:
        log = run_horizon(scn, hook=hook, on_infeasible=args.on_infeasible)
    except RoundInfeasible as exc:
        _write_log(exc.log, args.out_dir)
        raise _Exit(EXIT_INFEASIBLE, f"infeasible round, partial log written: {exc}")
    _write_log(log, args.out_dir)
    with open(os.path.join(args.out_dir, "summary.csv"), encoding="utf-8") as fh:
        sys.stdout.write(fh.read())
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="slotmarket", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="clear one airport's market")
    p.add_argument("scenario")
    p.add_argument("--prices", choices=["raw", "min"], default="min")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", help="cross-check a small instance against brute force")
    p.add_argument("scenario")
    p.add_argument("--tamper", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="brute-force optimal schedules and minimum prices")
    p.add_argument("scenario")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("simulate", help="run a multi-airport rolling horizon")
    p.add_argument("scenario")
    p.add_argument("--out-dir", required=True)
    p.add_argument("--hook", choices=["none", "delay-multiplier"], default="none")
    p.add_argument("--factor", type=int, default=3, help="multiplier for late-slot costs (delay-multiplier hook)")
    p.add_argument("--on-infeasible", choices=["abort", "skip"], default="abort")
    p.set_defaults(func=cmd_simulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        print(exc.message, file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
