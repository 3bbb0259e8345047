"""``align`` command-line interface.

Exit codes: 0 when the command ran and the result is positive, 1 when it
ran and the answer is negative (infeasible, violations, failed decoding,
out-of-case), 2 for usage, I/O and schema errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .alignment import DELTA, Y, OffsetPlan, check, construct
from .bounds import (
    achieved_dof,
    dimension_requirement,
    dof_upper_bound_multiway,
    dof_upper_bound_xchannel,
)
from .channel import MessagingMatrix
from .errors import AlignError, ConstructionError, SchemaError, SearchInconclusive
from .oracle import channel_sweep, minimal_witness
from .scenario import SCHEMA_VERSION, load_scenario, parse_scenario
from .simulate import (
    exhaustive_messages,
    random_messages,
    receiver_occupancy,
    relay_occupancy,
    run,
    MAX_EXHAUSTIVE_MESSAGES,
)
from .ydelta import (
    MimoConfig,
    compose,
    decompose,
    is_offdiagonal_product,
    mimo_cases,
    mimo_normalized_dof,
    transfer_diagnostic,
)

EXIT_OK, EXIT_NEGATIVE, EXIT_ERROR = 0, 1, 2

# The Y relay forwards one time-step after it receives.
RELAY_LATENCY_SLOTS = 1


def _dof_json(d) -> dict:
    out = d.to_json()
    out["value"] = str(Fraction(d.num, d.den))
    return out


def _occupancy_json(ch, plan) -> dict:
    from .alignment import key_to_str

    if ch.__class__.__name__ == "YChannel":
        occ = relay_occupancy(ch, plan)
        return {"relay": {str(d): [key_to_str(k) for k in ks] for d, ks in sorted(occ.items())}}
    occ = receiver_occupancy(ch, plan)
    return {
        "receivers": {
            str(j): {str(d): [key_to_str(k) for k in ks] for d, ks in sorted(dims.items())}
            for j, dims in occ.items()
        }
    }


def _construct_or_take(sc):
    """The scenario's plan if given, else a freshly constructed one."""
    if sc.plan is not None:
        return sc.plan, sc.channel()
    plan, n = construct(sc.channel(), sc.alpha, sc.effective_n, sc.budget)
    return plan, sc.channel(n)


def cmd_bound(sc) -> tuple[dict, int]:
    n1, n2, n3, n = dimension_requirement(sc.alpha)
    return {
        "bound_multiway": _dof_json(dof_upper_bound_multiway(sc.alpha)),
        "bound_xchannel": _dof_json(dof_upper_bound_xchannel(sc.alpha.alpha)),
        "dimension_requirement": {"n_1": n1, "n_2": n2, "n_3": n3, "n": n},
    }, EXIT_OK


def cmd_construct(sc) -> tuple[dict, int]:
    ch = sc.channel()
    body = {"bound_multiway": _dof_json(dof_upper_bound_multiway(sc.alpha))}
    try:
        plan, n = construct(ch, sc.alpha, sc.effective_n, sc.budget)
    except ConstructionError as exc:
        body.update(constructed=False, reason=str(exc))
        return body, EXIT_NEGATIVE
    ch = sc.channel(n)
    report = check(plan, ch, sc.alpha)
    body.update(
        constructed=True,
        method=plan.method,
        plan=plan.to_json(),
        check=report.to_json(),
        achieved_dof=_dof_json(achieved_dof(plan, sc.alpha, ch)) if report.passed else None,
        occupancy=_occupancy_json(ch, plan),
    )
    return body, EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_check(sc) -> tuple[dict, int]:
    if sc.plan is None:
        raise SchemaError("plan", "the check command needs an explicit plan")
    ch = sc.channel()
    report = check(sc.plan, ch, sc.alpha)
    body = {"check": report.to_json(), "occupancy": _occupancy_json(ch, sc.plan)}
    if report.passed:
        body["achieved_dof"] = _dof_json(achieved_dof(sc.plan, sc.alpha, ch))
    return body, EXIT_OK if report.passed else EXIT_NEGATIVE


def cmd_simulate(sc) -> tuple[dict, int]:
    try:
        plan, ch = _construct_or_take(sc)
    except ConstructionError as exc:
        return {"constructed": False, "reason": str(exc)}, EXIT_NEGATIVE
    msgs = random_messages(sc.alpha, sc.t, sc.seed)
    outcome = run(ch, plan, msgs)
    body = {
        "plan": plan.to_json(),
        "check": check(plan, ch, sc.alpha).to_json(),
        "simulation": outcome.to_json(),
        "occupancy": _occupancy_json(ch, plan),
    }
    if sc.topology == Y:
        body["relay_latency_slots"] = RELAY_LATENCY_SLOTS
    return body, EXIT_OK if outcome.success else EXIT_NEGATIVE


def cmd_oracle(sc) -> tuple[dict, int]:
    n_max = sc.n_max if sc.n_max is not None else sc.formula_n + 2
    body = {"n_max": n_max, "lower_bound_n": dof_upper_bound_multiway(sc.alpha).den}
    try:
        n, result = minimal_witness(sc.channel(), sc.alpha, n_max, sc.budget)
    except SearchInconclusive as exc:
        body.update(status="inconclusive", minimal_n=None, reason=str(exc))
        return body, EXIT_NEGATIVE
    body["minimal_n"] = n
    if n is None:
        body["status"] = "infeasible"
        return body, EXIT_NEGATIVE
    body.update(status="feasible", search=result.to_json())
    return body, EXIT_OK


def cmd_sweep(n: int, alpha: MessagingMatrix, topology: str, workers=1, csv_path=None) -> tuple[dict, int]:
    summary = channel_sweep(n, alpha, topology, workers=workers, rows=csv_path is not None)
    rows = summary.pop("rows", None)
    if rows is not None:
        with open(csv_path, "w", newline="", encoding="utf-8") as fh:
            w = csv.writer(fh)
            w.writerow(
                ["index", "exponents", "constructed", "method", "checker_pass", "simulation_ok", "dof", "offdiagonal_product"]
            )
            for r in rows:
                w.writerow(
                    [
                        r["index"],
                        " ".join(map(str, r["exponents"])),
                        r["constructed"],
                        r["method"] or "",
                        "" if r["checker_pass"] is None else r["checker_pass"],
                        "" if r["simulation_ok"] is None else r["simulation_ok"],
                        r["dof"] or "",
                        r["offdiagonal_product"],
                    ]
                )
    clean = (
        summary["constructor_successes"] == summary["channels_total"]
        and summary["checker_failures"] == 0
        and summary["simulation_failures"] == 0
    )
    return {"sweep": summary}, EXIT_OK if clean else EXIT_NEGATIVE


def cmd_ydelta(sc) -> tuple[dict, int]:
    ch = sc.channel()
    if sc.topology == DELTA:
        dec = decompose(ch)
        body = {
            "decomposable": dec is not None,
            "decomposition": dec.to_json() if dec else None,
            "offdiagonal_product": is_offdiagonal_product(ch),
        }
        return body, EXIT_OK if dec is not None else EXIT_NEGATIVE

    delta = compose(ch)
    dec = decompose(delta)
    body = {
        "composed_k": [list(r) for r in delta.k],
        "decomposition": dec.to_json(),
        "round_trip": compose(dec.channel()) == delta,
    }
    try:
        plan, ch = _construct_or_take(sc)
    except ConstructionError as exc:
        body.update(constructed=False, reason=str(exc))
        return body, EXIT_NEGATIVE
    delta = compose(ch)
    delta_plan = OffsetPlan(DELTA, plan.n, plan.offsets)
    body["plan"] = plan.to_json()
    body["check_y"] = check(plan, ch, sc.alpha).verdict
    body["check_composed_delta"] = check(delta_plan, delta, sc.alpha).verdict
    body["transfer_random"] = transfer_diagnostic(ch, plan, random_messages(sc.alpha, sc.t, sc.seed))
    if sc.alpha.total <= MAX_EXHAUSTIVE_MESSAGES:
        body["transfer_exhaustive"] = transfer_diagnostic(ch, plan, exhaustive_messages(sc.alpha))
    ok = body["round_trip"] and all(
        d["y_success"] and d["delta_success"] and d["outputs_match"]
        for d in (body["transfer_random"], body.get("transfer_exhaustive", body["transfer_random"]))
    )
    return body, EXIT_OK if ok else EXIT_NEGATIVE


def cmd_mimo(a1: int, a2: int, a3: int, ar: int) -> tuple[dict, int]:
    cfg = MimoConfig(a1, a2, a3, ar)
    res = mimo_normalized_dof(cfg)
    body = {
        "antennas": [cfg.A1, cfg.A2, cfg.A3],
        "relay_antennas": cfg.AR,
        "matching_cases": mimo_cases(cfg),
        **res.to_json(),
    }
    return body, EXIT_OK if res.in_case else EXIT_NEGATIVE


def _parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="align", description="Cyclic interference/signal alignment toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, help, scenario=True):
        s = sub.add_parser(name, help=help)
        if scenario:
            s.add_argument("--scenario", required=name not in ("sweep", "mimo"), help="scenario JSON file")
        s.add_argument("--out", help="write the JSON report here instead of stdout")
        return s

    add("bound", "upper bounds and dimension requirement")
    add("construct", "build an alignment plan and check it")
    add("check", "check the scenario's explicit plan")
    add("simulate", "simulate one frame with seeded random messages")
    s = add("oracle", "exhaustive search for the smallest feasible n")
    s.add_argument("--n-max", type=int)
    s.add_argument("--budget", type=int, help="node budget per search")
    s = add("sweep", "construct, check and simulate on every channel at n")
    s.add_argument("--n", type=int)
    s.add_argument("--topology", choices=(DELTA, Y))
    s.add_argument("--csv", help="write one row per channel here")
    s.add_argument("--workers", type=int, default=1)
    add("ydelta", "Y-Delta product: compose, decompose, transfer equivalence")
    s = add("mimo", "MIMO Y-channel DoF case analysis")
    s.add_argument("--antennas", type=int, nargs=3, metavar=("A1", "A2", "A3"))
    s.add_argument("--relay", type=int, metavar="AR")
    return p


def _run(args) -> tuple[dict, int, dict]:
    if args.command == "mimo":
        if args.scenario:
            data = json.loads(open(args.scenario, encoding="utf-8").read())
            m = data.get("mimo") if isinstance(data, dict) else None
            if not isinstance(m, dict):
                raise SchemaError("mimo", "expected an object with 'antennas' and 'relay'")
            antennas, relay = m.get("antennas"), m.get("relay")
        else:
            antennas, relay = args.antennas, args.relay
        if antennas is None or relay is None or len(antennas) != 3:
            raise SchemaError("mimo", "need three transceiver antenna counts and a relay count")
        echo = {"schema": SCHEMA_VERSION, "mimo": {"antennas": list(antennas), "relay": relay}}
        body, code = cmd_mimo(*antennas, relay)
        return body, code, echo

    if args.command == "sweep":
        if args.scenario:
            sc = load_scenario(args.scenario)
            topology, n, alpha = sc.topology, sc.effective_n, sc.alpha
        else:
            topology, n, alpha = DELTA, 3, MessagingMatrix.uniform(1)
        topology = args.topology or topology
        n = args.n or n
        if n < 1:
            raise SchemaError("n", "must be >= 1")
        echo = {"schema": SCHEMA_VERSION, "topology": topology, "n": n, "alpha": alpha.to_json()}
        body, code = cmd_sweep(n, alpha, topology, args.workers, args.csv)
        return body, code, echo

    sc = load_scenario(args.scenario)
    if args.command == "oracle" and (args.n_max is not None or args.budget is not None):
        raw = sc.to_json()
        if args.n_max is not None:
            raw["n_max"] = args.n_max
        if args.budget is not None:
            raw["budget"] = args.budget
        sc = parse_scenario(raw)
    handler = {
        "bound": cmd_bound,
        "construct": cmd_construct,
        "check": cmd_check,
        "simulate": cmd_simulate,
        "oracle": cmd_oracle,
        "ydelta": cmd_ydelta,
    }[args.command]
    body, code = handler(sc)
    return body, code, sc.to_json()


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    start = time.perf_counter()
    try:
        body, code, echo = _run(args)
    except (AlignError, OSError, json.JSONDecodeError) as exc:
        print(f"align: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    report = {
        "tool": "cyclic-align",
        "version": __version__,
        "command": args.command,
        "scenario": echo,
        "exit_code": code,
        **body,
        "wall_time_s": round(time.perf_counter() - start, 6),
    }
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            print(f"align: error: {exc}", file=sys.stderr)
            return EXIT_ERROR
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
