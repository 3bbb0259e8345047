"""Brute-force feasibility search and exhaustive channel sweeps.

The search here is deliberately independent of the checker in
``alignment``: it keeps an occupancy map of every receiver's physical
observation (including the Y downlink shift) and prunes as soon as a
dimension holds a desired word together with anything that is not the
receiver's own transmission.
"""

from __future__ import annotations

import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .alignment import (
    DELTA,
    Y,
    OffsetPlan,
    check,
    construct_delta_elementary,
    construct_y_elementary,
    construct,
)
from .bounds import DofValue
from .channel import USERS, DeltaChannel, MessagingMatrix, YChannel
from .errors import AlignError, SearchInconclusive
from .simulate import exhaustive_messages, run_delta, run_y
from .ydelta import is_offdiagonal_product

DEFAULT_BUDGET = 10**9
MAX_SWEEP_CHANNELS = 10**6


@dataclass(frozen=True)
class SearchResult:
    feasible: bool
    witness: OffsetPlan | None
    nodes_explored: int
    inconclusive: bool = False

    @property
    def status(self) -> str:
        if self.inconclusive:
            return "inconclusive"
        return "feasible" if self.feasible else "infeasible"

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "feasible": self.feasible,
            "nodes_explored": self.nodes_explored,
            "witness": self.witness.to_json() if self.witness else None,
        }


def _observed_at(ch, r: int, i: int, p: int) -> int:
    """Position at which receiver ``r`` sees offset ``p`` sent by ``i``."""
    if isinstance(ch, DeltaChannel):
        return (ch.exponent(r, i) + p) % ch.n
    return (ch.downlink(r) + ch.uplink(i) + p) % ch.n


class _Budget(Exception):
    pass


def feasible_plan_search(ch, mm: MessagingMatrix, n: int | None = None, budget: int | None = None) -> SearchResult:
    """Exhaustive backtracking over every offset assignment at ``n``.

    Variables are visited in lexicographic ``(j, i, m)`` order, offsets in
    ascending order, so the witness is the lexicographically smallest
    separable plan. Exceeding ``budget`` nodes gives an inconclusive
    result, never a silent ``infeasible``.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    n = ch.n if n is None else n
    ch = ch.with_n(n)
    topology = DELTA if isinstance(ch, DeltaChannel) else Y
    keys = mm.keys()

    # occupancy[r][d] = [desired words, foreign interference words]
    occupancy = {r: [[0, 0] for _ in range(n)] for r in USERS}
    sent = {i: [False] * n for i in USERS}
    chosen: dict = {}
    nodes = 0

    def cells(key, p):
        j, i, _ = key
        for r in USERS:
            if r == i:
                continue
            yield occupancy[r][_observed_at(ch, r, i, p)], 0 if r == j else 1

    def admissible(key, p):
        if sent[key[1]][p]:
            return False
        for cell, role in cells(key, p):
            desired, foreign = cell
            if role == 0 and (desired or foreign):
                return False
            if role == 1 and desired:
                return False
        return True

    def dfs(v):
        nonlocal nodes
        if v == len(keys):
            return True
        key = keys[v]
        for p in range(n):
            nodes += 1
            if nodes > budget:
                raise _Budget
            if not admissible(key, p):
                continue
            sent[key[1]][p] = True
            touched = list(cells(key, p))
            for cell, role in touched:
                cell[role] += 1
            chosen[key] = p
            if dfs(v + 1):
                return True
            del chosen[key]
            for cell, role in touched:
                cell[role] -= 1
            sent[key[1]][p] = False
        return False

    try:
        found = dfs(0)
    except _Budget:
        return SearchResult(False, None, nodes, inconclusive=True)
    if not found:
        return SearchResult(False, None, nodes)
    witness = OffsetPlan(topology, n, dict(chosen), method="oracle")
    return SearchResult(True, witness, nodes)


def minimal_witness(ch, mm: MessagingMatrix, n_max: int, budget: int | None = None):
    """Smallest feasible ``n <= n_max`` and its search result, or ``(None, None)``."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    for n in range(1, n_max + 1):
        result = feasible_plan_search(ch, mm, n, budget)
        if result.inconclusive:
            raise SearchInconclusive(
                f"search at n={n} exceeded {result.nodes_explored - 1} nodes", result.nodes_explored
            )
        if result.feasible:
            return n, result
    return None, None


def minimal_n(ch, mm: MessagingMatrix, n_max: int, budget: int | None = None) -> int | None:
    return minimal_witness(ch, mm, n_max, budget)[0]


# -- channel sweeps -----------------------------------------------------------


def _is_elementary(mm: MessagingMatrix, n: int) -> bool:
    return n == 3 and mm == MessagingMatrix.uniform(1)


def _dof_label(d: DofValue) -> str:
    return str(Fraction(d.num, d.den))


def _sweep_one(topology: str, n: int, mm: MessagingMatrix, index: int, exps: tuple) -> dict:
    if topology == DELTA:
        ch = DeltaChannel(n, (exps[0:3], exps[3:6], exps[6:9]))
        downlinks = [None]
    else:
        ch = YChannel(n, exps)
        downlinks = list(itertools.product(range(n), repeat=3))
    row = {
        "index": index,
        "exponents": list(exps),
        "constructed": False,
        "method": None,
        "checker_pass": None,
        "simulation_ok": None,
        "dof": None,
        "offdiagonal_product": is_offdiagonal_product(ch) if topology == DELTA else True,
    }
    try:
        if _is_elementary(mm, n):
            if topology == DELTA:
                plan = construct_delta_elementary(ch)
            else:
                plan = construct_y_elementary(ch)
        else:
            plan, _ = construct(ch, mm, n)
    except AlignError:
        return row
    row["constructed"] = True
    row["method"] = plan.method
    row["checker_pass"] = check(plan, ch, mm).passed
    msgs = exhaustive_messages(mm)
    ok = True
    for b in downlinks:
        if topology == DELTA:
            ok &= run_delta(ch, plan, msgs).success
        else:
            ok &= run_y(YChannel(n, exps, b), plan, msgs).success
    row["simulation_ok"] = ok
    if row["checker_pass"]:
        row["dof"] = _dof_label(DofValue(mm.total, n))
    return row


def _sweep_chunk(args) -> list[dict]:
    topology, n, alpha, start, stop = args
    mm = MessagingMatrix(alpha)
    width = 9 if topology == DELTA else 3
    space = itertools.islice(itertools.product(range(n), repeat=width), start, stop)
    return [_sweep_one(topology, n, mm, start + c, exps) for c, exps in enumerate(space)]


def sweep_channel_count(n: int, topology: str) -> int:
    return n ** (9 if topology == DELTA else 3)


def channel_sweep(
    n: int,
    mm: MessagingMatrix,
    topology: str,
    workers: int = 1,
    rows: bool = False,
    max_channels: int = MAX_SWEEP_CHANNELS,
) -> dict:
    """Run the constructor, checker and simulator on every channel at ``n``.

    Delta enumerates all ``n^9`` exponent matrices; Y enumerates all ``n^3``
    uplink vectors and simulates each plan under all ``n^3`` downlink
    vectors. Simulation uses every one-bit message pattern. The summary is
    a sum over channels, so chunks may run in separate processes.
    """
    if topology not in (DELTA, Y):
        raise ValueError(f"unknown topology {topology!r}")
    total = sweep_channel_count(n, topology)
    if total > max_channels:
        raise SearchInconclusive(f"{total} channels exceeds the sweep budget of {max_channels}")
    if workers <= 1:
        results = _sweep_chunk((topology, n, mm.alpha, 0, total))
    else:
        step = -(-total // (workers * 4))
        jobs = [(topology, n, mm.alpha, s, min(s + step, total)) for s in range(0, total, step)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = [r for chunk in pool.map(_sweep_chunk, jobs) for r in chunk]
        results.sort(key=lambda r: r["index"])

    hist = Counter(r["dof"] for r in results if r["dof"] is not None)
    summary = {
        "topology": topology,
        "n": n,
        "alpha": mm.to_json(),
        "channels_total": total,
        "downlinks_per_channel": n**3 if topology == Y else 1,
        "constructor_successes": sum(r["constructed"] for r in results),
        "checker_failures": sum(r["checker_pass"] is False for r in results),
        "simulation_failures": sum(r["simulation_ok"] is False for r in results),
        "oracle_fallbacks": sum(r["method"] == "oracle-fallback" for r in results),
        "offdiagonal_product_channels": sum(r["offdiagonal_product"] for r in results),
        "dof_histogram": dict(sorted(hist.items())),
    }
    if rows:
        summary["rows"] = results
    return summary
