import itertools
import random

import pytest

from cyclic_align.alignment import OffsetPlan, check, construct
from cyclic_align.bounds import dof_upper_bound_multiway
from cyclic_align.channel import DeltaChannel, MessagingMatrix, YChannel
from cyclic_align.errors import ConstructionError, SearchInconclusive
from cyclic_align.oracle import channel_sweep, feasible_plan_search, minimal_n
from cyclic_align.simulate import exhaustive_messages, run
from cyclic_align.ydelta import compose

from conftest import random_delta, random_y


def brute_force_feasible(ch, mm, n):
    """No pruning, no checker: try every plan and let the simulator judge."""
    keys = mm.keys()
    msgs = exhaustive_messages(mm)
    topo = "delta" if isinstance(ch, DeltaChannel) else "y"
    for offs in itertools.product(range(n), repeat=len(keys)):
        if run(ch, OffsetPlan(topo, n, dict(zip(keys, offs))), msgs).success:
            return True
    return False


def test_identity_channel(uniform):
    ch = DeltaChannel.identity(3)
    res = feasible_plan_search(ch, uniform, 3)
    assert res.feasible and res.status == "feasible"
    assert check(res.witness, ch, uniform).passed
    res2 = feasible_plan_search(ch, uniform, 2)
    assert not res2.feasible and res2.witness is None and not res2.inconclusive


def test_y_needs_three_dimensions(uniform):
    ch = YChannel(3, (0, 1, 2))
    assert not feasible_plan_search(ch, uniform, 2).feasible
    res = feasible_plan_search(ch, uniform, 3)
    assert res.feasible
    assert check(res.witness, ch, uniform).passed


def test_oracle_matches_unpruned_enumeration(uniform):
    rng = random.Random(2024)
    for _ in range(12):
        for ch in (random_delta(rng, 3), random_y(rng, 3)):
            assert feasible_plan_search(ch, uniform, 3).feasible == brute_force_feasible(ch, uniform, 3)
    small = MessagingMatrix.from_counts({(1, 2): 2, (2, 1): 1, (3, 1): 1})
    for _ in range(10):
        ch = random_delta(rng, 3)
        assert feasible_plan_search(ch, small, 3).feasible == brute_force_feasible(ch, small, 3)


def test_minimal_n(uniform, asym):
    assert minimal_n(DeltaChannel.identity(3), uniform, 6) == 3
    assert minimal_n(DeltaChannel.identity(3), MessagingMatrix.from_counts({}), 3) == 1
    # product channels are the ones where the formula n is reachable
    rng = random.Random(8)
    for _ in range(10):
        y = random_y(rng, 4)
        assert minimal_n(compose(y), asym, 6) == 4
        assert minimal_n(y, asym, 6) == 4


def test_minimal_n_none_when_out_of_range(uniform):
    assert minimal_n(DeltaChannel.identity(3), uniform, 2) is None


def test_budget_gives_inconclusive(asym):
    res = feasible_plan_search(DeltaChannel(5, ((0, 1, 2), (3, 4, 0), (1, 1, 1))), asym, 3, budget=5)
    assert res.inconclusive and not res.feasible and res.status == "inconclusive"
    with pytest.raises(SearchInconclusive):
        minimal_n(DeltaChannel.identity(4), asym, 4, budget=3)


def test_search_is_deterministic(asym):
    ch = DeltaChannel(4, ((0, 3, 1), (2, 0, 0), (1, 1, 3)))
    a = feasible_plan_search(ch, asym, 4)
    b = feasible_plan_search(ch, asym, 4)
    assert a == b


def test_oracle_constructor_and_bound_agreement():
    rng = random.Random(77)
    for _ in range(150):
        counts = [rng.randrange(3) for _ in range(6)]
        mm = MessagingMatrix(((0, counts[0], counts[1]), (counts[2], 0, counts[3]), (counts[4], counts[5], 0)))
        if mm.total > 8:
            continue
        lower = dof_upper_bound_multiway(mm).den
        n = lower
        ch = random_delta(rng, n) if rng.random() < 0.5 else random_y(rng, n)
        oracle = feasible_plan_search(ch, mm, n)
        try:
            plan, got = construct(ch, mm, n)
        except ConstructionError:
            assert not oracle.feasible
        else:
            assert got == n and oracle.feasible
            assert check(plan, ch, mm).passed
        m = minimal_n(ch, mm, lower + 3)
        assert m is None or m >= lower


def test_sweep_y_n3(uniform):
    s = channel_sweep(3, uniform, "y")
    assert s["channels_total"] == 27
    assert s["constructor_successes"] == 27
    assert s["checker_failures"] == 0 and s["simulation_failures"] == 0
    assert s["dof_histogram"] == {"2": 27}


def test_sweep_parallel_matches_serial(uniform):
    one = channel_sweep(3, uniform, "y", workers=1, rows=True)
    two = channel_sweep(3, uniform, "y", workers=2, rows=True)
    assert one == two


def test_sweep_delta_n2_has_no_successes(uniform):
    s = channel_sweep(2, uniform, "delta")
    assert s["channels_total"] == 2**9
    assert s["constructor_successes"] == 0


def test_sweep_budget_guard(uniform):
    with pytest.raises(SearchInconclusive):
        channel_sweep(5, uniform, "delta", max_channels=1000)
