"""Separability checks and Cyclic IA / Cyclic SA plan construction.

Every separability condition is a statement about two submessages landing
in the same dimension somewhere they must not. Receiver ``r`` sees
submessage ``(j, i, m)`` at offset ``arrival[r][i] + p_ji^[m]`` where the
arrival table is the channel matrix ``k`` for the Delta channel and the
uplink vector ``a`` (same for every receiver) for the Y-channel, since the
downlink shift ``b_r`` moves every word at ``r`` by the same amount.

At receiver ``r`` a submessage is *desired* when ``j == r``, *own* when
``i == r`` (removed by SIC, never in conflict) and *interference* otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Union

from .channel import USERS, DeltaChannel, Key, MessagingMatrix, YChannel, third
from .errors import (
    ConstructionError,
    DimensionMismatchError,
    InvalidDimensionError,
    PlanMismatchError,
)

DELTA = "delta"
Y = "y"

MULTIPLE_ACCESS = "multiple-access"
INTRA_USER = "intra-user"
INTER_USER = "inter-user"

Channel = Union[DeltaChannel, YChannel]


def topology_of(ch: Channel) -> str:
    if isinstance(ch, DeltaChannel):
        return DELTA
    if isinstance(ch, YChannel):
        return Y
    raise TypeError(f"not a channel: {ch!r}")


def key_to_str(key: Key) -> str:
    return "{},{},{}".format(*key)


def key_from_str(s: str) -> Key:
    parts = tuple(int(x) for x in s.split(","))
    if len(parts) != 3:
        raise ValueError(f"bad submessage key {s!r}; expected 'j,i,m'")
    return parts


@dataclass(frozen=True)
class OffsetPlan:
    """Offsets ``p_ji^[m]`` in ``[0, n)`` for every submessage.

    ``aligned`` lists the key pairs the constructor tied together by an
    alignment congruence; ``method`` records how the plan was obtained.
    """

    topology: str
    n: int
    offsets: Mapping[Key, int]
    aligned: tuple[tuple[Key, Key], ...] = ()
    method: str = "given"

    def __post_init__(self):
        if self.topology not in (DELTA, Y):
            raise ValueError(f"unknown topology {self.topology!r}")
        if self.n < 1:
            raise InvalidDimensionError(f"dimension count must be >= 1, got {self.n}")
        object.__setattr__(self, "offsets", {k: v % self.n for k, v in self.offsets.items()})

    def __getitem__(self, key: Key) -> int:
        return self.offsets[key]

    def to_json(self) -> dict:
        return {
            "topology": self.topology,
            "n": self.n,
            "offsets": {key_to_str(k): self.offsets[k] for k in sorted(self.offsets)},
        }

    @classmethod
    def from_json(cls, data: Mapping, topology: str | None = None) -> OffsetPlan:
        return cls(
            topology=data.get("topology", topology),
            n=int(data["n"]),
            offsets={key_from_str(k): int(v) for k, v in data["offsets"].items()},
        )


@dataclass(frozen=True)
class Violation:
    """Two submessages colliding in one dimension.

    ``site`` is the receiver index for multiple-access and inter-user
    violations and the transmitter index for intra-user ones.
    ``dimension`` is the colliding offset as seen at that site (the relay
    dimension for the Y-channel).
    """

    kind: str
    site: int
    keys: tuple[Key, Key]
    dimension: int

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "site": self.site,
            "keys": [key_to_str(k) for k in self.keys],
            "dimension": self.dimension,
        }


@dataclass(frozen=True)
class SeparabilityReport:
    violations: tuple[Violation, ...] = field(default_factory=tuple)

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def verdict(self) -> str:
        return "pass" if self.passed else "fail"

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def to_json(self) -> dict:
        return {"verdict": self.verdict, "violations": [v.to_json() for v in self.violations]}


def arrival_table(ch: Channel) -> tuple[tuple[int, ...], ...]:
    """``table[r-1][i-1]``: shift applied to source ``i`` as observed at ``r``."""
    if isinstance(ch, DeltaChannel):
        return ch.k
    return (ch.a, ch.a, ch.a)


def _validate(plan: OffsetPlan, ch: Channel, mm: MessagingMatrix) -> None:
    if plan.topology != topology_of(ch):
        raise PlanMismatchError(f"{plan.topology} plan used on a {topology_of(ch)} channel")
    if plan.n != ch.n:
        raise DimensionMismatchError(f"plan has n={plan.n}, channel has n={ch.n}")
    expected = set(mm.keys())
    got = set(plan.offsets)
    if got != expected:
        missing = sorted(expected - got)
        extra = sorted(got - expected)
        raise PlanMismatchError(f"plan/matrix mismatch: missing={missing} extra={extra}")


def check(plan: OffsetPlan, ch: Channel, mm: MessagingMatrix) -> SeparabilityReport:
    """Enumerate every separability violation of ``plan`` (no short-circuit)."""
    _validate(plan, ch, mm)
    n = ch.n
    table = arrival_table(ch)
    keys = mm.keys()
    off = plan.offsets
    found: list[Violation] = []

    for i in USERS:
        sent = [key for key in keys if key[1] == i]
        for a in range(len(sent)):
            for b in range(a + 1, len(sent)):
                x, y = sent[a], sent[b]
                if off[x] == off[y]:
                    found.append(Violation(INTRA_USER, i, (x, y), off[x]))

    for r in USERS:
        row = table[r - 1]
        seen = [(key, (row[key[1] - 1] + off[key]) % n) for key in keys if key[1] != r]
        for a in range(len(seen)):
            x, dx = seen[a]
            for b in range(a + 1, len(seen)):
                y, dy = seen[b]
                if dx != dy:
                    continue
                want_x, want_y = x[0] == r, y[0] == r
                if want_x and want_y:
                    found.append(Violation(MULTIPLE_ACCESS, r, (x, y), dx))
                elif want_x or want_y:
                    found.append(Violation(INTER_USER, r, (x, y), dx))

    return SeparabilityReport(tuple(found))


def check_delta(plan: OffsetPlan, ch: DeltaChannel, mm: MessagingMatrix) -> SeparabilityReport:
    if not isinstance(ch, DeltaChannel):
        raise TypeError("check_delta needs a DeltaChannel")
    return check(plan, ch, mm)


def check_y(plan: OffsetPlan, ch: YChannel, mm: MessagingMatrix) -> SeparabilityReport:
    if not isinstance(ch, YChannel):
        raise TypeError("check_y needs a YChannel")
    return check(plan, ch, mm)


def _clash(table, n: int, x: Key, px: int, y: Key, py: int) -> bool:
    """True if ``x`` at ``px`` and ``y`` at ``py`` violate any condition."""
    ix, iy = x[1], y[1]
    if ix == iy and px == py:
        return True
    for r in USERS:
        if r == ix or r == iy:
            continue
        if x[0] != r and y[0] != r:
            continue
        row = table[r - 1]
        if (row[ix - 1] + px) % n == (row[iy - 1] + py) % n:
            return True
    return False


def _partner_offset(topology: str, table, n: int, free: Key, p: int) -> int:
    """Offset of the index-swapped partner of ``free`` that aligns with it.

    Delta: the pair ``(x,y)``/``(y,x)`` is interference at the third user
    ``j`` and must coincide there: ``k_jy + p_xy = k_jx + p_yx``.
    Y: both words must coincide at the relay: ``a_y + p_xy = a_x + p_yx``.
    """
    x, y, _ = free
    row = table[third(x, y) - 1] if topology == DELTA else table[0]
    return (row[y - 1] + p - row[x - 1]) % n


def alignment_units(mm: MessagingMatrix) -> list[tuple[Key, Key | None]]:
    """Search variables in lexicographic order of their free key.

    Submessage ``m`` of ``(x, y)`` is paired with submessage ``m`` of
    ``(y, x)`` for ``m <= min(alpha_xy, alpha_yx)``; the surplus of the
    larger direction goes out by plain multiple access.
    """
    units: list[tuple[Key, Key | None]] = []
    for key in mm.keys():
        x, y, m = key
        if m <= mm(y, x):
            if (x, y) < (y, x):
                units.append((key, (y, x, m)))
        else:
            units.append((key, None))
    return units


def _aligned_search(topology: str, ch: Channel, mm: MessagingMatrix) -> OffsetPlan | None:
    """Depth-first search over the free offsets, smallest offset first."""
    n = ch.n
    table = arrival_table(ch)
    units = alignment_units(mm)
    assigned: list[tuple[Key, int]] = []

    def fits(key: Key, p: int) -> bool:
        return not any(_clash(table, n, key, p, other, q) for other, q in assigned)

    def place(u: int) -> bool:
        if u == len(units):
            return True
        free, partner = units[u]
        for p in range(n):
            if not fits(free, p):
                continue
            if partner is None:
                assigned.append((free, p))
                if place(u + 1):
                    return True
                assigned.pop()
                continue
            q = _partner_offset(topology, table, n, free, p)
            if _clash(table, n, free, p, partner, q) or not fits(partner, q):
                continue
            assigned.extend(((free, p), (partner, q)))
            if place(u + 1):
                return True
            del assigned[-2:]
        return False

    if not place(0):
        return None
    pairs = tuple((f, q) for f, q in units if q is not None)
    return OffsetPlan(topology, n, dict(assigned), aligned=pairs, method="aligned")


def _elementary(topology: str, ch: Channel) -> OffsetPlan:
    if ch.n != 3:
        raise InvalidDimensionError(f"elementary construction needs n=3, got n={ch.n}")
    plan = _aligned_search(topology, ch, MessagingMatrix.uniform(1))
    if plan is None:
        # Y channels never get here; Delta channels do when the cross links are not a product.
        raise ConstructionError(f"no perfect alignment plan at n=3 for {ch}")
    return plan


def construct_delta_elementary(ch: DeltaChannel) -> OffsetPlan:
    """Perfect Cyclic IA for six unit messages in three dimensions.

    Succeeds exactly when the cross links satisfy
    k12 + k23 + k31 == k13 + k32 + k21 (mod 3); raises ConstructionError otherwise.
    """
    return _elementary(DELTA, ch)


def construct_y_elementary(ch: YChannel) -> OffsetPlan:
    """Perfect Cyclic SA with SIC for six unit messages in three dimensions."""
    return _elementary(Y, ch)


def _general(topology, ch, mm, n, budget):
    from .bounds import dimension_requirement
    from .oracle import feasible_plan_search

    if n is None:
        n = dimension_requirement(mm)[3]
    if n < 1:
        raise InvalidDimensionError(f"dimension count must be >= 1, got {n}")
    ch = ch.with_n(n)
    if mm.total == 0:
        return OffsetPlan(topology, n, {}, method="aligned"), n
    plan = _aligned_search(topology, ch, mm)
    if plan is not None:
        return plan, n
    result = feasible_plan_search(ch, mm, n, budget=budget)
    if result.feasible:
        w = result.witness
        return OffsetPlan(topology, n, w.offsets, method="oracle-fallback"), n
    status = "inconclusive" if result.inconclusive else "infeasible"
    raise ConstructionError(f"no separable {topology} plan at n={n} (oracle: {status})")


def construct_delta_general(
    ch: DeltaChannel, mm: MessagingMatrix, n: int | None = None, budget: int | None = None
) -> tuple[OffsetPlan, int]:
    """Cyclic IA for an arbitrary messaging matrix.

    Targets ``n = max_j n_j`` unless ``n`` is given. Channel exponents are
    re-read modulo the target ``n``. Falls back to exhaustive search when
    the pairwise-aligned search finds nothing.
    """
    return _general(DELTA, ch, mm, n, budget)


def construct_y_general(
    ch: YChannel, mm: MessagingMatrix, n: int | None = None, budget: int | None = None
) -> tuple[OffsetPlan, int]:
    """Cyclic SA with SIC for an arbitrary messaging matrix."""
    return _general(Y, ch, mm, n, budget)


def construct(ch: Channel, mm: MessagingMatrix, n: int | None = None, budget: int | None = None):
    return _general(topology_of(ch), ch, mm, n, budget)
