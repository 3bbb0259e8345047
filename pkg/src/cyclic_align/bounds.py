"""DoF as an exact ratio and the upper bounds on it."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .channel import USERS, MessagingMatrix, third
from .errors import NotInterferenceFreeError


@dataclass(frozen=True, eq=False)
class DofValue:
    """``num / den`` kept unreduced so reports show ``M`` and ``n`` as given.

    Equality and ordering compare the rational value.
    """

    num: int
    den: int

    def __post_init__(self):
        if self.den < 1:
            raise ValueError(f"DoF denominator must be >= 1, got {self.den}")

    @property
    def value(self) -> Fraction:
        return Fraction(self.num, self.den)

    def _other(self, other):
        if isinstance(other, DofValue):
            return other.value
        if isinstance(other, (int, Fraction)):
            return other
        return NotImplemented

    def __eq__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self.value == o

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self.value < o

    def __le__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self.value <= o

    def __gt__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self.value > o

    def __ge__(self, other):
        o = self._other(other)
        return o if o is NotImplemented else self.value >= o

    def __str__(self):
        return f"{self.num}/{self.den}"

    def to_json(self) -> dict:
        return {"num": self.num, "den": self.den}


def dof_upper_bound_xchannel(alpha: Sequence[Sequence[int]]) -> DofValue:
    """Bound for a general X-channel grid; the max runs over every entry."""
    rows = [list(r) for r in alpha]
    if any(v < 0 for r in rows for v in r):
        raise ValueError("alpha entries must be non-negative")
    total = sum(map(sum, rows))
    if total == 0:
        return DofValue(0, 1)
    row_sum = [sum(r) for r in rows]
    col_sum = [sum(c) for c in zip(*rows)]
    den = max(
        row_sum[j] + col_sum[i] - rows[j][i]
        for j in range(len(rows))
        for i in range(len(rows[j]))
    )
    return DofValue(total, den)


def dof_upper_bound_multiway(mm: MessagingMatrix) -> DofValue:
    """Bound for the zero-diagonal multi-way case; the max skips ``i == j``."""
    total = mm.total
    if total == 0:
        return DofValue(0, 1)
    den = 0
    for j in USERS:
        for i in USERS:
            if i == j:
                continue
            row = sum(mm(j, l) for l in USERS if l != j)
            col = sum(mm(l, i) for l in USERS if l != i)
            den = max(den, row + col - mm(j, i))
    return DofValue(total, den)


def dimension_requirement(mm: MessagingMatrix) -> tuple[int, int, int, int]:
    """``(n_1, n_2, n_3, n)`` with ``n_j = a_ji + a_jk + max(a_ik, a_ki)``.

    ``n`` is the max of the three, floored to 1 for the empty matrix.
    """
    req = []
    for j in USERS:
        i, k = (u for u in USERS if u != j)
        assert k == third(i, j)
        req.append(mm(j, i) + mm(j, k) + max(mm(i, k), mm(k, i)))
    return req[0], req[1], req[2], max(1, max(req))


def achieved_dof(plan, mm: MessagingMatrix, ch) -> DofValue:
    """``M / n`` for a plan that passes its separability check."""
    from .alignment import check

    report = check(plan, ch, mm)
    if not report.passed:
        raise NotInterferenceFreeError(
            f"plan has {len(report.violations)} separability violation(s); DoF undefined"
        )
    return DofValue(mm.total, plan.n)
