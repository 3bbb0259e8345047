"""Y-Delta product: the relay channel seen as an effective Delta channel.

Through the relay, source ``i`` reaches destination ``j`` shifted by
``a_i + b_j``, so the effective exponent matrix is ``k_ji = a_i + b_j``.
Only matrices of that additive rank-one form decompose back.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .bounds import DofValue
from .channel import DeltaChannel, MessageSet, YChannel
from .simulate import run_delta, run_y


def compose(y: YChannel) -> DeltaChannel:
    """Effective Delta channel ``k_ji = (a_i + b_j) mod n``."""
    return DeltaChannel(y.n, tuple(tuple(y.a[i] + y.b[j] for i in range(3)) for j in range(3)))


@dataclass(frozen=True)
class ProductDecomposition:
    """Uplink/downlink exponents in the gauge ``a_1 = 0``."""

    n: int
    a: tuple[int, int, int]
    b: tuple[int, int, int]

    def channel(self) -> YChannel:
        return YChannel(self.n, self.a, self.b)

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b), "gauge": "a_1 = 0"}


def is_decomposable(ch: DeltaChannel) -> bool:
    n, k = ch.n, ch.k
    return all(
        (k[j][i] + k[0][0] - k[j][0] - k[0][i]) % n == 0 for j in range(3) for i in range(3)
    )


def is_offdiagonal_product(ch: DeltaChannel) -> bool:
    """Whether the six cross links alone are of the form ``a_i + b_j``.

    Loop-back links are cancelled by SIC, so only these matter for
    alignment. Eliminating ``a`` and ``b`` leaves a single condition on the
    two directed 3-cycles: ``k_12 + k_23 + k_31 = k_13 + k_32 + k_21``.
    """
    k = ch.k
    forward = k[0][1] + k[1][2] + k[2][0]
    backward = k[0][2] + k[2][1] + k[1][0]
    return (forward - backward) % ch.n == 0


def decompose(ch: DeltaChannel) -> ProductDecomposition | None:
    """Split ``ch`` into uplink and downlink vectors, or ``None`` if impossible.

    The product is invariant under ``(a + c, b - c)``; the returned witness
    fixes ``a_1 = 0``, which gives ``b_j = k_j1`` and ``a_i = k_1i - k_11``.
    """
    if not is_decomposable(ch):
        return None
    n, k = ch.n, ch.k
    a = tuple((k[0][i] - k[0][0]) % n for i in range(3))
    b = tuple(k[j][0] for j in range(3))
    return ProductDecomposition(n, a, b)


def transfer_diagnostic(y: YChannel, plan, msgs: MessageSet) -> dict:
    """Run the relay simulation and the composed Delta simulation side by side.

    In the composed channel the index-swapped partner of every desired word
    is the receiver's own transmission, so loop-back SIC already removes
    the known part of each aligned pair.
    """
    from .alignment import DELTA, OffsetPlan

    out_y = run_y(y, plan, msgs)
    delta_plan = OffsetPlan(DELTA, plan.n, plan.offsets, plan.aligned, plan.method)
    out_d = run_delta(compose(y), delta_plan, msgs)
    return {
        "y_success": out_y.success,
        "delta_success": out_d.success,
        "outputs_match": out_y.decoded == out_d.decoded,
    }


def transfer_equivalence(y: YChannel, plan, msgs: MessageSet) -> bool:
    """Both routes decode every word and agree on the decoded output."""
    d = transfer_diagnostic(y, plan, msgs)
    return d["y_success"] and d["delta_success"] and d["outputs_match"]


# -- MIMO Y-channel DoF arithmetic --------------------------------------------


@dataclass(frozen=True)
class MimoConfig:
    """Antenna counts; transceiver counts are sorted so ``A1 >= A2 >= A3``."""

    A1: int
    A2: int
    A3: int
    AR: int

    def __post_init__(self):
        counts = (self.A1, self.A2, self.A3, self.AR)
        if any(int(c) != c or c < 1 for c in counts):
            raise ValueError(f"antenna counts must be positive integers, got {counts}")
        a1, a2, a3 = sorted((self.A1, self.A2, self.A3), reverse=True)
        object.__setattr__(self, "A1", a1)
        object.__setattr__(self, "A2", a2)
        object.__setattr__(self, "A3", a3)

    @property
    def total(self) -> int:
        return self.A1 + self.A2 + self.A3


def mimo_dof_bound(cfg: MimoConfig) -> int:
    """``min(2 A2 + 2 A3, A1 + A2 + A3, 2 AR)``."""
    return min(2 * (cfg.A2 + cfg.A3), cfg.total, 2 * cfg.AR)


def mimo_cases(cfg: MimoConfig) -> list[str]:
    """Every case whose relay-antenna condition ``cfg`` satisfies.

    A: ``2 A2 + 2 A3`` is the binding term and ``AR = A2 + A3``.
    B: ``A1 + A2 + A3`` is the binding term and ``2 AR = A1 + A2 + A3``.
    C: ``AR <= min(A2 + A3, (A1 + A2 + A3) / 2)``.
    """
    cases = []
    pair = cfg.A2 + cfg.A3
    if 2 * pair <= cfg.total and cfg.AR == pair:
        cases.append("A")
    if cfg.total <= 2 * pair and 2 * cfg.AR == cfg.total:
        cases.append("B")
    if cfg.AR <= pair and 2 * cfg.AR <= cfg.total:
        cases.append("C")
    return cases


@dataclass(frozen=True)
class MimoResult:
    bound: int
    normalized: DofValue
    case: str | None

    @property
    def in_case(self) -> bool:
        return self.case is not None

    def to_json(self) -> dict:
        return {
            "dof_mimo": self.bound,
            "normalized_dof": self.normalized.to_json(),
            "normalized_value": str(Fraction(self.normalized.num, self.normalized.den)),
            "case": self.case if self.case else "out-of-case",
        }


def mimo_normalized_dof(cfg: MimoConfig) -> MimoResult:
    """``DoF_MIMO / AR`` with the first matching case label (A, B, C).

    A relay count matching no case still gets its raw ratio, with
    ``case=None``.
    """
    bound = mimo_dof_bound(cfg)
    cases = mimo_cases(cfg)
    return MimoResult(bound, DofValue(bound, cfg.AR), cases[0] if cases else None)
