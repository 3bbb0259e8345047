"""Three-user topologies, the messaging matrix and the transfer equations.

Users are numbered 1, 2, 3. Grids are indexed ``[j-1][i-1]`` with row ``j``
the destination and column ``i`` the source, so ``k[j-1][i-1]`` is the shift
exponent from transmitter ``i`` to receiver ``j``. A submessage key is the
tuple ``(j, i, m)`` with ``1 <= m <= alpha_ji``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

from .errors import DimensionMismatchError, IncompletePlanError, InvalidDimensionError
from .ring import DEFAULT_WORD_BITS, CyclicPoly, add, reduce_exponent, shift

USERS = (1, 2, 3)

Key = tuple[int, int, int]


def third(i: int, j: int) -> int:
    """The user that is neither ``i`` nor ``j``."""
    return 6 - i - j


def _grid(rows: Sequence[Sequence[int]], name: str) -> tuple[tuple[int, ...], ...]:
    g = tuple(tuple(int(v) for v in row) for row in rows)
    if len(g) != 3 or any(len(row) != 3 for row in g):
        raise ValueError(f"{name} must be a 3x3 grid")
    return g


@dataclass(frozen=True)
class MessagingMatrix:
    """Submessage counts ``alpha_ji`` with a zero diagonal."""

    alpha: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        g = _grid(self.alpha, "alpha")
        object.__setattr__(self, "alpha", g)
        for j in USERS:
            if g[j - 1][j - 1] != 0:
                raise ValueError(f"alpha_{j}{j} must be zero (no message to self)")
            for i in USERS:
                if g[j - 1][i - 1] < 0:
                    raise ValueError(f"alpha_{j}{i} must be non-negative")

    @classmethod
    def uniform(cls, value: int = 1) -> MessagingMatrix:
        return cls(tuple(tuple(0 if i == j else value for i in USERS) for j in USERS))

    @classmethod
    def from_counts(cls, counts: Mapping[tuple[int, int], int]) -> MessagingMatrix:
        """Build from ``{(j, i): alpha_ji}``; missing pairs are zero."""
        return cls(tuple(tuple(counts.get((j, i), 0) for i in USERS) for j in USERS))

    def __call__(self, j: int, i: int) -> int:
        return self.alpha[j - 1][i - 1]

    @property
    def total(self) -> int:
        return sum(map(sum, self.alpha))

    def keys(self) -> list[Key]:
        """All submessage keys in lexicographic ``(j, i, m)`` order."""
        return [
            (j, i, m)
            for j in USERS
            for i in USERS
            for m in range(1, self.alpha[j - 1][i - 1] + 1)
        ]

    def is_pairwise_symmetric(self) -> bool:
        return all(self(i, k) == self(k, i) for i in USERS for k in USERS)

    def to_json(self) -> list[list[int]]:
        return [list(row) for row in self.alpha]


@dataclass(frozen=True)
class DeltaChannel:
    """Fully connected 3-way channel with ``d_ji = x^(k[j-1][i-1])``."""

    n: int
    k: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if self.n < 1:
            raise InvalidDimensionError(f"dimension count must be >= 1, got {self.n}")
        g = _grid(self.k, "k")
        object.__setattr__(
            self, "k", tuple(tuple(reduce_exponent(v, self.n) for v in row) for row in g)
        )

    @classmethod
    def identity(cls, n: int) -> DeltaChannel:
        return cls(n, ((0, 0, 0),) * 3)

    def exponent(self, j: int, i: int) -> int:
        return self.k[j - 1][i - 1]

    def with_n(self, n: int) -> DeltaChannel:
        """Same exponents read modulo a different dimension count."""
        return self if n == self.n else DeltaChannel(n, self.k)

    def to_json(self) -> dict:
        return {"k": [list(row) for row in self.k]}


@dataclass(frozen=True)
class YChannel:
    """Relay channel: uplink ``e_Ri = x^a_i``, downlink ``f_jR = x^b_j``."""

    n: int
    a: tuple[int, int, int]
    b: tuple[int, int, int] = (0, 0, 0)

    def __post_init__(self):
        if self.n < 1:
            raise InvalidDimensionError(f"dimension count must be >= 1, got {self.n}")
        for name in ("a", "b"):
            v = tuple(int(x) for x in getattr(self, name))
            if len(v) != 3:
                raise ValueError(f"{name} must have exactly three exponents")
            object.__setattr__(self, name, tuple(reduce_exponent(x, self.n) for x in v))

    def uplink(self, i: int) -> int:
        return self.a[i - 1]

    def downlink(self, j: int) -> int:
        return self.b[j - 1]

    def with_n(self, n: int) -> YChannel:
        return self if n == self.n else YChannel(n, self.a, self.b)

    def to_json(self) -> dict:
        return {"a": list(self.a), "b": list(self.b)}


@dataclass(frozen=True)
class MessageSet:
    """Submessage words ``W_ji^[m]`` keyed by ``(j, i, m)``."""

    words: Mapping[Key, int]
    t: int = DEFAULT_WORD_BITS

    def __post_init__(self):
        if self.t < 1:
            raise InvalidDimensionError(f"word size must be >= 1 bit, got {self.t}")
        object.__setattr__(self, "words", dict(self.words))
        limit = 1 << self.t
        for key, w in self.words.items():
            if not 0 <= w < limit:
                raise ValueError(f"word for {key} is not a {self.t}-bit value")

    def __getitem__(self, key: Key) -> int:
        return self.words[key]

    def __iter__(self) -> Iterator[Key]:
        return iter(sorted(self.words))

    def __len__(self) -> int:
        return len(self.words)

    def matches(self, mm: MessagingMatrix) -> bool:
        return set(self.words) == set(mm.keys())

    @classmethod
    def from_matrix(cls, mm: MessagingMatrix, words: Sequence[int], t: int) -> MessageSet:
        """Assign ``words`` to the keys of ``mm`` in lexicographic order."""
        keys = mm.keys()
        if len(words) != len(keys):
            raise ValueError(f"expected {len(keys)} words, got {len(words)}")
        return cls(dict(zip(keys, words)), t)


def encode(plan, msgs: MessageSet, i: int, n: int | None = None) -> CyclicPoly:
    """Transmit polynomial ``u_i(x)`` of user ``i``.

    Every word sent by ``i`` is XOR-accumulated at its planned offset.
    ``plan`` is anything with ``n`` and an ``offsets`` mapping.
    """
    n = plan.n if n is None else n
    c = [0] * n
    for key in msgs:
        if key[1] != i:
            continue
        try:
            p = plan.offsets[key]
        except KeyError:
            raise IncompletePlanError(f"no offset for submessage {key}") from None
        c[p % n] ^= msgs[key]
    return CyclicPoly(tuple(c), msgs.t)


def _check_inputs(n: int, u: Sequence[CyclicPoly]) -> None:
    if len(u) != 3:
        raise DimensionMismatchError("expected three transmit polynomials")
    for p in u:
        if p.n != n:
            raise DimensionMismatchError(f"signal has n={p.n}, channel has n={n}")


def delta_receive(ch: DeltaChannel, u: Sequence[CyclicPoly]) -> tuple[CyclicPoly, ...]:
    """``r_j = sum_i d_ji u_i`` for j = 1..3, loop-back term included."""
    _check_inputs(ch.n, u)
    out = []
    for j in USERS:
        r = shift(u[0], ch.exponent(j, 1))
        for i in (2, 3):
            r = add(r, shift(u[i - 1], ch.exponent(j, i)))
        out.append(r)
    return tuple(out)


def y_uplink(ch: YChannel, u: Sequence[CyclicPoly]) -> CyclicPoly:
    """Relay observation ``r_R = sum_i e_Ri u_i``."""
    _check_inputs(ch.n, u)
    r = shift(u[0], ch.uplink(1))
    for i in (2, 3):
        r = add(r, shift(u[i - 1], ch.uplink(i)))
    return r


def y_downlink(ch: YChannel, r_relay: CyclicPoly) -> tuple[CyclicPoly, ...]:
    """Relay broadcast: receiver ``j`` gets ``f_jR r_R``."""
    if r_relay.n != ch.n:
        raise DimensionMismatchError(f"relay signal has n={r_relay.n}, channel has n={ch.n}")
    return tuple(shift(r_relay, ch.downlink(j)) for j in USERS)
