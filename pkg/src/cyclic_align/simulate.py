"""Bit-exact single-frame transmission: encode, propagate, SIC, read.

The simulator reads raw coefficients and compares them with what was sent.
It never consults a separability report, so a wrong checker shows up here
as a decoding failure.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .channel import (
    USERS,
    DeltaChannel,
    Key,
    MessageSet,
    MessagingMatrix,
    YChannel,
    delta_receive,
    encode,
    y_downlink,
    y_uplink,
)
from .errors import DimensionMismatchError, IncompletePlanError
from .ring import add, shift

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MAX_EXHAUSTIVE_MESSAGES = 16

OK = "ok"
CORRUPTED = "corrupted"


def splitmix64(seed: int):
    """Yield the SplitMix64 stream for ``seed`` (Steele, Lea & Flood 2014)."""
    state = seed & MASK64
    while True:
        state = (state + GOLDEN_GAMMA) & MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        yield z ^ (z >> 31)


def random_messages(mm: MessagingMatrix, t: int = 8, seed: int = 0) -> MessageSet:
    """Deterministic pseudorandom words for every key of ``mm``.

    Keys are visited in lexicographic ``(j, i, m)`` order. Each word takes
    ``ceil(t / 64)`` consecutive SplitMix64 outputs, the first one filling
    the lowest 64 bits, and is truncated to ``t`` bits.
    """
    if t < 1:
        raise ValueError(f"word size must be >= 1 bit, got {t}")
    stream = splitmix64(seed)
    chunks = -(-t // 64)
    mask = (1 << t) - 1
    words = {}
    for key in mm.keys():
        w = 0
        for c in range(chunks):
            w |= next(stream) << (64 * c)
        words[key] = w & mask
    return MessageSet(words, t)


def exhaustive_messages(mm: MessagingMatrix) -> MessageSet:
    """All ``2^M`` one-bit message patterns packed as parallel bit lanes.

    Lane ``p`` (bit ``p`` of every word) carries the pattern in which the
    ``c``-th key in lexicographic order holds bit ``c`` of ``p``. Because
    every operation on the coefficients is bitwise, simulating this set
    once is the same as simulating each one-bit pattern separately.
    """
    keys = mm.keys()
    if len(keys) > MAX_EXHAUSTIVE_MESSAGES:
        raise ValueError(f"{len(keys)} messages is too many for exhaustive patterns")
    lanes = 1 << len(keys)
    words = {}
    for c, key in enumerate(keys):
        words[key] = sum(1 << p for p in range(lanes) if (p >> c) & 1)
    return MessageSet(words, lanes)


def lane(msgs: MessageSet, p: int) -> MessageSet:
    """The one-bit message set carried by lane ``p``."""
    return MessageSet({k: (w >> p) & 1 for k, w in msgs.words.items()}, 1)


@dataclass(frozen=True)
class SimulationOutcome:
    decoded: MessageSet
    status: Mapping[Key, str]

    @property
    def success(self) -> bool:
        return all(s == OK for s in self.status.values())

    def corrupted(self) -> list[Key]:
        return sorted(k for k, s in self.status.items() if s != OK)

    def to_json(self) -> dict:
        from .alignment import key_to_str

        return {
            "success": self.success,
            "recovered": sum(1 for s in self.status.values() if s == OK),
            "total": len(self.status),
            "per_message_status": {key_to_str(k): self.status[k] for k in sorted(self.status)},
        }


def failing_lanes(outcome: SimulationOutcome, sent: MessageSet) -> int:
    """Bit mask of lanes in which at least one word was decoded wrongly."""
    bad = 0
    for key, w in sent.words.items():
        bad |= w ^ outcome.decoded[key]
    return bad


def _prepare(ch, plan, msgs):
    if plan.n != ch.n:
        raise DimensionMismatchError(f"plan has n={plan.n}, channel has n={ch.n}")
    for key in msgs:
        if key not in plan.offsets:
            raise IncompletePlanError(f"no offset for submessage {key}")
    return tuple(encode(plan, msgs, i) for i in USERS)


def _outcome(sent: MessageSet, read: dict) -> SimulationOutcome:
    decoded = MessageSet(read, sent.t)
    status = {k: OK if read[k] == sent[k] else CORRUPTED for k in sent}
    return SimulationOutcome(decoded, status)


def run_delta(ch: DeltaChannel, plan, msgs: MessageSet, sic: bool = True) -> SimulationOutcome:
    """Send ``msgs`` over the Delta channel and decode at every receiver.

    Receiver ``j`` removes its loop-back copy ``d_jj u_j`` when ``sic`` is
    on, then reads ``W_ji^[m]`` from offset ``k_ji + p_ji^[m]``.
    """
    u = _prepare(ch, plan, msgs)
    r = delta_receive(ch, u)
    n = ch.n
    read = {}
    for j in USERS:
        y = r[j - 1]
        if sic:
            y = add(y, shift(u[j - 1], ch.exponent(j, j)))
        for key in msgs:
            if key[0] == j:
                read[key] = y[(ch.exponent(j, key[1]) + plan.offsets[key]) % n]
    return _outcome(msgs, read)


def run_y(ch: YChannel, plan, msgs: MessageSet, sic: bool = True) -> SimulationOutcome:
    """Send ``msgs`` through the relay and decode at every transceiver.

    Receiver ``j`` removes the relay echo of its own signal
    ``f_jR e_Rj u_j`` when ``sic`` is on. An aligned pair arrives as
    ``W_ji + W_ij``; with the echo gone only ``W_ji`` is left.
    """
    u = _prepare(ch, plan, msgs)
    relay = y_uplink(ch, u)
    down = y_downlink(ch, relay)
    n = ch.n
    read = {}
    for j in USERS:
        y = down[j - 1]
        if sic:
            y = add(y, shift(u[j - 1], ch.uplink(j) + ch.downlink(j)))
        for key in msgs:
            if key[0] == j:
                read[key] = y[(ch.downlink(j) + ch.uplink(key[1]) + plan.offsets[key]) % n]
    return _outcome(msgs, read)


def run(ch, plan, msgs: MessageSet, sic: bool = True) -> SimulationOutcome:
    if isinstance(ch, DeltaChannel):
        return run_delta(ch, plan, msgs, sic)
    if isinstance(ch, YChannel):
        return run_y(ch, plan, msgs, sic)
    raise TypeError(f"not a channel: {ch!r}")


def receiver_occupancy(ch: DeltaChannel, plan) -> dict[int, dict[int, list[Key]]]:
    """Per receiver: dimension -> submessages landing there after SIC."""
    occ = {}
    for j in USERS:
        dims: dict[int, list[Key]] = {}
        for key in sorted(plan.offsets):
            if key[1] == j:
                continue
            d = (ch.exponent(j, key[1]) + plan.offsets[key]) % ch.n
            dims.setdefault(d, []).append(key)
        occ[j] = dims
    return occ


def relay_occupancy(ch: YChannel, plan) -> dict[int, list[Key]]:
    """Relay dimension -> submessages superposed there."""
    dims: dict[int, list[Key]] = {}
    for key in sorted(plan.offsets):
        d = (ch.uplink(key[1]) + plan.offsets[key]) % ch.n
        dims.setdefault(d, []).append(key)
    return dims
