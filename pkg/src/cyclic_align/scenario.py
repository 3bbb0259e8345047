"""Scenario files: loading, validation and the normalized echo."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .alignment import DELTA, Y, OffsetPlan, key_from_str
from .bounds import dimension_requirement
from .channel import DeltaChannel, MessagingMatrix, YChannel
from .errors import SchemaError
from .ring import DEFAULT_WORD_BITS

SCHEMA_VERSION = 1


def _int(value: Any, field: str, minimum: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(field, f"expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise SchemaError(field, f"must be >= {minimum}, got {value}")
    return value


def _vector(value: Any, field: str) -> tuple[int, int, int]:
    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError(field, "expected a list of three integers")
    return tuple(_int(v, f"{field}[{c}]") for c, v in enumerate(value))


def _grid(value: Any, field: str) -> tuple[tuple[int, ...], ...]:
    if not isinstance(value, list) or len(value) != 3:
        raise SchemaError(field, "expected a 3x3 list of integers")
    return tuple(_vector(row, f"{field}[{r}]") for r, row in enumerate(value))


@dataclass(frozen=True)
class Scenario:
    topology: str
    alpha: MessagingMatrix
    k: tuple | None = None
    a: tuple | None = None
    b: tuple | None = None
    n: int | None = None
    t: int = DEFAULT_WORD_BITS
    seed: int = 0
    plan: OffsetPlan | None = None
    n_max: int | None = None
    budget: int | None = None

    @property
    def formula_n(self) -> int:
        return dimension_requirement(self.alpha)[3]

    @property
    def effective_n(self) -> int:
        if self.n is not None:
            return self.n
        if self.plan is not None:
            return self.plan.n
        return self.formula_n

    def channel(self, n: int | None = None):
        n = self.effective_n if n is None else n
        if self.topology == DELTA:
            return DeltaChannel(n, self.k)
        return YChannel(n, self.a, self.b)

    def to_json(self) -> dict:
        out: dict[str, Any] = {
            "schema": SCHEMA_VERSION,
            "topology": self.topology,
            "alpha": self.alpha.to_json(),
            "n": self.effective_n,
            "t": self.t,
            "seed": self.seed,
        }
        if self.topology == DELTA:
            out["channel"] = {"k": [list(r) for r in self.k]}
        else:
            out["channel"] = {"a": list(self.a), "b": list(self.b)}
        if self.plan is not None:
            out["plan"] = self.plan.to_json()["offsets"]
        if self.n_max is not None:
            out["n_max"] = self.n_max
        if self.budget is not None:
            out["budget"] = self.budget
        return out


def parse_scenario(data: Any) -> Scenario:
    """Validate a decoded scenario document; raises ``SchemaError``."""
    if not isinstance(data, dict):
        raise SchemaError("<root>", "scenario must be a JSON object")
    if data.get("schema") != SCHEMA_VERSION:
        raise SchemaError("schema", f"must be {SCHEMA_VERSION}, got {data.get('schema')!r}")
    topology = data.get("topology")
    if topology not in (DELTA, Y):
        raise SchemaError("topology", f"must be 'delta' or 'y', got {topology!r}")

    if "alpha" in data:
        try:
            alpha = MessagingMatrix(_grid(data["alpha"], "alpha"))
        except ValueError as exc:
            if isinstance(exc, SchemaError):
                raise
            raise SchemaError("alpha", str(exc)) from None
    else:
        alpha = MessagingMatrix.uniform(1)

    n = None if data.get("n") is None else _int(data["n"], "n", 1)
    t = _int(data.get("t", DEFAULT_WORD_BITS), "t", 1)
    seed = _int(data.get("seed", 0), "seed", 0)
    n_max = None if data.get("n_max") is None else _int(data["n_max"], "n_max", 1)
    budget = None if data.get("budget") is None else _int(data["budget"], "budget", 1)

    channel = data.get("channel", {})
    if not isinstance(channel, dict):
        raise SchemaError("channel", "must be an object")
    k = a = b = None
    if topology == DELTA:
        k = _grid(channel.get("k", [[0] * 3] * 3), "channel.k")
    else:
        a = _vector(channel.get("a", [0, 0, 0]), "channel.a")
        b = _vector(channel.get("b", [0, 0, 0]), "channel.b")

    plan = None
    if data.get("plan") is not None:
        raw = data["plan"]
        if not isinstance(raw, dict):
            raise SchemaError("plan", "expected an object mapping 'j,i,m' to offsets")
        offsets = {}
        for key, value in raw.items():
            try:
                parsed = key_from_str(key)
            except ValueError:
                raise SchemaError(f"plan[{key!r}]", "key must look like 'j,i,m'") from None
            offsets[parsed] = _int(value, f"plan[{key!r}]", 0)
        if set(offsets) != set(alpha.keys()):
            raise SchemaError("plan", "keys must match the submessages declared by alpha")
        plan_n = n if n is not None else dimension_requirement(alpha)[3]
        plan = OffsetPlan(topology, plan_n, offsets)

    return Scenario(topology, alpha, k, a, b, n, t, seed, plan, n_max, budget)


def load_scenario(path: str | Path) -> Scenario:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SchemaError("<file>", f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("<file>", f"invalid JSON: {exc}") from None
    return parse_scenario(data)
