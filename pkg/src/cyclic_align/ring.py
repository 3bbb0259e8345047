"""Arithmetic in F(x)/(x^n - 1) with t-bit word coefficients.

Coefficients add by bitwise XOR (characteristic 2), so addition and
subtraction coincide. Multiplication is only ever by a monomial ``x^k``,
which is a cyclic rotation of the coefficient vector.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DimensionMismatchError, InvalidDimensionError

DEFAULT_WORD_BITS = 8


def reduce_exponent(k: int, n: int) -> int:
    """Canonical residue of ``k`` modulo ``n`` in ``[0, n)``."""
    if n < 1:
        raise InvalidDimensionError(f"dimension count must be >= 1, got {n}")
    return k % n


@dataclass(frozen=True)
class CyclicPoly:
    """Element of F(x)/(x^n - 1); ``coeffs[l]`` is the word at ``x^l``."""

    coeffs: tuple[int, ...]
    t: int = DEFAULT_WORD_BITS

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise InvalidDimensionError("polynomial needs at least one coefficient")
        if self.t < 1:
            raise InvalidDimensionError(f"word size must be >= 1 bit, got {self.t}")
        if not isinstance(self.coeffs, tuple):
            object.__setattr__(self, "coeffs", tuple(self.coeffs))
        limit = 1 << self.t
        for w in self.coeffs:
            if not 0 <= w < limit:
                raise ValueError(f"coefficient {w!r} is not a {self.t}-bit word")

    @property
    def n(self) -> int:
        return len(self.coeffs)

    @classmethod
    def zero(cls, n: int, t: int = DEFAULT_WORD_BITS) -> CyclicPoly:
        if n < 1:
            raise InvalidDimensionError(f"dimension count must be >= 1, got {n}")
        return cls((0,) * n, t)

    @classmethod
    def monomial(cls, word: int, l: int, n: int, t: int = DEFAULT_WORD_BITS) -> CyclicPoly:
        """``word * x^l`` reduced modulo ``x^n - 1``."""
        c = [0] * n
        c[reduce_exponent(l, n)] = word
        return cls(tuple(c), t)

    def __getitem__(self, l: int) -> int:
        return self.coeffs[l % self.n]

    def __add__(self, other: CyclicPoly) -> CyclicPoly:
        return add(self, other)

    __xor__ = __add__
    __sub__ = __add__

    def __bool__(self) -> bool:
        return any(self.coeffs)

    def shift(self, k: int) -> CyclicPoly:
        return shift(self, k)


def shift(p: CyclicPoly, k: int) -> CyclicPoly:
    """Multiply by ``x^k``: the word at position ``l`` moves to ``(l + k) mod n``."""
    k = reduce_exponent(k, p.n)
    if k == 0:
        return p
    c = p.coeffs
    return CyclicPoly(c[-k:] + c[:-k], p.t)


def add(p: CyclicPoly, q: CyclicPoly) -> CyclicPoly:
    if p.n != q.n or p.t != q.t:
        raise DimensionMismatchError(
            f"cannot add (n={p.n}, t={p.t}) and (n={q.n}, t={q.t})"
        )
    return CyclicPoly(tuple(a ^ b for a, b in zip(p.coeffs, q.coeffs)), p.t)


def support(p: CyclicPoly) -> frozenset[int]:
    """Positions holding a nonzero word."""
    return frozenset(l for l, w in enumerate(p.coeffs) if w)
