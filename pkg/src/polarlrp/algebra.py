"""Arikan transforms as algebraic operations on channel profiles.

``A0(W0, W1)`` is the channel ``u0 -> (y0, y1)`` when ``u0 + u1`` is sent over
``W0`` and ``u1`` over ``W1``; ``A1(W0, W1)`` is ``u1 -> (y0, y1, u0)``.  On
profiles they act through the two binary operations

    a * b = (1-a) b + a (1-b)          (``star``)
    a <> b = a b / ((1-a) * b)         (``diamond``)

and on BSC mixtures they act part by part.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Iterable, Union

from .channels import (
    HALF,
    ONE,
    ZERO,
    BscMixture,
    ChannelError,
    Lrp,
    RationalLike,
    make_bsc,
    parse_rational,
)


def _unit(x: RationalLike, name: str = "argument") -> Fraction:
    x = parse_rational(x)
    if not 0 <= x <= 1:
        raise ChannelError(f"{name} must lie in [0, 1], got {x}")
    return x


def star(a: RationalLike, b: RationalLike) -> Fraction:
    """Crossover of two BSCs in series: ``(1-a) b + a (1-b)``."""
    a, b = _unit(a), _unit(b)
    return (1 - a) * b + a * (1 - b)


def diamond(a: RationalLike, b: RationalLike) -> Fraction:
    """``a b / ((1-a) * b)``, and 0 when either argument is 0 or 1."""
    a, b = _unit(a), _unit(b)
    if a in (ZERO, ONE) or b in (ZERO, ONE):
        return ZERO
    return a * b / star(1 - a, b)


def star_power(eps: Fraction, a: int) -> Fraction:
    """``eps * eps * ... * eps`` (``a`` factors); the identity 0 when ``a == 0``."""
    out = ZERO
    for _ in range(a):
        out = star(out, eps)
    return out


def diamond_power(sigma: Fraction, a: int) -> Fraction:
    """``sigma^a / (sigma^a + (1-sigma)^a)``; the identity 1/2 when ``a == 0``."""
    num = sigma**a
    return num / (num + (1 - sigma) ** a)


# ---------------------------------------------------------------------------
# pattern strings


@dataclass(frozen=True, order=True)
class PatternIndex:
    """A transform string ``alpha``; the leftmost bit is applied first."""

    bits: tuple[int, ...]

    def __post_init__(self) -> None:
        if any(b not in (0, 1) for b in self.bits):
            raise ValueError(f"pattern bits must be 0/1, got {self.bits}")

    @classmethod
    def parse(cls, s: "str | PatternIndex | Iterable[int]") -> "PatternIndex":
        if isinstance(s, PatternIndex):
            return s
        if isinstance(s, str):
            if s and set(s) - {"0", "1"}:
                raise ValueError(f"pattern must be a bit string, got {s!r}")
            return cls(tuple(int(c) for c in s))
        return cls(tuple(int(b) for b in s))

    @classmethod
    def from_value(cls, value: int, k: int) -> "PatternIndex":
        if not 0 <= value < 2**k:
            raise ValueError(f"value {value} out of range for length {k}")
        return cls(tuple((value >> (k - 1 - i)) & 1 for i in range(k)))

    @classmethod
    def all_of_length(cls, k: int) -> list["PatternIndex"]:
        """Every length-``k`` pattern, ascending in ``b_value``."""
        return [cls.from_value(v, k) for v in range(2**k)]

    @property
    def b_value(self) -> int:
        k = len(self.bits)
        return sum(d << (k - 1 - i) for i, d in enumerate(self.bits))

    def runs(self) -> list[tuple[int, int]]:
        """Run-length decomposition as ``(bit, length)`` pairs."""
        return [(b, len(list(g))) for b, g in groupby(self.bits)]

    def __len__(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return "".join(map(str, self.bits))


PatternLike = Union[PatternIndex, str]


# ---------------------------------------------------------------------------
# transforms on general profiles


def arikan_general(side: int, w0: Lrp, w1: Lrp) -> Lrp:
    """Profile of ``A_side(W0, W1)`` for arbitrary (possibly asymmetric) inputs."""
    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")
    acc: dict[Fraction, Fraction] = defaultdict(Fraction)
    for e0, p0 in w0.points:
        for e1, p1 in w1.points:
            mass = p0 * p1
            s = star(e0, e1)
            if side == 0:
                acc[1 - s] += mass
                continue
            # a zero denominator always comes with zero mass in that branch
            if s != 1:
                acc[e0 * e1 / (1 - s)] += (1 - s) * mass
            if s != 0:
                acc[(1 - e0) * e1 / s] += s * mass
    return Lrp.from_masses(acc)


# ---------------------------------------------------------------------------
# transforms on symmetric mixtures


def _bsc_pair(side: int, e: Fraction, s: Fraction) -> list[tuple[Fraction, Fraction]]:
    if side == 0:
        return [(star(e, s), ONE)]
    return [
        (diamond(e, s), star(e, 1 - s)),
        (diamond(e, 1 - s), star(e, s)),
    ]


def arikan_symmetric(side: int, w0: BscMixture, w1: BscMixture) -> BscMixture:
    """``A_side(W0, W1)`` for symmetric channels, part by part."""
    if side not in (0, 1):
        raise ValueError("side must be 0 or 1")
    terms = []
    for e, q in w0.parts:
        for s, r in w1.parts:
            for eps, w in _bsc_pair(side, e, s):
                terms.append((eps, q * r * w))
    return BscMixture.canonical(terms)


def delta_m(w: BscMixture, m: int) -> BscMixture:
    """``m``-fold ``A0`` compound of independent copies; ``Delta_0 = B(0)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = make_bsc(0)
    for _ in range(m):
        out = arikan_symmetric(0, out, w)
    return out


def nabla_m(w: BscMixture, m: int) -> BscMixture:
    """``m``-fold ``A1`` compound of independent copies; ``Nabla_0 = B(1/2)``."""
    if m < 0:
        raise ValueError("m must be non-negative")
    out = make_bsc(HALF)
    for _ in range(m):
        out = arikan_symmetric(1, out, w)
    return out


def transform_by_pattern(w: BscMixture, alpha: PatternLike) -> BscMixture:
    """``A_alpha(W)`` with the leftmost bit of ``alpha`` applied first."""
    alpha = PatternIndex.parse(alpha)
    for bit in alpha.bits:
        w = arikan_symmetric(bit, w, w)
    return w


def transform_general_by_pattern(w: Lrp, alpha: PatternLike) -> Lrp:
    """``A_alpha(W)`` on profiles, for channels that need not be symmetric."""
    alpha = PatternIndex.parse(alpha)
    for bit in alpha.bits:
        w = arikan_general(bit, w, w)
    return w


# ---------------------------------------------------------------------------
# erasure channels


def bec_f_alpha(q: RationalLike, alpha: PatternLike) -> Fraction:
    """Erasure probability of ``A_alpha(E(q))`` via the run-length map.

    Writing ``alpha = 0^t1 1^t2 ... 0^t(2r-1) 1^t(2r)`` (first and last run
    lengths may be zero), the result is ``f_t(2r) o ... o f_t1 (q)`` where
    ``f_s(p) = (1-p)^(2^s)``.
    """
    q = _unit(q, "erasure probability")
    alpha = PatternIndex.parse(alpha)
    runs = alpha.runs()
    lengths: list[int] = []
    if not runs or runs[0][0] == 1:
        lengths.append(0)
    lengths += [n for _, n in runs]
    if len(lengths) % 2:
        lengths.append(0)
    p = q
    for t in lengths:
        p = (1 - p) ** (2**t)
    return p
