"""Exact representations of binary-input memoryless channels.

Three views of a channel are used throughout the package:

* ``TransitionMatrix`` -- an explicit 2 x N table ``Pr(y | x)``.  Entries are
  held as integer numerators over one common denominator so that large
  joint-output channels can be built and grouped with integer numpy kernels
  without giving up exactness.
* ``Lrp`` -- the likelihood ratio profile: the distribution of the posterior
  ``S(y) = Pr(y|0) / (Pr(y|0) + Pr(y|1))``.  Two channels are equivalent iff
  their profiles coincide.
* ``BscMixture`` -- the canonical form of a symmetric channel as a random
  switching of binary symmetric channels, ``sum_i w_i B(eps_i)`` with
  ``0 <= eps_i <= 1/2`` strictly increasing.

All probabilities are :class:`fractions.Fraction`.  Only capacity and the
Bhattacharyya parameter are evaluated in floating point.
"""

from __future__ import annotations

import json
import math
import re
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

import numpy as np

Rational = Fraction
RationalLike = Union[Fraction, int, str]

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")

# numerators above this switch the grouping kernels to Python integers
_INT64_SAFE = 2**62


class ChannelError(ValueError):
    """Raised when a channel description violates its invariants."""


def parse_rational(value: RationalLike) -> Fraction:
    """Parse ``"num/den"`` (or an integer) into an exact rational.

    Decimal strings such as ``"0.25"`` are rejected on purpose.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ChannelError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _RATIONAL_RE.match(value)
        if not m:
            raise ChannelError(f"expected 'num/den', got {value!r}")
        den = int(m.group(2)) if m.group(2) is not None else 1
        if den == 0:
            raise ChannelError(f"zero denominator in {value!r}")
        return Fraction(int(m.group(1)), den)
    raise ChannelError(f"unsupported rational value {value!r}")


def format_rational(x: Fraction) -> str:
    return str(x)


def _check_unit(x: Fraction, name: str) -> None:
    if not 0 <= x <= 1:
        raise ChannelError(f"{name} must lie in [0, 1], got {x}")


# ---------------------------------------------------------------------------
# likelihood ratio profiles


@dataclass(frozen=True)
class Lrp:
    """Likelihood ratio profile, as ascending ``(posterior, mass)`` pairs."""

    points: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        total = ZERO
        mean = ZERO
        prev = None
        for eps, mass in self.points:
            if not 0 <= eps <= 1:
                raise ChannelError(f"posterior {eps} outside [0, 1]")
            if mass <= 0:
                raise ChannelError(f"non-positive mass {mass} at {eps}")
            if prev is not None and eps <= prev:
                raise ChannelError("posteriors must be strictly increasing")
            prev = eps
            total += mass
            mean += eps * mass
        if total != 1:
            raise ChannelError(f"masses sum to {total}, not 1")
        if mean != HALF:
            raise ChannelError(f"mean posterior is {mean}, not 1/2")

    @classmethod
    def from_masses(cls, masses: Mapping[Fraction, Fraction]) -> "Lrp":
        """Build a profile from a posterior -> mass map, dropping zero masses."""
        return cls(tuple(sorted((e, m) for e, m in masses.items() if m != 0)))

    def as_dict(self) -> dict[Fraction, Fraction]:
        return dict(self.points)

    def __len__(self) -> int:
        return len(self.points)

    def to_json(self) -> dict:
        return {
            "points": [
                {"eps": format_rational(e), "mass": format_rational(m)}
                for e, m in self.points
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Lrp":
        return cls.from_masses(
            _accumulate(
                (parse_rational(p["eps"]), parse_rational(p["mass"]))
                for p in data["points"]
            )
        )


def _accumulate(pairs: Iterable[tuple[Fraction, Fraction]]) -> dict[Fraction, Fraction]:
    acc: dict[Fraction, Fraction] = defaultdict(Fraction)
    for key, mass in pairs:
        acc[key] += mass
    return acc


# ---------------------------------------------------------------------------
# canonical BSC mixtures


@dataclass(frozen=True)
class BscMixture:
    """Canonical random switching of BSCs: ascending ``(crossover, weight)``."""

    parts: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        total = ZERO
        prev = None
        for eps, w in self.parts:
            if not 0 <= eps <= HALF:
                raise ChannelError(f"crossover {eps} outside [0, 1/2]")
            if w <= 0:
                raise ChannelError(f"non-positive weight {w} at crossover {eps}")
            if prev is not None and eps <= prev:
                raise ChannelError("crossovers must be strictly increasing")
            prev = eps
            total += w
        if total != 1:
            raise ChannelError(f"weights sum to {total}, not 1")

    @classmethod
    def canonical(cls, terms: Iterable[tuple[Fraction, Fraction]]) -> "BscMixture":
        """Fold crossovers into [0, 1/2], merge equal ones, drop zero weights."""
        acc: dict[Fraction, Fraction] = defaultdict(Fraction)
        for eps, w in terms:
            if w:
                acc[min(eps, 1 - eps)] += w
        return cls(tuple(sorted((e, w) for e, w in acc.items() if w != 0)))

    def __len__(self) -> int:
        return len(self.parts)

    @property
    def crossovers(self) -> tuple[Fraction, ...]:
        return tuple(e for e, _ in self.parts)

    def to_lrp(self) -> Lrp:
        """Expand each part ``w B(eps)`` into posteriors ``eps`` and ``1 - eps``."""
        acc: dict[Fraction, Fraction] = defaultdict(Fraction)
        for eps, w in self.parts:
            if eps == HALF:
                acc[HALF] += w
            else:
                acc[eps] += w / 2
                acc[1 - eps] += w / 2
        return Lrp.from_masses(acc)

    def to_json(self) -> dict:
        return {
            "parts": [
                {"crossover": format_rational(e), "weight": format_rational(w)}
                for e, w in self.parts
            ]
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "BscMixture":
        return cls.canonical(
            (parse_rational(p["crossover"]), parse_rational(p["weight"]))
            for p in data["parts"]
        )


def make_bsc(eps: RationalLike) -> BscMixture:
    """``B(eps)``; crossovers above 1/2 fold onto ``1 - eps``."""
    eps = parse_rational(eps)
    _check_unit(eps, "crossover")
    return BscMixture(((min(eps, 1 - eps), ONE),))


def make_bec(q: RationalLike) -> BscMixture:
    """``E(q) = (1-q) B(0) + q B(1/2)``."""
    q = parse_rational(q)
    _check_unit(q, "erasure probability")
    return BscMixture.canonical([(ZERO, 1 - q), (HALF, q)])


def make_mixture(parts: Iterable[tuple[RationalLike, RationalLike]]) -> BscMixture:
    """Canonical mixture from ``(crossover, weight)`` pairs; crossovers may exceed 1/2."""
    terms = []
    for eps, w in parts:
        eps, w = parse_rational(eps), parse_rational(w)
        _check_unit(eps, "crossover")
        if w < 0:
            raise ChannelError(f"negative weight {w}")
        terms.append((eps, w))
    return BscMixture.canonical(terms)


# ---------------------------------------------------------------------------
# explicit transition matrices


class TransitionMatrix:
    """Explicit channel ``Pr(y | x)`` for ``x in {0, 1}``.

    Stored as an integer array ``num`` of shape ``(2, N)`` and a positive
    integer ``den``; entry ``(x, y)`` is ``num[x, y] / den``.  ``num`` is an
    ``int64`` array when every value fits comfortably, otherwise an object
    array of Python integers.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den: int):
        num = np.asarray(num)
        if num.ndim != 2 or num.shape[0] != 2 or num.shape[1] < 1:
            raise ChannelError("transition matrix must have shape (2, N>=1)")
        den = int(den)
        if den <= 0:
            raise ChannelError("denominator must be positive")
        num = _as_int_array(num, den)
        if (num < 0).any():
            raise ChannelError("transition probabilities must be non-negative")
        sums = num.sum(axis=1)
        if int(sums[0]) != den or int(sums[1]) != den:
            raise ChannelError("each row of a transition matrix must sum to 1")
        num.setflags(write=False)
        self.num = num
        self.den = den

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[RationalLike]]) -> "TransitionMatrix":
        if len(rows) != 2:
            raise ChannelError("a binary-input channel has exactly two rows")
        r0 = [parse_rational(v) for v in rows[0]]
        r1 = [parse_rational(v) for v in rows[1]]
        if len(r0) != len(r1):
            raise ChannelError("rows must have equal length")
        den = math.lcm(*(v.denominator for v in r0 + r1))
        num = [[int(v * den) for v in r0], [int(v * den) for v in r1]]
        return cls(np.array(num, dtype=object), den)

    @property
    def outputs(self) -> int:
        return int(self.num.shape[1])

    @property
    def probs(self) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        return tuple(
            tuple(Fraction(int(v), self.den) for v in row) for row in self.num
        )  # type: ignore[return-value]

    def reduced(self) -> "TransitionMatrix":
        """Same channel with the common denominator in lowest terms."""
        g = math.gcd(self.den, *(int(v) for v in np.unique(self.num)))
        if g <= 1:
            return self
        return TransitionMatrix(self.num // g, self.den // g)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return self.probs == other.probs

    def __repr__(self) -> str:
        return f"TransitionMatrix(outputs={self.outputs}, den={self.den})"


def _as_int_array(num: np.ndarray, den: int) -> np.ndarray:
    if num.dtype == object:
        vals = [[int(v) for v in row] for row in num]
        if 2 * den < _INT64_SAFE:
            return np.array(vals, dtype=np.int64)
        out = np.empty(num.shape, dtype=object)
        out[:, :] = vals
        return out
    if not np.issubdtype(num.dtype, np.integer):
        raise ChannelError("transition numerators must be integers")
    if 2 * den >= _INT64_SAFE:
        return num.astype(object)
    return num.astype(np.int64, copy=True)


def make_b_ab(a: RationalLike, b: RationalLike) -> TransitionMatrix:
    """The two-output channel ``B_{a,b}``: ``Pr(0|0)=a``, ``Pr(0|1)=b``.

    Requires ``0 <= a < b <= 1 - a``.
    """
    a, b = parse_rational(a), parse_rational(b)
    if not (0 <= a < b <= 1 - a):
        raise ChannelError(f"B_(a,b) needs 0 <= a < b <= 1-a, got a={a}, b={b}")
    return TransitionMatrix.from_rows([[a, 1 - a], [b, 1 - b]])


def bsc_matrix(eps: RationalLike) -> TransitionMatrix:
    eps = parse_rational(eps)
    _check_unit(eps, "crossover")
    return TransitionMatrix.from_rows([[1 - eps, eps], [eps, 1 - eps]])


def bec_matrix(q: RationalLike) -> TransitionMatrix:
    """Outputs ordered ``(0, erasure, 1)``."""
    q = parse_rational(q)
    _check_unit(q, "erasure probability")
    return TransitionMatrix.from_rows([[1 - q, q, 0], [0, q, 1 - q]])


def mixture_matrix(w: BscMixture) -> TransitionMatrix:
    """An explicit channel realising ``w``: two outputs per BSC part."""
    row0: list[Fraction] = []
    row1: list[Fraction] = []
    for eps, weight in w.parts:
        row0 += [weight * (1 - eps), weight * eps]
        row1 += [weight * eps, weight * (1 - eps)]
    return TransitionMatrix.from_rows([row0, row1])


def lrp_from_matrix(t: TransitionMatrix) -> Lrp:
    """Group the outputs of ``t`` by posterior probability of input 0."""
    n0, n1 = t.num[0], t.num[1]
    tot = n0 + n1
    keep = tot != 0
    n0, tot = n0[keep], tot[keep]
    if n0.dtype == object or int(tot.max()) >= _INT64_SAFE:
        acc: dict[Fraction, int] = defaultdict(int)
        for a, s in zip(n0.tolist(), tot.tolist()):
            acc[Fraction(int(a), int(s))] += int(s)
        masses = {e: Fraction(s, 2 * t.den) for e, s in acc.items()}
        return Lrp.from_masses(masses)
    g = np.gcd(n0, tot)
    p, q = n0 // g, tot // g
    order = np.lexsort((q, p))
    p, q, tot = p[order], q[order], tot[order]
    start = np.flatnonzero(np.r_[True, (p[1:] != p[:-1]) | (q[1:] != q[:-1])])
    sums = np.add.reduceat(tot, start)
    masses = {
        Fraction(int(a), int(b)): Fraction(int(s), 2 * t.den)
        for a, b, s in zip(p[start], q[start], sums)
    }
    return Lrp.from_masses(masses)


# ---------------------------------------------------------------------------
# operations on profiles


def rsc_combine(parts: Sequence[tuple[RationalLike, Lrp]]) -> Lrp:
    """Profile of the random switching channel ``sum_j q_j W_j``."""
    weights = [parse_rational(q) for q, _ in parts]
    if any(q < 0 for q in weights):
        raise ChannelError("switching weights must be non-negative")
    if sum(weights, ZERO) != 1:
        raise ChannelError(f"switching weights sum to {sum(weights, ZERO)}, not 1")
    acc: dict[Fraction, Fraction] = defaultdict(Fraction)
    for q, (_, lrp) in zip(weights, parts):
        for eps, mass in lrp.points:
            acc[eps] += q * mass
    return Lrp.from_masses(acc)


def is_symmetric(lrp: Lrp) -> bool:
    """True iff ``P(eps) == P(1 - eps)`` for every posterior."""
    masses = lrp.as_dict()
    return all(masses.get(1 - e) == m for e, m in lrp.points)


def to_bsc_mixture(lrp: Lrp) -> BscMixture:
    if not is_symmetric(lrp):
        raise ChannelError("profile is not symmetric about 1/2")
    parts = []
    for eps, mass in lrp.points:
        if eps < HALF:
            parts.append((eps, 2 * mass))
        elif eps == HALF:
            parts.append((eps, mass))
    return BscMixture(tuple(parts))


def channels_equivalent(a: Lrp | BscMixture, b: Lrp | BscMixture) -> bool:
    return as_lrp(a).points == as_lrp(b).points


def as_lrp(ch: Lrp | BscMixture | TransitionMatrix) -> Lrp:
    if isinstance(ch, Lrp):
        return ch
    if isinstance(ch, BscMixture):
        return ch.to_lrp()
    if isinstance(ch, TransitionMatrix):
        return lrp_from_matrix(ch)
    raise TypeError(f"not a channel: {type(ch).__name__}")


# ---------------------------------------------------------------------------
# reliability functionals


@dataclass(frozen=True)
class Metrics:
    capacity: float
    error_prob: Fraction
    bhattacharyya: float


def _log2(x: Fraction) -> float:
    # exact-input log so tiny posteriors with huge denominators stay accurate
    return math.log2(x.numerator) - math.log2(x.denominator)


def _capacity_term(eps: Fraction) -> float:
    """``1 - h2(eps)`` with ``0 log 0 := 0``."""
    e = min(eps, 1 - eps)
    if e == 0:
        return 1.0
    ef = float(e)
    h = -ef * _log2(e) - (1.0 - ef) * math.log1p(-ef) / math.log(2)
    return 1.0 - h


def _bhattacharyya_term(eps: Fraction) -> float:
    e = min(eps, 1 - eps)
    if e == 0:
        return 0.0
    return 2.0 * 2.0 ** (0.5 * (_log2(e) + _log2(1 - e)))


def evaluate_metrics(ch: Lrp | BscMixture) -> Metrics:
    """Capacity, MLD error probability and Bhattacharyya parameter.

    The three are expectations of ``1 - h2(S)``, ``min(S, 1-S)`` and
    ``2 sqrt(S (1-S))`` under the profile.  A mixture is evaluated part by
    part, which gives the same numbers as its profile expansion.
    """
    if isinstance(ch, BscMixture):
        pairs = ch.parts
    else:
        pairs = ch.points
    cap = math.fsum(float(m) * _capacity_term(e) for e, m in pairs)
    pe = sum((m * min(e, 1 - e) for e, m in pairs), ZERO)
    z = math.fsum(float(m) * _bhattacharyya_term(e) for e, m in pairs)
    return Metrics(capacity=min(max(cap, 0.0), 1.0), error_prob=pe, bhattacharyya=min(z, 1.0))


# ---------------------------------------------------------------------------
# JSON helpers


def channel_to_json(ch: Lrp | BscMixture) -> str:
    return json.dumps(ch.to_json(), sort_keys=False)


def channel_from_json(text: str | Mapping) -> Lrp | BscMixture:
    data = json.loads(text) if isinstance(text, str) else text
    if "parts" in data:
        return BscMixture.from_json(data)
    if "points" in data:
        return Lrp.from_json(data)
    raise ChannelError("JSON channel needs a 'parts' or 'points' key")
