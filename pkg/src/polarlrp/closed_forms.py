"""Closed-form mixtures for Delta/Nabla compounds and special BSC patterns.

These expressions are evaluated term by term exactly as printed and only then
canonicalised.  They are deliberately independent of the iterated transforms
in :mod:`polarlrp.algebra`, which makes each one a cross-check of the other.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import comb, factorial, prod
from typing import Callable, Iterator, Sequence

from .algebra import PatternIndex, diamond, star
from .channels import HALF, ONE, ZERO, BscMixture, ChannelError, make_bsc, parse_rational

Term = tuple[Fraction, Fraction]


def multinomial(n: int, parts: Sequence[int]) -> int:
    if sum(parts) != n or any(p < 0 for p in parts):
        raise ValueError(f"parts {tuple(parts)} do not partition {n}")
    return factorial(n) // prod(factorial(p) for p in parts)


def star_power_closed(eps: Fraction, a: int) -> Fraction:
    """``eps`` starred with itself ``a`` times, via the odd binomial sum."""
    if a == 0:
        return ZERO
    return sum(
        (comb(a, 2 * i + 1) * eps ** (2 * i + 1) * (1 - eps) ** (a - 2 * i - 1)
         for i in range((a - 1) // 2 + 1)),
        ZERO,
    )


def diamond_power_closed(sigma: Fraction, a: int) -> Fraction:
    if a == 0:
        return HALF
    return sigma**a / (sigma**a + (1 - sigma) ** a)


def _compositions(total: int, n: int) -> Iterator[tuple[int, ...]]:
    """All length-``n`` non-negative integer vectors summing to ``total``."""
    if n == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, n - 1):
            yield (first,) + rest


def _ab_vectors(total: int, n: int) -> Iterator[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Pairs ``(a, b)`` of length-``n`` vectors with ``sum(a) + 2 sum(b) == total``."""
    if n == 0:
        if total == 0:
            yield (), ()
        return
    for b0 in range(total // 2 + 1):
        for a0 in range(total - 2 * b0 + 1):
            for a, b in _ab_vectors(total - a0 - 2 * b0, n - 1):
                yield (a0,) + a, (b0,) + b


def _fold_diamond(values: Sequence[Fraction]) -> Fraction:
    out = HALF
    for v in values:
        out = diamond(out, v)
    return out


def _fold_star(values: Sequence[Fraction]) -> Fraction:
    out = ZERO
    for v in values:
        out = star(out, v)
    return out


def _nabla_terms(
    eps: Sequence[Fraction], q: Sequence[Fraction], a: Sequence[int], b: Sequence[int]
) -> list[Term]:
    """Inner sum over sign choices for one ``(a, b)`` configuration."""
    omega = [i for i, ai in enumerate(a) if ai > 0]
    if not omega:
        return [(HALF, ONE)]
    out = []
    for sigmas in product(*((eps[i], 1 - eps[i]) for i in omega)):
        hi = prod((s ** a[i] for s, i in zip(sigmas, omega)), start=ONE)
        lo = prod(((1 - s) ** a[i] for s, i in zip(sigmas, omega)), start=ONE)
        cross = _fold_diamond([diamond_power_closed(s, a[i]) for s, i in zip(sigmas, omega)])
        out.append((cross, (hi + lo) / 2))
    return out


def _split_half(w: BscMixture) -> tuple[list[Fraction], list[Fraction], Fraction]:
    eps = [e for e, _ in w.parts if e != HALF]
    q = [wt for e, wt in w.parts if e != HALF]
    q_half = sum((wt for e, wt in w.parts if e == HALF), ZERO)
    return eps, q, q_half


def _require_open(eps: Sequence[Fraction]) -> None:
    if any(not 0 < e < 1 for e in eps):
        raise ChannelError("closed form needs every crossover in (0, 1)")


# ---------------------------------------------------------------------------
# Delta_m / Nabla_m of a general symmetric channel


def delta_multinomial_form(w: BscMixture, m: int) -> BscMixture:
    """``Delta_m(W)`` summed over count vectors with multinomial weights.

    Every crossover of ``w`` must lie in ``(0, 1)``.
    """
    if m == 0:
        return make_bsc(0)
    eps = [e for e, _ in w.parts]
    q = [wt for _, wt in w.parts]
    _require_open(eps)
    terms = []
    for a in _compositions(m, len(eps)):
        weight = multinomial(m, a) * prod((qi**ai for qi, ai in zip(q, a)), start=ONE)
        cross = _fold_star([star_power_closed(e, ai) for e, ai in zip(eps, a)])
        terms.append((cross, weight))
    return BscMixture.canonical(terms)


def nabla_multinomial_form(w: BscMixture, m: int) -> BscMixture:
    """``Nabla_m(W)`` over vectors ``(a, b)`` with ``sum(a) + 2 sum(b) = m``.

    ``eps`` and ``1 - eps`` are enumerated as distinct signs even when
    ``eps = 1/2``.  Every crossover must lie in ``(0, 1)``.
    """
    if m == 0:
        return make_bsc(HALF)
    eps = [e for e, _ in w.parts]
    q = [wt for _, wt in w.parts]
    _require_open(eps)
    terms = []
    for a, b in _ab_vectors(m, len(eps)):
        coef = multinomial(m, [ai + bi for ai, bi in zip(a, b)] + list(b))
        coef *= prod(
            (qi ** (ai + 2 * bi) * (e * (1 - e)) ** bi
             for qi, e, ai, bi in zip(q, eps, a, b)),
            start=ONE,
        )
        for cross, w_in in _nabla_terms(eps, q, a, b):
            terms.append((cross, coef * w_in))
    return BscMixture.canonical(terms)


def delta_with_half_form(w: BscMixture, m: int) -> BscMixture:
    """``Delta_m(W)`` for ``W`` whose largest crossover is exactly 1/2."""
    if m == 0:
        return make_bsc(0)
    eps, q, q_half = _split_half(w)
    if q_half == 0:
        raise ChannelError("mixture has no B(1/2) part")
    _require_open(eps)
    terms: list[Term] = [(HALF, 1 - (1 - q_half) ** m)]
    for a in _compositions(m, len(eps)):
        weight = multinomial(m, a) * prod((qi**ai for qi, ai in zip(q, a)), start=ONE)
        terms.append((_fold_star([star_power_closed(e, ai) for e, ai in zip(eps, a)]), weight))
    return BscMixture.canonical(terms)


def nabla_with_half_form(w: BscMixture, m: int) -> BscMixture:
    """``Nabla_m(W)`` for ``W`` with a 1/2 part, half-count ``s`` pulled out."""
    if m == 0:
        return make_bsc(HALF)
    eps, q, q_half = _split_half(w)
    if q_half == 0:
        raise ChannelError("mixture has no B(1/2) part")
    _require_open(eps)
    terms = []
    for s in range(m + 1):
        for a, b in _ab_vectors(m - s, len(eps)):
            coef = multinomial(m, [s] + [ai + bi for ai, bi in zip(a, b)] + list(b))
            coef *= q_half**s * prod(
                (qi ** (ai + 2 * bi) * (e * (1 - e)) ** bi
                 for qi, e, ai, bi in zip(q, eps, a, b)),
                start=ONE,
            )
            for cross, w_in in _nabla_terms(eps, q, a, b):
                terms.append((cross, coef * w_in))
    return BscMixture.canonical(terms)


def _split_pq(w: BscMixture) -> tuple[Fraction, Fraction, BscMixture | None]:
    p = sum((wt for e, wt in w.parts if e == 0), ZERO)
    q = sum((wt for e, wt in w.parts if e == HALF), ZERO)
    rest = [(e, wt) for e, wt in w.parts if e not in (ZERO, HALF)]
    if not rest:
        return p, q, None
    scale = 1 - p - q
    return p, q, BscMixture.canonical((e, wt / scale) for e, wt in rest)


def delta_of_wpq(
    p: Fraction,
    q: Fraction,
    w: BscMixture | None,
    t: int,
    inner: Callable[[BscMixture, int], BscMixture] = delta_multinomial_form,
) -> BscMixture:
    """``Delta_t(p B(0) + q B(1/2) + (1-p-q) W)`` via the binomial expansion."""
    r = 1 - p - q
    terms: list[Term] = [(HALF, 1 - (1 - q) ** t)]
    for i in range(t + 1):
        weight = comb(t, i) * p ** (t - i) * r**i
        if weight == 0:
            continue
        inner_mix = make_bsc(0) if i == 0 else inner(w, i)
        terms += [(e, weight * wt) for e, wt in inner_mix.parts]
    return BscMixture.canonical(terms)


def nabla_of_wpq(
    p: Fraction,
    q: Fraction,
    w: BscMixture | None,
    t: int,
    inner: Callable[[BscMixture, int], BscMixture] = nabla_multinomial_form,
) -> BscMixture:
    """``Nabla_t(p B(0) + q B(1/2) + (1-p-q) W)`` via the binomial expansion."""
    r = 1 - p - q
    terms: list[Term] = [(ZERO, 1 - (1 - p) ** t)]
    for i in range(t + 1):
        weight = comb(t, i) * q ** (t - i) * r**i
        if weight == 0:
            continue
        inner_mix = make_bsc(HALF) if i == 0 else inner(w, i)
        terms += [(e, weight * wt) for e, wt in inner_mix.parts]
    return BscMixture.canonical(terms)


def delta_closed_form(w: BscMixture, m: int) -> BscMixture:
    """``Delta_m`` of any canonical mixture, splitting off its B(0)/B(1/2) parts."""
    p, q, rest = _split_pq(w)
    return delta_of_wpq(p, q, rest, m)


def nabla_closed_form(w: BscMixture, m: int) -> BscMixture:
    p, q, rest = _split_pq(w)
    return nabla_of_wpq(p, q, rest, m)


# ---------------------------------------------------------------------------
# compact forms for patterns applied to a single BSC


@dataclass(frozen=True)
class ClosedFormKind:
    """One of the five pattern families with a compact closed form.

    ``tag`` is one of ``all_zeros (l)``, ``zeros_then_ones (l, ones)``,
    ``zero_one_block (l, i, k)``, ``zero_one_zero_block (l, i, t)`` and
    ``zero_one_zero_one_block (l, i, t)``; ``ones`` is at least 1.
    """

    tag: str
    params: tuple[int, ...]

    _ARITY = {
        "all_zeros": 1,
        "zeros_then_ones": 2,
        "zero_one_block": 3,
        "zero_one_zero_block": 3,
        "zero_one_zero_one_block": 3,
    }

    def __post_init__(self) -> None:
        if self.tag not in self._ARITY:
            raise ValueError(f"unknown closed-form kind {self.tag!r}")
        if len(self.params) != self._ARITY[self.tag]:
            raise ValueError(f"{self.tag} takes {self._ARITY[self.tag]} parameters")
        if any(p < 0 for p in self.params):
            raise ValueError("closed-form parameters must be non-negative")
        if self.tag == "zeros_then_ones" and self.params[1] < 1:
            raise ValueError("zeros_then_ones needs at least one trailing 1")

    @classmethod
    def all_zeros(cls, l: int) -> "ClosedFormKind":
        return cls("all_zeros", (l,))

    @classmethod
    def zeros_then_ones(cls, l: int, ones: int) -> "ClosedFormKind":
        return cls("zeros_then_ones", (l, ones))

    @classmethod
    def zero_one_block(cls, l: int, i: int, k: int) -> "ClosedFormKind":
        return cls("zero_one_block", (l, i, k))

    @classmethod
    def zero_one_zero_block(cls, l: int, i: int, t: int) -> "ClosedFormKind":
        return cls("zero_one_zero_block", (l, i, t))

    @classmethod
    def zero_one_zero_one_block(cls, l: int, i: int, t: int) -> "ClosedFormKind":
        return cls("zero_one_zero_one_block", (l, i, t))

    def pattern(self) -> PatternIndex:
        p = self.params
        s = {
            "all_zeros": lambda: "0" * p[0],
            "zeros_then_ones": lambda: "0" * p[0] + "1" * p[1],
            "zero_one_block": lambda: "0" * p[0] + "1" + "0" * p[1] + "1" * p[2],
            "zero_one_zero_block": lambda: "0" * p[0] + "1" + "0" * p[1] + "1" + "0" * p[2],
            "zero_one_zero_one_block": lambda: "0" * p[0] + "1" + "0" * p[1] + "1" + "0" * p[2] + "1",
        }[self.tag]()
        return PatternIndex.parse(s)


def _eps_l(eps: Fraction, l: int) -> Fraction:
    return star_power_closed(eps, 2**l)


def _eps_q_li(eps: Fraction, l: int, i: int) -> tuple[Fraction, Fraction]:
    el = _eps_l(eps, l)
    return (
        star_power_closed(diamond_power_closed(el, 2), 2**i),
        (el**2 + (1 - el) ** 2) ** (2**i),
    )


def _zeros_then_ones(eps: Fraction, l: int, k: int) -> list[Term]:
    el = _eps_l(eps, l)
    v = el * (1 - el)
    n = 2**k
    terms = [(HALF, comb(2 * n, n) * v**n)]
    for i in range(1, n + 1):
        weight = comb(2 * n, n - i) * (el ** (2 * i) + (1 - el) ** (2 * i)) / v ** (i - n)
        terms.append((diamond_power_closed(el, 2 * i), weight))
    return terms


def _zero_one_block(eps: Fraction, l: int, i: int, k: int) -> list[Term]:
    e, q = _eps_q_li(eps, l, i)
    n = 2**k
    x = q**2 * e * (1 - e)
    half_weight = sum(
        (multinomial(n, (n - 2 * b, b, b)) * (1 - q) ** (n - 2 * b) * x**b
         for b in range(n // 2 + 1)),
        ZERO,
    )
    terms = [(HALF, half_weight)]
    for a in range(1, n + 1):
        inner = sum(
            (multinomial(n, (n - a - 2 * b, a + b, b)) * (1 - q) ** (n - a - 2 * b) * x**b
             for b in range((n - a) // 2 + 1)),
            ZERO,
        )
        terms.append((diamond_power_closed(e, a), (e**a + (1 - e) ** a) * q**a * inner))
    return terms


def _pqr(eps: Fraction, l: int, i: int) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    e, q = _eps_q_li(eps, l, i)
    p = q**2 * (e**2 + (1 - e) ** 2) + 2 * q * (1 - q)
    r = 2 * q * (1 - q) / p
    return e, q, p, r


def zero_one_zero_coefficients(
    eps: Fraction, l: int, i: int, t: int
) -> tuple[Fraction, list[Fraction], list[Fraction]]:
    """``(a, [b_s], [beta_s])`` of the ``0^l 1 0^i 1 0^t`` form, ``s = 0..2^t``."""
    e, _, p, r = _pqr(eps, l, i)
    n = 2**t
    e2 = diamond_power_closed(e, 2)
    a = 1 - p**n
    bs = [comb(n, s) * (1 - r) ** (n - s) * r**s * p**n for s in range(n + 1)]
    betas = [star(star_power_closed(e2, n - s), star_power_closed(e, s)) for s in range(n + 1)]
    return a, bs, betas


def _zero_one_zero_one(eps: Fraction, l: int, i: int, t: int) -> list[Term]:
    a, bs, betas = zero_one_zero_coefficients(eps, l, i, t)
    half = a**2 + 2 * sum((b**2 * be * (1 - be) for b, be in zip(bs, betas)), ZERO)
    terms: list[Term] = [(HALF, half)]
    terms += [(be, 2 * a * b) for b, be in zip(bs, betas)]
    terms += [
        (diamond_power_closed(be, 2), b**2 * (be**2 + (1 - be) ** 2))
        for b, be in zip(bs, betas)
    ]
    for s in range(len(bs)):
        for r in range(s + 1, len(bs)):
            for sig in (betas[r], 1 - betas[r]):
                w = 2 * bs[s] * bs[r] * (betas[s] * sig + (1 - betas[s]) * (1 - sig))
                terms.append((diamond(betas[s], sig), w))
    return terms


def closed_form_special(eps, kind: ClosedFormKind) -> BscMixture:
    """Evaluate the compact closed form of ``A_pattern(B(eps))``."""
    eps = parse_rational(eps)
    if not 0 < eps < HALF:
        raise ChannelError(f"closed forms need eps in (0, 1/2), got {eps}")
    p = kind.params
    if kind.tag == "all_zeros":
        terms = [(_eps_l(eps, p[0]), ONE)]
    elif kind.tag == "zeros_then_ones":
        terms = _zeros_then_ones(eps, p[0], p[1] - 1)
    elif kind.tag == "zero_one_block":
        terms = _zero_one_block(eps, *p)
    elif kind.tag == "zero_one_zero_block":
        a, bs, betas = zero_one_zero_coefficients(eps, *p)
        terms = [(HALF, a)] + list(zip(betas, bs))
    else:
        terms = _zero_one_zero_one(eps, *p)
    return BscMixture.canonical(terms)


def all_closed_form_kinds(values: Sequence[int] = (0, 1, 2)) -> list[ClosedFormKind]:
    kinds = [ClosedFormKind.all_zeros(l) for l in values]
    kinds += [ClosedFormKind.zeros_then_ones(l, k + 1) for l in values for k in values]
    for l in values:
        for i in values:
            for x in values:
                kinds.append(ClosedFormKind.zero_one_block(l, i, x))
                kinds.append(ClosedFormKind.zero_one_zero_block(l, i, x))
                kinds.append(ClosedFormKind.zero_one_zero_one_block(l, i, x))
    return kinds
