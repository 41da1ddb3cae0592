"""Counting the BSCs in synthetic channels.

``phi_count`` is the number of parts of a canonical mixture; ``phi_bound``
gives the known upper bounds for it, and ``varphi_alpha`` is the weight that
governs how many outputs of ``A_alpha(W)`` share a likelihood ratio.
"""

from __future__ import annotations

from math import comb, factorial

from .algebra import PatternIndex, PatternLike
from .channels import BscMixture
from .closed_forms import multinomial


def phi_count(w: BscMixture) -> int:
    return len(w.parts)


def delta_phi_bound(m: int, n: int, *, with_half: bool) -> int:
    """Bound on the parts of ``Delta_m(W)``.

    ``n`` counts the parts of ``W`` with crossover in ``(0, 1/2)`` when
    ``with_half`` is set (``W`` then has one extra B(1/2) part), otherwise all
    parts of ``W`` (each crossover in ``(0, 1)``).
    """
    bound = comb(m + n - 1, m)
    return bound + 1 if with_half else bound


def nabla_phi_bound(m: int, n: int, *, with_half: bool) -> int:
    """Bound on the parts of ``Nabla_m(W)``; ``n`` as in :func:`delta_phi_bound`."""
    total = 1
    for w in range(1, m + 1):
        if with_half:
            inner = comb(m, w)
        else:
            inner = sum(comb(m - 2 * b - 1, m - 2 * b - w) for b in range((m - w) // 2 + 1))
        total += 2 ** (w - 1) * comb(n, w) * inner
    return total


_PAIR_BOUNDS = {
    "0": lambda n: (n * n + n) // 2 + 1,
    "1": lambda n: n * n + n + 1,
    "00": lambda n: comb(n + 3, 4) + 1,
    "11": lambda n: (n * n + n) * (n * n + n + 4) // 3 + 1,
    "01": lambda n: (n * n + n) * (n * n + n + 2) // 4 + 1,
    "10": lambda n: (n * n + n) * (n * n + n + 1) // 2 + 1,
}


def phi_bound(alpha: PatternLike, n: int, *, with_half: bool = True) -> int:
    """Upper bound on ``phi(A_alpha(W))``.

    By default ``W`` has ``n`` parts with crossover in ``[0, 1/2)`` plus one
    B(1/2) part.  Patterns of length at most two use the tabulated bounds;
    longer patterns must be a single run ``0^j`` or ``1^j`` (a ``Delta`` or
    ``Nabla`` compound of order ``2^j``).  ``with_half=False`` selects the
    bounds for ``W`` made of ``n`` parts with crossovers in ``(0, 1)``,
    available for single-run patterns only.
    """
    alpha = PatternIndex.parse(alpha)
    if n < 1:
        raise ValueError("n must be at least 1")
    key = str(alpha)
    if with_half and key in _PAIR_BOUNDS:
        return _PAIR_BOUNDS[key](n)
    runs = alpha.runs()
    if len(runs) != 1:
        raise ValueError(f"no bound available for pattern {key!r}")
    bit, length = runs[0]
    m = 2**length
    if bit == 0:
        return delta_phi_bound(m, n, with_half=with_half)
    return nabla_phi_bound(m, n, with_half=with_half)


def varphi_alpha(alpha: PatternLike) -> int:
    """Exact integer weight of ``alpha`` defined on its final run.

    ``varphi(0^l) = varphi(1^l) = (2^l)! 2^(2^l)`` and, if ``alpha = sigma d^l``
    with ``sigma`` non-empty and ``d^l`` the final run,
    ``varphi(alpha) = (2^l)! varphi(sigma)^(2^l)``.
    """
    alpha = PatternIndex.parse(alpha)
    if len(alpha) == 0:
        raise ValueError("varphi needs a non-empty pattern")
    runs = alpha.runs()
    l = runs[-1][1]
    prefix = alpha.bits[: len(alpha) - l]
    if not prefix:
        return factorial(2**l) * 2 ** (2**l)
    return factorial(2**l) * varphi_alpha(PatternIndex(prefix)) ** (2**l)


def leading_phi_term(alpha: PatternLike, n: int) -> tuple[int, int]:
    """Leading term ``2^b(alpha) (2n)^(2^k) / varphi(alpha)`` as ``(num, den)``."""
    alpha = PatternIndex.parse(alpha)
    return 2**alpha.b_value * (2 * n) ** (2 ** len(alpha)), varphi_alpha(alpha)


def multinomial_identity_sides(k: int, a: int) -> tuple[int, int]:
    """Both sides of ``sum_{s+2b=2^k-a} C(2^k; s, a+b, b) 2^s = C(2^(k+1), 2^k-a)``."""
    n = 2**k
    if not 0 <= a <= n:
        raise ValueError("need 0 <= a <= 2^k")
    lhs = sum(
        multinomial(n, (n - a - 2 * b, a + b, b)) * 2 ** (n - a - 2 * b)
        for b in range((n - a) // 2 + 1)
    )
    return lhs, comb(2 * n, n - a)
