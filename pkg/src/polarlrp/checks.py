"""Invariant suites run by ``polarlrp verify``."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .algebra import (
    PatternIndex,
    arikan_general,
    arikan_symmetric,
    bec_f_alpha,
    delta_m,
    diamond,
    nabla_m,
    star,
    transform_by_pattern,
    transform_general_by_pattern,
)
from .channels import (
    BscMixture,
    TransitionMatrix,
    bec_matrix,
    bsc_matrix,
    evaluate_metrics,
    lrp_from_matrix,
    make_b_ab,
    make_bec,
    make_bsc,
    make_mixture,
    mixture_matrix,
)
from .closed_forms import (
    all_closed_form_kinds,
    closed_form_special,
    delta_multinomial_form,
    delta_of_wpq,
    delta_with_half_form,
    nabla_multinomial_form,
    nabla_of_wpq,
    nabla_with_half_form,
)
from .codec import build_generator, index_correspondence
from .construction import oracle_channel
from .counting import multinomial_identity_sides

SUITES = ("algebra", "oracle", "closedform", "identity")

PRINTED_G = {
    1: ["10", "11"],
    2: ["1000", "1010", "1100", "1111"],
    3: [
        "10000000", "10001000", "10100000", "10101010",
        "11000000", "11001100", "11110000", "11111111",
    ],
}


@dataclass(frozen=True)
class CheckResult:
    suite: str
    name: str
    ok: bool
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        tail = f" ({self.detail})" if self.detail else ""
        return f"{status} {self.suite}:{self.name}{tail}"


def random_rational(rng: random.Random, max_den: int = 12, lo: Fraction = Fraction(0), hi: Fraction = Fraction(1)) -> Fraction:
    while True:
        den = rng.randint(1, max_den)
        x = Fraction(rng.randint(0, den), den)
        if lo <= x <= hi:
            return x


def random_mixture(rng: random.Random, max_parts: int = 4, max_den: int = 12) -> BscMixture:
    n = rng.randint(1, max_parts)
    cuts = sorted(rng.randint(1, 23) for _ in range(n - 1))
    bounds = [0, *cuts, 24]
    weights = [Fraction(b - a, 24) for a, b in zip(bounds, bounds[1:])]
    eps = [random_rational(rng, max_den, hi=Fraction(1, 2)) for _ in range(n)]
    return make_mixture(zip(eps, weights))


# ---------------------------------------------------------------------------


def _algebra(rng: random.Random) -> list[tuple[str, bool, str]]:
    out = []
    vals = [random_rational(rng) for _ in range(30)]
    comm = all(star(a, b) == star(b, a) for a in vals for b in vals)
    assoc = all(star(star(a, b), c) == star(a, star(b, c)) for a, b, c in zip(vals, vals[1:], vals[2:]))
    out.append(("star_commutative_associative", comm and assoc, ""))
    dia = all(diamond(a, b) == diamond(b, a) for a in vals for b in vals)
    out.append(("diamond_commutative", dia, ""))

    caps = []
    agree = True
    for _ in range(20):
        w = random_mixture(rng)
        a0, a1 = arikan_symmetric(0, w, w), arikan_symmetric(1, w, w)
        caps.append(abs(evaluate_metrics(a0).capacity + evaluate_metrics(a1).capacity - 2 * evaluate_metrics(w).capacity))
        lrp = w.to_lrp()
        agree &= arikan_general(0, lrp, lrp) == a0.to_lrp()
        agree &= arikan_general(1, lrp, lrp) == a1.to_lrp()
    out.append(("capacity_conservation", max(caps) <= 1e-9, f"max dev {max(caps):.3g}"))
    out.append(("general_matches_symmetric", agree, ""))

    w = random_mixture(rng)
    ident = delta_m(w, 0) == make_bsc(0) and nabla_m(w, 0) == make_bsc(Fraction(1, 2))
    for k in range(1, 4):
        ident &= transform_by_pattern(w, "0" * k) == delta_m(w, 2**k)
        ident &= transform_by_pattern(w, "1" * k) == nabla_m(w, 2**k)
    out.append(("delta_nabla_identities", ident, ""))

    half = make_bsc(Fraction(1, 2))
    absorb = all(
        arikan_symmetric(0, half, v) == half and arikan_symmetric(1, half, v) == v
        for v in (random_mixture(rng) for _ in range(10))
    )
    out.append(("half_channel_absorbs", absorb, ""))
    return out


def oracle_cases() -> dict[str, TransitionMatrix]:
    mix = make_mixture([(Fraction(1, 8), Fraction(1, 2)), (Fraction(1, 3), Fraction(1, 2))])
    return {
        "B(1/4)": bsc_matrix(Fraction(1, 4)),
        "E(1/3)": bec_matrix(Fraction(1, 3)),
        "B(1/8)/B(1/3) mixture": mixture_matrix(mix),
        "B_(1/8,1/4)": make_b_ab(Fraction(1, 8), Fraction(1, 4)),
    }


def _oracle(rng: random.Random, max_depth: int = 3) -> list[tuple[str, bool, str]]:
    out = []
    for name, m in oracle_cases().items():
        base = lrp_from_matrix(m)
        bad = []
        for k in range(max_depth + 1):
            for alpha in PatternIndex.all_of_length(k):
                if lrp_from_matrix(oracle_channel(m, alpha)) != transform_general_by_pattern(base, alpha):
                    bad.append(str(alpha) or "<empty>")
        out.append((f"oracle[{name}]", not bad, ", ".join(bad)))
    return out


def _closedform(rng: random.Random) -> list[tuple[str, bool, str]]:
    out = []
    bad = []
    for eps in (Fraction(1, 4), Fraction(1, 3)):
        for kind in all_closed_form_kinds():
            if closed_form_special(eps, kind) != transform_by_pattern(make_bsc(eps), kind.pattern()):
                bad.append(f"{kind.tag}{kind.params}@{eps}")
    out.append(("pattern_families", not bad, ", ".join(bad)))

    plain = [
        make_mixture([(Fraction(1, 5), 1)]),
        make_mixture([(Fraction(1, 6), Fraction(1, 3)), (Fraction(2, 5), Fraction(2, 3))]),
    ]
    with_half = [
        make_mixture([(Fraction(1, 7), Fraction(3, 4)), (Fraction(1, 2), Fraction(1, 4))]),
        make_mixture([(Fraction(1, 9), Fraction(1, 3)), (Fraction(1, 4), Fraction(1, 3)), (Fraction(1, 2), Fraction(1, 3))]),
    ]
    general = with_half + [
        make_mixture([(0, Fraction(1, 4)), (Fraction(1, 3), Fraction(1, 2)), (Fraction(1, 2), Fraction(1, 4))]),
        make_bec(Fraction(2, 5)),
    ]
    for m in range(6):
        ok = all(delta_multinomial_form(w, m) == delta_m(w, m) for w in plain)
        ok &= all(nabla_multinomial_form(w, m) == nabla_m(w, m) for w in plain)
        ok &= all(delta_with_half_form(w, m) == delta_m(w, m) for w in with_half)
        ok &= all(nabla_with_half_form(w, m) == nabla_m(w, m) for w in with_half)
        for w in general:
            p = dict(w.parts).get(Fraction(0), Fraction(0))
            q = dict(w.parts).get(Fraction(1, 2), Fraction(0))
            rest_parts = [(e, wt) for e, wt in w.parts if e not in (0, Fraction(1, 2))]
            rest = None
            if rest_parts:
                scale = 1 - p - q
                rest = BscMixture.canonical((e, wt / scale) for e, wt in rest_parts)
            ok &= delta_of_wpq(p, q, rest, m) == delta_m(w, m)
            ok &= nabla_of_wpq(p, q, rest, m) == nabla_m(w, m)
        out.append((f"delta_nabla_forms[m={m}]", ok, ""))
    return out


def _identity(rng: random.Random) -> list[tuple[str, bool, str]]:
    out = []
    bad = []
    for q in (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3)):
        for k in range(1, 7):
            for alpha in PatternIndex.all_of_length(k):
                if transform_by_pattern(make_bec(q), alpha) != make_bec(bec_f_alpha(q, alpha)):
                    bad.append(f"{alpha}@{q}")
    out.append(("bec_run_length_map", not bad, ", ".join(bad[:5])))
    val = bec_f_alpha(Fraction(1, 2), "0110")
    out.append(("bec_0110_value", val == Fraction(34911, 65536), str(val)))

    mult = all(
        (lambda s: s[0] == s[1])(multinomial_identity_sides(k, a))
        for k in range(0, 7)
        for a in range(2**k + 1)
    )
    out.append(("multinomial_identity", mult, ""))

    gen = all(
        ["".join(map(str, r)) for r in build_generator(k).rows_as_lists()] == rows
        for k, rows in PRINTED_G.items()
    )
    out.append(("printed_generators", gen, ""))

    for name, m in (("B(1/4)", bsc_matrix(Fraction(1, 4))), ("B_(1/8,1/4)", make_b_ab(Fraction(1, 8), Fraction(1, 4)))):
        corr = {}
        for k in (1, 2, 3):
            corr.update(index_correspondence(m, k))
        ok = all(alphas == [delta] for delta, alphas in corr.items())
        out.append((f"sc_index_is_pattern[{name}]", ok, ""))
    return out


_SUITES: dict[str, Callable[[random.Random], list[tuple[str, bool, str]]]] = {
    "algebra": _algebra,
    "oracle": _oracle,
    "closedform": _closedform,
    "identity": _identity,
}


def run_suite(name: str, seed: int = 0) -> list[CheckResult]:
    if name not in _SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    rng = random.Random(seed)
    return [CheckResult(name, n, ok, detail) for n, ok, detail in _SUITES[name](rng)]
