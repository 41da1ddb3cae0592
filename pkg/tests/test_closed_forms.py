from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarlrp.algebra import delta_m, diamond_power, nabla_m, star_power, transform_by_pattern
from polarlrp.channels import ChannelError, make_bec, make_bsc, make_mixture
from polarlrp.closed_forms import (
    ClosedFormKind,
    all_closed_form_kinds,
    closed_form_special,
    delta_closed_form,
    delta_multinomial_form,
    delta_of_wpq,
    delta_with_half_form,
    diamond_power_closed,
    multinomial,
    nabla_closed_form,
    nabla_multinomial_form,
    nabla_of_wpq,
    nabla_with_half_form,
    star_power_closed,
    zero_one_zero_coefficients,
)
from strategies import crossovers

F = Fraction
HALF = F(1, 2)

PLAIN = [
    make_bsc(F(1, 5)),
    make_mixture([(F(1, 6), F(1, 3)), (F(2, 5), F(2, 3))]),
    make_mixture([(F(1, 9), F(1, 4)), (F(1, 4), F(1, 4)), (F(1, 3), F(1, 2))]),
]
WITH_HALF = [
    make_mixture([(F(1, 7), F(3, 4)), (HALF, F(1, 4))]),
    make_mixture([(F(1, 9), F(1, 3)), (F(1, 4), F(1, 3)), (HALF, F(1, 3))]),
]


class TestPowers:
    @given(crossovers(), st.integers(0, 8))
    def test_star_power(self, e, a):
        assert star_power_closed(e, a) == star_power(e, a)

    @given(crossovers(open_interval=True), st.integers(0, 8))
    def test_diamond_power(self, s, a):
        assert diamond_power_closed(s, a) == diamond_power(s, a)

    def test_multinomial(self):
        assert multinomial(4, (2, 1, 1)) == 12
        with pytest.raises(ValueError):
            multinomial(4, (2, 1))


class TestDeltaNablaForms:
    @pytest.mark.parametrize("m", range(6))
    @pytest.mark.parametrize("w", PLAIN, ids=lambda w: f"{len(w)}parts")
    def test_multinomial_forms(self, w, m):
        assert delta_multinomial_form(w, m) == delta_m(w, m)
        assert nabla_multinomial_form(w, m) == nabla_m(w, m)

    @pytest.mark.parametrize("m", range(6))
    @pytest.mark.parametrize("w", WITH_HALF, ids=lambda w: f"{len(w)}parts")
    def test_with_half_forms(self, w, m):
        assert delta_with_half_form(w, m) == delta_m(w, m)
        assert nabla_with_half_form(w, m) == nabla_m(w, m)

    @pytest.mark.parametrize("m", range(6))
    def test_binomial_split(self, m):
        rest = make_mixture([(F(1, 5), F(1, 2)), (F(1, 3), F(1, 2))])
        p, q = F(1, 6), F(1, 3)
        w = make_mixture([(0, p), (HALF, q), (F(1, 5), (1 - p - q) / 2), (F(1, 3), (1 - p - q) / 2)])
        assert delta_of_wpq(p, q, rest, m) == delta_m(w, m)
        assert nabla_of_wpq(p, q, rest, m) == nabla_m(w, m)

    @pytest.mark.parametrize("m", range(6))
    def test_bec_edge_case(self, m):
        w = make_bec(F(2, 5))
        assert delta_closed_form(w, m) == delta_m(w, m)
        assert nabla_closed_form(w, m) == nabla_m(w, m)

    def test_open_interval_required(self):
        with pytest.raises(ChannelError):
            delta_multinomial_form(make_bec(F(1, 3)), 2)

    def test_half_part_required(self):
        with pytest.raises(ChannelError):
            nabla_with_half_form(make_bsc(F(1, 4)), 2)


class TestSpecialPatterns:
    @pytest.mark.parametrize("eps", [F(1, 4), F(1, 3)])
    @pytest.mark.parametrize("kind", all_closed_form_kinds(), ids=lambda k: f"{k.tag}{k.params}")
    def test_matches_iterated(self, kind, eps):
        assert closed_form_special(eps, kind) == transform_by_pattern(make_bsc(eps), kind.pattern())

    def test_patterns(self):
        assert str(ClosedFormKind.all_zeros(2).pattern()) == "00"
        assert str(ClosedFormKind.zeros_then_ones(1, 2).pattern()) == "011"
        assert str(ClosedFormKind.zero_one_block(1, 0, 2).pattern()) == "0111"
        assert str(ClosedFormKind.zero_one_zero_block(0, 1, 1).pattern()) == "1010"
        assert str(ClosedFormKind.zero_one_zero_one_block(0, 0, 0).pattern()) == "111"

    @pytest.mark.parametrize(
        "tag,params",
        [("nope", (1,)), ("all_zeros", (1, 2)), ("zero_one_block", (1, -1, 0)), ("zeros_then_ones", (1, 0))],
    )
    def test_kind_validation(self, tag, params):
        with pytest.raises(ValueError):
            ClosedFormKind(tag, params)

    @pytest.mark.parametrize("eps", [F(0), HALF, F(3, 4)])
    def test_eps_range(self, eps):
        with pytest.raises(ChannelError):
            closed_form_special(eps, ClosedFormKind.all_zeros(1))

    def test_coefficients_sum(self):
        a, bs, betas = zero_one_zero_coefficients(F(1, 4), 1, 1, 1)
        assert a + sum(bs) == 1
        assert len(bs) == len(betas) == 3

    @settings(max_examples=15, deadline=None)
    @given(crossovers(max_den=9, open_interval=True), st.integers(0, 2), st.integers(1, 2))
    def test_zeros_then_ones_random_eps(self, eps, l, ones):
        kind = ClosedFormKind.zeros_then_ones(l, ones)
        assert closed_form_special(eps, kind) == transform_by_pattern(make_bsc(eps), kind.pattern())
