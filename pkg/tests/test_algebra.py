from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarlrp.algebra import (
    PatternIndex,
    arikan_general,
    arikan_symmetric,
    bec_f_alpha,
    delta_m,
    diamond,
    diamond_power,
    nabla_m,
    star,
    star_power,
    transform_by_pattern,
    transform_general_by_pattern,
)
from polarlrp.channels import (
    ChannelError,
    evaluate_metrics,
    lrp_from_matrix,
    make_b_ab,
    make_bec,
    make_bsc,
    make_mixture,
)
from strategies import crossovers, mixtures, unit_rationals

F = Fraction
HALF = F(1, 2)


class TestStar:
    @given(unit_rationals(), unit_rationals())
    def test_commutative(self, a, b):
        assert star(a, b) == star(b, a)

    @given(unit_rationals(), unit_rationals(), unit_rationals())
    def test_associative(self, a, b, c):
        assert star(star(a, b), c) == star(a, star(b, c))

    @given(unit_rationals())
    def test_identities(self, a):
        assert star(a, 0) == a
        assert star(a, HALF) == HALF
        assert star(a, 1) == 1 - a

    @given(unit_rationals(), unit_rationals())
    def test_stays_in_unit_interval(self, a, b):
        assert 0 <= star(a, b) <= 1

    def test_range_checked(self):
        with pytest.raises(ChannelError):
            star(F(3, 2), F(1, 2))

    @given(crossovers(), st.integers(0, 6))
    def test_power_formula(self, e, a):
        # (1 - (1 - 2e)^a) / 2
        assert star_power(e, a) == (1 - (1 - 2 * e) ** a) / 2


class TestDiamond:
    @given(unit_rationals(), unit_rationals())
    def test_commutative(self, a, b):
        assert diamond(a, b) == diamond(b, a)

    @given(crossovers(open_interval=True), crossovers(open_interval=True), crossovers(open_interval=True))
    def test_associative_on_open_interval(self, a, b, c):
        assert diamond(diamond(a, b), c) == diamond(a, diamond(b, c))

    @given(crossovers(open_interval=True))
    def test_half_is_identity(self, a):
        assert diamond(a, HALF) == a

    @pytest.mark.parametrize("x", [F(0), F(1)])
    def test_degenerate_arguments(self, x):
        assert diamond(x, F(1, 3)) == 0
        assert diamond(F(1, 3), x) == 0

    def test_value(self):
        assert diamond(F(1, 4), F(1, 4)) == F(1, 10)

    @given(crossovers(open_interval=True), st.integers(1, 5))
    def test_power(self, s, a):
        out = HALF
        for _ in range(a):
            out = diamond(out, s)
        assert diamond_power(s, a) == out


class TestPatternIndex:
    def test_parse_and_value(self):
        a = PatternIndex.parse("0110")
        assert a.b_value == 6
        assert str(a) == "0110"
        assert a.runs() == [(0, 1), (1, 2), (0, 1)]

    def test_from_value(self):
        assert str(PatternIndex.from_value(5, 4)) == "0101"
        assert [str(a) for a in PatternIndex.all_of_length(2)] == ["00", "01", "10", "11"]

    @pytest.mark.parametrize("bad", ["012", "ab"])
    def test_rejects(self, bad):
        with pytest.raises(ValueError):
            PatternIndex.parse(bad)

    def test_empty(self):
        assert len(PatternIndex.parse("")) == 0

    @given(st.integers(1, 10).flatmap(lambda k: st.tuples(st.just(k), st.integers(0, 2**k - 1))))
    def test_value_round_trip(self, kv):
        k, v = kv
        assert PatternIndex.from_value(v, k).b_value == v


class TestTransforms:
    def test_bsc_quarter(self):
        assert arikan_symmetric(0, make_bsc(F(1, 4)), make_bsc(F(1, 4))) == make_bsc(F(3, 8))
        a1 = arikan_symmetric(1, make_bsc(F(1, 4)), make_bsc(F(1, 4)))
        assert a1.parts == ((F(1, 10), F(5, 8)), (HALF, F(3, 8)))

    def test_bec(self):
        q = F(1, 3)
        assert arikan_symmetric(0, make_bec(q), make_bec(q)) == make_bec(1 - (1 - q) ** 2)
        assert arikan_symmetric(1, make_bec(q), make_bec(q)) == make_bec(q * q)

    @given(mixtures())
    def test_half_channel_laws(self, w):
        half = make_bsc(HALF)
        assert arikan_symmetric(0, half, w) == half
        assert arikan_symmetric(1, half, w) == w
        assert arikan_symmetric(0, make_bsc(0), w) == w
        assert arikan_symmetric(1, make_bsc(0), w) == make_bsc(0)

    @given(mixtures(), mixtures())
    def test_commutative(self, w0, w1):
        for side in (0, 1):
            assert arikan_symmetric(side, w0, w1) == arikan_symmetric(side, w1, w0)

    @given(mixtures(max_parts=2), mixtures(max_parts=2))
    def test_general_agrees_with_symmetric(self, w0, w1):
        for side in (0, 1):
            assert arikan_general(side, w0.to_lrp(), w1.to_lrp()) == arikan_symmetric(side, w0, w1).to_lrp()

    @settings(max_examples=50)
    @given(mixtures())
    def test_capacity_conservation(self, w):
        a0, a1 = arikan_symmetric(0, w, w), arikan_symmetric(1, w, w)
        total = evaluate_metrics(a0).capacity + evaluate_metrics(a1).capacity
        assert total == pytest.approx(2 * evaluate_metrics(w).capacity, abs=1e-9)

    @given(mixtures())
    def test_a0_degrades_a1_upgrades(self, w):
        c = evaluate_metrics(w).capacity
        assert evaluate_metrics(arikan_symmetric(0, w, w)).capacity <= c + 1e-12
        assert evaluate_metrics(arikan_symmetric(1, w, w)).capacity >= c - 1e-12

    def test_general_on_asymmetric(self):
        base = lrp_from_matrix(make_b_ab(F(1, 8), F(1, 4)))
        for side in (0, 1):
            out = arikan_general(side, base, base)
            assert sum(m for _, m in out.points) == 1

    def test_side_checked(self):
        w = make_bsc(F(1, 4))
        with pytest.raises(ValueError):
            arikan_symmetric(2, w, w)


class TestCompounds:
    @given(mixtures(max_parts=2))
    def test_base_cases(self, w):
        assert delta_m(w, 0) == make_bsc(0)
        assert nabla_m(w, 0) == make_bsc(HALF)
        assert delta_m(w, 1) == w
        assert nabla_m(w, 1) == w

    @settings(max_examples=20)
    @given(mixtures(max_parts=2), st.integers(1, 3))
    def test_runs_of_one_symbol(self, w, k):
        assert transform_by_pattern(w, "0" * k) == delta_m(w, 2**k)
        assert transform_by_pattern(w, "1" * k) == nabla_m(w, 2**k)

    def test_negative_order(self):
        with pytest.raises(ValueError):
            delta_m(make_bsc(F(1, 4)), -1)


class TestPatternOrder:
    def test_leftmost_first(self):
        w = make_bsc(F(1, 4))
        a0 = arikan_symmetric(0, w, w)
        expected = arikan_symmetric(1, a0, a0)
        assert transform_by_pattern(w, "01") == expected
        assert transform_by_pattern(w, "10") != expected

    def test_empty_pattern(self):
        w = make_mixture([(F(1, 5), F(1, 2)), (F(1, 3), F(1, 2))])
        assert transform_by_pattern(w, "") == w
        assert transform_general_by_pattern(w.to_lrp(), "") == w.to_lrp()


class TestBecClosedForm:
    def test_known_value(self):
        assert bec_f_alpha(HALF, "0110") == F(34911, 65536)

    def test_order_three(self):
        got = [bec_f_alpha(HALF, a) for a in PatternIndex.all_of_length(3)]
        assert got == [F(v, 256) for v in (255, 225, 207, 81, 175, 49, 31, 1)]

    def test_empty_pattern(self):
        assert bec_f_alpha(F(2, 7), "") == F(2, 7)

    @settings(max_examples=40)
    @given(unit_rationals(max_den=6), st.integers(0, 5).flatmap(lambda k: st.lists(st.integers(0, 1), min_size=k, max_size=k)))
    def test_matches_transform(self, q, bits):
        alpha = PatternIndex(tuple(bits))
        assert transform_by_pattern(make_bec(q), alpha) == make_bec(bec_f_alpha(q, alpha))
