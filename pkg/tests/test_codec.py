from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polarlrp.algebra import PatternIndex
from polarlrp.channels import bec_matrix, bsc_matrix, lrp_from_matrix, make_b_ab, make_bec, make_bsc, make_mixture
from polarlrp.codec import (
    LLR_SATURATION,
    SimOutcome,
    _f,
    _g,
    binomial_sigma,
    bit_reverse_permutation,
    build_generator,
    encode,
    encode_matrix,
    genie_channel,
    index_correspondence,
    monte_carlo_fer,
    sc_decode,
    sc_decode_llr,
    simulate_channel,
)
from polarlrp.construction import FrozenPlan, select_frozen, synthesize_all

F = Fraction
HALF = F(1, 2)


def full_plan(k):
    every = frozenset(PatternIndex.all_of_length(k))
    return FrozenPlan(k, every, frozenset())


class TestGenerator:
    def test_printed_matrices(self):
        assert build_generator(1).rows_as_lists() == [[1, 0], [1, 1]]
        assert build_generator(2).rows_as_lists() == [[1, 0, 0, 0], [1, 0, 1, 0], [1, 1, 0, 0], [1, 1, 1, 1]]
        g3 = build_generator(3).rows_as_lists()
        assert g3[1] == [1, 0, 0, 0, 1, 0, 0, 0]
        assert g3[5] == [1, 1, 0, 0, 1, 1, 0, 0]
        assert g3[7] == [1] * 8

    def test_membership_rule(self):
        # delta=0101 lies in S(alpha) iff alpha reversed is a sub-mask of 0101
        g = build_generator(4)
        cols = [str(PatternIndex.from_value(a, 4)) for a in range(16) if g.bits[0b0101, a]]
        assert cols == ["0000", "0010", "1000", "1010"]

    @pytest.mark.parametrize("k", [0, 13])
    def test_order_range(self, k):
        with pytest.raises(ValueError):
            build_generator(k)

    @pytest.mark.parametrize("k", range(1, 9))
    def test_invertible(self, k):
        g = build_generator(k)
        m = g.bits.astype(np.uint8).copy()
        n = g.size
        rank = 0
        for col in range(n):
            pivot = next((r for r in range(rank, n) if m[r, col]), None)
            if pivot is None:
                continue
            m[[rank, pivot]] = m[[pivot, rank]]
            for r in range(n):
                if r != rank and m[r, col]:
                    m[r] ^= m[rank]
            rank += 1
        assert rank == n

    def test_involution(self):
        # F^(x)k is its own inverse over GF(2); so is the bit reversal
        g = build_generator(4).bits.astype(int)
        rev = bit_reverse_permutation(4)
        assert ((g[:, rev] @ g[:, rev]) % 2 == np.eye(16, dtype=int)).all()


class TestEncode:
    @pytest.mark.parametrize("k", range(1, 7))
    def test_fast_equals_matrix(self, k):
        rng = np.random.default_rng(k)
        g = build_generator(k)
        u = rng.integers(0, 2, (100, 2**k))
        assert (encode(g, u) == encode_matrix(g, u)).all()

    def test_examples(self):
        g3 = build_generator(3)
        assert encode(g3, [0] * 7 + [1]).tolist() == [1] * 8
        assert encode(g3, [0] * 8).tolist() == [0] * 8
        assert encode(2, [1, 0, 0, 0]).tolist() == [1, 0, 0, 0]

    def test_bijection(self):
        us = ((np.arange(256)[:, None] >> np.arange(8)) & 1).astype(np.uint8)
        xs = encode(3, us)
        assert len({tuple(x) for x in xs}) == 256

    def test_length_checked(self):
        with pytest.raises(ValueError):
            encode(2, [0, 1, 0])
        with pytest.raises(ValueError):
            encode_matrix(build_generator(1), [2, 0])

    @given(st.integers(1, 6).flatmap(lambda k: st.tuples(st.just(k), st.lists(st.integers(0, 1), min_size=2**k, max_size=2**k), st.lists(st.integers(0, 1), min_size=2**k, max_size=2**k))))
    def test_linear(self, case):
        k, a, b = case
        a, b = np.array(a, np.uint8), np.array(b, np.uint8)
        assert (encode(k, a ^ b) == encode(k, a) ^ encode(k, b)).all()


class TestKernels:
    @given(st.floats(-12, 12), st.floats(-12, 12))
    def test_f_matches_tanh_rule(self, a, b):
        exact = 2 * np.arctanh(np.tanh(a / 2) * np.tanh(b / 2))
        assert _f(np.array(a), np.array(b)) == pytest.approx(exact, abs=1e-9)

    @given(st.floats(-40, 40), st.floats(-40, 40))
    def test_f_symmetries(self, a, b):
        a, b = np.array(a), np.array(b)
        assert _f(a, b) == _f(b, a)
        assert _f(-a, b) == -_f(a, b)
        assert _f(np.array(0.0), b) == 0.0

    def test_g(self):
        a, b = np.array([1.5, 1.5]), np.array([0.5, 0.5])
        assert _g(a, b, np.array([0, 1])).tolist() == [2.0, -1.0]
        assert _g(np.array([40.0]), np.array([40.0]), np.array([0]))[0] == LLR_SATURATION


class TestScDecode:
    @pytest.mark.parametrize("k", range(1, 9))
    def test_noiseless_recovery(self, k):
        rng = np.random.default_rng(k)
        plan = full_plan(k)
        u = rng.integers(0, 2, (20, 2**k)).astype(np.uint8)
        x = encode(k, u)
        llr = np.where(x == 1, -LLR_SATURATION, LLR_SATURATION)
        assert (sc_decode(plan, llr) == u).all()

    def test_single_frame_shape(self):
        plan = full_plan(2)
        x = encode(2, [1, 0, 1, 1])
        assert sc_decode(plan, np.where(x == 1, -5.0, 5.0)).tolist() == [1, 0, 1, 1]

    def test_bec_without_erasures_in_relevant_positions(self):
        # frozen 000..; erasing a single position still leaves the info bit recoverable
        plan = select_frozen(synthesize_all(make_bec(HALF), 2), 1)
        x = encode(2, [0, 0, 0, 1])
        llr = np.where(x == 1, -LLR_SATURATION, LLR_SATURATION).astype(float)
        llr[0] = 0.0
        assert sc_decode(plan, llr).tolist() == [0, 0, 0, 1]

    def test_ties_decode_to_zero(self):
        plan = full_plan(1)
        assert sc_decode(plan, [0.0, 0.0]).tolist() == [0, 0]

    def test_frozen_values_respected(self):
        plan = select_frozen(synthesize_all(make_bec(HALF), 2), 2)
        u = np.array([1, 0, 1, 1], np.uint8)
        x = encode(2, u)
        llr = np.where(x == 1, -9.0, 9.0)
        assert sc_decode(plan, llr, frozen_values=[1, 0, 0, 0])[0] == 1

    def test_nonfinite_inputs_saturate(self):
        plan = full_plan(1)
        assert sc_decode(plan, [np.inf, -np.inf]).tolist() == [1, 1]

    def test_length_checked(self):
        with pytest.raises(ValueError):
            sc_decode(full_plan(2), [1.0, 2.0])

    def test_genie_uses_true_bits(self):
        plan = full_plan(1)
        _, lam = sc_decode_llr(plan, [[3.0, 3.0]], genie=np.array([[1, 0]]))
        assert lam[0, 1] == pytest.approx(0.0)


class TestSimulateChannel:
    def test_noiseless(self):
        x = np.array([0, 1, 1, 0] * 4, np.uint8)
        llr = simulate_channel(make_bsc(0), x, seed=1)
        assert (llr == np.where(x == 1, -LLR_SATURATION, LLR_SATURATION)).all()

    def test_full_erasure(self):
        assert (simulate_channel(make_bec(1), np.ones(32, np.uint8), seed=3) == 0).all()

    def test_flip_rate(self):
        n = 10**6
        llr = simulate_channel(make_bsc(F(1, 4)), np.zeros(n, np.uint8), seed=11)
        rate = float((llr < 0).mean())
        assert abs(rate - 0.25) <= 3 * binomial_sigma(0.25, n)
        assert set(np.unique(np.abs(llr)).round(12)) == {round(np.log(3), 12)}

    def test_matrix_channel(self):
        m = make_b_ab(F(1, 8), F(1, 4))
        n = 10**5
        llr = simulate_channel(m, np.zeros(n, np.uint8), seed=5)
        # output 0 (posterior 1/3) occurs with probability 1/8 under x=0
        rate = float((llr < 0).mean())
        assert abs(rate - 1 / 8) <= 4 * binomial_sigma(1 / 8, n)

    def test_deterministic(self):
        x = np.zeros(64, np.uint8)
        a = simulate_channel(make_bsc(F(1, 3)), x, seed=9)
        b = simulate_channel(make_bsc(F(1, 3)), x, seed=9)
        assert (a == b).all()

    def test_unknown_kind(self):
        with pytest.raises(TypeError):
            simulate_channel("bsc", [0], seed=1)


class TestMonteCarlo:
    def test_noiseless_no_errors(self):
        plan = select_frozen(synthesize_all(make_bsc(0), 4), 8)
        out = monte_carlo_fer(make_bsc(0), plan, 500, seed=1)
        assert out.frame_errors == 0 and sum(out.per_index_errors) == 0

    def test_deterministic_and_chunk_independent(self):
        w = make_bsc(F(1, 5))
        plan = select_frozen(synthesize_all(w, 3), 4)
        a = monte_carlo_fer(w, plan, 5000, seed=4)
        b = monte_carlo_fer(w, plan, 5000, seed=4, threads=3)
        assert a == b
        c = monte_carlo_fer(w, plan, 5000, seed=5)
        assert c != a

    def test_counts_bounded(self):
        with pytest.raises(ValueError):
            SimOutcome(3, [4, 0], 0, [0, 0])
        with pytest.raises(ValueError):
            monte_carlo_fer(make_bsc(0), full_plan(1), 0, seed=1)

    def test_json_shape(self):
        out = monte_carlo_fer(make_bec(HALF), full_plan(1), 100, seed=2, genie=True)
        data = out.to_json()
        assert set(data) >= {"trials", "frame_errors", "per_index"}
        assert data["trials"] == 100 and len(data["per_index"]) == 2

    def test_genie_rates_match_exact_table(self):
        w = make_bec(HALF)
        t = synthesize_all(w, 2)
        trials = 20000
        out = monte_carlo_fer(w, select_frozen(t, 4), trials, seed=3, genie=True)
        for row, errs, ties in zip(t.rows, out.per_index_errors, out.per_index_ties):
            p = float(row.metrics.error_prob)
            assert abs(errs / trials - p) <= 4 * binomial_sigma(p, trials)
            q = float(2 * row.metrics.error_prob)
            assert abs(ties / trials - q) <= 4 * binomial_sigma(q, trials)

    def test_matrix_channel_simulation(self):
        p = F(1, 5)
        m = bsc_matrix(p)
        w = make_bsc(p)
        plan = select_frozen(synthesize_all(w, 3), 4)
        a = monte_carlo_fer(m, plan, 4000, seed=8)
        assert 0 < a.frame_errors < a.trials


class TestIndexCorrespondence:
    @pytest.mark.parametrize(
        "m",
        [bsc_matrix(F(1, 4)), bec_matrix(F(1, 2)), make_b_ab(F(1, 8), F(1, 4))],
        ids=["bsc", "bec", "bab"],
    )
    @pytest.mark.parametrize("k", [1, 2, 3])
    def test_identity(self, m, k):
        corr = index_correspondence(m, k)
        assert all(alphas == [delta] for delta, alphas in corr.items())

    def test_genie_channel_is_the_synthetic_channel(self):
        m = bsc_matrix(F(1, 4))
        g = genie_channel(m, 1, "1")
        assert lrp_from_matrix(g) == make_mixture([(F(1, 10), F(5, 8)), (HALF, F(3, 8))]).to_lrp()

    def test_enumeration_limit(self):
        with pytest.raises(ValueError):
            genie_channel(bec_matrix(HALF), 4, "0000")
