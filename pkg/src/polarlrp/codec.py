"""Polar encoder, SC decoder, channel sampler and Monte-Carlo harness.

Indices ``delta`` and ``alpha`` are bit strings of length ``k`` and arrays are
ordered by their binary value ``b(.)``.  The generator has a one in row
``delta``, column ``alpha`` iff ``delta`` lies in ``S(alpha)``, i.e. iff the
bit-reversal of ``alpha`` is a sub-mask of ``delta``.  Hence
``x = u G_k`` is ``u F^(x)k`` followed by a bit-reversal of the positions,
where ``F = [[1, 0], [1, 1]]``.

Under SC decoding in ascending ``b(delta)`` the bit ``u_delta`` sees the
synthetic channel ``A_delta(W)`` (leftmost bit applied first);
:func:`index_correspondence` re-derives this by exact enumeration.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .algebra import PatternIndex, transform_general_by_pattern
from .channels import (
    BscMixture,
    Lrp,
    TransitionMatrix,
    lrp_from_matrix,
)
from .construction import FrozenPlan

MAX_GENERATOR_ORDER = 12
LLR_SATURATION = 40.0
_CHUNK = 4096


def bit_reverse_permutation(k: int) -> np.ndarray:
    idx = np.arange(2**k)
    rev = np.zeros_like(idx)
    for i in range(k):
        rev |= ((idx >> i) & 1) << (k - 1 - i)
    return rev


@dataclass(frozen=True)
class GeneratorMatrix:
    order_k: int
    bits: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return 2**self.order_k

    def rows_as_lists(self) -> list[list[int]]:
        return self.bits.astype(int).tolist()


def build_generator(k: int) -> GeneratorMatrix:
    """``G_k`` with entry ``(delta, alpha) = 1`` iff ``delta`` is in ``S(alpha)``."""
    if not 1 <= k <= MAX_GENERATOR_ORDER:
        raise ValueError(f"generator order must lie in [1, {MAX_GENERATOR_ORDER}], got {k}")
    n = 2**k
    delta = np.arange(n)[:, None]
    rev_alpha = bit_reverse_permutation(k)[None, :]
    bits = ((delta & rev_alpha) == rev_alpha).astype(np.uint8)
    bits.setflags(write=False)
    return GeneratorMatrix(k, bits)


def _check_bits(u, n: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.uint8)
    if u.shape[-1] != n:
        raise ValueError(f"expected {n} bits, got {u.shape[-1]}")
    if (u > 1).any():
        raise ValueError("bit vectors must be 0/1")
    return u


def encode_matrix(g: GeneratorMatrix, u) -> np.ndarray:
    """``u G_k`` over GF(2) by direct matrix product."""
    u = _check_bits(u, g.size)
    return ((u.astype(np.int64) @ g.bits.astype(np.int64)) & 1).astype(np.uint8)


def _butterfly(u: np.ndarray) -> np.ndarray:
    """``u F^(x)k`` along the last axis."""
    v = u.copy()
    n = v.shape[-1]
    h = 1
    while h < n:
        w = v.reshape(v.shape[:-1] + (n // (2 * h), 2, h))
        w[..., 0, :] ^= w[..., 1, :]
        h *= 2
    return v


def encode(g: GeneratorMatrix | int, u) -> np.ndarray:
    """Fast ``u G_k``; ``u`` may carry leading batch axes."""
    k = g.order_k if isinstance(g, GeneratorMatrix) else int(g)
    u = _check_bits(u, 2**k)
    return _butterfly(u)[..., bit_reverse_permutation(k)]


# ---------------------------------------------------------------------------
# SC decoding in the LLR domain


def _f(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Side-0 combine ``log((L0 L1 + 1) / (L0 + L1))`` in LLR form."""
    x, y = np.abs(a), np.abs(b)
    mag = np.minimum(x, y) + np.log1p(np.exp(-(x + y))) - np.log1p(np.exp(-np.abs(x - y)))
    # built from |a|, |b| only, so f is exactly odd and symmetric
    return np.sign(a) * np.sign(b) * mag


def _g(a: np.ndarray, b: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Side-1 combine ``L1 L0^(1 - 2 u0)`` in LLR form."""
    out = b + np.where(u.astype(bool), -a, a)
    return np.clip(out, -LLR_SATURATION, LLR_SATURATION)


@dataclass
class _ScState:
    info: np.ndarray
    frozen: np.ndarray
    genie: np.ndarray | None
    u_hat: np.ndarray
    llr: np.ndarray


def _sc(state: _ScState, L: np.ndarray, offset: int) -> np.ndarray:
    n = L.shape[1]
    if n == 1:
        lam = L[:, 0]
        state.llr[:, offset] = lam
        if not state.info[offset]:
            bit = np.broadcast_to(state.frozen[offset], lam.shape).astype(np.uint8)
        elif state.genie is not None:
            bit = state.genie[:, offset]
        else:
            bit = (lam < 0).astype(np.uint8)
        state.u_hat[:, offset] = (lam < 0) if state.info[offset] else bit
        return bit[:, None]
    h = n // 2
    first, second = L[:, :h], L[:, h:]
    ca = _sc(state, _f(first, second), offset)
    cb = _sc(state, _g(first, second, ca), offset + h)
    return np.concatenate([ca ^ cb, cb], axis=1)


def sc_decode_llr(
    plan: FrozenPlan,
    received: np.ndarray,
    frozen_values=None,
    *,
    genie: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray]:
    """Batched SC decoding.

    ``received`` holds channel LLRs ``log(Pr(y|0) / Pr(y|1))`` per physical
    position, shape ``(n,)`` or ``(trials, n)``.  Returns the decisions and the
    LLR each index was decided on.  With ``genie`` (the true ``u``) every
    index is decided against the true earlier bits instead of the estimates.
    """
    k = plan.order_k
    n = 2**k
    L = np.atleast_2d(np.asarray(received, dtype=np.float64))
    if L.shape[1] != n:
        raise ValueError(f"expected {n} likelihoods per frame, got {L.shape[1]}")
    L = np.nan_to_num(L, nan=0.0, posinf=LLR_SATURATION, neginf=-LLR_SATURATION)
    L = np.clip(L, -LLR_SATURATION, LLR_SATURATION)
    frozen = np.zeros(n, np.uint8) if frozen_values is None else _check_bits(frozen_values, n)
    if genie is not None:
        genie = np.atleast_2d(_check_bits(genie, n))
    state = _ScState(
        info=plan.info_mask(),
        frozen=frozen,
        genie=genie,
        u_hat=np.zeros(L.shape, np.uint8),
        llr=np.zeros(L.shape),
    )
    # undo the output bit-reversal so the natural butterfly recursion applies
    _sc(state, L[:, bit_reverse_permutation(k)], 0)
    return state.u_hat, state.llr


def sc_decode(plan: FrozenPlan, received, frozen_values=None) -> np.ndarray:
    """Decode ``u`` in ascending ``b(delta)``; ties (LLR exactly 0) give 0."""
    u_hat, _ = sc_decode_llr(plan, received, frozen_values)
    return u_hat[0] if np.ndim(received) == 1 else u_hat


# ---------------------------------------------------------------------------
# channel sampling


def _llr_of(p0: float, p1: float) -> float:
    if p0 == 0 and p1 == 0:
        return 0.0
    if p1 == 0:
        return LLR_SATURATION
    if p0 == 0:
        return -LLR_SATURATION
    return float(np.clip(np.log(p0) - np.log(p1), -LLR_SATURATION, LLR_SATURATION))


class _Sampler:
    """Maps uniforms to received LLRs for a fixed channel."""

    def __init__(self, kind: BscMixture | TransitionMatrix):
        if isinstance(kind, BscMixture):
            weights = np.array([float(w) for _, w in kind.parts])
            self.cum = np.cumsum(weights)
            self.cum[-1] = 1.0
            eps = [e for e, _ in kind.parts]
            self.flip = np.array([float(e) for e in eps])
            self.mag = np.array([_llr_of(float(1 - e), float(e)) for e in eps])
            self.matrix = None
        elif isinstance(kind, TransitionMatrix):
            self.matrix = kind
            num = kind.num.astype(object)
            self.cum_rows = []
            for x in (0, 1):
                c = np.cumsum([int(v) for v in num[x]])
                self.cum_rows.append(np.array([float(Fraction(int(v), kind.den)) for v in c]))
                self.cum_rows[-1][-1] = 1.0
            self.out_llr = np.array(
                [_llr_of(float(Fraction(int(a), kind.den)), float(Fraction(int(b), kind.den)))
                 for a, b in zip(num[0], num[1])]
            )
        else:
            raise TypeError(f"cannot sample from {type(kind).__name__}")

    def __call__(self, x: np.ndarray, r1: np.ndarray, r2: np.ndarray) -> np.ndarray:
        if self.matrix is None:
            part = np.searchsorted(self.cum, r1, side="right")
            part = np.minimum(part, len(self.cum) - 1)
            flipped = r2 < self.flip[part]
            y = x.astype(bool) ^ flipped
            return np.where(y, -self.mag[part], self.mag[part])
        out = np.empty(x.shape)
        for bit in (0, 1):
            sel = x == bit
            idx = np.searchsorted(self.cum_rows[bit], r1[sel], side="right")
            idx = np.minimum(idx, len(self.cum_rows[bit]) - 1)
            out[sel] = self.out_llr[idx]
        return out


def _trial_uniforms(seed: int, trial: int, n: int) -> np.ndarray:
    """Three uniforms per position from a counter-based stream keyed by ``(seed, trial)``."""
    rng = np.random.Generator(np.random.Philox(key=[seed, trial]))
    return rng.random((3, n))


def simulate_channel(kind: BscMixture | TransitionMatrix, x, seed: int) -> np.ndarray:
    """Sample one channel use per position of ``x`` and return the received LLRs."""
    x = np.asarray(x, dtype=np.uint8)
    n = x.shape[-1]
    r = _trial_uniforms(seed, 0, n)
    return _Sampler(kind)(x, r[1], r[2])


# ---------------------------------------------------------------------------
# Monte Carlo


@dataclass
class SimOutcome:
    """Counts from a Monte-Carlo run.

    In genie-aided mode ``per_index_errors[d]`` counts frames in which index
    ``d`` was decided wrongly given the true earlier bits, and
    ``per_index_ties`` counts frames in which its LLR was exactly zero (an
    erasure for BEC-like channels).  Otherwise ``per_index_errors[d]`` counts
    frames whose first wrong information bit is ``d``.
    """

    trials: int
    per_index_errors: list[int]
    frame_errors: int
    per_index_ties: list[int]
    genie: bool = False

    def __post_init__(self) -> None:
        if any(c < 0 or c > self.trials for c in self.per_index_errors + self.per_index_ties):
            raise ValueError("counts must lie in [0, trials]")
        if not 0 <= self.frame_errors <= self.trials:
            raise ValueError("frame_errors must lie in [0, trials]")

    def merge(self, other: "SimOutcome") -> "SimOutcome":
        return SimOutcome(
            self.trials + other.trials,
            [a + b for a, b in zip(self.per_index_errors, other.per_index_errors)],
            self.frame_errors + other.frame_errors,
            [a + b for a, b in zip(self.per_index_ties, other.per_index_ties)],
            self.genie,
        )

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "frame_errors": self.frame_errors,
            "per_index": list(self.per_index_errors),
            "per_index_ties": list(self.per_index_ties),
            "genie": self.genie,
        }


def _run_chunk(sampler: _Sampler, plan: FrozenPlan, seed: int, start: int, stop: int, genie: bool) -> SimOutcome:
    k = plan.order_k
    n = 2**k
    info = plan.info_mask()
    r = np.stack([_trial_uniforms(seed, t, n) for t in range(start, stop)])
    u = ((r[:, 0] < 0.5) & info).astype(np.uint8)
    x = encode(k, u)
    llr = sampler(x, r[:, 1], r[:, 2])
    u_hat, lam = sc_decode_llr(plan, llr, genie=u if genie else None)
    wrong = (u_hat != u) & info
    ties = (lam == 0) & info
    if genie:
        per_index = wrong.sum(axis=0)
    else:
        any_wrong = wrong.any(axis=1)
        first = np.argmax(wrong, axis=1)
        per_index = np.bincount(first[any_wrong], minlength=n)
    return SimOutcome(
        stop - start,
        [int(c) for c in per_index],
        int(wrong.any(axis=1).sum()),
        [int(c) for c in ties.sum(axis=0)],
        genie,
    )


def monte_carlo_fer(
    w: BscMixture | TransitionMatrix,
    plan: FrozenPlan,
    trials: int,
    seed: int,
    *,
    genie: bool = False,
    threads: int | None = None,
) -> SimOutcome:
    """Encode random information bits, send them through ``w`` and SC-decode.

    Frozen bits are 0.  Trial ``t`` draws from its own stream keyed by
    ``(seed, t)``, so the outcome does not depend on chunking or threads.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    sampler = _Sampler(w)
    bounds = [(s, min(s + _CHUNK, trials)) for s in range(0, trials, _CHUNK)]
    if threads and threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(lambda b: _run_chunk(sampler, plan, seed, *b, genie), bounds))
    else:
        parts = [_run_chunk(sampler, plan, seed, *b, genie) for b in bounds]
    out = parts[0]
    for p in parts[1:]:
        out = out.merge(p)
    return out


# ---------------------------------------------------------------------------
# exact index correspondence


def codeword_likelihoods(w: TransitionMatrix, k: int) -> tuple[np.ndarray, int]:
    """``Pr(y | x = u G_k)`` numerators for every ``u`` and every ``y``.

    Rows are indexed by ``u`` read with ``u_0`` most significant, columns by
    ``y`` with position 0 slowest; the common denominator is returned too.
    """
    n = 2**k
    if w.outputs**n * 2**n > 2**26:
        raise ValueError("enumeration too large")
    us = ((np.arange(2**n)[:, None] >> (n - 1 - np.arange(n))[None, :]) & 1).astype(np.uint8)
    xs = encode(k, us)
    num = w.num.astype(object) if w.den**n >= 2**62 else w.num.astype(np.int64)
    out = np.ones((2**n, 1), dtype=num.dtype)
    for pos in range(n):
        rows = num[xs[:, pos]]
        out = (out[:, :, None] * rows[:, None, :]).reshape(2**n, -1)
    return out, w.den**n


def genie_channel(w: TransitionMatrix, k: int, delta: PatternIndex | str) -> TransitionMatrix:
    """Exact channel ``u_delta -> (y, u_0 .. u_(delta-1))`` with later bits uniform."""
    delta = PatternIndex.parse(delta)
    if len(delta) != k:
        raise ValueError("index length must equal the order")
    n = 2**k
    d = delta.b_value
    joint, den = codeword_likelihoods(w, k)
    # sum over u_(d+1) .. u_(n-1); those later bits are uniform
    block = joint.reshape(2**d, 2, 2 ** (n - d - 1), -1).sum(axis=2)
    rows = np.stack([block[:, 0, :].reshape(-1), block[:, 1, :].reshape(-1)])
    return TransitionMatrix(rows, den * 2 ** (n - 1)).reduced()


def index_correspondence(w: TransitionMatrix, k: int) -> dict[str, list[str]]:
    """For each SC position ``delta``, the patterns ``alpha`` whose algebraic
    channel ``A_alpha(W)`` has exactly the same LRP as the genie channel."""
    base = lrp_from_matrix(w)
    algebraic: dict[str, Lrp] = {
        str(a): transform_general_by_pattern(base, a) for a in PatternIndex.all_of_length(k)
    }
    out = {}
    for delta in PatternIndex.all_of_length(k):
        got = lrp_from_matrix(genie_channel(w, k, delta))
        out[str(delta)] = [a for a, lrp in algebraic.items() if lrp == got]
    return out


def binomial_sigma(p: float, trials: int) -> float:
    return float(np.sqrt(p * (1 - p) / trials))


def union_bound(error_probs: Sequence[Fraction]) -> Fraction:
    return sum(error_probs, Fraction(0))
