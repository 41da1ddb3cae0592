"""Level-wise synthesis of polar synthetic channels and the explicit oracle."""

from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from .algebra import PatternIndex, PatternLike, arikan_symmetric
from .channels import BscMixture, Metrics, TransitionMatrix, evaluate_metrics

MAX_ORDER = 16
MAX_ORACLE_DEPTH = 3


class ConstructionLimitError(RuntimeError):
    """The requested construction exceeds a configured size budget."""


@dataclass(frozen=True)
class MetricsRow:
    alpha: PatternIndex
    mixture: BscMixture
    metrics: Metrics
    phi: int

    @classmethod
    def from_mixture(cls, alpha: PatternIndex, mixture: BscMixture) -> "MetricsRow":
        return cls(alpha, mixture, evaluate_metrics(mixture), len(mixture.parts))


@dataclass(frozen=True)
class SynthesisTable:
    """All ``2^k`` synthetic channels of order ``k``, ascending in ``b(alpha)``."""

    order_k: int
    channel: BscMixture
    mixtures: tuple[BscMixture, ...] = field(repr=False)

    @cached_property
    def rows(self) -> list[MetricsRow]:
        return [
            MetricsRow.from_mixture(PatternIndex.from_value(v, self.order_k), mix)
            for v, mix in enumerate(self.mixtures)
        ]

    def mixture(self, alpha: PatternLike) -> BscMixture:
        alpha = PatternIndex.parse(alpha)
        if len(alpha) != self.order_k:
            raise ValueError(f"pattern length {len(alpha)} != order {self.order_k}")
        return self.mixtures[alpha.b_value]


def _children(w: BscMixture) -> tuple[BscMixture, BscMixture]:
    return arikan_symmetric(0, w, w), arikan_symmetric(1, w, w)


def synthesize_all(
    w: BscMixture,
    k: int,
    *,
    max_order: int = MAX_ORDER,
    max_parts: int | None = None,
    workers: int | None = None,
) -> SynthesisTable:
    """Build ``A_alpha(W)`` for every ``alpha`` of length ``k``.

    Level ``m + 1`` is obtained from the ``2^m`` level-``m`` channels, one
    representative each, by applying both transforms.  ``max_parts`` aborts
    with :class:`ConstructionLimitError` once any mixture grows past it.
    """
    if not 1 <= k <= max_order:
        raise ConstructionLimitError(f"order k={k} outside [1, {max_order}]")
    level: list[BscMixture] = [w]
    pool = ProcessPoolExecutor(workers) if workers and workers > 1 else None
    try:
        for _ in range(k):
            if pool is not None:
                pairs = list(pool.map(_children, level, chunksize=max(1, len(level) // (4 * workers))))
            else:
                pairs = [_children(c) for c in level]
            level = [c for pair in pairs for c in pair]
            if max_parts is not None:
                worst = max(len(c.parts) for c in level)
                if worst > max_parts:
                    raise ConstructionLimitError(
                        f"a synthetic channel needs {worst} BSC parts (cap {max_parts})"
                    )
    finally:
        if pool is not None:
            pool.shutdown()
    return SynthesisTable(k, w, tuple(level))


def metrics_table(t: SynthesisTable) -> list[MetricsRow]:
    return t.rows


@dataclass(frozen=True)
class FrozenPlan:
    order_k: int
    info_set: frozenset[PatternIndex]
    frozen_set: frozenset[PatternIndex]

    def __post_init__(self) -> None:
        if self.info_set & self.frozen_set:
            raise ValueError("information and frozen sets overlap")
        if len(self.info_set) + len(self.frozen_set) != 2**self.order_k:
            raise ValueError("information and frozen sets must cover every index")

    @property
    def dimension(self) -> int:
        return len(self.info_set)

    def info_mask(self) -> np.ndarray:
        """Boolean mask over indices ordered by ``b(alpha)``."""
        mask = np.zeros(2**self.order_k, dtype=bool)
        mask[[a.b_value for a in self.info_set]] = True
        return mask

    def to_json(self) -> dict:
        key = lambda a: a.b_value  # noqa: E731
        return {
            "order": self.order_k,
            "dimension": self.dimension,
            "info_set": [str(a) for a in sorted(self.info_set, key=key)],
            "frozen_set": [str(a) for a in sorted(self.frozen_set, key=key)],
        }


def select_frozen(t: SynthesisTable, dimension: int) -> FrozenPlan:
    """Keep the ``dimension`` most reliable indices (smallest error probability).

    Equal error probabilities are resolved towards the smaller ``b(alpha)``.
    """
    n = 2**t.order_k
    if not 0 <= dimension <= n:
        raise ValueError(f"dimension must lie in [0, {n}]")
    ranked = sorted(t.rows, key=lambda r: (r.metrics.error_prob, r.alpha.b_value))
    info = frozenset(r.alpha for r in ranked[:dimension])
    frozen = frozenset(r.alpha for r in ranked[dimension:])
    return FrozenPlan(t.order_k, info, frozen)


# ---------------------------------------------------------------------------
# CSV / JSON output


def _g17(x: float) -> str:
    return format(x, ".17g")


def rows_to_csv(rows: Sequence[MetricsRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["alpha", "b_alpha", "capacity", "error_prob", "bhattacharyya", "phi"])
    for r in rows:
        writer.writerow([
            str(r.alpha),
            r.alpha.b_value,
            _g17(r.metrics.capacity),
            str(r.metrics.error_prob),
            _g17(r.metrics.bhattacharyya),
            r.phi,
        ])
    return buf.getvalue()


def rows_to_json(rows: Sequence[MetricsRow], *, with_mixtures: bool = True) -> list[dict]:
    out = []
    for r in rows:
        item = {
            "alpha": str(r.alpha),
            "b_alpha": r.alpha.b_value,
            "capacity": float(_g17(r.metrics.capacity)),
            "error_prob": str(r.metrics.error_prob),
            "bhattacharyya": float(_g17(r.metrics.bhattacharyya)),
            "phi": r.phi,
        }
        if with_mixtures:
            item["mixture"] = r.mixture.to_json()
        out.append(item)
    return out


# ---------------------------------------------------------------------------
# explicit joint-output oracle


def joint_channel(side: int, t0: TransitionMatrix, t1: TransitionMatrix) -> TransitionMatrix:
    """Explicit matrix of ``A_side(W0, W1)``.

    Side 0 has outputs ``(y0, y1)`` and
    ``Pr(y0, y1 | u0) = 1/2 sum_u1 W0(y0 | u0+u1) W1(y1 | u1)``; side 1 has
    outputs ``(y0, y1, u0)`` and ``Pr(y0, y1, u0 | u1) = 1/2 W0(y0 | u0+u1) W1(y1 | u1)``.
    Outputs are enumerated with ``y0`` slowest.
    """
    a, b = t0.num, t1.num
    den = 2 * t0.den * t1.den
    if a.dtype == object or b.dtype == object or den >= 2**62:
        a, b = a.astype(object), b.astype(object)

    def outer(x, y):
        return np.multiply.outer(x, y).reshape(-1)

    if side == 0:
        rows = [outer(a[u0], b[0]) + outer(a[1 - u0], b[1]) for u0 in (0, 1)]
    elif side == 1:
        rows = []
        for u1 in (0, 1):
            block = np.stack([np.multiply.outer(a[u0 ^ u1], b[u1]) for u0 in (0, 1)], axis=-1)
            rows.append(block.reshape(-1))
    else:
        raise ValueError("side must be 0 or 1")
    return TransitionMatrix(np.stack(rows), den)


def oracle_output_count(outputs: int, alpha: PatternLike) -> int:
    alpha = PatternIndex.parse(alpha)
    return 2**alpha.b_value * outputs ** (2 ** len(alpha))


def oracle_channel(w: TransitionMatrix, alpha: PatternLike) -> TransitionMatrix:
    """``A_alpha(W)`` built output by output; ``|alpha| <= 3``."""
    alpha = PatternIndex.parse(alpha)
    if len(alpha) > MAX_ORACLE_DEPTH:
        raise ConstructionLimitError(
            f"oracle depth {len(alpha)} exceeds {MAX_ORACLE_DEPTH}: output alphabet is doubly exponential"
        )
    t = w
    for bit in alpha.bits:
        t = joint_channel(bit, t, t).reduced()
    return t


def capacity_sum(rows: Sequence[MetricsRow]) -> float:
    return float(np.sum([r.metrics.capacity for r in rows], dtype=np.float64))


def erasure_probabilities(t: SynthesisTable) -> list[Fraction]:
    """Weight of the B(1/2) part of every row (the erasure probability of a BEC)."""
    out = []
    for mix in t.mixtures:
        out.append(dict(mix.parts).get(Fraction(1, 2), Fraction(0)))
    return out
