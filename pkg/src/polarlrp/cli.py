"""Command-line front end.

Channel specs::

    bsc:1/4                 B(1/4)
    bec:1/3                 E(1/3)
    bab:1/8,1/4             B_(a,b): Pr(0|0)=a, Pr(0|1)=b
    mixture:1/8:1/2,1/3:1/2 crossover:weight pairs
    matrix:3/4,1/4;1/4,3/4  rows Pr(y|0);Pr(y|1)
    {"parts": [...]}        JSON mixture (or {"points": [...]} profile)
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from .algebra import PatternIndex, bec_f_alpha, transform_by_pattern, transform_general_by_pattern
from .channels import (
    BscMixture,
    ChannelError,
    Lrp,
    TransitionMatrix,
    bec_matrix,
    bsc_matrix,
    channel_from_json,
    is_symmetric,
    lrp_from_matrix,
    make_b_ab,
    make_bec,
    make_bsc,
    make_mixture,
    mixture_matrix,
    parse_rational,
    to_bsc_mixture,
)
from .checks import SUITES, run_suite
from .codec import monte_carlo_fer
from .construction import (
    ConstructionLimitError,
    metrics_table,
    rows_to_csv,
    rows_to_json,
    select_frozen,
    synthesize_all,
)

KINDS = ("bsc", "bec", "bab", "mixture", "matrix", "json")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class ChannelSpec:
    kind: str
    params: tuple[str, ...]

    @classmethod
    def parse(cls, text: str) -> "ChannelSpec":
        text = text.strip()
        if text.startswith("{"):
            return cls("json", (text,))
        kind, sep, rest = text.partition(":")
        kind = kind.lower()
        if not sep or kind not in KINDS:
            raise ChannelError(f"unrecognised channel spec {text!r}")
        if kind == "matrix":
            params = tuple(rest.split(";"))
        else:
            params = tuple(p for p in rest.split(",") if p)
        spec = cls(kind, params)
        spec.lrp()  # validate eagerly
        return spec

    def _mixture_pairs(self) -> list[tuple[str, str]]:
        pairs = []
        for item in self.params:
            eps, sep, weight = item.partition(":")
            if not sep:
                raise ChannelError(f"mixture part {item!r} must be crossover:weight")
            pairs.append((eps, weight))
        return pairs

    def _single(self) -> str:
        if len(self.params) != 1:
            raise ChannelError(f"{self.kind} takes exactly one parameter")
        return self.params[0]

    def matrix(self) -> TransitionMatrix:
        if self.kind == "bsc":
            return bsc_matrix(self._single())
        if self.kind == "bec":
            return bec_matrix(self._single())
        if self.kind == "bab":
            if len(self.params) != 2:
                raise ChannelError("bab takes two parameters a,b")
            return make_b_ab(*self.params)
        if self.kind == "matrix":
            if len(self.params) != 2:
                raise ChannelError("matrix needs two rows separated by ';'")
            return TransitionMatrix.from_rows([r.split(",") for r in self.params])
        return mixture_matrix(self.mixture())

    def lrp(self) -> Lrp:
        if self.kind in ("bsc", "bec", "mixture"):
            return self.mixture().to_lrp()
        if self.kind == "json":
            ch = channel_from_json(self.params[0])
            return ch if isinstance(ch, Lrp) else ch.to_lrp()
        return lrp_from_matrix(self.matrix())

    @property
    def symmetric(self) -> bool:
        return is_symmetric(self.lrp())

    def mixture(self) -> BscMixture:
        if self.kind == "bsc":
            return make_bsc(self._single())
        if self.kind == "bec":
            return make_bec(self._single())
        if self.kind == "mixture":
            return make_mixture(self._mixture_pairs())
        if self.kind == "json":
            ch = channel_from_json(self.params[0])
            return ch if isinstance(ch, BscMixture) else to_bsc_mixture(ch)
        return to_bsc_mixture(self.lrp())


def _channel_arg(text: str) -> ChannelSpec:
    try:
        return ChannelSpec.parse(text)
    except (ChannelError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _pattern_arg(text: str) -> PatternIndex:
    try:
        return PatternIndex.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _rational_arg(text: str):
    try:
        return parse_rational(text)
    except (ChannelError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _symmetric_mixture(spec: ChannelSpec) -> BscMixture:
    try:
        return spec.mixture()
    except ChannelError as exc:
        raise UsageError(f"this command needs a symmetric channel: {exc}") from None


def _dump(obj) -> str:
    return json.dumps(obj, indent=2)


def cmd_construct(args) -> str:
    table = synthesize_all(
        _symmetric_mixture(args.channel), args.order, max_parts=args.max_parts, workers=args.threads
    )
    rows = metrics_table(table)
    fmt = args.format
    if fmt is None:
        fmt = "json" if args.out and Path(args.out).suffix.lower() == ".json" else "csv"
    text = _dump(rows_to_json(rows)) + "\n" if fmt == "json" else rows_to_csv(rows)
    if args.out:
        Path(args.out).write_text(text)
        return ""
    return text


def cmd_frozen(args) -> str:
    table = synthesize_all(_symmetric_mixture(args.channel), args.order, max_parts=args.max_parts)
    if not 0 <= args.dimension <= 2**args.order:
        raise UsageError(f"--dimension must lie in [0, {2**args.order}]")
    return _dump(select_frozen(table, args.dimension).to_json()) + "\n"


def cmd_transform(args) -> str:
    spec: ChannelSpec = args.channel
    if spec.symmetric:
        out = transform_by_pattern(spec.mixture(), args.pattern)
    else:
        out = transform_general_by_pattern(spec.lrp(), args.pattern)
    return _dump(out.to_json()) + "\n"


def cmd_verify(args) -> tuple[str, int]:
    suites = SUITES if args.suite == "all" else (args.suite,)
    lines, passed, failed = [], 0, 0
    for s in suites:
        for r in run_suite(s, seed=args.seed):
            lines.append(r.line())
            passed += r.ok
            failed += not r.ok
    lines.append(f"{'FAILED' if failed else 'OK'}: {passed} passed, {failed} failed")
    return "\n".join(lines) + "\n", 1 if failed else 0


def cmd_simulate(args) -> str:
    spec: ChannelSpec = args.channel
    mixture = _symmetric_mixture(spec)
    if not 0 <= args.dimension <= 2**args.order:
        raise UsageError(f"--dimension must lie in [0, {2**args.order}]")
    if args.trials < 1:
        raise UsageError("--trials must be at least 1")
    table = synthesize_all(mixture, args.order, max_parts=args.max_parts)
    plan = select_frozen(table, args.dimension)
    channel = mixture if spec.kind in ("bsc", "bec", "mixture", "json") else spec.matrix()
    outcome = monte_carlo_fer(channel, plan, args.trials, args.seed, genie=args.genie, threads=args.threads)
    return _dump(outcome.to_json()) + "\n"


def cmd_bec_profile(args) -> str:
    if not 0 <= args.q <= 1:
        raise UsageError("--q must lie in [0, 1]")
    if not 1 <= args.order <= 16:
        raise UsageError("--order must lie in [1, 16]")
    rows = [
        {"alpha": str(a), "b_alpha": a.b_value, "erasure": str(bec_f_alpha(args.q, a))}
        for a in PatternIndex.all_of_length(args.order)
    ]
    return _dump({"q": str(args.q), "order": args.order, "rows": rows}) + "\n"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="polarlrp", description="Exact polar synthetic-channel toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def channel_opts(sp, order=True):
        sp.add_argument("--channel", type=_channel_arg, required=True)
        if order:
            sp.add_argument("--order", type=int, required=True)
            sp.add_argument("--max-parts", type=int, default=None,
                            help="abort if any mixture needs more BSC parts")

    sp = sub.add_parser("construct", help="all synthetic channels of an order")
    channel_opts(sp)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"))
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("frozen", help="information/frozen split as JSON")
    channel_opts(sp)
    sp.add_argument("--dimension", type=int, required=True)
    sp.set_defaults(func=cmd_frozen)

    sp = sub.add_parser("transform", help="A_alpha of a single channel")
    channel_opts(sp, order=False)
    sp.add_argument("--pattern", type=_pattern_arg, required=True)
    sp.set_defaults(func=cmd_transform)

    sp = sub.add_parser("verify", help="run invariant suites")
    sp.add_argument("--suite", choices=(*SUITES, "all"), default="all")
    sp.add_argument("--seed", type=int, default=0)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("simulate", help="Monte-Carlo SC decoding")
    channel_opts(sp)
    sp.add_argument("--dimension", type=int, required=True)
    sp.add_argument("--trials", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--genie", action="store_true")
    sp.add_argument("--threads", type=int, default=None)
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("bec-profile", help="exact erasure probabilities of A_alpha(E(q))")
    sp.add_argument("--q", type=_rational_arg, required=True)
    sp.add_argument("--order", type=int, required=True)
    sp.set_defaults(func=cmd_bec_profile)
    return p


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result = args.func(args)
    except (UsageError, ConstructionLimitError, ChannelError) as exc:
        print(f"polarlrp {args.command}: error: {exc}", file=sys.stderr)
        return 2
    code = 0
    if isinstance(result, tuple):
        result, code = result
    sys.stdout.write(result)
    return code


def main() -> None:
    sys.exit(run())
