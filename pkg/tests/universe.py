"""Pair universes for parser/oracle agreement sweeps.

A literal sweep of every pair with |w1| + |w2| <= 16 is ~10^10 pairs, so the
universe is: all short pairs exhaustively, every derivable pair within the
length bound, and near misses of those (single edits, swaps, cross pairs).
"""

from __future__ import annotations

import itertools
from pathlib import Path

from scfgstrat import SentencePair, compile_strategies, enumerate_translations, parse_grammar, recognize
from scfgstrat.grammar import pair_membership_oracle

FIXTURES = Path(__file__).with_name("fixtures")
MAX_TOTAL = 16


def load(name: str):
    return parse_grammar((FIXTURES / f"{name}.scfg").read_text(encoding="utf-8"))


def _words(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def _exhaustive_total(alphabet: int) -> int:
    return 6 if alphabet <= 4 else 4


def _edits(w: tuple[str, ...], alphabet) -> set[tuple[str, ...]]:
    out = set()
    for i in range(len(w)):
        out.add(w[:i] + w[i + 1 :])
        for a in alphabet:
            out.add(w[:i] + (a,) + w[i + 1 :])
    for i in range(len(w) - 1):
        out.add(w[:i] + (w[i + 1], w[i]) + w[i + 2 :])
    return out


def positives(g, max_total: int = MAX_TOTAL) -> set[SentencePair]:
    return enumerate_translations(g, max_steps=4 * max_total, max_total_length=max_total)


def universe(g, max_total: int = MAX_TOTAL, exhaustive: int | None = None) -> set[SentencePair]:
    left = sorted({t for r in g.rules for t in r.left_rhs if isinstance(t, str)})
    right = sorted({t for r in g.rules for t in r.right_rhs if isinstance(t, str)})
    pairs: set[SentencePair] = set()
    n = exhaustive if exhaustive is not None else _exhaustive_total(max(len(left), len(right)))
    for w1 in _words(left, n):
        for w2 in _words(right, n - len(w1)):
            pairs.add(SentencePair(w1, w2))
    pos = positives(g, max_total)
    pairs |= pos
    for p in pos:
        for w1 in _edits(p.w1, left):
            pairs.add(SentencePair(w1, p.w2))
        for w2 in _edits(p.w2, right):
            pairs.add(SentencePair(p.w1, w2))
    firsts = {p.w1 for p in pos}
    seconds = {p.w2 for p in pos}
    for w1 in firsts:
        for w2 in seconds:
            pairs.add(SentencePair(w1, w2))
    return {p for p in pairs if len(p.w1) + len(p.w2) <= max_total}


def agreement(g, pairs, objective="space"):
    """(disagreements, arity_violations, accepted) of the chart parser vs the oracle."""
    strategies = compile_strategies(g, objective)
    bad, violations, accepted = [], 0, 0
    for p in sorted(pairs, key=lambda q: (len(q.w1) + len(q.w2), q.w1, q.w2)):
        ok, stats = recognize(g, strategies, p)
        violations += stats.arity_violations
        accepted += ok
        if ok != pair_membership_oracle(g, p):
            bad.append(p)
    return bad, violations, accepted
