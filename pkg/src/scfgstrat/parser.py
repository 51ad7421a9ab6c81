"""Bottom-up recognition of sentence pairs driven by per-rule linear strategies.

A chart item is a linked nonterminal pair with one span in each string.  For a
rule with permutation π and strategy σ, the state after step k keeps only the
boundaries of the maximal runs of collected positions: left runs in w1 first,
then right runs in w2, each as a ``(start, end)`` pair.  Boundaries shared by
adjacent runs are dropped as soon as the runs merge, so a state has exactly
2·fo(π, σ, k) integers.  Terminal runs between nonterminals are matched when
the two runs flanking them merge; the outer terminal runs of a component are
matched when its first or last position is collected.
"""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field
from typing import Mapping, NamedTuple

from .grammar import SCFG, InfiniteAmbiguity, SentencePair, SynchronousRule, rule_permutation
from .strategy import (
    DEFAULT_SIZE_LIMIT, SPACE, TIME, LinearStrategy, Permutation, SizeLimitExceeded, fan_out, optimize_space,
    optimize_time,
)


class UnknownSymbol(ValueError):
    pass


class ChartItem(NamedTuple):
    left: str
    right: str
    i1: int
    j1: int
    i2: int
    j2: int


@dataclass(frozen=True)
class ParseState:
    rule: str
    step: int
    left_spans: tuple[tuple[int, int], ...]
    right_spans: tuple[tuple[int, int], ...]

    @property
    def arity(self) -> int:
        return 2 * (len(self.left_spans) + len(self.right_spans))


@dataclass
class ParseStats:
    state_counts: dict[tuple[str, int], int] = field(default_factory=dict)
    peak_arity: int = 0
    combinations: int = 0
    items: int = 0
    arity_violations: int = 0

    @property
    def peak_states(self) -> int:
        return max(self.state_counts.values(), default=0)

    def to_dict(self) -> dict:
        return {
            "items": self.items,
            "combinations": self.combinations,
            "peak_arity": self.peak_arity,
            "arity_violations": self.arity_violations,
            "states": [
                {"rule": rule, "step": k, "count": c} for (rule, k), c in sorted(self.state_counts.items())
            ],
        }


def compile_strategies(
    g: SCFG,
    objective: str = SPACE,
    size_limit: int = DEFAULT_SIZE_LIMIT,
    manual: Mapping[str, LinearStrategy] | None = None,
) -> dict[str, LinearStrategy]:
    """Optimal strategy per rule label (rules with r <= 2 collect left to right)."""
    if objective not in (SPACE, TIME):
        raise ValueError(f"objective must be {SPACE!r} or {TIME!r}")
    manual = dict(manual or {})
    out = {}
    for rule in g.rules:
        if rule.r == 0:
            continue
        if rule.label in manual:
            s = manual[rule.label]
            if s.r != rule.r:
                raise ValueError(f"manual strategy for {rule.label} has size {s.r}, rule has {rule.r}")
            out[rule.label] = s
        elif rule.r <= 2:
            out[rule.label] = LinearStrategy.identity(rule.r)
        else:
            if rule.r > size_limit:
                raise SizeLimitExceeded(
                    f"rule {rule.label} has r = {rule.r} > {size_limit}; supply a manual strategy"
                )
            p = rule_permutation(rule)
            s, _ = (optimize_space if objective == SPACE else optimize_time)(p, size_limit)
            out[rule.label] = s
    return out


# -- per-rule combination plans ----------------------------------------------------------


def _runs(positions: set[int]) -> list[tuple[int, int]]:
    out = []
    for x in sorted(positions):
        if out and out[-1][1] == x - 1:
            out[-1] = (out[-1][0], x)
        else:
            out.append((x, x))
    return out


class _SidePlan:
    """How the run layout of one component changes when position ``p`` is collected."""

    def __init__(self, prev: list[tuple[int, int]], p: int, r: int, runs_text: tuple[tuple[str, ...], ...]):
        self.p = p
        self.r = r
        self.a = next((i for i, (_, last) in enumerate(prev) if last == p - 1), -1)
        self.b = next((i for i, (first, _) in enumerate(prev) if first == p + 1), -1)
        self.ins = sum(1 for _, last in prev if last < p)
        self.n_prev = len(prev)
        self.u_before = runs_text[p - 1]  # terminal run between positions p-1 and p
        self.u_after = runs_text[p]
        lens = [len(u) for u in runs_text]
        first = prev[self.a][0] if self.a >= 0 else p
        last = prev[self.b][1] if self.b >= 0 else p
        self.first, self.last = first, last
        # neighbouring runs after the merge and the terminal length between them
        left_idx = (self.a - 1) if self.a >= 0 else self.ins - 1
        right_idx = (self.b + 1) if self.b >= 0 else self.ins
        self.left_nb = left_idx if left_idx >= 0 else -1
        self.right_nb = right_idx if right_idx < len(prev) else -1
        if self.left_nb >= 0:
            self.gap_left = sum(lens[prev[self.left_nb][1] : first])
        else:
            # distance from the string start; a run at position 1 already holds u_0
            self.gap_left = sum(lens[0:first]) if first > 1 else 0
        if self.right_nb >= 0:
            self.gap_right = sum(lens[last : prev[self.right_nb][0]])
        else:
            self.gap_right = sum(lens[last : r + 1]) if last < r else 0

    def apply(self, runs: tuple[int, ...], i: int, j: int, w: tuple[str, ...]) -> tuple[int, ...] | None:
        """``runs`` is a flat (start, end, ...) tuple for this side; returns the new flat tuple."""
        if self.a >= 0:
            e = runs[2 * self.a + 1]
            u = self.u_before
            if i - e != len(u) or (u and w[e:i] != u):
                return None
            start = runs[2 * self.a]
        elif self.p == 1:
            u = self.u_before
            if i < len(u) or (u and w[i - len(u) : i] != u):
                return None
            start = i - len(u)
        else:
            start = i
        if self.b >= 0:
            s = runs[2 * self.b]
            u = self.u_after
            if s - j != len(u) or (u and w[j:s] != u):
                return None
            end = runs[2 * self.b + 1]
        elif self.p == self.r:
            u = self.u_after
            if len(w) - j < len(u) or (u and w[j : j + len(u)] != u):
                return None
            end = j + len(u)
        else:
            end = j
        if self.left_nb >= 0:
            if runs[2 * self.left_nb + 1] + self.gap_left > start:
                return None
        elif start < self.gap_left:
            return None
        if self.right_nb >= 0:
            if end + self.gap_right > runs[2 * self.right_nb]:
                return None
        elif end + self.gap_right > len(w):
            return None
        lo = self.a if self.a >= 0 else self.ins
        hi = (self.b + 1) if self.b >= 0 else self.ins
        return runs[: 2 * lo] + (start, end) + runs[2 * hi :]


class _RulePlan:
    def __init__(self, rule: SynchronousRule, s: LinearStrategy):
        self.rule = rule
        self.label = rule.label
        self.r = rule.r
        self.perm: Permutation = rule_permutation(rule)
        self.strategy = s
        inv = self.perm.inverse()
        lnts, rnts = rule.nonterminals(1), rule.nonterminals(2)
        self.steps = []
        left_set: set[int] = set()
        right_set: set[int] = set()
        for k in range(1, self.r + 1):
            p = s(k)
            q = inv(p)
            lp = _SidePlan(_runs(left_set), p, self.r, rule.runs(1))
            rp = _SidePlan(_runs(right_set), q, self.r, rule.runs(2))
            left_set.add(p)
            right_set.add(q)
            n_left = len(_runs(left_set))
            arity = 2 * fan_out(self.perm, s, k)
            self.steps.append(((lnts[p - 1].name, rnts[q - 1].name), lp, rp, 2 * lp.n_prev, n_left, arity))
        self.lhs = (rule.left_lhs, rule.right_lhs)

    def combine(self, k: int, state: tuple[int, ...], item: ChartItem, w1, w2) -> tuple[int, ...] | None:
        _, lp, rp, split, _, _ = self.steps[k - 1]
        left = lp.apply(state[:split], item.i1, item.j1, w1)
        if left is None:
            return None
        right = rp.apply(state[split:], item.i2, item.j2, w2)
        if right is None:
            return None
        return left + right


# -- chart --------------------------------------------------------------------------------


@dataclass
class Chart:
    pair: SentencePair
    items: dict[ChartItem, list]  # item -> derivation sources
    states: dict[tuple[int, int, tuple[int, ...]], list]  # (rule index, step, bounds) -> sources
    plans: list[_RulePlan]
    stats: ParseStats

    @property
    def goal(self) -> ChartItem | None:
        return self._goal

    def parse_states(self, label: str, k: int) -> list[ParseState]:
        out = []
        for (ri, step, bounds), _ in self.states.items():
            plan = self.plans[ri]
            if plan.label != label or step != k:
                continue
            n_left = plan.steps[k - 1][4]
            flat = list(zip(bounds[::2], bounds[1::2]))
            out.append(ParseState(label, k, tuple(flat[:n_left]), tuple(flat[n_left:])))
        return sorted(out, key=lambda st: (st.left_spans, st.right_spans))


def _occurrences(u: tuple[str, ...], w: tuple[str, ...]) -> list[int]:
    return [i for i in range(len(w) - len(u) + 1) if w[i : i + len(u)] == u]


def build_chart(g: SCFG, strategies: Mapping[str, LinearStrategy], p: SentencePair) -> Chart:
    for word in (p.w1, p.w2):
        for sym in word:
            if sym not in g.terminals:
                raise UnknownSymbol(f"symbol {sym!r} is not a terminal of the grammar")
    w1, w2 = p.w1, p.w2
    plans: list[_RulePlan] = []
    for rule in g.rules:
        if rule.r == 0:
            continue
        if rule.label not in strategies:
            raise KeyError(f"no strategy for rule {rule.label}")
        plans.append(_RulePlan(rule, strategies[rule.label]))

    triggers: dict[tuple[str, str], list[tuple[int, int]]] = defaultdict(list)
    for ri, plan in enumerate(plans):
        for k, (names, *_rest) in enumerate(plan.steps, 1):
            triggers[names].append((ri, k))

    stats = ParseStats()
    items: dict[ChartItem, list] = {}
    states: dict[tuple[int, int, tuple[int, ...]], list] = {}
    ready_items: dict[tuple[str, str], list[ChartItem]] = defaultdict(list)
    ready_states: dict[tuple[int, int], list[tuple[int, ...]]] = defaultdict(list)
    agenda: deque = deque()

    def add_item(item: ChartItem, source) -> None:
        if item in items:
            items[item].append(source)
            return
        items[item] = [source]
        agenda.append(("item", item))

    def add_state(ri: int, k: int, bounds: tuple[int, ...], source) -> None:
        key = (ri, k, bounds)
        if key in states:
            states[key].append(source)
            return
        states[key] = [source]
        plan = plans[ri]
        arity = plan.steps[k - 1][5]
        if len(bounds) != arity:
            stats.arity_violations += 1
        stats.peak_arity = max(stats.peak_arity, len(bounds))
        sk = (plan.label, k)
        stats.state_counts[sk] = stats.state_counts.get(sk, 0) + 1
        agenda.append(("state", key))

    for rule in g.rules:
        if rule.r:
            continue
        u1, u2 = rule.runs(1)[0], rule.runs(2)[0]
        for i1 in _occurrences(u1, w1):
            for i2 in _occurrences(u2, w2):
                add_item(ChartItem(rule.left_lhs, rule.right_lhs, i1, i1 + len(u1), i2, i2 + len(u2)), ("seed",))

    empty: tuple[int, ...] = ()
    while agenda:
        kind, obj = agenda.popleft()
        if kind == "item":
            item = obj
            names = (item.left, item.right)
            for ri, k in triggers.get(names, ()):
                plan = plans[ri]
                prevs = [empty] if k == 1 else ready_states[(ri, k - 1)]
                for prev in prevs:
                    stats.combinations += 1
                    nb = plan.combine(k, prev, item, w1, w2)
                    if nb is not None:
                        src = ("init", item) if k == 1 else ("comb", (ri, k - 1, prev), item)
                        add_state(ri, k, nb, src)
            ready_items[names].append(item)
        else:
            ri, k, bounds = obj
            plan = plans[ri]
            if k == plan.r:
                add_item(ChartItem(plan.lhs[0], plan.lhs[1], *bounds), ("done", obj))
            else:
                names = plan.steps[k][0]
                for item in ready_items.get(names, ()):
                    stats.combinations += 1
                    nb = plan.combine(k + 1, bounds, item, w1, w2)
                    if nb is not None:
                        add_state(ri, k + 1, nb, ("comb", obj, item))
            ready_states[(ri, k)].append(bounds)

    stats.items = len(items)
    chart = Chart(p, items, states, plans, stats)
    goal = ChartItem(g.start, g.start, 0, len(w1), 0, len(w2))
    chart._goal = goal if goal in items else None
    return chart


def recognize(g: SCFG, strategies: Mapping[str, LinearStrategy], p: SentencePair) -> tuple[bool, ParseStats]:
    chart = build_chart(g, strategies, p)
    return chart.goal is not None, chart.stats


def count_derivations(g: SCFG, strategies: Mapping[str, LinearStrategy], p: SentencePair) -> int:
    """Number of derivation trees of ``p`` (equivalently, canonical derivations)."""
    chart = build_chart(g, strategies, p)
    if chart.goal is None:
        return 0
    memo: dict = {}
    DONE, ACTIVE = 1, 2
    mark: dict = {}

    def children(node):
        if node[0] == "item":
            srcs = chart.items[node[1]]
        else:
            srcs = chart.states[node[1]]
        for src in srcs:
            if src[0] == "seed":
                continue
            if src[0] == "init":
                yield ("item", src[1])
            elif src[0] == "done":
                yield ("state", src[1])
            else:
                yield ("state", src[1])
                yield ("item", src[2])

    def value(node) -> int:
        srcs = chart.items[node[1]] if node[0] == "item" else chart.states[node[1]]
        total = 0
        for src in srcs:
            if src[0] == "seed":
                total += 1
            elif src[0] == "init":
                total += memo[("item", src[1])]
            elif src[0] == "done":
                total += memo[("state", src[1])]
            else:
                total += memo[("state", src[1])] * memo[("item", src[2])]
        return total

    root = ("item", chart.goal)
    stack = [(root, iter(list(children(root))))]
    mark[root] = ACTIVE
    while stack:
        node, it = stack[-1]
        advanced = False
        for child in it:
            state = mark.get(child)
            if state == ACTIVE:
                raise InfiniteAmbiguity("the chart has a cycle; the derivation count is unbounded")
            if state is None:
                mark[child] = ACTIVE
                stack.append((child, iter(list(children(child)))))
                advanced = True
                break
        if not advanced:
            memo[node] = value(node)
            mark[node] = DONE
            stack.pop()
    return memo[root]
