"""Boundary counts, fan-out and step exponents for linear parsing strategies.

Positions are 1-based throughout.  A rule permutation ``p`` maps each
position ``j`` of the right component to the left position linked with it,
so the right component read left to right visits left positions
``p(1), ..., p(r)``.  A strategy ``s`` lists left positions in the order in
which their linked pairs are collected.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

SPACE = "space"
TIME = "time"
OBJECTIVES = (SPACE, TIME)

DEFAULT_SIZE_LIMIT = 16
BRUTE_FORCE_LIMIT = 9


class SizeMismatch(ValueError):
    pass


class SizeLimitExceeded(ValueError):
    pass


def _check_bijection(values: Sequence[int], what: str) -> tuple[int, ...]:
    values = tuple(int(v) for v in values)
    if not values:
        raise ValueError(f"{what} must have at least one element")
    if sorted(values) != list(range(1, len(values) + 1)):
        raise ValueError(f"{what} {values!r} is not a bijection on [1..{len(values)}]")
    return values


@dataclass(frozen=True)
class Permutation:
    image: tuple[int, ...]

    def __init__(self, image: Iterable[int]):
        object.__setattr__(self, "image", _check_bijection(list(image), "permutation"))

    @property
    def r(self) -> int:
        return len(self.image)

    def __call__(self, j: int) -> int:
        return self.image[j - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.r
        for j, v in enumerate(self.image, 1):
            inv[v - 1] = j
        return Permutation(inv)

    @classmethod
    def identity(cls, r: int) -> "Permutation":
        return cls(range(1, r + 1))

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        return cls(int(tok) for tok in text.split())

    def __str__(self) -> str:
        return " ".join(map(str, self.image))


@dataclass(frozen=True)
class LinearStrategy:
    order: tuple[int, ...]

    def __init__(self, order: Iterable[int]):
        object.__setattr__(self, "order", _check_bijection(list(order), "strategy"))

    @property
    def r(self) -> int:
        return len(self.order)

    def __call__(self, k: int) -> int:
        return self.order[k - 1]

    def steps(self) -> tuple[int, ...]:
        """``steps()[p-1]`` is the step at which left position ``p`` is collected."""
        inv = [0] * self.r
        for k, p in enumerate(self.order, 1):
            inv[p - 1] = k
        return tuple(inv)

    def reversed(self) -> "LinearStrategy":
        return LinearStrategy(self.order[::-1])

    @classmethod
    def identity(cls, r: int) -> "LinearStrategy":
        return cls(range(1, r + 1))

    @classmethod
    def parse(cls, text: str) -> "LinearStrategy":
        return cls(int(tok) for tok in text.split())

    def __str__(self) -> str:
        return " ".join(map(str, self.order))


def _check(p: Permutation, s: LinearStrategy, k: int | None = None) -> None:
    if p.r != s.r:
        raise SizeMismatch(f"permutation has size {p.r} but strategy has size {s.r}")
    if k is not None and not 1 <= k <= p.r:
        raise ValueError(f"step {k} outside [1..{p.r}]")


def internal_boundaries(p: Permutation, s: LinearStrategy, k: int) -> int:
    _check(p, s, k)
    step = s.steps()
    r = p.r
    left = [step[h - 1] <= k for h in range(1, r + 1)]
    right = [step[p(h) - 1] <= k for h in range(1, r + 1)]
    total = 0
    for seq in (left, right):
        for h in range(r - 1):
            # one term per direction: collected|uncollected and uncollected|collected
            total += seq[h] and not seq[h + 1]
            total += (not seq[h]) and seq[h + 1]
    return total


def external_boundaries(p: Permutation, s: LinearStrategy, k: int) -> int:
    _check(p, s, k)
    step = s.steps()
    r = p.r
    extremes = (1, r, p(1), p(r))
    return sum(step[v - 1] <= k for v in extremes)


def fan_out(p: Permutation, s: LinearStrategy, k: int) -> int:
    total = internal_boundaries(p, s, k) + external_boundaries(p, s, k)
    assert total % 2 == 0, "boundary count must be even"
    return total // 2


def independent_boundaries(p: Permutation, s: LinearStrategy, k: int) -> int:
    """Boundaries of the pair collected at step ``k`` not shared with the step ``k-1`` state."""
    _check(p, s, k)
    step = s.steps()
    r = p.r
    before = lambda v: step[v - 1] < k  # noqa: E731
    left = s(k)
    right = p.inverse()(left)
    count = 0
    for pos, seq in ((left, None), (right, p)):
        for nb in (pos - 1, pos + 1):
            if not 1 <= nb <= r:
                count += 1
                continue
            v = nb if seq is None else seq(nb)
            count += not before(v)
    return count


def step_time_exponent(p: Permutation, s: LinearStrategy, k: int) -> int:
    _check(p, s, k)
    prev = fan_out(p, s, k - 1) if k > 1 else 0
    return 2 * prev + independent_boundaries(p, s, k)


@dataclass(frozen=True)
class StrategyReport:
    ib: tuple[int, ...]
    eb: tuple[int, ...]
    fo: tuple[int, ...]
    delta: tuple[int, ...]
    t: tuple[int, ...]
    max_fo: int = field(init=False)
    max_t: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "max_fo", max(self.fo))
        object.__setattr__(self, "max_t", max(self.t))

    @property
    def space_exponent(self) -> int:
        return 2 * self.max_fo

    @property
    def time_exponent(self) -> int:
        return self.max_t

    def to_dict(self) -> dict:
        return {
            "ib": list(self.ib),
            "eb": list(self.eb),
            "fo": list(self.fo),
            "delta": list(self.delta),
            "t": list(self.t),
            "max_fo": self.max_fo,
            "max_t": self.max_t,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def evaluate(p: Permutation, s: LinearStrategy) -> StrategyReport:
    _check(p, s)
    ks = range(1, p.r + 1)
    ib = tuple(internal_boundaries(p, s, k) for k in ks)
    eb = tuple(external_boundaries(p, s, k) for k in ks)
    fo = tuple((a + b) // 2 for a, b in zip(ib, eb))
    delta = tuple(independent_boundaries(p, s, k) for k in ks)
    t = tuple(2 * (fo[k - 2] if k > 1 else 0) + delta[k - 1] for k in ks)
    return StrategyReport(ib, eb, fo, delta, t)


# -- exact optimization -----------------------------------------------------


class _SetCosts:
    """Fan-out and step cost as functions of the set of collected left positions.

    Sets are bitmasks with bit ``p-1`` standing for left position ``p``.
    """

    def __init__(self, p: Permutation):
        r = p.r
        self.r = r
        self.full = (1 << r) - 1
        inv = p.inverse()
        # right position (0-based) of each left position (0-based)
        self.rpos = [inv(v) - 1 for v in range(1, r + 1)]
        self.markers = [0] * r
        for v in (1, r, p(1), p(r)):
            self.markers[v - 1] += 1
        self.nbrs = []
        for v in range(r):
            nb = [u for u in (v - 1, v + 1) if 0 <= u < r]
            q = self.rpos[v]
            nb += [p(j + 1) - 1 for j in (q - 1, q + 1) if 0 <= j < r]
            self.nbrs.append(nb)

    def right_mask(self, S: int) -> int:
        out = 0
        v = 0
        while S:
            if S & 1:
                out |= 1 << self.rpos[v]
            S >>= 1
            v += 1
        return out

    @staticmethod
    def runs(mask: int) -> int:
        return (mask & ~(mask << 1)).bit_count()

    def fan_out(self, S: int) -> int:
        if not S:
            return 0
        return self.runs(S) + self.runs(self.right_mask(S))

    def delta(self, S: int, v: int) -> int:
        fwd = sum(1 for u in self.nbrs[v] if not (S >> u) & 1)
        return fwd + self.markers[v]

    def cost(self, S: int, v: int, objective: str) -> int:
        if objective == SPACE:
            return self.fan_out(S | (1 << v))
        return 2 * self.fan_out(S) + self.delta(S, v)


def _search(costs: _SetCosts, objective: str, bound: int) -> list[int] | None:
    """Lexicographically least strategy whose every step cost is <= bound."""
    dead: set[int] = set()
    full = costs.full
    path: list[int] = []

    def dfs(S: int) -> bool:
        if S == full:
            return True
        if S in dead:
            return False
        for v in range(costs.r):
            if (S >> v) & 1:
                continue
            if costs.cost(S, v, objective) > bound:
                continue
            path.append(v + 1)
            if dfs(S | (1 << v)):
                return True
            path.pop()
        dead.add(S)
        return False

    return list(path) if dfs(0) else None


def _optimize(p: Permutation, objective: str, size_limit: int) -> tuple[LinearStrategy, int]:
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if p.r > size_limit:
        raise SizeLimitExceeded(f"rule width {p.r} exceeds exact-solver limit {size_limit}")
    costs = _SetCosts(p)
    # left-to-right gives the incumbent; the search tightens from the trivial lower bound
    incumbent = evaluate(p, LinearStrategy.identity(p.r))
    upper = incumbent.max_fo if objective == SPACE else incumbent.max_t
    lower = 2 if objective == SPACE else 4
    for bound in range(lower, upper + 1):
        order = _search(costs, objective, bound)
        if order is not None:
            return LinearStrategy(order), bound
    raise AssertionError("identity strategy must meet its own bound")


def optimize_space(p: Permutation, size_limit: int = DEFAULT_SIZE_LIMIT) -> tuple[LinearStrategy, int]:
    """Strategy minimizing the maximum fan-out, with that minimum.

    Ties go to the lexicographically least strategy.
    """
    return _optimize(p, SPACE, size_limit)


def optimize_time(p: Permutation, size_limit: int = DEFAULT_SIZE_LIMIT) -> tuple[LinearStrategy, int]:
    """Strategy minimizing the maximum step exponent ``2*fo(k-1) + delta(k)``."""
    return _optimize(p, TIME, size_limit)


def _profiles_all_strategies(p: Permutation) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorized evaluation over every strategy in lexicographic order.

    Returns ``(orders, fo, t)`` with ``fo`` and ``t`` of shape ``(r!, r)``.
    """
    r = p.r
    orders = np.array(list(itertools.permutations(range(1, r + 1))), dtype=np.int16)
    m = orders.shape[0]
    step = np.empty_like(orders)
    step[np.arange(m)[:, None], orders - 1] = np.arange(1, r + 1, dtype=np.int16)
    right_seq = np.array(p.image) - 1
    step_right = step[:, right_seq]
    ks = np.arange(1, r + 1)
    # collected[a, k, h]: position h collected by step k
    col_l = step[:, None, :] <= ks[None, :, None]
    col_r = step_right[:, None, :] <= ks[None, :, None]
    ib = (col_l[:, :, :-1] != col_l[:, :, 1:]).sum(axis=2) + (col_r[:, :, :-1] != col_r[:, :, 1:]).sum(axis=2)
    eb = col_l[:, :, 0].astype(int) + col_l[:, :, -1] + col_r[:, :, 0] + col_r[:, :, -1]
    fo = (ib + eb) // 2
    # independent boundaries of the k-th pair
    delta = np.zeros((m, r), dtype=int)
    inv = np.array(p.inverse().image) - 1
    for k in range(1, r + 1):
        v = orders[:, k - 1] - 1
        for seq_step, pos in ((step, v), (step_right, inv[v])):
            for off in (-1, 1):
                nb = pos + off
                outside = (nb < 0) | (nb >= r)
                nb_c = np.clip(nb, 0, r - 1)
                later = seq_step[np.arange(m), nb_c] >= k
                delta[:, k - 1] += outside | later
    prev = np.concatenate([np.zeros((m, 1), dtype=int), fo[:, :-1]], axis=1)
    t = 2 * prev + delta
    return orders, fo, t


def brute_force_optimize(p: Permutation, objective: str) -> tuple[LinearStrategy, int]:
    """Exhaustive minimum over all ``r!`` strategies (independent oracle)."""
    if objective not in OBJECTIVES:
        raise ValueError(f"unknown objective {objective!r}")
    if p.r > BRUTE_FORCE_LIMIT:
        raise SizeLimitExceeded(f"brute force limited to r <= {BRUTE_FORCE_LIMIT}")
    orders, fo, t = _profiles_all_strategies(p)
    scores = (fo if objective == SPACE else t).max(axis=1)
    best = int(np.argmin(scores))
    return LinearStrategy(orders[best].tolist()), int(scores[best])


# -- decoding with an integrated n-gram language model ------------------------


@dataclass(frozen=True)
class DecodingExponents:
    m: int
    source_spans: tuple[int, ...]
    target_spans: tuple[int, ...]
    space_exponent: int
    time_exponents: tuple[int, ...]

    @property
    def max_time_exponent(self) -> int:
        return max(self.time_exponents)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "source_spans": list(self.source_spans),
            "target_spans": list(self.target_spans),
            "space_exponent": self.space_exponent,
            "time_exponents": list(self.time_exponents),
            "max_time_exponent": self.max_time_exponent,
        }


def _side_profile(p: Permutation, s: LinearStrategy):
    """Per step: (left runs, right runs, left new boundaries, right new boundaries)."""
    costs = _SetCosts(p)
    rows = []
    S = 0
    for v in s.order:
        v -= 1
        new_left = sum(1 for u in (v - 1, v + 1) if not 0 <= u < p.r or not (S >> u) & 1)
        q = costs.rpos[v]
        R = costs.right_mask(S)
        new_right = sum(1 for j in (q - 1, q + 1) if not 0 <= j < p.r or not (R >> j) & 1)
        S |= 1 << v
        rows.append((costs.runs(S), costs.runs(costs.right_mask(S)), new_left, new_right))
    return rows


def decoding_exponents(p: Permutation, s: LinearStrategy, m: int) -> DecodingExponents:
    """Space and per-step time exponents for decoding with an order-``m`` language model.

    The left component is the source side and the right component the target
    side.  Every target-side boundary variable carries ``m-1`` words of
    context, so it weighs ``m-1`` in the exponent; source-side boundaries
    weigh 1.  A step touches the old state's boundaries plus the independent
    boundaries of the new pair; the new state introduces nothing else.
    """
    _check(p, s)
    if m < 2:
        raise ValueError("language-model order m must be >= 2")
    rows = _side_profile(p, s)
    f1 = tuple(row[0] for row in rows)
    f2 = tuple(row[1] for row in rows)
    space = max(a + 2 * b * (m - 1) for a, b in zip(f1, f2))
    times = []
    prev_c, prev_e = 0, 0
    for runs_c, runs_e, new_c, new_e in rows:
        a_c, a_e = 2 * prev_c, 2 * prev_e
        times.append((m - 1) * (a_e + new_e) + a_c + new_c)
        prev_c, prev_e = runs_c, runs_e
    return DecodingExponents(m, f1, f2, space, tuple(times))
