"""Synchronous context-free grammars: file format, rules and derivation oracles.

Grammar file format (UTF-8, one rule per line)::

    # comment
    start: S                       (optional; default is the first rule's left LHS)
    s1: S -> A[1] B[2] ; S -> B[2] A[1]
    s3: A -> a b ; A -> b a

A symbol is an indexed nonterminal ``Name[k]`` (uppercase initial, ``k`` a
positive integer), or a terminal: a lowercase identifier or a single-quoted
string.  Rule labels are optional.  Optional ``nonterminals:`` and
``terminals:`` headers declare the alphabets; undeclared symbols are then
rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence, Union

from .strategy import Permutation


class GrammarError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class BoundExceeded(RuntimeError):
    """The search budget ran out before rejection could be certified."""


class InfiniteAmbiguity(RuntimeError):
    pass


class NT(NamedTuple):
    name: str
    index: int

    def __str__(self) -> str:
        return f"{self.name}[{self.index}]"


Symbol = Union[str, NT]


def _is_nt(sym: Symbol) -> bool:
    return isinstance(sym, NT)


def _indices(seq: Sequence[Symbol]) -> list[int]:
    return [s.index for s in seq if _is_nt(s)]


@dataclass(frozen=True)
class SynchronousRule:
    label: str
    left_lhs: str
    right_lhs: str
    left_rhs: tuple[Symbol, ...]
    right_rhs: tuple[Symbol, ...]

    def __post_init__(self):
        li, ri = _indices(self.left_rhs), _indices(self.right_rhs)
        for side, idx in (("left", li), ("right", ri)):
            dup = sorted({i for i in idx if idx.count(i) > 1})
            if dup:
                raise GrammarError(f"rule {self.label}: duplicate index {dup[0]} in {side} component")
        if set(li) != set(ri):
            raise GrammarError(f"rule {self.label}: index sets of the two components differ")
        if any(i < 1 for i in li):
            raise GrammarError(f"rule {self.label}: indices must be positive")

    @property
    def r(self) -> int:
        return len(_indices(self.left_rhs))

    def canonical(self) -> "SynchronousRule":
        """Renumber indices 1..r in left-component order."""
        mapping = {t: i for i, t in enumerate(_indices(self.left_rhs), 1)}

        def ren(seq):
            return tuple(NT(s.name, mapping[s.index]) if _is_nt(s) else s for s in seq)

        return SynchronousRule(self.label, self.left_lhs, self.right_lhs, ren(self.left_rhs), ren(self.right_rhs))

    def runs(self, side: int) -> tuple[tuple[str, ...], ...]:
        """Terminal runs ``u_0 .. u_r`` of the given component (1 = left, 2 = right)."""
        seq = self.left_rhs if side == 1 else self.right_rhs
        out: list[list[str]] = [[]]
        for sym in seq:
            if _is_nt(sym):
                out.append([])
            else:
                out[-1].append(sym)
        return tuple(tuple(run) for run in out)

    def nonterminals(self, side: int) -> tuple[NT, ...]:
        seq = self.left_rhs if side == 1 else self.right_rhs
        return tuple(s for s in seq if _is_nt(s))

    def __str__(self) -> str:
        def side(lhs, rhs):
            return f"{lhs} -> " + " ".join(str(s) if _is_nt(s) else _fmt_terminal(s) for s in rhs)

        return f"{self.label}: {side(self.left_lhs, self.left_rhs)} ; {side(self.right_lhs, self.right_rhs)}"


def _fmt_terminal(t: str) -> str:
    return t if re.fullmatch(r"[a-z][A-Za-z0-9_]*", t) else "'" + t.replace("'", "\\'") + "'"


@dataclass(frozen=True)
class SCFG:
    nonterminals: frozenset[str]
    terminals: frozenset[str]
    start: str
    rules: tuple[SynchronousRule, ...]

    def __post_init__(self):
        if self.nonterminals & self.terminals:
            raise GrammarError(f"symbols both terminal and nonterminal: {sorted(self.nonterminals & self.terminals)}")
        if self.start not in self.nonterminals:
            raise GrammarError(f"start symbol {self.start!r} is not a nonterminal")
        for rule in self.rules:
            for name in (rule.left_lhs, rule.right_lhs):
                if name not in self.nonterminals:
                    raise GrammarError(f"rule {rule.label}: undeclared nonterminal {name!r}")
            for sym in rule.left_rhs + rule.right_rhs:
                if _is_nt(sym) and sym.name not in self.nonterminals:
                    raise GrammarError(f"rule {rule.label}: undeclared nonterminal {sym.name!r}")
                if not _is_nt(sym) and sym not in self.terminals:
                    raise GrammarError(f"rule {rule.label}: undeclared terminal {sym!r}")

    def rule(self, label: str) -> SynchronousRule:
        for rule in self.rules:
            if rule.label == label:
                return rule
        raise KeyError(label)

    def to_text(self) -> str:
        return "\n".join([f"start: {self.start}"] + [str(r) for r in self.rules]) + "\n"


@dataclass(frozen=True)
class SentencePair:
    w1: tuple[str, ...]
    w2: tuple[str, ...]

    def __init__(self, w1: Iterable[str], w2: Iterable[str]):
        object.__setattr__(self, "w1", tuple(w1))
        object.__setattr__(self, "w2", tuple(w2))

    @staticmethod
    def split(text: str) -> tuple[str, ...]:
        """Whitespace-separated tokens, or single characters when there is no whitespace."""
        text = text.strip()
        if not text:
            return ()
        return tuple(text.split()) if any(c.isspace() for c in text) else tuple(text)

    @classmethod
    def from_text(cls, w1: str, w2: str) -> "SentencePair":
        return cls(cls.split(w1), cls.split(w2))

    def __str__(self) -> str:
        return f"[{''.join(self.w1)}, {''.join(self.w2)}]"


# -- parsing --------------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<nt>[A-Z][A-Za-z0-9_]*)\[(?P<idx>[0-9]+)\]"
    r"|(?P<term>[a-z][A-Za-z0-9_]*)"
    r"|'(?P<quoted>(?:[^'\\]|\\.)*)'"
    r")"
)
_LHS = re.compile(r"\s*([A-Z][A-Za-z0-9_]*)\s*->")
_LABEL = re.compile(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:(?!\S*->)")
_HEADER = re.compile(r"\s*(start|nonterminals|terminals)\s*:(.*)$")


def _parse_component(text: str, lineno: int, col0: int) -> tuple[str, list[Symbol]]:
    m = _LHS.match(text)
    if not m:
        raise GrammarError("expected 'LHS ->'", lineno, col0 + 1)
    lhs = m.group(1)
    pos = m.end()
    out: list[Symbol] = []
    while pos < len(text):
        if not text[pos:].strip():
            break
        tm = _TOKEN.match(text, pos)
        if not tm or tm.end() == pos:
            bad = len(text[pos:]) - len(text[pos:].lstrip())
            raise GrammarError(f"unexpected symbol {text[pos + bad:].split()[0]!r}", lineno, col0 + pos + bad + 1)
        if tm.group("nt"):
            idx = int(tm.group("idx"))
            if idx < 1:
                raise GrammarError("index must be a positive integer", lineno, col0 + tm.start("idx") + 1)
            out.append(NT(tm.group("nt"), idx))
        elif tm.group("term") is not None:
            out.append(tm.group("term"))
        else:
            out.append(re.sub(r"\\(.)", r"\1", tm.group("quoted")))
        pos = tm.end()
    return lhs, out


def parse_grammar(text: str) -> SCFG:
    start: str | None = None
    declared_nt: set[str] | None = None
    declared_t: set[str] | None = None
    rules: list[SynchronousRule] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        hm = _HEADER.match(line)
        if hm and "->" not in line:
            key, val = hm.group(1), hm.group(2).split()
            if key == "start":
                if len(val) != 1:
                    raise GrammarError("start: takes exactly one symbol", lineno)
                start = val[0]
            elif key == "nonterminals":
                declared_nt = set(val)
            else:
                declared_t = set(val)
            continue
        label = f"r{len(rules) + 1}"
        offset = 0
        lm = _LABEL.match(line)
        if lm:
            label = lm.group(1)
            offset = lm.end()
        body = line[offset:]
        if body.count(";") != 1:
            raise GrammarError("a rule needs exactly one ';' between its components", lineno)
        left_text, right_text = body.split(";")
        l_lhs, l_rhs = _parse_component(left_text, lineno, offset)
        r_lhs, r_rhs = _parse_component(right_text, lineno, offset + len(left_text) + 1)
        try:
            rule = SynchronousRule(label, l_lhs, r_lhs, tuple(l_rhs), tuple(r_rhs))
        except GrammarError as exc:
            raise GrammarError(str(exc), lineno) from None
        rules.append(rule.canonical())
    if not rules:
        raise GrammarError("grammar has no rules")
    if start is None:
        start = rules[0].left_lhs
    used_nt = {start}
    used_t: set[str] = set()
    for rule in rules:
        used_nt |= {rule.left_lhs, rule.right_lhs}
        for sym in rule.left_rhs + rule.right_rhs:
            (used_nt.add(sym.name) if _is_nt(sym) else used_t.add(sym))
    nts = frozenset(declared_nt) if declared_nt is not None else frozenset(used_nt)
    ts = frozenset(declared_t) if declared_t is not None else frozenset(used_t)
    return SCFG(nts, ts, start, tuple(rules))


def _strip_comment(line: str) -> str:
    out = []
    quoted = False
    i = 0
    while i < len(line):
        c = line[i]
        if quoted and c == "\\":
            out.append(line[i : i + 2])
            i += 2
            continue
        if c == "'":
            quoted = not quoted
        elif c == "#" and not quoted:
            break
        out.append(c)
        i += 1
    return "".join(out)


def rule_permutation(rule: SynchronousRule) -> Permutation:
    if rule.r == 0:
        raise ValueError(f"rule {rule.label} has no linked nonterminals, so no permutation")
    canon = rule.canonical()
    return Permutation(_indices(canon.right_rhs))


# -- derivations ---------------------------------------------------------------------

Form = tuple[tuple[Symbol, ...], tuple[Symbol, ...]]


def _canonical_form(left: Sequence[Symbol], right: Sequence[Symbol]) -> Form:
    mapping = {t: i for i, t in enumerate(_indices(left), 1)}
    ren = lambda seq: tuple(NT(s.name, mapping[s.index]) if _is_nt(s) else s for s in seq)  # noqa: E731
    return ren(left), ren(right)


def _successors(g: SCFG, form: Form, by_lhs: dict) -> list[Form]:
    """All canonical one-step rewrites of the leftmost linked pair."""
    left, right = form
    at = next((i for i, s in enumerate(left) if _is_nt(s)), None)
    if at is None:
        return []
    target = left[at]
    j = next(i for i, s in enumerate(right) if _is_nt(s) and s.index == target.index)
    used = set(_indices(left)) - {target.index}
    out = []
    for rule in by_lhs.get((target.name, right[j].name), ()):
        fresh = []
        cand = 1
        while len(fresh) < rule.r:
            if cand not in used:
                fresh.append(cand)
            cand += 1
        mapping = dict(zip(range(1, rule.r + 1), fresh))
        ren = lambda seq: tuple(NT(s.name, mapping[s.index]) if _is_nt(s) else s for s in seq)  # noqa: E731
        new_left = left[:at] + ren(rule.left_rhs) + left[at + 1 :]
        new_right = right[:j] + ren(rule.right_rhs) + right[j + 1 :]
        out.append(_canonical_form(new_left, new_right))
    return out


def _index_rules(g: SCFG) -> dict:
    by_lhs: dict[tuple[str, str], list[SynchronousRule]] = {}
    for rule in g.rules:
        by_lhs.setdefault((rule.left_lhs, rule.right_lhs), []).append(rule.canonical())
    return by_lhs


def _initial(g: SCFG) -> Form:
    return (NT(g.start, 1),), (NT(g.start, 1),)


def enumerate_translations(g: SCFG, max_steps: int, max_total_length: int | None = None) -> set[SentencePair]:
    """Pairs derivable from ``[S[1], S[1]]`` in at most ``max_steps`` canonical steps.

    With ``max_total_length`` only pairs with ``|w1| + |w2|`` within the bound
    are kept, and sentential forms that cannot stay within it are dropped early.
    """
    if max_steps < 1:
        raise ValueError("max_steps must be positive")
    by_lhs = _index_rules(g)
    mins = _min_yields(g) if max_total_length is not None else None

    def short_enough(form: Form) -> bool:
        if mins is None:
            return True
        total = sum(mins[0][s.name] if _is_nt(s) else 1 for s in form[0])
        total += sum(mins[1][s.name] if _is_nt(s) else 1 for s in form[1])
        return total <= max_total_length

    found: set[SentencePair] = set()
    layer = {_initial(g)}
    for _ in range(max_steps):
        nxt: set[Form] = set()
        for form in layer:
            for succ in _successors(g, form, by_lhs):
                if not short_enough(succ):
                    continue
                if any(_is_nt(s) for s in succ[0]):
                    nxt.add(succ)
                else:
                    found.add(SentencePair(succ[0], succ[1]))
        layer = nxt
        if not layer:
            break
    return found


def _min_yields(g: SCFG) -> tuple[dict[str, float], dict[str, float]]:
    """Per-side minimum terminal yield of each nonterminal (inf if it derives nothing)."""
    inf = float("inf")
    mins = ({a: inf for a in g.nonterminals}, {a: inf for a in g.nonterminals})
    changed = True
    while changed:
        changed = False
        for rule in g.rules:
            for side, lhs, rhs in ((0, rule.left_lhs, rule.left_rhs), (1, rule.right_lhs, rule.right_rhs)):
                total = sum(mins[side][s.name] if _is_nt(s) else 1 for s in rhs)
                if total < mins[side][lhs]:
                    mins[side][lhs] = total
                    changed = True
    return mins


class _Pruner:
    def __init__(self, g: SCFG, p: SentencePair):
        self.min1, self.min2 = _min_yields(g)
        self.p = p

    @staticmethod
    def _consistent(seq: Sequence[Symbol], w: tuple[str, ...], mins: dict) -> bool:
        lower = sum(mins[s.name] if _is_nt(s) else 1 for s in seq)
        if lower > len(w):
            return False
        first = next((i for i, s in enumerate(seq) if _is_nt(s)), len(seq))
        if tuple(seq[:first]) != w[:first]:
            return False
        if first == len(seq):
            return tuple(seq) == w
        last = max(i for i, s in enumerate(seq) if _is_nt(s))
        tail = tuple(seq[last + 1 :])
        return not tail or w[len(w) - len(tail) :] == tail

    def ok(self, form: Form) -> bool:
        return self._consistent(form[0], self.p.w1, self.min1) and self._consistent(form[1], self.p.w2, self.min2)


def pair_membership_oracle(g: SCFG, p: SentencePair, budget: int = 200_000) -> bool:
    """Decide ``p in T(g)`` by pruned search over canonical sentential forms.

    Forms are pruned when their terminal prefix or suffix disagrees with the
    target, or when their minimum possible yield is longer than the target.
    The search is exhaustive whenever every nonterminal yields at least one
    terminal on some side; otherwise the form space may be infinite and
    :class:`BoundExceeded` is raised once ``budget`` forms have been explored
    without a verdict.
    """
    by_lhs = _index_rules(g)
    pruner = _Pruner(g, p)
    start = _initial(g)
    if not pruner.ok(start):
        return False
    seen = {start}
    stack = [start]
    while stack:
        form = stack.pop()
        if not any(_is_nt(s) for s in form[0]):
            if form == (p.w1, p.w2):
                return True
            continue
        for succ in _successors(g, form, by_lhs):
            if succ in seen or not pruner.ok(succ):
                continue
            seen.add(succ)
            if len(seen) > budget:
                raise BoundExceeded(f"explored {budget} sentential forms without a verdict")
            stack.append(succ)
    return False


def count_derivations_oracle(g: SCFG, p: SentencePair, budget: int = 200_000) -> int:
    """Number of canonical derivations of ``p`` by memoized enumeration."""
    by_lhs = _index_rules(g)
    pruner = _Pruner(g, p)
    memo: dict[Form, int] = {}
    on_stack: set[Form] = set()

    def count(form: Form) -> int:
        if form in memo:
            return memo[form]
        if not any(_is_nt(s) for s in form[0]):
            return int(form == (p.w1, p.w2))
        if form in on_stack:
            raise InfiniteAmbiguity("a sentential form derives itself; the count is unbounded")
        if len(memo) > budget:
            raise BoundExceeded(f"explored {budget} sentential forms")
        on_stack.add(form)
        total = sum(count(succ) for succ in _successors(g, form, by_lhs) if pruner.ok(succ))
        on_stack.discard(form)
        memo[form] = total
        return total

    start = _initial(g)
    return count(start) if pruner.ok(start) else 0
