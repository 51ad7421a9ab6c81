import random

import pytest

from scfgstrat.grammar import (
    NT, BoundExceeded, GrammarError, SentencePair, count_derivations_oracle, enumerate_translations,
    pair_membership_oracle, parse_grammar, rule_permutation,
)
from scfgstrat.strategy import Permutation

from universe import FIXTURES, load

EXAMPLE1 = (FIXTURES / "example1.scfg").read_text(encoding="utf-8")


def pair(w1, w2):
    return SentencePair.from_text(w1, w2)


def closed_form(p, q):
    return pair("a" * p + "b" * p + "c" * q + "d" * q, "d" * q + "c" * q + "b" * p + "a" * p)


def test_parse_example1():
    g = parse_grammar(EXAMPLE1)
    assert [r.label for r in g.rules] == ["s1", "s2", "s3", "s4", "s5"]
    assert g.start == "S"
    assert set(g.nonterminals) == {"S", "A", "B"}
    assert [r.r for r in g.rules] == [2, 1, 0, 1, 0]


def test_parse_terminal_only_rule():
    g = parse_grammar("S -> a ; S -> a")
    assert len(g.rules) == 1 and g.rules[0].r == 0


def test_parse_errors():
    with pytest.raises(GrammarError, match="duplicate index 1 in left component"):
        parse_grammar("S -> A[1] A[1] ; S -> A[1]")
    with pytest.raises(GrammarError, match="index sets"):
        parse_grammar("S -> A[1] ; S -> B[2]")
    with pytest.raises(GrammarError) as exc:
        parse_grammar("S -> a ; S -> %")
    assert exc.value.line == 1 and exc.value.column == 15
    with pytest.raises(GrammarError, match="undeclared terminal"):
        parse_grammar("terminals: a\nS -> b ; S -> b")
    with pytest.raises(GrammarError):
        parse_grammar("S -> a")


def test_indices_renumbered_and_quoted_terminals():
    g = parse_grammar("# comment\nx: S -> 'hello world' A[7] B[3] ; S -> B[3] A[7]\nA -> a ; A -> a\nB -> b ; B -> b")
    rule = g.rule("x")
    assert rule.left_rhs == ("hello world", NT("A", 1), NT("B", 2))
    assert rule_permutation(rule) == Permutation([2, 1])


def test_rule_permutation_examples():
    g = load("perm614253")
    assert rule_permutation(g.rule("s")).image == (6, 1, 4, 2, 5, 3)
    assert rule_permutation(parse_grammar(EXAMPLE1).rule("s1")).image == (2, 1)
    g = parse_grammar("S -> A[1] B[2] C[3] ; S -> A[1] x B[2] C[3]\nA -> a ; A -> a\nB -> b ; B -> b\nC -> c ; C -> c")
    assert rule_permutation(g.rules[0]) == Permutation.identity(3)
    with pytest.raises(ValueError):
        rule_permutation(parse_grammar("S -> a ; S -> a").rules[0])


def test_rule_permutation_links_random_rules():
    rng = random.Random(1)
    for _ in range(50):
        r = rng.randint(1, 8)
        right = list(range(1, r + 1))
        rng.shuffle(right)
        lines = ["S -> " + " ".join(f"X[{i}]" for i in range(1, r + 1)) + " ; S -> " + " ".join(f"X[{i}]" for i in right)]
        lines.append("X -> a ; X -> a")
        rule = parse_grammar("\n".join(lines)).rules[0]
        p = rule_permutation(rule)
        inv = p.inverse()
        for i in range(1, r + 1):
            # left position i links right position inv(i)
            assert rule.nonterminals(2)[inv.image[i - 1] - 1].index == i


def test_enumerate_example1():
    g = parse_grammar(EXAMPLE1)
    assert closed_form(3, 2) in enumerate_translations(g, 6)
    assert closed_form(1, 1) in enumerate_translations(g, 3)
    assert enumerate_translations(g, 2) == set()
    found = enumerate_translations(g, 8, max_total_length=16)
    assert found == {closed_form(p, q) for p in range(1, 4) for q in range(1, 4) if p + q <= 4}


def test_enumerate_no_terminating_rules():
    g = parse_grammar("S -> a S[1] ; S -> S[1] a")
    assert enumerate_translations(g, 10) == set()


def test_enumerate_rule_order_invariant():
    for name in ("example1", "nested", "perm2413"):
        text = (FIXTURES / f"{name}.scfg").read_text(encoding="utf-8")
        lines = [ln for ln in text.splitlines() if "->" in ln]
        header = [ln for ln in text.splitlines() if ln.startswith("start:")]
        if not header:
            header = ["start: S"]
        rng = random.Random(9)
        base = enumerate_translations(parse_grammar(text), 6)
        for _ in range(3):
            rng.shuffle(lines)
            assert enumerate_translations(parse_grammar("\n".join(header + lines)), 6) == base


def test_enumerated_pairs_pass_oracle():
    for name in ("example1", "nested", "perm2413", "itg"):
        g = load(name)
        for p in enumerate_translations(g, 5):
            assert pair_membership_oracle(g, p)


def test_membership_oracle_examples():
    g = parse_grammar(EXAMPLE1)
    assert pair_membership_oracle(g, pair("aabbcd", "dcbbaa"))
    assert not pair_membership_oracle(g, pair("abcd", "abcd"))
    assert not pair_membership_oracle(g, SentencePair((), ()))
    assert pair_membership_oracle(g, closed_form(3, 2))


def test_oracle_budget():
    g = load("itg")
    with pytest.raises(BoundExceeded):
        pair_membership_oracle(g, pair("aaaaaaaa", "xxxxxxxx"), budget=10)


def test_count_oracle():
    g = parse_grammar(EXAMPLE1)
    assert count_derivations_oracle(g, pair("abcd", "dcba")) == 1
    assert count_derivations_oracle(g, pair("ab", "ba")) == 0
    amb = parse_grammar("one: S -> a ; S -> a\ntwo: S -> A[1] ; S -> A[1]\nA -> a ; A -> a")
    assert count_derivations_oracle(amb, pair("a", "a")) == 2


def test_sentence_pair_text():
    assert pair("ab", "ba").w1 == ("a", "b")
    assert SentencePair.from_text("the cat", "le chat").w2 == ("le", "chat")
