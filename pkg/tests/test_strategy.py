import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from scfgstrat.strategy import (
    SizeLimitExceeded, SizeMismatch, LinearStrategy, Permutation, brute_force_optimize, decoding_exponents,
    evaluate, external_boundaries, fan_out, independent_boundaries, internal_boundaries, optimize_space,
    optimize_time, step_time_exponent,
)

P = Permutation([6, 1, 4, 2, 5, 3])
ID6 = LinearStrategy.identity(6)
SIGMA = LinearStrategy([4, 5, 2, 3, 1, 6])


def perm_and_strategy(max_r=9):
    return st.integers(1, max_r).flatmap(
        lambda r: st.tuples(st.permutations(range(1, r + 1)), st.permutations(range(1, r + 1)))
    ).map(lambda t: (Permutation(list(t[0])), LinearStrategy(list(t[1]))))


def test_permutation_parse_and_inverse():
    assert Permutation.parse("6 1 4 2 5 3") == P
    assert P.inverse().image == (2, 4, 6, 3, 5, 1)
    with pytest.raises(ValueError):
        Permutation.parse("1 1 2")
    with pytest.raises(ValueError):
        LinearStrategy([1, 3])


def test_internal_boundaries_examples():
    assert internal_boundaries(P, ID6, 3) == 6
    assert internal_boundaries(P, ID6, 6) == 0
    assert internal_boundaries(Permutation([2, 1, 4, 3]), LinearStrategy.identity(4), 2) == 2


def test_external_boundaries_examples():
    assert external_boundaries(P, ID6, 6) == 4
    assert external_boundaries(P, ID6, 3) == 2
    assert external_boundaries(P, SIGMA, 2) == 0


def test_fan_out_examples():
    assert fan_out(P, ID6, 3) == 4
    assert fan_out(P, SIGMA, 2) == 3
    assert fan_out(P, SIGMA, 3) == 3
    assert fan_out(P, ID6, 6) == 2


def test_independent_boundaries_and_time():
    assert independent_boundaries(P, SIGMA, 3) == 2
    assert independent_boundaries(P, ID6, 3) == 3
    assert independent_boundaries(P, SIGMA, 1) == 4
    assert step_time_exponent(P, ID6, 3) == 9
    assert step_time_exponent(P, SIGMA, 3) == 8
    assert step_time_exponent(P, SIGMA, 1) == 4


def test_evaluate_worked_example():
    rep = evaluate(P, ID6)
    assert list(rep.fo) == [2, 3, 4, 3, 2, 2]
    assert list(rep.t) == [4, 7, 9, 9, 7, 6]
    assert rep.max_fo == 4 and rep.space_exponent == 8 and rep.time_exponent == 9
    rep = evaluate(P, SIGMA)
    assert rep.max_fo == 3 and rep.max_t == 8 and rep.space_exponent == 6
    d = rep.to_dict()
    assert set(d) >= {"ib", "eb", "fo", "delta", "t", "max_fo", "max_t"}


def test_identity_rule_keeps_fan_out_two():
    for r in range(1, 8):
        assert list(evaluate(Permutation.identity(r), LinearStrategy.identity(r)).fo) == [2] * r


def test_size_mismatch():
    with pytest.raises(SizeMismatch):
        evaluate(P, LinearStrategy.identity(5))
    with pytest.raises(SizeMismatch):
        fan_out(P, LinearStrategy.identity(4), 1)


@settings(max_examples=300, deadline=None, derandomize=True)
@given(perm_and_strategy())
def test_boundary_invariants(ps):
    p, s = ps
    rep = evaluate(p, s)
    for k in range(p.r):
        assert (rep.ib[k] + rep.eb[k]) % 2 == 0
        assert rep.fo[k] == (rep.ib[k] + rep.eb[k]) // 2
        assert 0 <= rep.eb[k] <= 4 and 0 <= rep.delta[k] <= 4
    assert rep.fo[-1] == 2 and rep.ib[-1] == 0 and rep.eb[-1] == 4
    assert rep.delta[0] == 4
    prev = [0] + list(rep.fo[:-1])
    assert list(rep.t) == [2 * f + d for f, d in zip(prev, rep.delta)]
    assert max(rep.ib) == max(evaluate(p, s.reversed()).ib)


def test_optimizer_examples():
    assert optimize_space(P)[1] == 3
    assert optimize_time(P)[1] == 8
    assert optimize_space(Permutation([2, 4, 1, 3]))[1] == 3
    for r in (3, 4, 5, 6):
        assert optimize_time(Permutation.identity(r))[1] == 6
        assert optimize_space(Permutation.identity(r))[1] == 2
    assert optimize_time(Permutation([1]))[1] == 4
    s, v = optimize_space(P)
    assert evaluate(P, s).max_fo == v


def test_brute_force_examples():
    assert brute_force_optimize(P, "space")[1] == 3
    assert brute_force_optimize(P, "time")[1] == 8
    s, v = brute_force_optimize(Permutation([1]), "space")
    assert s.order == (1,) and v == 2
    assert brute_force_optimize(Permutation([1]), "time")[1] == 4


def test_optimizers_agree_with_brute_force_small():
    for r in range(1, 6):
        for img in itertools.permutations(range(1, r + 1)):
            p = Permutation(list(img))
            for opt, obj in ((optimize_space, "space"), (optimize_time, "time")):
                s, v = opt(p)
                bs, bv = brute_force_optimize(p, obj)
                assert v == bv
                assert s == bs  # both return the lexicographically least optimum
    rng = random.Random(7)
    for _ in range(40):
        img = list(range(1, rng.randint(6, 7) + 1))
        rng.shuffle(img)
        p = Permutation(img)
        assert optimize_space(p)[1] == brute_force_optimize(p, "space")[1]
        assert optimize_time(p)[1] == brute_force_optimize(p, "time")[1]


def test_optimizer_limits():
    with pytest.raises(SizeLimitExceeded):
        optimize_space(Permutation.identity(12), size_limit=10)
    with pytest.raises(SizeLimitExceeded):
        brute_force_optimize(Permutation.identity(10), "space")


def test_optimizer_lower_bounds():
    rng = random.Random(3)
    for _ in range(30):
        img = list(range(1, rng.randint(1, 10) + 1))
        rng.shuffle(img)
        p = Permutation(img)
        assert optimize_space(p)[1] >= 2
        assert optimize_time(p)[1] >= 4


def test_decoding_exponents():
    dec = decoding_exponents(P, SIGMA, 2)
    assert dec.max_time_exponent == 8
    assert list(dec.time_exponents) == list(evaluate(P, SIGMA).t)
    for r in (1, 3, 5):
        for m in (2, 3, 4):
            d = decoding_exponents(Permutation.identity(r), LinearStrategy.identity(r), m)
            assert d.space_exponent == 1 + 2 * (m - 1)
    with pytest.raises(ValueError):
        decoding_exponents(P, SIGMA, 1)


def test_decoding_m3_from_span_profile():
    # per-side span counts of sigma' on 614253, computed by hand from the run structure
    dec = decoding_exponents(P, SIGMA, 3)
    left = [1, 1, 2, 1, 1, 1]
    right = [1, 2, 1, 1, 1, 1]
    assert list(dec.source_spans) == left and list(dec.target_spans) == right
    assert dec.space_exponent == 9
