from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from conftest import rand_matrix
from quivinv.fields import GF
from quivinv.linalg import sigma as sigma_num
from quivinv.tableaux import sigma_tr_via_dp
from quivinv.trace import (
    TracePolynomial,
    TraceSymbol,
    amitsur_expand,
    evaluate,
    lyndon_words,
    power_reduce,
    relation_instance,
    sigma,
    sigma_of_sum,
    sigma_tr_substituted,
    sigma_tr_symbolic,
)


def s(level, *word):
    return TracePolynomial.symbol(TraceSymbol(level, word))


def test_amitsur_sigma2_four_terms():
    got = amitsur_expand(2, [(1, ("A",)), (1, ("B",))])
    want = s(2, "A") + s(2, "B") + s(1, "A") * s(1, "B") - s(1, "A", "B")
    assert got == want
    assert len(got.terms) == 4


def test_trace_of_square():
    assert power_reduce(1, 2) == s(1, "A") ** 2 - 2 * s(2, "A")


@pytest.mark.parametrize("t, l", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_power_reduce_matches_symmetric_function_oracle(t, l):
    # oracle: sympy expands e_t(x_i^l) in the e_k(x) via a generic matrix of size t*l
    n = t * l
    xs = sympy.symbols(f"x0:{n}")
    poly = sympy.Poly(sum(sympy.prod(c) for c in _combos([x ** l for x in xs], t)), *xs)
    es = [sum(sympy.prod(c) for c in _combos(xs, k)) for k in range(1, n + 1)]
    rebuilt = 0
    for mono, c in power_reduce(t, l).terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for sym, e in mono:
            term *= es[sym.level - 1] ** e
        rebuilt += term
    assert sympy.expand(rebuilt - poly.as_expr()) == 0


def _combos(items, k):
    import itertools
    return itertools.combinations(items, k)


@pytest.mark.parametrize("n", [2, 3])
def test_power_reduce_numeric(rng, n):
    for _ in range(5):
        a = rand_matrix(rng, n)
        for t in range(1, n + 1):
            for l in (2, 3):
                assert evaluate(power_reduce(t, l), {"A": a}) == sigma_num(t, a ** l)


def test_sigma_reduces_powers_and_rotations():
    assert sigma(1, ("A", "B")) == sigma(1, ("B", "A"))
    assert sigma(2, ("A", "A")) == power_reduce(2, 2)
    assert sigma(0, ("A",)) == 1


def test_lyndon_counts():
    # necklace count: primitive necklaces over 2 letters of length 1..4 are 2, 1, 2, 3
    by_len = [sum(1 for w in lyndon_words(2, 4) if len(w) == k) for k in range(1, 5)]
    assert by_len == [2, 1, 2, 3]


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.lists(st.tuples(st.integers(-2, 2), st.lists(st.sampled_from(["A", "B"]),
                                                                           min_size=1, max_size=2)),
                                   min_size=1, max_size=3), st.integers(0, 10 ** 6))
def test_amitsur_matches_direct_evaluation(t, summands, seed):
    import random
    rng = random.Random(seed)
    mats = {"A": rand_matrix(rng, 3), "B": rand_matrix(rng, 3)}
    summands = [(c, tuple(w)) for c, w in summands]
    assert evaluate(amitsur_expand(t, summands), mats) == sigma_of_sum(t, summands, mats)


def test_sigma_01_term_for_term():
    want = -s(1, "Y", "Z") + s(1, "Y", "Z^T")
    assert sigma_tr_symbolic(0, 1) == want


def test_sigma_11_term_for_term():
    x = s(1, "X")
    want = (-x * s(1, "Y", "Z") + x * s(1, "Y", "Z^T")
            + s(1, "X", "Y", "Z") - s(1, "X", "Y", "Z^T") - s(1, "X", "Y^T", "Z") + s(1, "X", "Y^T", "Z^T"))
    assert sigma_tr_symbolic(1, 1) == want


@pytest.mark.parametrize("t", [1, 2, 3, 4])
def test_sigma_t0_is_sigma_t(t):
    assert sigma_tr_symbolic(t, 0) == s(t, "X")


def test_sigma_00_is_one():
    assert sigma_tr_symbolic(0, 0) == 1


@pytest.mark.parametrize("t, r", [(0, 1), (1, 1), (2, 1), (0, 2), (1, 2)])
def test_sigma_tr_equals_dp(rng, t, r):
    n = t + 2 * r
    for _ in range(3):
        x, y, z = (rand_matrix(rng, n) for _ in range(3))
        assert evaluate(sigma_tr_symbolic(t, r), {"X": x, "Y": y, "Z": z}) == sigma_tr_via_dp(t, r, x, y, z)


def test_substituted_sigma_tr_single_letters_is_symbolic():
    assert sigma_tr_substituted(1, 1, [(1, ("X",))], [(1, ("Y",))], [(1, ("Z",))]) == sigma_tr_symbolic(1, 1)


def test_relation_a_symbolically_zero():
    assert relation_instance("a", t=2, alpha=("A", "B"), beta=("A",)).is_zero()


@pytest.mark.parametrize("n", [2, 3])
def test_relation_b_vanishes_above_size(rng, n):
    rel = relation_instance("b", t=n + 1, summands=[(1, ("A",)), (2, ("A", "B")), (-1, ("B",))])
    assert not rel.is_zero()
    for _ in range(5):
        mats = {"A": rand_matrix(rng, n), "B": rand_matrix(rng, n)}
        assert evaluate(rel, mats) == 0


def test_relation_c_vanishes(rng):
    rel = relation_instance("c", t=1, r=1, xs=[(1, ("A",)), (1, ("B",))], ys=[(1, ("A", "B"))], zs=[(2, ("B",))])
    for _ in range(5):
        mats = {"A": rand_matrix(rng, 2), "B": rand_matrix(rng, 2)}
        assert evaluate(rel, mats) == 0
        assert evaluate(rel, {k: v.map(GF(101), GF(101)) for k, v in mats.items()}, GF(101)) == GF(101).zero


def test_relation_checks_paths():
    from quivinv.quiver import Arrow, Quiver
    q = Quiver(2, [Arrow("a", 1, 2), Arrow("b", 2, 1)])
    with pytest.raises(ValueError):
        relation_instance("a", t=1, quiver=q, alpha=("a",), beta=("a",))
    with pytest.raises(ValueError):
        relation_instance("z", t=1)


def test_levels_above_size_vanish():
    from quivinv.matrix import Matrix
    assert evaluate(s(3, "A"), {"A": Matrix.identity(2)}) == 0


def test_json_round_trip():
    p = sigma_tr_symbolic(1, 1) * Fraction(1, 2) + 3
    assert TracePolynomial.from_json(p.to_json()) == p


def test_symbol_needs_primitive_word():
    with pytest.raises(ValueError):
        TraceSymbol(1, ("A", "A"))
